#include "pairlens/textmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "pairlens/csv.hpp"
#include "pairlens/error.hpp"
#include "pairlens/utf8.hpp"

namespace pairlens {

namespace {

bool is_strip_punct(char32_t c) {
  return utf8::is_ascii_punct(c) || c == 0x2018 || c == 0x2019 || c == 0x201C || c == 0x201D;
}

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool is_emoji(char32_t c) {
  return (c >= 0x1F300 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) || c == 0xFE0F;
}

bool is_upper_letter(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

std::u32string strip_punct(std::u32string_view w) {
  std::size_t b = 0;
  std::size_t e = w.size();
  while (b < e && is_strip_punct(w[b])) ++b;
  while (e > b && is_strip_punct(w[e - 1])) --e;
  return std::u32string(w.substr(b, e - b));
}

std::u32string trim(std::u32string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && utf8::is_space(s[b])) ++b;
  while (e > b && utf8::is_space(s[e - 1])) --e;
  return std::u32string(s.substr(b, e - b));
}

bool any_in(const std::vector<std::string>& tokens, const std::unordered_set<std::string>& set) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) { return set.contains(t); });
}

bool any_nonzero(const std::vector<std::string>& tokens, const std::unordered_map<std::string, double>& lex) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) {
    const auto it = lex.find(t);
    return it != lex.end() && it->second != 0.0;
  });
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t indel_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1];
      } else {
        cur[j] = std::min(prev[j], cur[j - 1]) + 1;
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int normalized_ld(std::u32string_view a, std::u32string_view b) {
  const auto lensum = static_cast<std::int64_t>(a.size() + b.size());
  if (lensum == 0) return 100;
  const auto dist = static_cast<std::int64_t>(indel_distance(a, b));
  const std::int64_t num = 100 * (lensum - dist);
  std::int64_t q = num / lensum;
  const std::int64_t twice_rem = 2 * (num % lensum);
  if (twice_rem > lensum || (twice_rem == lensum && q % 2 == 1)) ++q;
  return static_cast<int>(q);
}

int normalized_ld(std::string_view a, std::string_view b) {
  return normalized_ld(utf8::decode(a), utf8::decode(b));
}

// ---------------------------------------------------------------------------

std::vector<std::u32string> split_words(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : text) {
    if (utf8::is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> lexical_tokens(std::string_view title) {
  std::vector<std::string> out;
  for (const auto& w : split_words(utf8::decode(title))) {
    auto s = strip_punct(w);
    if (s.empty()) continue;
    for (auto& c : s) c = utf8::to_lower(c);
    out.push_back(utf8::encode(s));
  }
  return out;
}

int count_sentences(std::u32string_view text) {
  int count = 0;
  bool has_content = false;
  for (char32_t c : text) {
    if (is_terminator(c)) {
      if (has_content) ++count;
      has_content = false;
    } else if (!utf8::is_space(c)) {
      has_content = true;
    }
  }
  if (has_content) ++count;
  return std::max(count, 1);
}

int count_syllables(std::string_view word) {
  std::string w;
  for (char32_t c : utf8::decode(word)) {
    if (!utf8::is_letter(c)) continue;
    const auto l = utf8::to_lower(c);
    w.push_back(l < 0x80 ? static_cast<char>(l) : 'x');
  }
  int groups = 0;
  bool in_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  const auto n = w.size();
  if (groups > 1 && n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2])) {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

// ---------------------------------------------------------------------------

Structural structural(std::string_view title) {
  const auto text = utf8::decode(title);
  if (trim(text).empty()) throw Error(ErrorKind::validation, "EMPTY_INPUT", "empty input");
  Structural s;
  int letters = 0;
  for (char32_t c : text) {
    if (!utf8::is_space(c)) ++s.chars;
    if (utf8::is_letter(c)) ++letters;
  }
  s.words = static_cast<int>(split_words(text).size());
  s.sentences = count_sentences(text);
  s.avg_word_len = static_cast<double>(letters) / s.words;
  s.avg_sent_len = static_cast<double>(s.words) / s.sentences;
  return s;
}

double mtld_pass(const std::vector<std::string>& tokens, double threshold) {
  double factors = 0.0;
  std::unordered_set<std::string_view> types;
  std::size_t count = 0;
  double ttr = 1.0;
  for (const auto& t : tokens) {
    ++count;
    types.insert(t);
    ttr = static_cast<double>(types.size()) / static_cast<double>(count);
    if (ttr <= threshold) {
      factors += 1.0;
      types.clear();
      count = 0;
      ttr = 1.0;
    }
  }
  factors += (1.0 - ttr) / (1.0 - threshold);
  // No repetition at all: the sequence never completes a factor.
  if (factors == 0.0) factors = 1.0;
  return static_cast<double>(tokens.size()) / factors;
}

LexicalDiversity lexical_diversity(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorKind::validation, "EMPTY_INPUT", "no lexical tokens");
  const std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
  const auto n = static_cast<double>(tokens.size());
  const auto t = static_cast<double>(types.size());
  LexicalDiversity ld;
  ld.ttr = t / n;
  ld.cttr = t / std::sqrt(2.0 * n);
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  ld.mtld = 0.5 * (mtld_pass(tokens) + mtld_pass(reversed));
  return ld;
}

LexicalDiversity lexical_diversity(std::string_view title) { return lexical_diversity(lexical_tokens(title)); }

Readability readability(std::string_view title) {
  const auto text = utf8::decode(title);
  const auto words = split_words(text);
  if (words.empty()) throw Error(ErrorKind::validation, "EMPTY_INPUT", "empty input");
  const double w = static_cast<double>(words.size());
  const double s = count_sentences(text);
  double alnum = 0;
  double letters = 0;
  for (char32_t c : text) {
    if (utf8::is_letter(c)) ++letters;
    if (utf8::is_letter(c) || utf8::is_digit(c)) ++alnum;
  }
  double syllables = 0;
  double complex_words = 0;
  for (const auto& word : words) {
    const int y = count_syllables(utf8::encode(word));
    syllables += y;
    if (y >= 3) ++complex_words;
  }
  const double words_per_sentence = w / s;
  const double syllables_per_word = syllables / w;
  Readability r;
  r.ari = 4.71 * (alnum / w) + 0.5 * words_per_sentence - 21.43;
  r.cli = 0.0588 * (100.0 * letters / w) - 0.296 * (100.0 * s / w) - 15.8;
  r.fk_grade = 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59;
  r.fr_ease_reversed = -(206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word);
  r.gunning_fog = 0.4 * (words_per_sentence + 100.0 * complex_words / w);
  return r;
}

// ---------------------------------------------------------------------------

Flags stylistic_flags(std::string_view title, const Lexicons& lex) {
  Flags f{};
  const auto text = utf8::decode(title);
  int boundary_single_quotes = 0;
  for (char32_t c : text) {
    if (c == U'!') f[excl_mark] = 1;
    if (c == U'?') f[question_mark] = 1;
    if (c == U'"' || c == 0x201C || c == 0x201D) f[quotation_mark] = 1;
    if (utf8::is_digit(c)) f[numbers] = 1;
    if (is_emoji(c)) f[emoji] = 1;
  }
  for (const auto& w : split_words(text)) {
    const auto is_single_quote = [](char32_t c) { return c == U'\'' || c == 0x2018 || c == 0x2019; };
    if (is_single_quote(w.front())) ++boundary_single_quotes;
    if (w.size() > 1 && is_single_quote(w.back())) ++boundary_single_quotes;

    const auto core = strip_punct(w);
    if (core.size() >= 3 && std::all_of(core.begin(), core.end(), is_upper_letter)) f[uppercase] = 1;

    // A run of three identical letters inside one token ("sooooo").
    int run = 1;
    for (std::size_t i = 1; i < w.size(); ++i) {
      const bool same = utf8::is_letter(w[i]) && utf8::to_lower(w[i]) == utf8::to_lower(w[i - 1]);
      run = same ? run + 1 : 1;
      if (run >= 3) f[repeated_chars] = 1;
    }
  }
  if (boundary_single_quotes >= 2) f[quotation_mark] = 1;

  const auto tokens = lexical_tokens(title);
  f[pronouns] = any_in(tokens, lex.pronouns);
  f[interrogatives] = any_in(tokens, lex.interrogatives);
  f[tentative] = any_in(tokens, lex.tentative);
  f[certainty] = any_in(tokens, lex.certainty);
  f[affiliation] = any_in(tokens, lex.affiliation);
  return f;
}

Flags lexicon_sentiment_binary(std::string_view title, const Lexicons& lex) {
  Flags f{};
  const auto tokens = lexical_tokens(title);
  f[tb_subjectivity] = any_nonzero(tokens, lex.subjectivity);
  f[tb_polarity] = any_nonzero(tokens, lex.polarity);
  f[swn_polarity] = any_nonzero(tokens, lex.swn_polarity);
  f[nrc_emotion] = any_nonzero(tokens, lex.emotion);
  return f;
}

// ---------------------------------------------------------------------------

std::array<double, kContinuousCount> TitleFeatureVector::continuous() const {
  return {static_cast<double>(structure.chars),
          static_cast<double>(structure.words),
          structure.avg_word_len,
          structure.avg_sent_len,
          lexical.ttr,
          lexical.cttr,
          lexical.mtld,
          read.ari,
          read.cli,
          read.fk_grade,
          read.fr_ease_reversed,
          read.gunning_fog,
          vader.pos,
          vader.neu,
          vader.neg,
          vader.compound};
}

const std::array<std::string, kContinuousCount>& continuous_names() {
  static const std::array<std::string, kContinuousCount> names{
      "chars", "words", "avg_word_len", "avg_sent_len", "ttr", "cttr", "mtld", "ari",
      "cli", "fk_grade", "fr_ease_reversed", "gunning_fog", "vader_pos", "vader_neu", "vader_neg", "vader_compound"};
  return names;
}

const std::array<std::string, kFlagCount>& flag_names() {
  static const std::array<std::string, kFlagCount> names{
      "excl_mark",     "question_mark", "quotation_mark", "numbers",     "emoji",       "uppercase",
      "repeated_chars", "pronouns",     "interrogatives", "tentative",   "certainty",   "affiliation",
      "tb_subjectivity", "tb_polarity", "swn_polarity",   "nrc_emotion"};
  return names;
}

TitleFeatureVector extract_features(std::string_view title, const Lexicons& lex) {
  TitleFeatureVector f;
  f.structure = structural(title);
  f.lexical = lexical_diversity(title);
  f.read = readability(title);
  f.vader = vader_scores(title, lex);
  f.flags = stylistic_flags(title, lex);
  const auto sentiment = lexicon_sentiment_binary(title, lex);
  for (std::size_t i = tb_subjectivity; i < kFlagCount; ++i) f.flags[i] = sentiment[i];
  return f;
}

FeatureRow to_row(const TitleFeatureVector& f) { return FeatureRow{f.continuous(), f.flags}; }

std::string features_csv_header() {
  std::string h = "post_id";
  for (const auto& n : continuous_names()) h += "," + n;
  for (const auto& n : flag_names()) h += "," + n;
  return h;
}

std::string features_csv_row(const std::string& post_id, const TitleFeatureVector& f) {
  std::string row = csv::escape(post_id);
  for (double v : f.continuous()) row += "," + csv::format_double(v);
  for (auto v : f.flags) row += v ? ",1" : ",0";
  return row;
}

std::map<std::string, FeatureRow> read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "IO_ERROR", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || csv::split_line(line) != csv::split_line(features_csv_header()))
    throw Error(ErrorKind::validation, "BAD_FEATURES", "unexpected features.csv header in " + path.string());
  std::map<std::string, FeatureRow> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != 1 + kContinuousCount + kFlagCount)
      throw Error(ErrorKind::validation, "BAD_FEATURES", "wrong column count at line " + std::to_string(lineno));
    FeatureRow row;
    for (std::size_t i = 0; i < kContinuousCount; ++i)
      if (!csv::parse_double(cells[1 + i], row.continuous[i]))
        throw Error(ErrorKind::validation, "BAD_FEATURES", "bad number at line " + std::to_string(lineno));
    for (std::size_t i = 0; i < kFlagCount; ++i) row.flags[i] = cells[1 + kContinuousCount + i] == "1" ? 1 : 0;
    out.emplace(cells[0], row);
  }
  return out;
}

// ---------------------------------------------------------------------------

ExternalScoreTable load_external_scores(const std::filesystem::path& path, const std::set<std::string>* known_ids) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "IO_ERROR", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::validation, "BAD_SCORES", "empty external score file");
  auto header = csv::split_line(line);
  if (header.empty() || header[0] != "post_id")
    throw Error(ErrorKind::validation, "BAD_SCORES", "external scores must start with a post_id column");
  ExternalScoreTable table;
  table.columns.assign(header.begin() + 1, header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::validation, "BAD_SCORES", "wrong column count at line " + std::to_string(lineno));
    ExternalScores row{cells[0], {}};
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0;
      if (!csv::parse_double(cells[i], v) || !std::isfinite(v))
        throw Error(ErrorKind::validation, "BAD_SCORES", "non-finite score at line " + std::to_string(lineno));
      row.scores[header[i]] = v;
    }
    if (table.rows.contains(row.post_id))
      throw Error(ErrorKind::validation, "DUPLICATE_ID", "duplicate post_id " + row.post_id + " in external scores");
    if (known_ids && !known_ids->contains(row.post_id)) {
      ++table.dropped_unknown;
      continue;
    }
    table.rows.emplace(row.post_id, std::move(row));
  }
  return table;
}

}  // namespace pairlens
