// Rule-based valence scoring after VADER (Hutto & Gilbert, 2014).
//
// Implements the lexicon lookup, negation, booster, ALL-CAPS and punctuation
// emphasis rules of the reference vaderSentiment implementation. Idiom,
// special-case and "but" handling are not implemented; emoji are not
// translated into descriptions.

#include <algorithm>
#include <cmath>

#include "pairlens/textmetrics.hpp"
#include "pairlens/utf8.hpp"

namespace pairlens {

namespace {

constexpr double kCapsIncrement = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kNormalizeAlpha = 15.0;

struct Token {
  std::string text;
  std::string lower;
  bool all_caps = false;
};

// Python's str.isupper(): at least one cased letter and no lowercase ones.
bool is_all_caps(std::u32string_view w) {
  bool has_upper = false;
  for (char32_t c : w) {
    if (!utf8::is_letter(c)) continue;
    if (utf8::to_lower(c) != c) {
      has_upper = true;
    } else if (c >= U'a' && c <= U'z') {
      return false;
    } else if (c >= 0xDF && c <= 0xFF && c != 0xF7) {
      return false;
    }
  }
  return has_upper;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  for (const auto& raw : split_words(utf8::decode(text))) {
    std::size_t b = 0;
    std::size_t e = raw.size();
    while (b < e && utf8::is_ascii_punct(raw[b])) ++b;
    while (e > b && utf8::is_ascii_punct(raw[e - 1])) --e;
    // Short remainders are most likely emoticons; keep those intact.
    std::u32string w = e - b <= 2 ? raw : raw.substr(b, e - b);
    std::u32string low = w;
    for (auto& c : low) c = utf8::to_lower(c);
    out.push_back(Token{utf8::encode(w), utf8::encode(low), is_all_caps(w)});
  }
  return out;
}

class Scorer {
 public:
  Scorer(const Lexicons& lex, const std::vector<Token>& words) : lex_(lex), w_(words) {
    const auto caps = std::count_if(w_.begin(), w_.end(), [](const Token& t) { return t.all_caps; });
    const auto diff = static_cast<std::ptrdiff_t>(w_.size()) - caps;
    cap_diff_ = diff > 0 && diff < static_cast<std::ptrdiff_t>(w_.size());
  }

  std::vector<double> sentiments() const {
    std::vector<double> out;
    out.reserve(w_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) {
      const auto& lw = w_[i].lower;
      if (lex_.boosters.contains(lw)) {
        out.push_back(0.0);
        continue;
      }
      if (i + 1 < w_.size() && lw == "kind" && w_[i + 1].lower == "of") {
        out.push_back(0.0);
        continue;
      }
      out.push_back(valence_at(i));
    }
    return out;
  }

 private:
  bool in_lexicon(std::size_t i) const { return lex_.valence.contains(w_[i].lower); }
  const std::string& low(std::size_t i) const { return w_[i].lower; }

  bool negated(std::size_t i) const {
    const auto& t = low(i);
    return lex_.negations.contains(t) || t.find("n't") != std::string::npos;
  }

  double booster_scalar(std::size_t j, double valence) const {
    const auto it = lex_.boosters.find(low(j));
    if (it == lex_.boosters.end()) return 0.0;
    double scalar = valence < 0 ? -it->second : it->second;
    if (w_[j].all_caps && cap_diff_) scalar += valence > 0 ? kCapsIncrement : -kCapsIncrement;
    return scalar;
  }

  double valence_at(std::size_t i) const {
    const auto it = lex_.valence.find(low(i));
    if (it == lex_.valence.end()) return 0.0;
    const double base = it->second;
    double v = base;

    // "no" directly before another lexicon word acts as a negator, not a sentiment word.
    if (low(i) == "no" && i + 1 < w_.size() && in_lexicon(i + 1)) v = 0.0;
    if ((i > 0 && low(i - 1) == "no") || (i > 1 && low(i - 2) == "no") ||
        (i > 2 && low(i - 3) == "no" && (low(i - 1) == "or" || low(i - 1) == "nor")))
      v = base * kNegationScalar;

    if (w_[i].all_caps && cap_diff_) v += v > 0 ? kCapsIncrement : -kCapsIncrement;

    for (std::size_t start = 0; start < 3; ++start) {
      if (i <= start || in_lexicon(i - start - 1)) continue;
      double s = booster_scalar(i - start - 1, v);
      if (start == 1 && s != 0) s *= 0.95;
      if (start == 2 && s != 0) s *= 0.9;
      v += s;
      v = negation_check(v, start, i);
    }

    if (i > 1 && !in_lexicon(i - 1) && low(i - 1) == "least") {
      if (low(i - 2) != "at" && low(i - 2) != "very") v *= kNegationScalar;
    } else if (i > 0 && !in_lexicon(i - 1) && low(i - 1) == "least") {
      v *= kNegationScalar;
    }
    return v;
  }

  // Mirrors the reference's operator precedence at distance 3, where a
  // preceding "so"/"this" amplifies by 1.25 regardless of "never".
  double negation_check(double v, std::size_t start, std::size_t i) const {
    if (start == 0) {
      if (negated(i - 1)) v *= kNegationScalar;
    } else if (start == 1) {
      if (low(i - 2) == "never" && (low(i - 1) == "so" || low(i - 1) == "this")) {
        v *= 1.25;
      } else if (low(i - 2) == "without" && low(i - 1) == "doubt") {
      } else if (negated(i - 2)) {
        v *= kNegationScalar;
      }
    } else {
      if ((low(i - 3) == "never" && (low(i - 2) == "so" || low(i - 2) == "this")) ||
          (low(i - 1) == "so" || low(i - 1) == "this")) {
        v *= 1.25;
      } else if (low(i - 3) == "without" && (low(i - 2) == "doubt" || low(i - 1) == "doubt")) {
      } else if (negated(i - 3)) {
        v *= kNegationScalar;
      }
    }
    return v;
  }

  const Lexicons& lex_;
  const std::vector<Token>& w_;
  bool cap_diff_ = false;
};

double punctuation_emphasis(std::string_view text) {
  const auto ep = std::min<std::ptrdiff_t>(std::count(text.begin(), text.end(), '!'), 4);
  const auto qm = std::count(text.begin(), text.end(), '?');
  double amp = 0.292 * static_cast<double>(ep);
  if (qm > 1) amp += qm <= 3 ? 0.18 * static_cast<double>(qm) : 0.96;
  return amp;
}

}  // namespace

VaderScores vader_scores(std::string_view title, const Lexicons& lex) {
  const auto words = tokenize(title);
  const auto sentiments = Scorer(lex, words).sentiments();
  if (sentiments.empty()) return VaderScores{0.0, 0.0, 0.0, 0.0};

  double sum = 0.0;
  for (double s : sentiments) sum += s;
  const double amp = punctuation_emphasis(title);
  if (sum > 0) {
    sum += amp;
  } else if (sum < 0) {
    sum -= amp;
  }

  VaderScores out;
  out.compound = std::clamp(sum / std::sqrt(sum * sum + kNormalizeAlpha), -1.0, 1.0);

  double pos_sum = 0.0;
  double neg_sum = 0.0;
  double neu_count = 0.0;
  for (double s : sentiments) {
    if (s > 0) pos_sum += s + 1.0;
    if (s < 0) neg_sum += s - 1.0;
    if (s == 0) neu_count += 1.0;
  }
  if (pos_sum > std::fabs(neg_sum)) {
    pos_sum += amp;
  } else if (pos_sum < std::fabs(neg_sum)) {
    neg_sum -= amp;
  }
  const double total = pos_sum + std::fabs(neg_sum) + neu_count;
  out.pos = std::fabs(pos_sum / total);
  out.neg = std::fabs(neg_sum / total);
  out.neu = std::fabs(neu_count / total);
  return out;
}

}  // namespace pairlens
