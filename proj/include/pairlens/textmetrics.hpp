#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pairlens {

/// Word lists and lexicons backing the list-based flags and the VADER scorer.
/// Every file is UTF-8 `token<TAB>value`, one entry per line.
struct Lexicons {
  std::unordered_map<std::string, double> valence;   // vader_lexicon.txt
  std::unordered_map<std::string, double> boosters;  // vader_boosters.txt, signed increments
  std::unordered_set<std::string> negations;         // negations.txt

  std::unordered_set<std::string> pronouns;
  std::unordered_set<std::string> interrogatives;
  std::unordered_set<std::string> tentative;
  std::unordered_set<std::string> certainty;
  std::unordered_set<std::string> affiliation;

  std::unordered_map<std::string, double> subjectivity;  // tb_subjectivity.txt
  std::unordered_map<std::string, double> polarity;      // tb_polarity.txt
  std::unordered_map<std::string, double> swn_polarity;  // swn_polarity.txt
  std::unordered_map<std::string, double> emotion;       // nrc_emotion.txt

  /// Loads every file from `dir`. Throws Error{config, "LEXICON_MISSING"} if
  /// the directory or any file is missing.
  static Lexicons load(const std::filesystem::path& dir);

  static const std::vector<std::string>& file_names();
};

std::unordered_map<std::string, double> read_lexicon_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Similarity

/// fuzz.ratio-compatible similarity in [0,100]: round(100 * (La + Lb - D) / (La + Lb))
/// with D the insert/delete edit distance (a substitution costs 2). Lengths are
/// in code points; two empty strings score 100. Rounds half to even.
int normalized_ld(std::string_view a, std::string_view b);
int normalized_ld(std::u32string_view a, std::u32string_view b);

/// Insert/delete edit distance between code-point strings.
std::size_t indel_distance(std::u32string_view a, std::u32string_view b);

// ---------------------------------------------------------------------------
// Tokenization helpers shared by the metric families

/// Whitespace-delimited tokens.
std::vector<std::u32string> split_words(std::u32string_view text);
/// Lowercased, leading/trailing ASCII punctuation stripped, empties dropped.
std::vector<std::string> lexical_tokens(std::string_view title);
/// Sentences = non-empty segments between runs of '.', '!' and '?'; at least 1.
int count_sentences(std::u32string_view text);
/// Vowel-group heuristic with a silent trailing "e"; at least 1.
int count_syllables(std::string_view word);

// ---------------------------------------------------------------------------
// Metric families

struct Structural {
  int chars = 0;
  int words = 0;
  double avg_word_len = 0.0;
  double avg_sent_len = 0.0;
  int sentences = 0;
};

struct LexicalDiversity {
  double ttr = 0.0;
  double cttr = 0.0;
  double mtld = 0.0;
};

struct Readability {
  double ari = 0.0;
  double cli = 0.0;
  double fk_grade = 0.0;
  double fr_ease_reversed = 0.0;
  double gunning_fog = 0.0;
};

struct VaderScores {
  double pos = 0.0;
  double neu = 1.0;
  double neg = 0.0;
  double compound = 0.0;
};

inline constexpr double kMtldThreshold = 0.72;

Structural structural(std::string_view title);
LexicalDiversity lexical_diversity(std::string_view title);
LexicalDiversity lexical_diversity(const std::vector<std::string>& tokens);
/// One direction of MTLD over the token sequence.
double mtld_pass(const std::vector<std::string>& tokens, double threshold = kMtldThreshold);
Readability readability(std::string_view title);
VaderScores vader_scores(std::string_view title, const Lexicons& lex);

// ---------------------------------------------------------------------------
// Feature vector

inline constexpr std::size_t kContinuousCount = 16;
inline constexpr std::size_t kFlagCount = 16;

enum Flag : std::size_t {
  excl_mark,
  question_mark,
  quotation_mark,
  numbers,
  emoji,
  uppercase,
  repeated_chars,
  pronouns,
  interrogatives,
  tentative,
  certainty,
  affiliation,
  tb_subjectivity,
  tb_polarity,
  swn_polarity,
  nrc_emotion,
};

using Flags = std::array<std::uint8_t, kFlagCount>;

/// The 12 stylistic flags (punctuation, emoji, numbers, emphasis, word classes).
/// Entries tb_subjectivity..nrc_emotion stay 0.
Flags stylistic_flags(std::string_view title, const Lexicons& lex);
/// Sets only tb_subjectivity, tb_polarity, swn_polarity, nrc_emotion.
Flags lexicon_sentiment_binary(std::string_view title, const Lexicons& lex);

struct TitleFeatureVector {
  Structural structure;
  LexicalDiversity lexical;
  Readability read;
  VaderScores vader;
  Flags flags{};

  /// Continuous metrics in `continuous_names()` order.
  std::array<double, kContinuousCount> continuous() const;
};

const std::array<std::string, kContinuousCount>& continuous_names();
const std::array<std::string, kFlagCount>& flag_names();

/// Throws Error{validation, "EMPTY_INPUT"} for empty titles and titles with no
/// lexical tokens.
TitleFeatureVector extract_features(std::string_view title, const Lexicons& lex);

/// Header and row for features.csv: post_id, continuous columns, flag columns.
std::string features_csv_header();
std::string features_csv_row(const std::string& post_id, const TitleFeatureVector& f);

/// Parsed features.csv keyed by post id.
struct FeatureRow {
  std::array<double, kContinuousCount> continuous{};
  Flags flags{};
};
std::map<std::string, FeatureRow> read_features_csv(const std::filesystem::path& path);
FeatureRow to_row(const TitleFeatureVector& f);

// ---------------------------------------------------------------------------
// External deep-model scores (computed elsewhere, joined by post id)

struct ExternalScores {
  std::string post_id;
  std::map<std::string, double> scores;
};

struct ExternalScoreTable {
  std::vector<std::string> columns;
  std::map<std::string, ExternalScores> rows;
  std::size_t dropped_unknown = 0;
};

/// Reads `post_id,<score>...`. Duplicate ids and non-finite values throw;
/// ids not in `known_ids` (when given) are dropped with a warning.
ExternalScoreTable load_external_scores(const std::filesystem::path& path,
                                        const std::set<std::string>* known_ids = nullptr);

}  // namespace pairlens
