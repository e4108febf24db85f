#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pairlens/battery.hpp"
#include "pairlens/pairing.hpp"

namespace pairlens {

enum class SplitStrategy { date, post_id, video_id };
enum class TieRule { earlier_post, post1 };

std::string to_string(SplitStrategy s);
SplitStrategy split_strategy_from_string(const std::string& s);
std::string to_string(TieRule t);

inline constexpr std::int64_t kDefaultDateCutoff = 1640995200;  // 2022-01-01T00:00:00Z

struct SplitSpec {
  SplitStrategy strategy = SplitStrategy::date;
  std::int64_t cutoff = kDefaultDateCutoff;
  double test_frac = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Split {
  std::vector<ScoredPair> train;
  std::vector<ScoredPair> test;
  std::vector<std::string> sampled_ids;  // sorted; empty for date splits
};

/// Date: test iff both posts are on/after the cutoff, train iff both before,
/// straddling pairs dropped. post_id / video_id: a seeded sample of test_frac
/// of the distinct ids; a pair is test iff either of its ids was sampled.
/// Throws Error{degenerate} when either side ends up empty.
Split make_split(std::span<const ScoredPair> pairs, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Baselines. Every pair has the true winner in post1, so accuracy is the
// fraction of pairs where post1 is predicted.

enum class Winner { post1, post2 };

Winner tie_winner(const ScoredPair& p, TieRule rule);

double accuracy(std::span<const ScoredPair> pairs, const std::vector<Winner>& predictions);

double baseline_random(std::span<const ScoredPair> pairs, std::uint64_t seed);
double baseline_time(std::span<const ScoredPair> pairs, TieRule rule = TieRule::earlier_post);
double baseline_video_views(std::span<const ScoredPair> pairs, TieRule rule = TieRule::earlier_post);

// ---------------------------------------------------------------------------
// Linear margin ranker

enum class Optimizer { sgd, full_batch };

struct RankerHyper {
  double margin = 1.0;
  double lr = 0.05;  // decays as lr / sqrt(epoch)
  int epochs = 100;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  TieRule tie_rule = TieRule::earlier_post;
  Optimizer optimizer = Optimizer::sgd;

  void validate() const;
};

struct RankerModel {
  std::vector<std::string> columns;         // kept feature columns
  std::vector<std::size_t> source_columns;  // their positions in ranker_columns()
  Eigen::VectorXd weights;
  double bias = 0.0;  // cancels in pairwise differences; kept for pointwise scoring
  double margin = 1.0;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_sds;
  TieRule tie_rule = TieRule::earlier_post;
  RankerHyper hyper;
  std::vector<double> epoch_loss;  // regularized objective after each epoch

  /// Pointwise score of one post's raw feature vector (full table columns).
  double score(const std::vector<double>& raw) const;
};

/// Per-post feature vector used by the ranker: continuous metrics (including
/// external columns) then flags, in table order. Missing values (NaN) become 0
/// after standardization.
std::vector<std::string> ranker_columns(const MetricTable& table);
std::vector<double> ranker_features(const MetricTable& table, const std::string& post_id);

/// Pairs whose two posts both have table rows.
std::vector<ScoredPair> covered_pairs(std::span<const ScoredPair> pairs, const MetricTable& table);

RankerModel train_margin_ranker(std::span<const ScoredPair> train, const MetricTable& table,
                                const RankerHyper& hyper = {});

Winner predict(const RankerModel& model, const ScoredPair& pair, const MetricTable& table);
double model_accuracy(const RankerModel& model, std::span<const ScoredPair> pairs, const MetricTable& table);

nlohmann::json model_to_json(const RankerModel& model);

// ---------------------------------------------------------------------------

struct ExternalEvaluation {
  std::optional<double> accuracy;  // over covered pairs
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t unknown = 0;  // prediction rows whose pair_id is not in the set
};

/// Reads `pair_id,winner` with winner in {post1, post2}.
ExternalEvaluation evaluate_external(std::span<const ScoredPair> pairs, const std::filesystem::path& predictions);

// ---------------------------------------------------------------------------

struct ResultRow {
  std::string split;
  std::string phase;
  std::string method;
  double accuracy = 0.0;
  std::size_t n = 0;
  int runs = 0;  // seeds averaged
};

struct EvaluationConfig {
  SplitSpec split;
  RankerHyper hyper;
  int seeds = 5;  // random-id splits are averaged over this many seeds
};

/// Splits, trains and scores every method on the mixed set and per phase.
/// Date splits run once; id splits run `seeds` times with derived seeds.
std::vector<ResultRow> evaluate_methods(std::span<const ScoredPair> pairs, const MetricTable& table,
                                        const EvaluationConfig& cfg);

std::string results_csv(const std::vector<ResultRow>& rows);

struct AblationRow {
  int threshold = 0;
  double test_accuracy = 0.0;
  std::size_t n_pairs = 0;
};

struct Ablation {
  std::vector<AblationRow> rows;
  std::optional<double> correlation;  // Pearson(threshold, accuracy)
};

/// Rebuilds the mixed pairs for every ld_pair_max in `grid`, retrains and
/// reports test accuracy.
Ablation ablate_thresholds(const PostIndex& index, const MetricTable& table, const PairingConfig& base,
                           const std::vector<int>& grid, const EvaluationConfig& cfg);

/// Test accuracy for one pairing configuration (first seed only).
double pipeline_accuracy(const PostIndex& index, const MetricTable& table, const PairingConfig& pairing,
                         const EvaluationConfig& cfg, std::size_t* n_pairs = nullptr);

}  // namespace pairlens
