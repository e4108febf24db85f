#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "pairlens/ingest.hpp"

namespace pairlens {

enum class Phase { exact, similar, inverse };
enum class Ordering { random, by_score };

std::string to_string(Phase p);
std::string to_string(Ordering o);
Phase phase_from_string(const std::string& s);

/// Joined posts plus per-post values the pair builders reuse (title vs video
/// title similarity). Pairs refer to posts by index into this table.
class PostIndex {
 public:
  explicit PostIndex(std::vector<JoinedPost> posts);

  const std::vector<JoinedPost>& posts() const { return posts_; }
  const JoinedPost& operator[](std::size_t i) const { return posts_[i]; }
  std::size_t size() const { return posts_.size(); }

  int ld_video(std::size_t i) const { return ld_video_[i]; }
  std::optional<std::size_t> find(const std::string& post_id) const;

 private:
  std::vector<JoinedPost> posts_;
  std::vector<int> ld_video_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct PostPair {
  std::size_t first = 0;   // post1
  std::size_t second = 0;  // post2
  Phase phase = Phase::exact;
  std::int64_t delta_t = 0;
  double vvr = 1.0;        // views(post1) / views(post2)
  int ld_pair = 0;
  int ld1_video = 0;
  int ld2_video = 0;
  Ordering ordering = Ordering::random;
};

struct PairingConfig {
  std::int64_t time_window = 1800;
  double vvr_max = 2.0;
  int ld_pair_max = 70;
  int ld_video_max = 95;
  int min_title_chars = 5;
  bool require_multiword = true;
  double score_ratio_min = 2.0;
  std::int64_t score_diff_min = 20;
  std::uint64_t rng_seed = 0;
  bool exhaustive = false;  // emit every valid pair instead of greedy one-pair-per-post

  /// Throws Error{config} when a field is out of range.
  void validate() const;
};

enum class VideoRelation { different, same };

std::vector<PostPair> build_exact_pairs(const PostIndex& index, const PairingConfig& cfg);
std::vector<PostPair> build_similar_pairs(const PostIndex& index, const PairingConfig& cfg,
                                          VideoRelation relation = VideoRelation::different);
std::vector<PostPair> build_inverse_pairs(const PostIndex& index, const PairingConfig& cfg);

/// Re-derives phase membership of a pair from the raw records.
bool satisfies_phase(const PostIndex& index, const PostPair& pair, const PairingConfig& cfg);

std::vector<PostPair> apply_title_filters(const PostIndex& index, const std::vector<PostPair>& pairs,
                                          const PairingConfig& cfg);

/// Deduplicated union; on collisions exact beats inverse beats similar. Pairs
/// with distinct scores are re-ordered so post1 has the higher score.
std::vector<PostPair> mix_datasets(const PostIndex& index, const std::vector<PostPair>& exact,
                                   const std::vector<PostPair>& similar, const std::vector<PostPair>& inverse);

/// Reorders post1 to be the higher-scoring post; equal-score pairs are dropped.
std::vector<PostPair> order_by_score(const PostIndex& index, const std::vector<PostPair>& pairs);

/// Order-free identifier derived from the two post ids.
std::string pair_id(const PostIndex& index, const PostPair& pair);

nlohmann::json pair_to_json(const PostIndex& index, const PostPair& pair);
/// Reads pairs.jsonl; every referenced post must exist in `index`.
std::vector<PostPair> parse_pairs(std::istream& in, const PostIndex& index);

/// The default analysis set: all three phases, title filters applied, merged
/// with mix_datasets.
std::vector<PostPair> build_mixed_pairs(const PostIndex& index, const PairingConfig& cfg);

/// Flat, index-free view of a score-ordered pair used by the statistics and
/// ranking code. post1 is always the higher-scoring post.
struct ScoredPair {
  std::string pair_id;
  Phase phase = Phase::exact;
  std::string post1_id;
  std::string post2_id;
  std::string video1_id;
  std::string video2_id;
  std::int64_t created1 = 0;
  std::int64_t created2 = 0;
  std::int64_t views1 = 0;
  std::int64_t views2 = 0;
  std::int64_t score1 = 0;
  std::int64_t score2 = 0;
};

/// Equal-score pairs are dropped; the rest are oriented winner-first.
std::vector<ScoredPair> scored_pairs(const PostIndex& index, const std::vector<PostPair>& pairs);

// ---------------------------------------------------------------------------
// Diagnostics

struct TimeWindowRow {
  std::int64_t window = 0;
  std::int64_t later_wins = 0;    // later post scored strictly higher
  std::int64_t earlier_wins = 0;  // earlier post scored strictly higher
  std::optional<double> later_win_ratio;
};

std::vector<TimeWindowRow> time_window_analysis(const PostIndex& index, const std::vector<PostPair>& exact_pairs,
                                                const std::vector<std::int64_t>& cumulative_windows);

struct VvrIntervalRow {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t n = 0;
  std::optional<double> mean_score_diff;  // score(post1) - score(post2)
  std::int64_t post1_wins = 0;
  std::int64_t post2_wins = 0;
  std::optional<double> win_ratio;
};

struct VvrAnalysis {
  std::vector<VvrIntervalRow> intervals;
  std::optional<double> spearman;
  std::optional<double> spearman_p;
  std::size_t n = 0;
};

/// Buckets pairs by vvr into [edges[k], edges[k+1]); the last interval also
/// includes its upper edge.
VvrAnalysis vvr_interval_analysis(const PostIndex& index, const std::vector<PostPair>& pairs,
                                  const std::vector<double>& edges);

enum class BinMode { fixed, quantile };

struct LdBinRow {
  int lo = 0;
  int hi = 0;  // inclusive upper LD in the bin
  std::int64_t n = 0;
  std::optional<double> mean_score;
  std::optional<double> p_vs_reference;
  std::optional<double> log10_p;
  std::optional<std::string> direction;
  bool reference = false;
};

/// Score of posts by post-title vs video-title similarity. Fixed mode uses 20
/// bins of width 5 (the last includes 100); quantile mode uses 5 equal-count
/// bins. Each bin is compared against the final bin with Welch's t-test.
std::vector<LdBinRow> ld_bin_analysis(const PostIndex& index, BinMode mode);

}  // namespace pairlens
