#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairlens/ingest.hpp"
#include "pairlens/rng.hpp"

namespace pairlens {

/// Parameters of the synthetic engagement world. Scores follow
///   log(1 + score) = base + views_weight * log(views)
///                  + exposure_weight * exp(-(t - burst_start) / exposure_halflife)
///                  + title effect + subreddit offset + N(0, noise_sd^2)
/// rounded and floored at 0. Title effects act only on posts that rewrite the
/// video title; posts copying it verbatim get none.
struct SynthConfig {
  std::uint64_t seed = 0;
  int n_subreddits = 20;
  int posts_per_subreddit = 2500;
  int n_videos = 0;  // 0: one per post
  int n_categories = 10;

  double views_alpha = 1.11;
  double views_min = 100.0;
  double views_cap = 1e18;
  double subreddit_size_alpha = 1.84;
  double subreddit_size_min = 1000.0;

  std::int64_t start_time = 1609459200;  // 2021-01-01
  std::int64_t end_time = 1672531200;    // 2023-01-01
  double burst_mean_size = 6.0;
  std::int64_t burst_span = 2400;
  int neighbor_spread = 40;  // burst videos lie within this many view-ranks of an anchor
  double same_video_prob = 0.35;
  double repost_prob = 0.12;
  double copy_title_fraction = 0.21;
  double text_post_fraction = 0.02;

  double base_log_score = 3.0;
  double views_weight = 0.3;
  double exposure_weight = 0.5;
  double exposure_halflife = 3600.0;
  double subreddit_offset_sd = 0.5;
  double noise_sd = 0.8;

  /// Keys: words (per word), sentiment (per sentiment token, signed),
  /// uppercase, numbers (presence), rewrite (constant bonus for non-copied
  /// titles). Missing keys are 0.
  std::map<std::string, double> title_effect_weights;

  void validate() const;
  nlohmann::json to_json() const;
  static SynthConfig from_json(const nlohmann::json& j);
};

struct SynthWorld {
  std::vector<nlohmann::json> posts;   // posts.jsonl records
  std::vector<VideoRecord> videos;
  nlohmann::json ground_truth;
};

SynthWorld generate_world(const SynthConfig& cfg);

/// Writes posts.jsonl, videos.jsonl and ground_truth.json into `dir`.
void write_world(const SynthWorld& world, const std::filesystem::path& dir);

// Samplers used by the generator, exposed for testing.
double uniform01(Rng& rng);
double standard_normal(Rng& rng);
/// Continuous power law p(x) ~ x^-alpha on [x_min, inf) by inverse CDF.
double sample_powerlaw(Rng& rng, double alpha, double x_min);

}  // namespace pairlens
