#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairlens/pairing.hpp"
#include "pairlens/stats.hpp"
#include "pairlens/textmetrics.hpp"

namespace pairlens {

/// Per-post metric values keyed by post id. Continuous columns may hold NaN
/// for a post that lacks a value (external scores); such pairs are skipped
/// for that metric.
struct MetricTable {
  std::vector<std::string> continuous_names;
  std::vector<std::string> binary_names;
  std::map<std::string, std::vector<double>> continuous;
  std::map<std::string, std::vector<std::uint8_t>> binary;

  bool contains(const std::string& post_id) const { return continuous.contains(post_id); }
};

/// Builds the table from features.csv rows, optionally appending external
/// score columns as extra continuous metrics.
MetricTable make_metric_table(const std::map<std::string, FeatureRow>& features,
                              const ExternalScoreTable* external = nullptr);

struct StatReport {
  std::string metric_name;
  stats::TestKind test = stats::TestKind::paired_t;
  double statistic = 0.0;
  double p_value = 1.0;
  stats::Direction direction = stats::Direction::none;
  std::optional<double> effect_size;  // r_rb (wilcoxon) or risk difference (mcnemar)
  std::int64_t n = 0;
  bool passes_bonferroni = false;
  double alpha_corrected = 0.0;
  std::string conclusion;  // group1_larger, group1_smaller, inconclusive, not_significant, skipped
  std::optional<double> mean1;
  std::optional<double> mean2;
};

struct BatteryConfig {
  double alpha = 0.001;
  std::int64_t m_continuous = 22;
  std::int64_t m_binary = 16;
  double min_effect = 0.1;  // |r_rb| below this is inconclusive

  void validate() const;
};

/// Paired comparison of post1 (winner) against post2 for every metric:
/// paired t and Wilcoxon for continuous metrics, McNemar for binary flags.
/// Pairs whose posts are missing from the table are ignored. Reports are
/// ordered by metric name, then test.
std::vector<StatReport> run_metric_battery(std::span<const ScoredPair> pairs, const MetricTable& table,
                                           const BatteryConfig& cfg = {});

nlohmann::json report_to_json(const StatReport& r);
nlohmann::json reports_to_json(const std::vector<StatReport>& reports);

}  // namespace pairlens
