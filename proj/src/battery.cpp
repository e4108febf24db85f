#include "pairlens/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairlens/error.hpp"

namespace pairlens {

namespace {

using stats::Direction;
using stats::TestKind;

StatReport skipped_report(const std::string& metric, TestKind test, std::int64_t n, double alpha_corrected) {
  StatReport r;
  r.metric_name = metric;
  r.test = test;
  r.n = n;
  r.alpha_corrected = alpha_corrected;
  r.conclusion = "skipped";
  return r;
}

std::string conclude(bool significant, Direction d) {
  if (!significant || d == Direction::none) return "not_significant";
  return stats::to_string(d);
}

void continuous_reports(const std::string& metric, const std::vector<double>& v1, const std::vector<double>& v2,
                        double alpha_corrected, double min_effect, std::vector<StatReport>& out) {
  std::vector<double> diffs(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) diffs[i] = v1[i] - v2[i];
  const auto n = static_cast<std::int64_t>(diffs.size());

  std::optional<StatReport> t_rep;
  std::optional<StatReport> w_rep;
  try {
    const auto t = stats::paired_t_test(diffs);
    StatReport r;
    r.metric_name = metric;
    r.test = TestKind::paired_t;
    r.statistic = t.t;
    r.p_value = t.p;
    r.direction = t.direction;
    r.n = n;
    t_rep = r;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate) throw;
  }
  try {
    const auto w = stats::wilcoxon_signed_rank(diffs);
    StatReport r;
    r.metric_name = metric;
    r.test = TestKind::wilcoxon;
    r.statistic = w.w;
    r.p_value = w.p;
    r.direction = w.direction;
    r.effect_size = w.r_rb;
    r.n = static_cast<std::int64_t>(w.n);
    w_rep = r;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate) throw;
  }

  const double m1 = v1.empty() ? 0.0 : stats::mean(v1);
  const double m2 = v2.empty() ? 0.0 : stats::mean(v2);
  const bool disagree = t_rep && w_rep && t_rep->direction != w_rep->direction;
  const bool weak = w_rep && *w_rep->effect_size < min_effect;

  for (auto* rep : {&t_rep, &w_rep}) {
    if (!*rep) continue;
    auto& r = **rep;
    r.alpha_corrected = alpha_corrected;
    r.passes_bonferroni = r.p_value < alpha_corrected;
    r.mean1 = m1;
    r.mean2 = m2;
    r.conclusion = (disagree || weak) ? "inconclusive" : conclude(r.passes_bonferroni, r.direction);
  }
  out.push_back(t_rep ? *t_rep : skipped_report(metric, TestKind::paired_t, n, alpha_corrected));
  out.push_back(w_rep ? *w_rep : skipped_report(metric, TestKind::wilcoxon, n, alpha_corrected));
}

StatReport binary_report(const std::string& metric, const std::vector<std::uint8_t>& f1,
                         const std::vector<std::uint8_t>& f2, double alpha_corrected) {
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t ones1 = 0;
  std::int64_t ones2 = 0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    ones1 += f1[i];
    ones2 += f2[i];
    if (f1[i] && !f2[i]) ++b;
    if (!f1[i] && f2[i]) ++c;
  }
  const auto n = static_cast<std::int64_t>(f1.size());
  if (b + c == 0) return skipped_report(metric, TestKind::mcnemar, n, alpha_corrected);
  const auto m = stats::mcnemar(b, c);
  StatReport r;
  r.metric_name = metric;
  r.test = TestKind::mcnemar;
  r.statistic = m.statistic;
  r.p_value = m.p;
  r.direction = b > c ? Direction::group1_larger : (b < c ? Direction::group1_smaller : Direction::none);
  r.n = n;
  r.mean1 = static_cast<double>(ones1) / static_cast<double>(n);
  r.mean2 = static_cast<double>(ones2) / static_cast<double>(n);
  r.effect_size = *r.mean1 - *r.mean2;
  r.alpha_corrected = alpha_corrected;
  r.passes_bonferroni = r.p_value < alpha_corrected;
  r.conclusion = conclude(r.passes_bonferroni, r.direction);
  return r;
}

}  // namespace

MetricTable make_metric_table(const std::map<std::string, FeatureRow>& features, const ExternalScoreTable* external) {
  MetricTable t;
  t.continuous_names.assign(continuous_names().begin(), continuous_names().end());
  t.binary_names.assign(flag_names().begin(), flag_names().end());
  if (external) t.continuous_names.insert(t.continuous_names.end(), external->columns.begin(), external->columns.end());
  for (const auto& [id, row] : features) {
    std::vector<double> values(row.continuous.begin(), row.continuous.end());
    if (external) {
      const auto it = external->rows.find(id);
      for (const auto& col : external->columns) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (it != external->rows.end()) {
          const auto s = it->second.scores.find(col);
          if (s != it->second.scores.end()) v = s->second;
        }
        values.push_back(v);
      }
    }
    t.continuous.emplace(id, std::move(values));
    t.binary.emplace(id, std::vector<std::uint8_t>(row.flags.begin(), row.flags.end()));
  }
  return t;
}

void BatteryConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::config, "BAD_CONFIG", "alpha must be within (0,1)");
  if (m_continuous < 1 || m_binary < 1)
    throw Error(ErrorKind::config, "BAD_CONFIG", "Bonferroni family sizes must be positive");
  if (min_effect < 0.0) throw Error(ErrorKind::config, "BAD_CONFIG", "min_effect must be non-negative");
}

std::vector<StatReport> run_metric_battery(std::span<const ScoredPair> pairs, const MetricTable& table,
                                           const BatteryConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>> cont_rows;
  std::vector<std::pair<const std::vector<std::uint8_t>*, const std::vector<std::uint8_t>*>> bin_rows;
  for (const auto& p : pairs) {
    const auto c1 = table.continuous.find(p.post1_id);
    const auto c2 = table.continuous.find(p.post2_id);
    if (c1 == table.continuous.end() || c2 == table.continuous.end()) continue;
    cont_rows.emplace_back(&c1->second, &c2->second);
    bin_rows.emplace_back(&table.binary.at(p.post1_id), &table.binary.at(p.post2_id));
  }

  std::vector<StatReport> out;
  const double alpha_cont = stats::bonferroni(cfg.alpha, cfg.m_continuous);
  for (std::size_t k = 0; k < table.continuous_names.size(); ++k) {
    std::vector<double> v1;
    std::vector<double> v2;
    for (const auto& [a, b] : cont_rows) {
      if (std::isnan((*a)[k]) || std::isnan((*b)[k])) continue;
      v1.push_back((*a)[k]);
      v2.push_back((*b)[k]);
    }
    continuous_reports(table.continuous_names[k], v1, v2, alpha_cont, cfg.min_effect, out);
  }

  const double alpha_bin = stats::bonferroni(cfg.alpha, cfg.m_binary);
  for (std::size_t k = 0; k < table.binary_names.size(); ++k) {
    std::vector<std::uint8_t> f1;
    std::vector<std::uint8_t> f2;
    for (const auto& [a, b] : bin_rows) {
      f1.push_back((*a)[k]);
      f2.push_back((*b)[k]);
    }
    out.push_back(binary_report(table.binary_names[k], f1, f2, alpha_bin));
  }

  std::stable_sort(out.begin(), out.end(), [](const StatReport& a, const StatReport& b) {
    if (a.metric_name != b.metric_name) return a.metric_name < b.metric_name;
    return static_cast<int>(a.test) < static_cast<int>(b.test);
  });
  return out;
}

nlohmann::json report_to_json(const StatReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return nlohmann::json{{"metric_name", r.metric_name},
                        {"test", stats::to_string(r.test)},
                        {"statistic", r.statistic},
                        {"p_value", r.p_value},
                        {"direction", stats::to_string(r.direction)},
                        {"effect_size", opt(r.effect_size)},
                        {"n", r.n},
                        {"passes_bonferroni", r.passes_bonferroni},
                        {"alpha_corrected", r.alpha_corrected},
                        {"conclusion", r.conclusion},
                        {"mean1", opt(r.mean1)},
                        {"mean2", opt(r.mean2)}};
}

nlohmann::json reports_to_json(const std::vector<StatReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

}  // namespace pairlens
