#include "pairlens/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "pairlens/csv.hpp"
#include "pairlens/error.hpp"
#include "pairlens/rng.hpp"
#include "pairlens/stats.hpp"

namespace pairlens {

namespace {

[[noreturn]] void bad_config(const std::string& m) { throw Error(ErrorKind::config, "BAD_CONFIG", m); }

std::vector<ScoredPair> phase_subset(std::span<const ScoredPair> pairs, const std::optional<Phase>& phase) {
  std::vector<ScoredPair> out;
  for (const auto& p : pairs)
    if (!phase || p.phase == *phase) out.push_back(p);
  return out;
}

double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, double margin, double l2) {
  if (x.rows() == 0) return 0.5 * l2 * w.squaredNorm();
  const Eigen::VectorXd slack = (margin - (x * w).array()).max(0.0).matrix();
  return slack.mean() + 0.5 * l2 * w.squaredNorm();
}

}  // namespace

std::string to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::date: return "date";
    case SplitStrategy::post_id: return "post_id";
    case SplitStrategy::video_id: return "video_id";
  }
  return "";
}

SplitStrategy split_strategy_from_string(const std::string& s) {
  if (s == "date") return SplitStrategy::date;
  if (s == "post_id") return SplitStrategy::post_id;
  if (s == "video_id") return SplitStrategy::video_id;
  bad_config("unknown split strategy '" + s + "'");
}

std::string to_string(TieRule t) { return t == TieRule::earlier_post ? "earlier_post" : "post1"; }

void SplitSpec::validate() const {
  if (!(test_frac > 0.0 && test_frac < 1.0)) bad_config("test_frac must be within (0,1)");
}

Split make_split(std::span<const ScoredPair> pairs, const SplitSpec& spec) {
  spec.validate();
  Split out;
  if (spec.strategy == SplitStrategy::date) {
    for (const auto& p : pairs) {
      const bool a = p.created1 >= spec.cutoff;
      const bool b = p.created2 >= spec.cutoff;
      if (a && b) {
        out.test.push_back(p);
      } else if (!a && !b) {
        out.train.push_back(p);
      }
    }
  } else {
    const bool by_post = spec.strategy == SplitStrategy::post_id;
    std::set<std::string> ids;
    for (const auto& p : pairs) {
      ids.insert(by_post ? p.post1_id : p.video1_id);
      ids.insert(by_post ? p.post2_id : p.video2_id);
    }
    std::vector<std::string> pool(ids.begin(), ids.end());
    Rng rng(derive_seed(spec.seed, "split/" + to_string(spec.strategy)));
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(spec.test_frac * static_cast<double>(pool.size()))), 1, pool.size());
    pool.resize(std::min(k, pool.size()));
    std::sort(pool.begin(), pool.end());
    const std::set<std::string> sampled(pool.begin(), pool.end());
    for (const auto& p : pairs) {
      const bool hit = by_post ? (sampled.contains(p.post1_id) || sampled.contains(p.post2_id))
                               : (sampled.contains(p.video1_id) || sampled.contains(p.video2_id));
      (hit ? out.test : out.train).push_back(p);
    }
    out.sampled_ids = std::move(pool);
  }
  if (out.train.empty() || out.test.empty())
    throw Error(ErrorKind::degenerate, "DEGENERATE_SPLIT",
                "degenerate split: " + std::to_string(out.train.size()) + " train / " +
                    std::to_string(out.test.size()) + " test pairs");
  return out;
}

// ---------------------------------------------------------------------------

Winner tie_winner(const ScoredPair& p, TieRule rule) {
  if (rule == TieRule::post1) return Winner::post1;
  if (p.created1 != p.created2) return p.created1 < p.created2 ? Winner::post1 : Winner::post2;
  return p.post1_id < p.post2_id ? Winner::post1 : Winner::post2;
}

double accuracy(std::span<const ScoredPair> pairs, const std::vector<Winner>& predictions) {
  if (pairs.empty()) throw Error(ErrorKind::degenerate, "EMPTY_INPUT", "accuracy of an empty pair set");
  const auto hits = std::count(predictions.begin(), predictions.end(), Winner::post1);
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double baseline_random(std::span<const ScoredPair> pairs, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "baseline/random"));
  std::vector<Winner> pred;
  pred.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pred.push_back((rng() >> 63) ? Winner::post1 : Winner::post2);
  return accuracy(pairs, pred);
}

double baseline_time(std::span<const ScoredPair> pairs, TieRule rule) {
  std::vector<Winner> pred;
  pred.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.created1 == p.created2) {
      pred.push_back(tie_winner(p, rule));
    } else {
      pred.push_back(p.created1 < p.created2 ? Winner::post1 : Winner::post2);
    }
  }
  return accuracy(pairs, pred);
}

double baseline_video_views(std::span<const ScoredPair> pairs, TieRule rule) {
  std::vector<Winner> pred;
  pred.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.views1 == p.views2) {
      pred.push_back(tie_winner(p, rule));
    } else {
      pred.push_back(p.views1 > p.views2 ? Winner::post1 : Winner::post2);
    }
  }
  return accuracy(pairs, pred);
}

// ---------------------------------------------------------------------------

void RankerHyper::validate() const {
  if (!(margin >= 0.0)) bad_config("margin must be non-negative");
  if (!(lr > 0.0)) bad_config("learning rate must be positive");
  if (epochs < 1) bad_config("epochs must be positive");
  if (!(l2 >= 0.0)) bad_config("l2 must be non-negative");
}

std::vector<std::string> ranker_columns(const MetricTable& table) {
  std::vector<std::string> cols = table.continuous_names;
  cols.insert(cols.end(), table.binary_names.begin(), table.binary_names.end());
  return cols;
}

std::vector<double> ranker_features(const MetricTable& table, const std::string& post_id) {
  std::vector<double> out = table.continuous.at(post_id);
  for (auto f : table.binary.at(post_id)) out.push_back(static_cast<double>(f));
  return out;
}

std::vector<ScoredPair> covered_pairs(std::span<const ScoredPair> pairs, const MetricTable& table) {
  std::vector<ScoredPair> out;
  for (const auto& p : pairs)
    if (table.contains(p.post1_id) && table.contains(p.post2_id)) out.push_back(p);
  return out;
}

double RankerModel::score(const std::vector<double>& raw) const {
  double s = bias;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const double v = raw[source_columns[static_cast<std::size_t>(k)]];
    if (!std::isnan(v)) s += weights[k] * (v - feature_means[k]) / feature_sds[k];
  }
  return s;
}

RankerModel train_margin_ranker(std::span<const ScoredPair> train, const MetricTable& table,
                                const RankerHyper& hyper) {
  hyper.validate();
  if (train.empty()) throw Error(ErrorKind::degenerate, "EMPTY_INPUT", "no training pairs");

  const auto all_cols = ranker_columns(table);
  std::map<std::string, std::vector<double>> raw;
  for (const auto& p : train) {
    for (const auto* id : {&p.post1_id, &p.post2_id})
      if (!raw.contains(*id)) raw.emplace(*id, ranker_features(table, *id));
  }

  // Train-set standardization over distinct posts; constant columns are dropped.
  RankerModel model;
  model.hyper = hyper;
  model.margin = hyper.margin;
  model.tie_rule = hyper.tie_rule;
  std::vector<double> means;
  std::vector<double> sds;
  for (std::size_t c = 0; c < all_cols.size(); ++c) {
    double sum = 0.0;
    double sq = 0.0;
    std::size_t n = 0;
    for (const auto& [id, v] : raw) {
      if (std::isnan(v[c])) continue;
      sum += v[c];
      ++n;
    }
    if (n < 2) continue;
    const double mu = sum / static_cast<double>(n);
    for (const auto& [id, v] : raw)
      if (!std::isnan(v[c])) sq += (v[c] - mu) * (v[c] - mu);
    const double sd = std::sqrt(sq / static_cast<double>(n - 1));
    if (!(sd > 1e-12)) continue;
    model.columns.push_back(all_cols[c]);
    model.source_columns.push_back(c);
    means.push_back(mu);
    sds.push_back(sd);
  }
  const auto d = static_cast<Eigen::Index>(model.columns.size());
  model.feature_means = Eigen::Map<Eigen::VectorXd>(means.data(), d);
  model.feature_sds = Eigen::Map<Eigen::VectorXd>(sds.data(), d);
  model.weights = Eigen::VectorXd::Zero(d);

  const auto standardized = [&](const std::vector<double>& v) {
    Eigen::VectorXd z(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double x = v[model.source_columns[static_cast<std::size_t>(k)]];
      z[k] = std::isnan(x) ? 0.0 : (x - model.feature_means[k]) / model.feature_sds[k];
    }
    return z;
  };
  std::map<std::string, Eigen::VectorXd> z;
  for (const auto& [id, v] : raw) z.emplace(id, standardized(v));

  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = train[static_cast<std::size_t>(i)];
    x.row(i) = (z.at(p.post1_id) - z.at(p.post2_id)).transpose();
  }

  Eigen::VectorXd& w = model.weights;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(hyper.seed, "ranker/shuffle"));
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    const double step = hyper.lr / std::sqrt(static_cast<double>(epoch));
    if (hyper.optimizer == Optimizer::sgd) {
      std::shuffle(order.begin(), order.end(), rng);
      for (const auto i : order) {
        const bool violated = hyper.margin - x.row(i).dot(w) > 0.0;
        w *= 1.0 - step * hyper.l2;
        if (violated) w += step * x.row(i).transpose();
      }
    } else {
      const Eigen::ArrayXd active = ((hyper.margin - (x * w).array()) > 0.0).cast<double>();
      const Eigen::VectorXd grad = hyper.l2 * w - x.transpose() * active.matrix() / static_cast<double>(n);
      w -= step * grad;
    }
    const double loss = objective(x, w, hyper.margin, hyper.l2);
    if (!std::isfinite(loss))
      throw Error(ErrorKind::degenerate, "NONFINITE_LOSS",
                  "training loss became non-finite at epoch " + std::to_string(epoch));
    model.epoch_loss.push_back(loss);
  }
  return model;
}

Winner predict(const RankerModel& model, const ScoredPair& pair, const MetricTable& table) {
  const double s1 = model.score(ranker_features(table, pair.post1_id));
  const double s2 = model.score(ranker_features(table, pair.post2_id));
  if (s1 == s2) return tie_winner(pair, model.tie_rule);
  return s1 > s2 ? Winner::post1 : Winner::post2;
}

double model_accuracy(const RankerModel& model, std::span<const ScoredPair> pairs, const MetricTable& table) {
  std::vector<Winner> pred;
  pred.reserve(pairs.size());
  for (const auto& p : pairs) pred.push_back(predict(model, p, table));
  return accuracy(pairs, pred);
}

nlohmann::json model_to_json(const RankerModel& model) {
  const auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return nlohmann::json{{"columns", model.columns},
                        {"weights", vec(model.weights)},
                        {"bias", model.bias},
                        {"margin", model.margin},
                        {"feature_means", vec(model.feature_means)},
                        {"feature_sds", vec(model.feature_sds)},
                        {"tie_rule", to_string(model.tie_rule)},
                        {"seed", model.hyper.seed},
                        {"hyperparameters",
                         {{"margin", model.hyper.margin},
                          {"lr", model.hyper.lr},
                          {"epochs", model.hyper.epochs},
                          {"l2", model.hyper.l2},
                          {"optimizer", model.hyper.optimizer == Optimizer::sgd ? "sgd" : "full_batch"}}},
                        {"final_loss", model.epoch_loss.empty() ? 0.0 : model.epoch_loss.back()}};
}

// ---------------------------------------------------------------------------

ExternalEvaluation evaluate_external(std::span<const ScoredPair> pairs, const std::filesystem::path& predictions) {
  std::ifstream in(predictions);
  if (!in) throw Error(ErrorKind::io, "IO_ERROR", "cannot open " + predictions.string());
  std::map<std::string, Winner> by_id;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  ExternalEvaluation out;
  std::set<std::string> known;
  for (const auto& p : pairs) known.insert(p.pair_id);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = csv::split_line(line);
    if (header) {
      header = false;
      if (cells.size() < 2 || cells[0] != "pair_id" || cells[1] != "winner")
        throw Error(ErrorKind::validation, "BAD_PREDICTIONS", "predictions header must be pair_id,winner");
      continue;
    }
    if (cells.size() != 2 || (cells[1] != "post1" && cells[1] != "post2"))
      throw Error(ErrorKind::validation, "BAD_PREDICTIONS", "predictions line " + std::to_string(lineno));
    if (!known.contains(cells[0])) {
      ++out.unknown;
      std::clog << "warning: prediction for unknown pair " << cells[0] << " ignored\n";
      continue;
    }
    by_id[cells[0]] = cells[1] == "post1" ? Winner::post1 : Winner::post2;
  }
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    const auto it = by_id.find(p.pair_id);
    if (it == by_id.end()) continue;
    ++out.covered;
    if (it->second == Winner::post1) ++correct;
  }
  if (!pairs.empty()) out.coverage = static_cast<double>(out.covered) / static_cast<double>(pairs.size());
  if (out.covered > 0) out.accuracy = static_cast<double>(correct) / static_cast<double>(out.covered);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ResultRow> evaluate_methods(std::span<const ScoredPair> pairs, const MetricTable& table,
                                        const EvaluationConfig& cfg) {
  if (cfg.seeds < 1) bad_config("seeds must be positive");
  const auto usable = covered_pairs(pairs, table);
  const int runs = cfg.split.strategy == SplitStrategy::date ? 1 : cfg.seeds;
  const std::vector<std::pair<std::string, std::optional<Phase>>> phases = {
      {"mixed", std::nullopt}, {"exact", Phase::exact}, {"similar", Phase::similar}, {"inverse", Phase::inverse}};
  const std::vector<std::string> methods = {"random", "time", "video_views", "margin_ranker"};

  // (phase, method) -> accumulated accuracy, test pairs, runs
  std::map<std::pair<std::size_t, std::size_t>, std::tuple<double, std::size_t, int>> acc;
  for (int r = 0; r < runs; ++r) {
    SplitSpec spec = cfg.split;
    spec.seed = cfg.split.seed + static_cast<std::uint64_t>(r);
    RankerHyper hyper = cfg.hyper;
    hyper.seed = cfg.hyper.seed + static_cast<std::uint64_t>(r);
    const auto split = make_split(usable, spec);
    const auto model = train_margin_ranker(split.train, table, hyper);
    for (std::size_t ph = 0; ph < phases.size(); ++ph) {
      const auto test = phase_subset(split.test, phases[ph].second);
      if (test.empty()) continue;
      const double values[] = {baseline_random(test, derive_seed(spec.seed, phases[ph].first)),
                               baseline_time(test, hyper.tie_rule), baseline_video_views(test, hyper.tie_rule),
                               model_accuracy(model, test, table)};
      for (std::size_t m = 0; m < methods.size(); ++m) {
        auto& [sum, count, k] = acc[{ph, m}];
        sum += values[m];
        count += test.size();
        ++k;
      }
    }
  }

  std::vector<ResultRow> rows;
  for (const auto& [key, v] : acc) {
    const auto& [sum, count, k] = v;
    rows.push_back(ResultRow{to_string(cfg.split.strategy), phases[key.first].first, methods[key.second],
                             sum / k, count / static_cast<std::size_t>(k), k});
  }
  return rows;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "split,phase,method,accuracy,n,runs\n";
  for (const auto& r : rows)
    out << r.split << ',' << r.phase << ',' << r.method << ',' << csv::format_double(r.accuracy) << ',' << r.n
        << ',' << r.runs << '\n';
  return out.str();
}

double pipeline_accuracy(const PostIndex& index, const MetricTable& table, const PairingConfig& pairing,
                         const EvaluationConfig& cfg, std::size_t* n_pairs) {
  const auto pairs = covered_pairs(scored_pairs(index, build_mixed_pairs(index, pairing)), table);
  if (n_pairs) *n_pairs = pairs.size();
  const auto split = make_split(pairs, cfg.split);
  const auto model = train_margin_ranker(split.train, table, cfg.hyper);
  return model_accuracy(model, split.test, table);
}

Ablation ablate_thresholds(const PostIndex& index, const MetricTable& table, const PairingConfig& base,
                           const std::vector<int>& grid, const EvaluationConfig& cfg) {
  Ablation out;
  for (const int t : grid) {
    PairingConfig pc = base;
    pc.ld_pair_max = t;
    AblationRow row;
    row.threshold = t;
    row.test_accuracy = pipeline_accuracy(index, table, pc, cfg, &row.n_pairs);
    out.rows.push_back(row);
  }
  if (out.rows.size() >= 3) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : out.rows) {
      xs.push_back(r.threshold);
      ys.push_back(r.test_accuracy);
    }
    try {
      out.correlation = stats::pearson(xs, ys);
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace pairlens
