// pairlens command-line entry point.
//
// Every subcommand reads its inputs from --out-dir unless a path is given in
// the config file ("paths" object) or on the command line, and writes its
// artifacts back into --out-dir. Precedence: flags > config file > defaults.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairlens/battery.hpp"
#include "pairlens/csv.hpp"
#include "pairlens/error.hpp"
#include "pairlens/ingest.hpp"
#include "pairlens/pairing.hpp"
#include "pairlens/ranker.hpp"
#include "pairlens/rng.hpp"
#include "pairlens/stats.hpp"
#include "pairlens/synthgen.hpp"
#include "pairlens/textmetrics.hpp"

#ifndef PAIRLENS_DEFAULT_LEXICON_DIR
#define PAIRLENS_DEFAULT_LEXICON_DIR "data/lexicons"
#endif

namespace fs = std::filesystem;
using namespace pairlens;
using nlohmann::json;

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  fs::path out_dir = ".";
  std::map<std::string, fs::path> paths;
  fs::path lexicon_dir = PAIRLENS_DEFAULT_LEXICON_DIR;

  SynthConfig synth;
  std::int64_t min_subreddit_posts = 1000;
  std::int64_t top_k_subreddits = 5000;
  PairingConfig pairing;
  std::vector<std::int64_t> time_windows = {1800, 3600, 7200, 14400, 28800, 43200, 86400};
  std::vector<double> vvr_edges = {0.5, 0.625, 0.8, 1.0, 1.25, 1.6, 2.0};
  BatteryConfig battery;
  std::string split = "all";
  EvaluationConfig evaluation;
  std::vector<int> ablation_grid = {50, 60, 70, 80, 90, 95};
  bool ablate = false;

  fs::path input(const std::string& key, const std::string& default_name) const {
    const auto it = paths.find(key);
    return it != paths.end() ? it->second : out_dir / default_name;
  }
};

[[noreturn]] void config_error(const std::string& m) { throw Error(ErrorKind::config, "BAD_CONFIG", m); }

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_config_file(const fs::path& file, RunConfig& rc) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::config, "BAD_CONFIG", "cannot open config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  take(j, "seed", rc.seed);
  if (j.contains("out_dir")) rc.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("lexicon_dir")) rc.lexicon_dir = j.at("lexicon_dir").get<std::string>();
  if (j.contains("paths")) {
    for (const auto& [k, v] : j.at("paths").items()) rc.paths[k] = v.get<std::string>();
  }
  if (j.contains("synth")) rc.synth = SynthConfig::from_json(j.at("synth"));
  if (j.contains("ingest")) {
    const auto& s = j.at("ingest");
    take(s, "min_subreddit_posts", rc.min_subreddit_posts);
    take(s, "top_k_subreddits", rc.top_k_subreddits);
  }
  if (j.contains("pairing")) {
    const auto& s = j.at("pairing");
    take(s, "time_window", rc.pairing.time_window);
    take(s, "vvr_max", rc.pairing.vvr_max);
    take(s, "ld_pair_max", rc.pairing.ld_pair_max);
    take(s, "ld_video_max", rc.pairing.ld_video_max);
    take(s, "min_title_chars", rc.pairing.min_title_chars);
    take(s, "require_multiword", rc.pairing.require_multiword);
    take(s, "score_ratio_min", rc.pairing.score_ratio_min);
    take(s, "score_diff_min", rc.pairing.score_diff_min);
    take(s, "exhaustive", rc.pairing.exhaustive);
  }
  if (j.contains("analysis")) {
    const auto& s = j.at("analysis");
    take(s, "time_windows", rc.time_windows);
    take(s, "vvr_edges", rc.vvr_edges);
  }
  if (j.contains("battery")) {
    const auto& s = j.at("battery");
    take(s, "alpha", rc.battery.alpha);
    take(s, "m_continuous", rc.battery.m_continuous);
    take(s, "m_binary", rc.battery.m_binary);
    take(s, "min_effect", rc.battery.min_effect);
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    take(s, "strategy", rc.split);
    take(s, "cutoff", rc.evaluation.split.cutoff);
    take(s, "test_frac", rc.evaluation.split.test_frac);
    take(s, "seeds", rc.evaluation.seeds);
  }
  if (j.contains("ranker")) {
    const auto& s = j.at("ranker");
    take(s, "margin", rc.evaluation.hyper.margin);
    take(s, "lr", rc.evaluation.hyper.lr);
    take(s, "epochs", rc.evaluation.hyper.epochs);
    take(s, "l2", rc.evaluation.hyper.l2);
    if (s.contains("tie_rule")) {
      const auto t = s.at("tie_rule").get<std::string>();
      if (t == "earlier_post") {
        rc.evaluation.hyper.tie_rule = TieRule::earlier_post;
      } else if (t == "post1") {
        rc.evaluation.hyper.tie_rule = TieRule::post1;
      } else {
        config_error("unknown tie_rule '" + t + "'");
      }
    }
  }
  if (j.contains("ablation")) {
    const auto& s = j.at("ablation");
    take(s, "grid", rc.ablation_grid);
    take(s, "enabled", rc.ablate);
  }
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "IO_ERROR", "cannot open " + p.string());
  return in;
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "IO_ERROR", "cannot write " + p.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "IO_ERROR", "write failed for " + p.string());
}

std::string opt_cell(const std::optional<double>& v) { return v ? csv::format_double(*v) : ""; }

std::vector<JoinedPost> load_joined(const RunConfig& rc) {
  auto in = open_in(rc.input("joined", "joined.jsonl"));
  return parse_joined(in);
}

Lexicons load_lexicons(const RunConfig& rc) { return Lexicons::load(rc.lexicon_dir); }

std::string to_jsonl(const PostIndex& index, const std::vector<PostPair>& pairs) {
  std::string s;
  for (const auto& p : pairs) s += pair_to_json(index, p).dump() + "\n";
  return s;
}

// ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& rc) {
  SynthConfig cfg = rc.synth;
  cfg.seed = rc.seed;
  write_world(generate_world(cfg), rc.out_dir);
  return 0;
}

int cmd_ingest(const RunConfig& rc) {
  auto posts_in = open_in(rc.input("posts", "posts.jsonl"));
  auto videos_in = open_in(rc.input("videos", "videos.jsonl"));
  const auto posts = parse_posts(posts_in);
  const auto videos = parse_videos(videos_in);
  const auto joined = join_posts_videos(posts.records, videos.catalog);
  const auto filtered = filter_subreddits(joined.posts, rc.min_subreddit_posts, rc.top_k_subreddits);
  if (filtered.posts.empty())
    throw Error(ErrorKind::degenerate, "EMPTY_INPUT", "no subreddit passed the size filter");

  std::string joined_text;
  for (const auto& p : filtered.posts) joined_text += joined_to_json(p).dump() + "\n";
  write_file(rc.out_dir / "joined.jsonl", joined_text);

  std::ostringstream subs;
  subs << "subreddit,n_posts,mean_score,median_score\n";
  for (const auto& s : filtered.summaries)
    subs << csv::escape(s.subreddit) << ',' << s.n_posts << ',' << csv::format_double(s.mean_score) << ','
         << csv::format_double(s.median_score) << '\n';
  write_file(rc.out_dir / "subreddits.csv", subs.str());

  const json stats = {{"post_lines", posts.stats.lines},
                      {"post_records", posts.stats.records},
                      {"post_skipped", posts.stats.skipped},
                      {"post_duplicates", posts.stats.duplicates},
                      {"posts_without_video", posts.stats.droppable},
                      {"video_records", videos.stats.records},
                      {"video_skipped", videos.stats.skipped},
                      {"joined", joined.posts.size()},
                      {"join_rate", joined.join_rate()},
                      {"kept_after_subreddit_filter", filtered.posts.size()},
                      {"subreddits_kept", filtered.summaries.size()}};
  write_file(rc.out_dir / "ingest_stats.json", stats.dump(2) + "\n");
  return 0;
}

int cmd_pair(const RunConfig& rc) {
  const PostIndex index(load_joined(rc));
  const auto& cfg = rc.pairing;
  const auto exact = apply_title_filters(index, build_exact_pairs(index, cfg), cfg);
  const auto similar = apply_title_filters(index, build_similar_pairs(index, cfg), cfg);
  const auto inverse = apply_title_filters(index, build_inverse_pairs(index, cfg), cfg);
  const auto mixed = mix_datasets(index, exact, similar, inverse);
  write_file(rc.out_dir / "pairs_exact.jsonl", to_jsonl(index, exact));
  write_file(rc.out_dir / "pairs_similar.jsonl", to_jsonl(index, similar));
  write_file(rc.out_dir / "pairs_inverse.jsonl", to_jsonl(index, inverse));
  write_file(rc.out_dir / "pairs.jsonl", to_jsonl(index, mixed));
  return 0;
}

int cmd_features(const RunConfig& rc) {
  const auto lex = load_lexicons(rc);
  const auto posts = load_joined(rc);
  std::string out = features_csv_header() + "\n";
  std::size_t skipped = 0;
  for (const auto& p : posts) {
    try {
      out += features_csv_row(p.id(), extract_features(p.post.title, lex)) + "\n";
    } catch (const Error& e) {
      if (e.code() != "EMPTY_INPUT") throw;
      ++skipped;
    }
  }
  if (skipped) std::clog << "warning: " << skipped << " titles had no lexical tokens and were skipped\n";
  write_file(rc.out_dir / "features.csv", out);
  return 0;
}

MetricTable load_metric_table(const RunConfig& rc, const PostIndex& index) {
  const auto features = read_features_csv(rc.input("features", "features.csv"));
  const auto ext_it = rc.paths.find("external_scores");
  if (ext_it == rc.paths.end()) return make_metric_table(features);
  std::set<std::string> known;
  for (const auto& p : index.posts()) known.insert(p.id());
  const auto ext = load_external_scores(ext_it->second, &known);
  return make_metric_table(features, &ext);
}

std::vector<ScoredPair> load_scored_pairs(const RunConfig& rc, const PostIndex& index) {
  auto in = open_in(rc.input("pairs", "pairs.jsonl"));
  return scored_pairs(index, parse_pairs(in, index));
}

int cmd_analyze(const RunConfig& rc) {
  const PostIndex index(load_joined(rc));
  const auto table = load_metric_table(rc, index);
  const auto pairs = load_scored_pairs(rc, index);

  BatteryConfig bc = rc.battery;
  const auto reports = run_metric_battery(pairs, table, bc);
  write_file(rc.out_dir / "stat_reports.json", reports_to_json(reports).dump(2) + "\n");

  // Normality of the paired differences, reported separately from the battery.
  auto normality = json::array();
  const auto covered = covered_pairs(pairs, table);
  for (std::size_t k = 0; k < table.continuous_names.size(); ++k) {
    std::vector<double> diffs;
    for (const auto& p : covered) {
      const double d = table.continuous.at(p.post1_id)[k] - table.continuous.at(p.post2_id)[k];
      if (!std::isnan(d)) diffs.push_back(d);
    }
    json row = {{"metric_name", table.continuous_names[k]}, {"test", "dagostino_k2"}, {"n", diffs.size()}};
    try {
      const auto r = stats::dagostino_k2(diffs);
      row["statistic"] = r.k2;
      row["p_value"] = r.p;
    } catch (const Error&) {
      row["statistic"] = nullptr;
      row["p_value"] = nullptr;
    }
    normality.push_back(row);
  }
  write_file(rc.out_dir / "normality.json", normality.dump(2) + "\n");

  // Timing: exact pairs over the widest window, no title filters.
  PairingConfig wide = rc.pairing;
  wide.time_window = std::max<std::int64_t>(
      rc.pairing.time_window, rc.time_windows.empty() ? 0 : *std::max_element(rc.time_windows.begin(), rc.time_windows.end()));
  const auto rows = time_window_analysis(index, build_exact_pairs(index, wide), rc.time_windows);
  std::ostringstream tw;
  tw << "window,later_wins,earlier_wins,later_win_ratio\n";
  for (const auto& r : rows)
    tw << r.window << ',' << r.later_wins << ',' << r.earlier_wins << ',' << opt_cell(r.later_win_ratio) << '\n';
  write_file(rc.out_dir / "time_windows.csv", tw.str());

  // Popularity: similar pairs in random orientation, no title filters.
  const auto vvr = vvr_interval_analysis(index, build_similar_pairs(index, rc.pairing), rc.vvr_edges);
  std::ostringstream vv;
  vv << "lo,hi,n,mean_score_diff,post1_wins,post2_wins,win_ratio\n";
  for (const auto& r : vvr.intervals)
    vv << csv::format_double(r.lo) << ',' << csv::format_double(r.hi) << ',' << r.n << ','
       << opt_cell(r.mean_score_diff) << ',' << r.post1_wins << ',' << r.post2_wins << ',' << opt_cell(r.win_ratio)
       << '\n';
  write_file(rc.out_dir / "vvr_intervals.csv", vv.str());
  const json vvr_summary = {{"n", vvr.n},
                            {"spearman", vvr.spearman ? json(*vvr.spearman) : json(nullptr)},
                            {"spearman_p", vvr.spearman_p ? json(*vvr.spearman_p) : json(nullptr)}};
  write_file(rc.out_dir / "vvr_summary.json", vvr_summary.dump(2) + "\n");
  return 0;
}

int cmd_bins(const RunConfig& rc) {
  const PostIndex index(load_joined(rc));
  std::ostringstream out;
  out << "mode,lo,hi,n,mean_score,p_vs_reference,log10_p,direction,reference\n";
  for (const auto mode : {BinMode::fixed, BinMode::quantile}) {
    for (const auto& r : ld_bin_analysis(index, mode)) {
      out << (mode == BinMode::fixed ? "fixed" : "quantile") << ',' << r.lo << ',' << r.hi << ',' << r.n << ','
          << opt_cell(r.mean_score) << ',' << opt_cell(r.p_vs_reference) << ',' << opt_cell(r.log10_p) << ','
          << r.direction.value_or("") << ',' << (r.reference ? 1 : 0) << '\n';
    }
  }
  write_file(rc.out_dir / "ld_bins.csv", out.str());
  return 0;
}

int cmd_rank(const RunConfig& rc) {
  const PostIndex index(load_joined(rc));
  const auto table = load_metric_table(rc, index);
  const auto pairs = covered_pairs(load_scored_pairs(rc, index), table);

  std::vector<SplitStrategy> strategies;
  if (rc.split == "all") {
    strategies = {SplitStrategy::date, SplitStrategy::post_id, SplitStrategy::video_id};
  } else {
    strategies = {split_strategy_from_string(rc.split)};
  }

  std::vector<ResultRow> rows;
  for (const auto s : strategies) {
    EvaluationConfig ec = rc.evaluation;
    ec.split.strategy = s;
    const auto r = evaluate_methods(pairs, table, ec);
    rows.insert(rows.end(), r.begin(), r.end());
  }

  const auto ext_it = rc.paths.find("predictions");
  if (ext_it != rc.paths.end()) {
    const auto ev = evaluate_external(pairs, ext_it->second);
    if (ev.accuracy) rows.push_back(ResultRow{"none", "mixed", "external", *ev.accuracy, ev.covered, 1});
    const json ext = {{"accuracy", ev.accuracy ? json(*ev.accuracy) : json(nullptr)},
                      {"coverage", ev.coverage},
                      {"covered", ev.covered},
                      {"unknown", ev.unknown}};
    write_file(rc.out_dir / "external_eval.json", ext.dump(2) + "\n");
  }
  write_file(rc.out_dir / "results.csv", results_csv(rows));

  // The saved model is fit on the training side of the first strategy.
  EvaluationConfig ec = rc.evaluation;
  ec.split.strategy = strategies.front();
  const auto split = make_split(pairs, ec.split);
  const auto model = train_margin_ranker(split.train, table, ec.hyper);
  auto mj = model_to_json(model);
  mj["split"] = to_string(ec.split.strategy);
  mj["train_pairs"] = split.train.size();
  write_file(rc.out_dir / "model.json", mj.dump(2) + "\n");

  if (rc.ablate) {
    const auto ab = ablate_thresholds(index, table, rc.pairing, rc.ablation_grid, ec);
    std::ostringstream out;
    out << "ld_pair_max,test_accuracy,n_pairs\n";
    for (const auto& r : ab.rows) out << r.threshold << ',' << csv::format_double(r.test_accuracy) << ',' << r.n_pairs << '\n';
    PairingConfig no_video_filter = rc.pairing;
    no_video_filter.ld_video_max = 100;
    std::size_t n_unfiltered = 0;
    const double acc_unfiltered = pipeline_accuracy(index, table, no_video_filter, ec, &n_unfiltered);
    write_file(rc.out_dir / "ablation.csv", out.str());
    const json summary = {{"correlation", ab.correlation ? json(*ab.correlation) : json(nullptr)},
                          {"without_video_filter", {{"test_accuracy", acc_unfiltered}, {"n_pairs", n_unfiltered}}}};
    write_file(rc.out_dir / "ablation_summary.json", summary.dump(2) + "\n");
  }
  return 0;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  if (!in) return rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(csv::split_line(line));
  }
  return rows;
}

std::string fmt(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

int cmd_report(const RunConfig& rc) {
  std::ostringstream md;
  md << "# pairlens summary\n\n";

  const auto subs = read_csv_rows(rc.out_dir / "subreddits.csv");
  if (subs.size() > 1) {
    md << "## Subreddits\n\n| subreddit | posts | mean score | median score |\n|---|---|---|---|\n";
    for (std::size_t i = 1; i < subs.size(); ++i)
      md << "| " << subs[i][0] << " | " << subs[i][1] << " | " << fmt(std::stod(subs[i][2]), 1) << " | "
         << subs[i][3] << " |\n";
    md << "\n";
  }

  const auto tw = read_csv_rows(rc.out_dir / "time_windows.csv");
  if (tw.size() > 1) {
    md << "## Later-post win ratio by window\n\n| window (s) | later wins | earlier wins | ratio |\n|---|---|---|---|\n";
    for (std::size_t i = 1; i < tw.size(); ++i)
      md << "| " << tw[i][0] << " | " << tw[i][1] << " | " << tw[i][2] << " | "
         << (tw[i].size() > 3 && !tw[i][3].empty() ? fmt(std::stod(tw[i][3]), 3) : "-") << " |\n";
    md << "\n";
  }

  const auto results = read_csv_rows(rc.input("results", "results.csv"));
  if (results.size() > 1) {
    md << "## Pairwise accuracy (%)\n\n| split | phase | method | accuracy | test pairs | runs |\n|---|---|---|---|---|---|\n";
    for (std::size_t i = 1; i < results.size(); ++i) {
      const auto& r = results[i];
      md << "| " << r[0] << " | " << r[1] << " | " << r[2] << " | " << fmt(100.0 * std::stod(r[3]), 1) << " | "
         << r[4] << " | " << r[5] << " |\n";
    }
    md << "\n";
  }

  const auto stat_path = rc.input("stat_reports", "stat_reports.json");
  if (fs::exists(stat_path)) {
    auto in = open_in(stat_path);
    json reports;
    try {
      reports = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::validation, "BAD_STAT_REPORTS", e.what());
    }
    md << "## Metric battery\n\n| metric | test | statistic | p | direction | effect | n | significant | conclusion |\n"
          "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
      const auto effect = r.at("effect_size").is_null() ? std::string("-") : fmt(r.at("effect_size").get<double>(), 3);
      std::ostringstream p;
      p.precision(3);
      p << r.at("p_value").get<double>();
      md << "| " << r.at("metric_name").get<std::string>() << " | " << r.at("test").get<std::string>() << " | "
         << fmt(r.at("statistic").get<double>(), 3) << " | " << p.str() << " | "
         << r.at("direction").get<std::string>() << " | " << effect << " | " << r.at("n").get<std::int64_t>() << " | "
         << (r.at("passes_bonferroni").get<bool>() ? "yes" : "no") << " | " << r.at("conclusion").get<std::string>()
         << " |\n";
    }
    md << "\n";
  }
  write_file(rc.out_dir / "summary.md", md.str());
  return 0;
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairlens: matched-pair analysis of post titles and engagement"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> time_window;
  std::optional<double> vvr_max;
  std::optional<int> ld_pair_max;
  std::optional<int> ld_video_max;
  std::optional<std::string> split;
  std::optional<double> margin;
  std::optional<std::string> out_dir;
  std::map<std::string, std::string> path_flags;
  bool ablate = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "root random seed");
  app.add_option("--time-window", time_window, "pairing time window in seconds");
  app.add_option("--vvr-max", vvr_max, "maximum video views ratio for similar pairs");
  app.add_option("--ld-pair-max", ld_pair_max, "maximum title-title similarity");
  app.add_option("--ld-video-max", ld_video_max, "maximum title-video-title similarity");
  app.add_option("--split", split, "date, post_id, video_id or all");
  app.add_option("--margin", margin, "ranker hinge margin");
  app.add_option("--out-dir", out_dir, "artifact directory");
  for (const char* key : {"posts", "videos", "joined", "pairs", "features", "external-scores", "predictions"})
    app.add_option(std::string("--") + key, path_flags[key], std::string("input path for ") + key);

  const std::map<std::string, int (*)(const RunConfig&)> commands = {
      {"synth", cmd_synth},     {"ingest", cmd_ingest}, {"pair", cmd_pair}, {"features", cmd_features},
      {"analyze", cmd_analyze}, {"bins", cmd_bins},     {"rank", cmd_rank}, {"report", cmd_report}};
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"synth", "generate a synthetic world (posts, videos, ground truth)"},
      {"ingest", "parse, join and filter posts and videos"},
      {"pair", "build exact, similar and inverse pairs and the mixed set"},
      {"features", "compute title metrics for every joined post"},
      {"analyze", "metric battery, normality, time-window and vvr diagnostics"},
      {"bins", "score-difference tests per title-similarity bin"},
      {"rank", "baselines and margin ranker over the split strategies"},
      {"report", "summarize the artifacts in summary.md"}};
  for (const auto& [name, fn] : commands) subs[name] = app.add_subcommand(name, about.at(name));
  subs["rank"]->add_flag("--ablate", ablate, "also run the ld_pair threshold ablation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("BAD_ARGUMENTS", e.what());
    return 2;
  }

  try {
    RunConfig rc;
    if (const char* env = std::getenv("PAIRLENS_LEXICON_DIR"); env && *env) rc.lexicon_dir = env;
    if (!config_path.empty()) apply_config_file(config_path, rc);
    if (seed) rc.seed = *seed;
    if (out_dir) rc.out_dir = *out_dir;
    if (time_window) rc.pairing.time_window = *time_window;
    if (vvr_max) rc.pairing.vvr_max = *vvr_max;
    if (ld_pair_max) rc.pairing.ld_pair_max = *ld_pair_max;
    if (ld_video_max) rc.pairing.ld_video_max = *ld_video_max;
    if (split) rc.split = *split;
    if (margin) rc.evaluation.hyper.margin = *margin;
    if (ablate) rc.ablate = true;
    for (const auto& [key, value] : path_flags) {
      std::string k = key;
      std::replace(k.begin(), k.end(), '-', '_');
      if (!value.empty()) rc.paths[k] = value;
    }
    if (rc.split != "all") split_strategy_from_string(rc.split);

    // All randomness fans out from the root seed.
    rc.pairing.rng_seed = derive_seed(rc.seed, "pairing");
    rc.evaluation.split.seed = derive_seed(rc.seed, "split");
    rc.evaluation.hyper.seed = derive_seed(rc.seed, "ranker");
    rc.pairing.validate();
    rc.battery.validate();
    rc.evaluation.split.validate();
    rc.evaluation.hyper.validate();

    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return commands.at(name)(rc);
    return 2;
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    print_error("RUNTIME_ERROR", e.what());
    return 1;
  }
}
