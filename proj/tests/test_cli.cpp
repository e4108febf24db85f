#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "world.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string err;
};

Run run(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = env + " " + std::string(PAIRLENS_CLI_PATH) + " " + args + " 2>" + err_path.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = testsupport::read_file(err_path);
  return r;
}

fs::path workspace(const std::string& name) {
  const auto p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  std::ofstream(p / "config.json") << R"({"seed": 7,
    "synth": {"n_subreddits": 4, "posts_per_subreddit": 2500},
    "split": {"seeds": 2},
    "ranker": {"epochs": 30}})";
  return p;
}

std::string last_json_line(const std::string& s) {
  auto end = s.find_last_not_of('\n');
  auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}  // namespace

TEST_CASE("full pipeline produces every artifact") {
  const auto dir = workspace("pl_cli_full");
  const std::string base = "--config " + (dir / "config.json").string() + " --out-dir " + dir.string();
  for (const char* cmd : {"synth", "ingest", "pair", "features", "analyze", "bins", "rank", "report"}) {
    INFO(cmd);
    const auto r = run(dir, std::string(cmd) + " " + base);
    REQUIRE(r.code == 0);
  }
  for (const char* f : {"posts.jsonl", "videos.jsonl", "ground_truth.json", "joined.jsonl", "subreddits.csv",
                        "ingest_stats.json", "pairs.jsonl", "pairs_exact.jsonl", "pairs_similar.jsonl",
                        "pairs_inverse.jsonl", "features.csv", "stat_reports.json", "normality.json",
                        "time_windows.csv", "vvr_intervals.csv", "vvr_summary.json", "ld_bins.csv", "results.csv",
                        "model.json", "summary.md"}) {
    INFO(f);
    CHECK(fs::exists(dir / f));
    CHECK(fs::file_size(dir / f) > 0);
  }
  CHECK(testsupport::read_file(dir / "subreddits.csv").rfind("subreddit,n_posts,mean_score,median_score\n", 0) == 0);
  const auto stats = nlohmann::json::parse(testsupport::read_file(dir / "ingest_stats.json"));
  CHECK(stats["post_records"].get<int>() == 10000);
  fs::remove_all(dir);
}

TEST_CASE("missing lexicon directory exits with a config error") {
  const auto dir = workspace("pl_cli_lex");
  const std::string base = "--config " + (dir / "config.json").string() + " --out-dir " + dir.string();
  REQUIRE(run(dir, "synth " + base).code == 0);
  REQUIRE(run(dir, "ingest " + base).code == 0);
  const auto r = run(dir, "features " + base, "PAIRLENS_LEXICON_DIR=" + (dir / "nowhere").string());
  CHECK(r.code == 2);
  const auto j = nlohmann::json::parse(last_json_line(r.err));
  CHECK(j["error"] == "LEXICON_MISSING");
  CHECK(j.contains("message"));
  fs::remove_all(dir);
}

TEST_CASE("error exit codes") {
  const auto dir = workspace("pl_cli_err");
  auto r = run(dir, "pair --out-dir " + dir.string());
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(last_json_line(r.err))["error"] == "IO_ERROR");

  r = run(dir, "pair --no-such-flag");
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(last_json_line(r.err))["error"] == "BAD_ARGUMENTS");

  r = run(dir, "pair --vvr-max 0.5 --out-dir " + dir.string());
  CHECK(r.code == 2);

  std::ofstream(dir / "broken.json") << "{not json";
  r = run(dir, "synth --config " + (dir / "broken.json").string() + " --out-dir " + dir.string());
  CHECK(r.code == 2);
  fs::remove_all(dir);
}

TEST_CASE("flags override the config file") {
  const auto dir = workspace("pl_cli_flags");
  const std::string base = "--config " + (dir / "config.json").string() + " --out-dir " + dir.string();
  REQUIRE(run(dir, "synth " + base).code == 0);
  REQUIRE(run(dir, "ingest " + base).code == 0);
  std::ofstream(dir / "tight.json") << R"({"seed": 7, "pairing": {"ld_pair_max": 30}})";
  const std::string tight = "--config " + (dir / "tight.json").string() + " --out-dir " + dir.string();
  REQUIRE(run(dir, "pair " + tight).code == 0);
  const auto from_config = testsupport::read_file(dir / "pairs.jsonl");
  REQUIRE(run(dir, "pair " + tight + " --ld-pair-max 70").code == 0);
  const auto from_flag = testsupport::read_file(dir / "pairs.jsonl");
  REQUIRE(run(dir, "pair " + base).code == 0);
  CHECK(from_flag == testsupport::read_file(dir / "pairs.jsonl"));
  CHECK(from_flag.size() > from_config.size());
  fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical") {
  const auto a = workspace("pl_cli_det_a");
  const auto b = workspace("pl_cli_det_b");
  for (const auto& dir : {a, b}) {
    const std::string base = "--config " + (a / "config.json").string() + " --out-dir " + dir.string();
    for (const char* cmd : {"synth", "ingest", "pair", "features", "analyze", "bins", "rank", "report"})
      REQUIRE(run(dir, std::string(cmd) + " " + base).code == 0);
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "stderr.txt" || name == "config.json") continue;
    INFO(name.string());
    CHECK(testsupport::read_file(entry.path()) == testsupport::read_file(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
