#include <doctest.h>

#include <cmath>

#include "pairlens/error.hpp"
#include "pairlens/stats.hpp"
#include "pairlens/synthgen.hpp"
#include "world.hpp"

using namespace pairlens;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const StatReport* find(const std::vector<StatReport>& reports, const std::string& metric, stats::TestKind test) {
  for (const auto& r : reports)
    if (r.metric_name == metric && r.test == test) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("same seed gives a byte-identical world") {
  const auto cfg = testsupport::small_world(12, 3, 400);
  const auto a = temp_dir("pl_world_a");
  const auto b = temp_dir("pl_world_b");
  write_world(generate_world(cfg), a);
  write_world(generate_world(cfg), b);
  for (const char* f : {"posts.jsonl", "videos.jsonl", "ground_truth.json"}) {
    const auto x = testsupport::read_file(a / f);
    CHECK_FALSE(x.empty());
    CHECK(x == testsupport::read_file(b / f));
  }
  auto other = cfg;
  other.seed = 13;
  const auto c = temp_dir("pl_world_c");
  write_world(generate_world(other), c);
  CHECK(testsupport::read_file(a / "posts.jsonl") != testsupport::read_file(c / "posts.jsonl"));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST_CASE("config validation and round trip") {
  SynthConfig c;
  c.copy_title_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SynthConfig{};
  c.views_alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SynthConfig{};
  c.title_effect_weights = {{"words", 0.2}, {"sentiment", -0.1}};
  c.seed = 44;
  const auto back = SynthConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("world records follow the ingest schemas") {
  const auto world = generate_world(testsupport::small_world(3, 2, 300));
  CHECK(world.posts.size() == 600);
  for (const auto& p : world.posts) {
    for (const char* key : {"id", "subreddit", "title", "created_utc", "score", "url", "post_type"}) REQUIRE(p.contains(key));
    CHECK(p["score"].get<std::int64_t>() >= 0);
  }
  CHECK(world.ground_truth.contains("config"));
  CHECK(world.ground_truth.contains("subreddits"));
  // Most posts join: text posts and nothing else are dropped.
  const auto joined = testsupport::ingest_world(world);
  CHECK(joined.size() >= 540);
}

TEST_CASE("samplers") {
  Rng rng(derive_seed(5, "samplers"));
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = standard_normal(rng);
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);

  std::vector<double> draws(50000);
  for (auto& v : draws) v = sample_powerlaw(rng, 1.11, 100.0);
  CHECK(std::abs(stats::powerlaw_fit(draws, 100.0).alpha - 1.11) <= 0.02);
}

TEST_CASE("copy-title fraction") {
  const PostIndex index(testsupport::ingest_world(generate_world(testsupport::small_world(6, 20, 2500))));
  std::size_t copies = 0;
  for (std::size_t i = 0; i < index.size(); ++i) copies += index.ld_video(i) >= 95;
  const double frac = static_cast<double>(copies) / static_cast<double>(index.size());
  CHECK(std::abs(frac - 0.21) <= 0.01);
}

TEST_CASE("planted effects are recovered with the right sign") {
  auto cfg = testsupport::small_world(31, 20, 2500);
  cfg.title_effect_weights = {{"words", 0.15}, {"sentiment", -0.5}, {"numbers", 0.8}};
  const auto p = testsupport::run_pipeline(cfg);
  REQUIRE(p.scored.size() >= 5000);
  const auto reports = run_metric_battery(p.scored, p.table);

  const auto* words = find(reports, "words", stats::TestKind::wilcoxon);
  REQUIRE(words);
  CHECK(words->passes_bonferroni);
  CHECK(words->direction == stats::Direction::group1_larger);

  const auto* sentiment = find(reports, "vader_compound", stats::TestKind::wilcoxon);
  REQUIRE(sentiment);
  CHECK(sentiment->passes_bonferroni);
  CHECK(sentiment->direction == stats::Direction::group1_smaller);

  const auto* numbers = find(reports, "numbers", stats::TestKind::mcnemar);
  REQUIRE(numbers);
  CHECK(numbers->passes_bonferroni);
  CHECK(numbers->direction == stats::Direction::group1_larger);
}
