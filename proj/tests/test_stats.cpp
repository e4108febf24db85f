#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "pairlens/error.hpp"
#include "pairlens/rng.hpp"
#include "pairlens/stats.hpp"
#include "pairlens/synthgen.hpp"
#include "oracles.hpp"
#include "world.hpp"

using namespace pairlens;
using namespace pairlens::stats;

namespace {

nlohmann::json oracle() {
  std::ifstream in(testsupport::fixture("stats_oracle.json"));
  return nlohmann::json::parse(in);
}

std::vector<double> as_vec(const nlohmann::json& j) { return j.get<std::vector<double>>(); }

}  // namespace

TEST_CASE("paired t") {
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1, 1, 1, 1}), Error);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{3}), Error);

  const std::vector<double> d = {2, -1, 3, 0, 1};
  const auto r = paired_t_test(d);
  // mean 1, sample sd sqrt(10/4), t = mean / (sd / sqrt(5)).
  CHECK(r.t == doctest::Approx(1.0 / (std::sqrt(2.5) / std::sqrt(5.0))).epsilon(1e-12));
  CHECK(r.direction == Direction::group1_larger);

  const auto o = oracle();
  for (const auto& c : o["paired_t"]) {
    const auto got = paired_t_test(as_vec(c["sample"]));
    CHECK(std::abs(got.t - c["t"].get<double>()) <= 1e-9);
    CHECK(std::abs(got.p - c["p"].get<double>()) <= 1e-9);
  }

  const auto sym = paired_t_test(std::vector<double>{-2, -1, 1, 2});
  CHECK(sym.p == doctest::Approx(1.0));
  CHECK(sym.direction == Direction::none);
}

TEST_CASE("student t against scipy") {
  for (const auto& c : oracle()["student_t"]) {
    const double t = c["t"], dof = c["dof"];
    CHECK(std::abs(student_t_cdf(t, dof) - c["cdf"].get<double>()) <= 1e-12);
    CHECK(std::abs(student_t_two_sided(t, dof) - c["two_sided"].get<double>()) <= 1e-12);
  }
}

TEST_CASE("wilcoxon examples") {
  const auto a = wilcoxon_signed_rank(std::vector<double>{1, 2, 3});
  CHECK(a.w_minus == 0.0);
  CHECK(a.p == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.r_rb == 1.0);
  CHECK(a.exact);

  const auto b = wilcoxon_signed_rank(std::vector<double>{1, -1});
  CHECK(b.w_plus == 1.5);
  CHECK(b.w_minus == 1.5);
  CHECK(b.r_rb == 0.0);
  CHECK(b.p == 1.0);

  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{0, 0, 0}), Error);
}

TEST_CASE("exact wilcoxon equals sign enumeration for n up to 12") {
  std::mt19937_64 g(42);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 1 + g() % 12;
    std::vector<double> d(n);
    // Small integer magnitudes force ties and zeros.
    const bool tied = rep % 2 == 0;
    for (auto& v : d) {
      v = tied ? static_cast<double>(static_cast<int>(g() % 9) - 4)
               : std::ldexp(static_cast<double>(g() >> 11), -53) * 4.0 - 1.5;
    }
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0; })) d[0] = 1;
    INFO(rep);
    const auto w = wilcoxon_signed_rank(d);
    CHECK(w.exact);
    CHECK(std::abs(w.p - oracles::wilcoxon_enumerated_p(d)) <= 1e-12);
    CHECK(w.r_rb >= 0.0);
    CHECK(w.r_rb <= 1.0);
    const bool one_sign = std::all_of(d.begin(), d.end(), [](double v) { return v >= 0; }) ||
                          std::all_of(d.begin(), d.end(), [](double v) { return v <= 0; });
    CHECK((w.r_rb == 1.0) == one_sign);
  }
}

TEST_CASE("wilcoxon normal approximation against scipy") {
  for (const auto& c : oracle()["wilcoxon_approx"]) {
    const auto w = wilcoxon_signed_rank(as_vec(c["sample"]));
    CHECK_FALSE(w.exact);
    CHECK(w.w == c["w"].get<double>());
    CHECK(std::abs(w.p - c["p"].get<double>()) <= 1e-12);
  }
}

TEST_CASE("wilcoxon normal approximation against a permutation oracle") {
  std::mt19937_64 g(2024);
  std::normal_distribution<double> nd(0.2, 1.0);
  std::vector<double> d(100);
  for (auto& v : d) v = nd(g);
  const auto w = wilcoxon_signed_rank(d);

  const auto ranks = mid_ranks([&] {
    std::vector<double> m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m[i] = std::fabs(d[i]);
    return m;
  }());
  const double mu = 100.0 * 101.0 / 4.0;
  const double observed = std::fabs(w.w_plus - mu);
  const int resamples = 200000;
  int extreme = 0;
  for (int r = 0; r < resamples; ++r) {
    double s = 0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (i % 64 == 0) bits = g();
      if (bits & 1) s += ranks[i];
      bits >>= 1;
    }
    if (std::fabs(s - mu) >= observed - 1e-9) ++extreme;
  }
  CHECK(std::abs(w.p - static_cast<double>(extreme) / resamples) <= 0.01);
}

TEST_CASE("mcnemar") {
  const auto a = mcnemar(10, 2);
  CHECK(a.exact);
  CHECK(a.p == doctest::Approx(158.0 / 4096.0).epsilon(1e-14));
  CHECK(mcnemar(7, 7).p == 1.0);
  const auto big = mcnemar(100, 50);
  CHECK_FALSE(big.exact);
  CHECK(big.statistic == doctest::Approx(49.0 * 49.0 / 150.0).epsilon(1e-14));
  CHECK(big.p < 0.001);
  CHECK(mcnemar(40, 40).statistic == doctest::Approx(1.0 / 80.0));
  CHECK_THROWS_AS(mcnemar(0, 0), Error);

  for (std::int64_t b = 0; b <= 40; ++b)
    for (std::int64_t c = 0; c <= 40; ++c)
      if (b + c > 0) CHECK(std::abs(mcnemar_exact_p(b, c) - oracles::binomial_two_sided(b, c)) <= 1e-12);

  for (std::int64_t b = 0; b <= 25; ++b) {
    const auto chi = mcnemar(b, 25 - b);
    CHECK_FALSE(chi.exact);
    CHECK(std::abs(chi.p - mcnemar_exact_p(b, 25 - b)) <= 0.005);
  }
}

TEST_CASE("dagostino k2") {
  CHECK_THROWS_AS(dagostino_k2(std::vector<double>(10, 1.0)), Error);
  for (const auto& c : oracle()["k2"]) {
    const auto r = dagostino_k2(as_vec(c["sample"]));
    CHECK(r.k2 == doctest::Approx(c["k2"].get<double>()).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(c["p"].get<double>()).epsilon(1e-7));
  }

  std::mt19937_64 g(11);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  std::vector<double> heavy(500);
  for (auto& v : heavy) v = ln(g);
  CHECK(dagostino_k2(heavy).p < 0.001);
}

TEST_CASE("dagostino k2 p-values are uniform under normality") {
  std::vector<double> ps;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(derive_seed(seed, "k2"));
    std::vector<double> x(200);
    for (auto& v : x) v = standard_normal(rng);
    ps.push_back(dagostino_k2(x).p);
  }
  std::sort(ps.begin(), ps.end());
  const double n = static_cast<double>(ps.size());
  double d = 0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    d = std::max({d, (i + 1) / n - ps[i], ps[i] - i / n});
  // Asymptotic Kolmogorov tail.
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double q = 0;
  for (int k = 1; k <= 100; ++k) q += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
  CHECK(q > 0.01);
}

TEST_CASE("welch t against scipy") {
  const auto c = oracle()["welch"];
  const auto r = welch_t_test(as_vec(c["a"]), as_vec(c["b"]));
  CHECK(r.t == doctest::Approx(c["t"].get<double>()).epsilon(1e-10));
  CHECK(std::abs(r.p - c["p"].get<double>()) <= 1e-10);
}

TEST_CASE("bonferroni") {
  CHECK(bonferroni(0.001, 22) == doctest::Approx(4.5455e-5).epsilon(1e-4));
  CHECK(bonferroni(0.001, 16) == 6.25e-5);
  CHECK(bonferroni(0.05, 1) == 0.05);
}

TEST_CASE("correlations") {
  std::vector<double> x, lin, cubic;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i * 0.5 - 3);
    lin.push_back(2 * x.back() + 1);
    cubic.push_back(std::pow(x.back(), 3));
  }
  CHECK(pearson(x, lin) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spearman(x, cubic) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pearson(x, cubic) < 1.0 - 1e-6);

  const auto c = oracle()["correlation"];
  const auto fx = as_vec(c["x"]);
  const auto fy = as_vec(c["y"]);
  CHECK(std::abs(pearson(fx, fy) - oracles::pearson_definition(fx, fy)) <= 1e-12);
  CHECK(std::abs(pearson(fx, fy) - c["pearson"].get<double>()) <= 1e-12);
  CHECK(std::abs(spearman(fx, fy) - c["spearman"].get<double>()) <= 1e-12);
  CHECK(std::abs(spearman(fx, fy) - oracles::pearson_definition(mid_ranks(fx), mid_ranks(fy))) <= 1e-12);
}

TEST_CASE("mid ranks") {
  const auto r = mid_ranks(std::vector<double>{10, 20, 10, 30});
  CHECK(r == std::vector<double>{1.5, 3, 1.5, 4});
}

TEST_CASE("power law fit") {
  const double e = std::exp(1.0);
  const auto f = powerlaw_fit(std::vector<double>{e, e, e}, 1.0);
  CHECK(f.alpha == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.sigma == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(powerlaw_fit(std::vector<double>{1, 1, 1}, 1.0), Error);

  Rng rng(derive_seed(1, "powerlaw"));
  std::vector<double> draws(50000);
  for (auto& v : draws) v = sample_powerlaw(rng, 1.84, 1000.0);
  CHECK(std::abs(powerlaw_fit(draws, 1000.0).alpha - 1.84) <= 0.02);

  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(derive_seed(seed, "powerlaw/coverage"));
    std::vector<double> s(2000);
    for (auto& v : s) v = sample_powerlaw(r, 2.5, 1.0);
    const auto fit = powerlaw_fit(s, 1.0);
    if (std::abs(fit.alpha - 2.5) <= 3 * fit.sigma) ++covered;
  }
  CHECK(covered >= 95);
}
