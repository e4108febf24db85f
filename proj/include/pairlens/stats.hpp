#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pairlens::stats {

enum class Direction { group1_larger, group1_smaller, none };
enum class TestKind { paired_t, wilcoxon, mcnemar, welch_t, dagostino_k2 };

std::string to_string(Direction d);
std::string to_string(TestKind t);

// ---------------------------------------------------------------------------
// Distribution functions

double normal_cdf(double z);
/// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double dof);
/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided(double t, double dof);
/// Upper tail of chi-square with 1 or 2 degrees of freedom.
double chi2_sf(double x, int dof);

// ---------------------------------------------------------------------------
// Tests

struct PairedT {
  double t = 0.0;
  double p = 1.0;
  double mean = 0.0;
  std::size_t n = 0;
  Direction direction = Direction::none;
};

/// One-sample t-test on paired differences (n-1 dof, two-sided).
/// Throws Error{degenerate} for n < 2 or zero variance.
PairedT paired_t_test(std::span<const double> diffs);

struct Wilcoxon {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double w = 0.0;       // min(W+, W-)
  double p = 1.0;
  double r_rb = 0.0;    // |(W+ - W-) / (W+ + W-)|
  std::size_t n = 0;    // nonzero differences
  bool exact = false;
  Direction direction = Direction::none;
};

inline constexpr std::size_t kWilcoxonExactMax = 25;

/// Signed-rank test. Zeros are dropped, tied magnitudes get mid-ranks. Exact
/// null distribution (conditional on the observed ranks) for n <= 25, normal
/// approximation with tie and continuity correction above that.
Wilcoxon wilcoxon_signed_rank(std::span<const double> diffs);

struct McNemar {
  double statistic = 0.0;  // chi-square, or min(b, c) on the exact branch
  double p = 1.0;
  bool exact = false;
};

/// b = pairs where only group 1 has the feature, c = only group 2.
McNemar mcnemar(std::int64_t b, std::int64_t c);

/// Two-sided exact binomial (p = 1/2) sign-test p for discordant counts.
double mcnemar_exact_p(std::int64_t b, std::int64_t c);

struct Normality {
  double k2 = 0.0;
  double p = 1.0;
  double z_skew = 0.0;
  double z_kurt = 0.0;
};

/// D'Agostino-Pearson K^2 omnibus test. Requires n >= 20.
Normality dagostino_k2(std::span<const double> sample);

struct WelchT {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
  Direction direction = Direction::none;
};

WelchT welch_t_test(std::span<const double> a, std::span<const double> b);

double bonferroni(double alpha, std::int64_t m);

// ---------------------------------------------------------------------------
// Correlation and distribution fitting

/// Ranks starting at 1, ties receive the average rank.
std::vector<double> mid_ranks(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct PowerLawFit {
  double alpha = 0.0;
  double sigma = 0.0;
  double x_min = 0.0;
  std::size_t n = 0;
};

/// Continuous maximum-likelihood exponent: alpha = 1 + n / sum(ln(x / x_min)),
/// standard error (alpha - 1) / sqrt(n).
PowerLawFit powerlaw_fit(std::span<const double> sample, double x_min);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // n-1 denominator

}  // namespace pairlens::stats
