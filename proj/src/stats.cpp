#include "pairlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pairlens/error.hpp"

namespace pairlens::stats {

namespace {

[[noreturn]] void degenerate(const std::string& what) { throw Error(ErrorKind::degenerate, "DEGENERATE_SAMPLE", what); }

Direction sign_direction(double v) {
  if (v > 0) return Direction::group1_larger;
  if (v < 0) return Direction::group1_smaller;
  return Direction::none;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

std::string to_string(Direction d) {
  switch (d) {
    case Direction::group1_larger: return "group1_larger";
    case Direction::group1_smaller: return "group1_smaller";
    case Direction::none: return "none";
  }
  return "none";
}

std::string to_string(TestKind t) {
  switch (t) {
    case TestKind::paired_t: return "paired_t";
    case TestKind::wilcoxon: return "wilcoxon";
    case TestKind::mcnemar: return "mcnemar";
    case TestKind::welch_t: return "welch_t";
    case TestKind::dagostino_k2: return "dagostino_k2";
  }
  return "";
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return std::clamp(incomplete_beta(0.5 * dof, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided(t, dof);
  return t >= 0 ? 1.0 - tail : tail;
}

double chi2_sf(double x, int dof) {
  if (x <= 0) return 1.0;
  if (dof == 1) return std::erfc(std::sqrt(0.5 * x));
  if (dof == 2) return std::exp(-0.5 * x);
  throw Error(ErrorKind::config, "UNSUPPORTED", "chi2_sf supports 1 or 2 degrees of freedom");
}

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

// ---------------------------------------------------------------------------

PairedT paired_t_test(std::span<const double> diffs) {
  if (diffs.size() < 2) degenerate("paired t-test needs at least 2 differences");
  if (std::all_of(diffs.begin(), diffs.end(), [&](double d) { return d == diffs[0]; }))
    degenerate("degenerate sample: zero variance");
  PairedT r;
  r.n = diffs.size();
  r.mean = mean(diffs);
  const double sd = std::sqrt(variance(diffs));
  r.t = r.mean / (sd / std::sqrt(static_cast<double>(r.n)));
  r.p = student_t_two_sided(r.t, static_cast<double>(r.n - 1));
  r.direction = sign_direction(r.mean);
  return r;
}

std::vector<double> mid_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

Wilcoxon wilcoxon_signed_rank(std::span<const double> diffs) {
  std::vector<double> nz;
  for (double d : diffs)
    if (d != 0.0) nz.push_back(d);
  if (nz.empty()) degenerate("wilcoxon: all differences are zero");

  std::vector<double> mags(nz.size());
  std::transform(nz.begin(), nz.end(), mags.begin(), [](double d) { return std::fabs(d); });
  const auto ranks = mid_ranks(mags);

  Wilcoxon r;
  r.n = nz.size();
  for (std::size_t i = 0; i < nz.size(); ++i) (nz[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
  r.w = std::min(r.w_plus, r.w_minus);
  const double signed_rb = (r.w_plus - r.w_minus) / (r.w_plus + r.w_minus);
  r.r_rb = std::fabs(signed_rb);
  r.direction = sign_direction(signed_rb);

  if (r.n <= kWilcoxonExactMax) {
    // Null distribution of the doubled positive-rank sum; mid-ranks are
    // multiples of 1/2 so doubling keeps every support point integral.
    std::vector<int> doubled(r.n);
    int total = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
      doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      total += doubled[i];
    }
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    int reach = 0;
    for (int d : doubled) {
      for (int s = reach; s >= 0; --s)
        if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + d)] += counts[static_cast<std::size_t>(s)];
      reach += d;
    }
    const int observed = static_cast<int>(std::lround(2.0 * r.w));
    double tail = 0.0;
    for (int s = 0; s <= observed; ++s) tail += counts[static_cast<std::size_t>(s)];
    r.p = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(r.n)));
    r.exact = true;
  } else {
    const double n = static_cast<double>(r.n);
    const double mu = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double z = std::max(std::fabs(r.w_plus - mu) - 0.5, 0.0) / std::sqrt(var);
    r.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  }
  return r;
}

double mcnemar_exact_p(std::int64_t b, std::int64_t c) {
  const std::int64_t n = b + c;
  const std::int64_t k = std::min(b, c);
  double tail = 0.0;
  if (n <= 60) {
    double coef = 1.0;
    for (std::int64_t i = 0; i <= k; ++i) {
      tail += coef;
      coef = coef * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    tail = std::ldexp(tail, -static_cast<int>(n));
  } else {
    const double ln2 = std::log(2.0);
    for (std::int64_t i = 0; i <= k; ++i) {
      const double lc = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                        std::lgamma(static_cast<double>(n - i) + 1);
      tail += std::exp(lc - static_cast<double>(n) * ln2);
    }
  }
  return std::min(1.0, 2.0 * tail);
}

McNemar mcnemar(std::int64_t b, std::int64_t c) {
  if (b < 0 || c < 0) throw Error(ErrorKind::validation, "BAD_COUNTS", "mcnemar counts must be non-negative");
  if (b + c == 0) degenerate("no discordant pairs");
  McNemar r;
  if (b + c < 25) {
    r.exact = true;
    r.statistic = static_cast<double>(std::min(b, c));
    r.p = mcnemar_exact_p(b, c);
  } else {
    const double diff = std::fabs(static_cast<double>(b - c)) - 1.0;
    r.statistic = diff * diff / static_cast<double>(b + c);
    r.p = chi2_sf(r.statistic, 1);
  }
  return r;
}

Normality dagostino_k2(std::span<const double> sample) {
  const double n = static_cast<double>(sample.size());
  if (sample.size() < 20) degenerate("dagostino_k2 needs n >= 20");
  const double m = mean(sample);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : sample) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) degenerate("dagostino_k2: zero variance");

  // Skewness transformation.
  const double b1 = m3 / std::pow(m2, 1.5);
  double y = b1 * std::sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)));
  const double beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / ((n - 2) * (n + 5) * (n + 7) * (n + 9));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  if (y == 0.0) y = 1.0;
  const double z_skew = delta * std::log(y / alpha + std::sqrt((y / alpha) * (y / alpha) + 1.0));

  // Kurtosis transformation (Anscombe & Glynn).
  const double b2 = m4 / (m2 * m2);
  const double e = 3.0 * (n - 1) / (n + 1);
  const double var_b2 = 24.0 * n * (n - 2) * (n - 3) / ((n + 1) * (n + 1) * (n + 3) * (n + 5));
  const double x = (b2 - e) / std::sqrt(var_b2);
  const double sqrt_beta1 =
      6.0 * (n * n - 5 * n + 2) / ((n + 7) * (n + 9)) * std::sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2) * (n - 3)));
  const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double term1 = 1.0 - 2.0 / (9.0 * a);
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  const double term2 = (denom < 0 ? -1.0 : 1.0) * std::cbrt((1.0 - 2.0 / a) / std::fabs(denom));
  const double z_kurt = (term1 - term2) / std::sqrt(2.0 / (9.0 * a));

  Normality r;
  r.z_skew = z_skew;
  r.z_kurt = z_kurt;
  r.k2 = z_skew * z_skew + z_kurt * z_kurt;
  r.p = chi2_sf(r.k2, 2);
  return r;
}

WelchT welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) degenerate("welch t-test needs at least 2 observations per group");
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = variance(a) / static_cast<double>(a.size());
  const double vb = variance(b) / static_cast<double>(b.size());
  WelchT r;
  r.direction = sign_direction(ma - mb);
  if (va + vb == 0.0) {
    r.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    r.p = ma == mb ? 1.0 : 0.0;
    r.dof = static_cast<double>(a.size() + b.size() - 2);
    return r;
  }
  r.t = (ma - mb) / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) /
          (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p = student_t_two_sided(r.t, r.dof);
  return r;
}

double bonferroni(double alpha, std::int64_t m) {
  if (m < 1) throw Error(ErrorKind::config, "BAD_CONFIG", "bonferroni needs m >= 1");
  return alpha / static_cast<double>(m);
}

// ---------------------------------------------------------------------------

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::validation, "SIZE_MISMATCH", "pearson: size mismatch");
  if (x.size() < 3) degenerate("pearson needs n >= 3");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) degenerate("correlation of a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  return pearson(rx, ry);
}

PowerLawFit powerlaw_fit(std::span<const double> sample, double x_min) {
  if (!(x_min > 0)) throw Error(ErrorKind::validation, "BAD_XMIN", "x_min must be positive");
  if (sample.empty()) degenerate("powerlaw_fit needs a non-empty sample");
  double log_sum = 0.0;
  for (double x : sample) {
    if (!(x >= x_min)) throw Error(ErrorKind::validation, "BELOW_XMIN", "sample value below x_min");
    log_sum += std::log(x / x_min);
  }
  if (log_sum <= 0.0) degenerate("powerlaw_fit diverges: every value equals x_min");
  PowerLawFit fit;
  fit.n = sample.size();
  fit.x_min = x_min;
  fit.alpha = 1.0 + static_cast<double>(fit.n) / log_sum;
  fit.sigma = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(fit.n));
  return fit;
}

}  // namespace pairlens::stats
