#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oracles {

// Full DP matrix with substitution cost 2.
inline std::size_t dp_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2)});
  return d[a.size()][b.size()];
}

// Integer half-to-even rounding of 100 * (total - dist) / total.
inline int dp_ratio(const std::u32string& a, const std::u32string& b) {
  const long total = static_cast<long>(a.size() + b.size());
  if (total == 0) return 100;
  const long num = 100 * (total - static_cast<long>(dp_distance(a, b)));
  long q = num / total;
  const long r = num % total;
  if (2 * r > total || (2 * r == total && q % 2 == 1)) ++q;
  return static_cast<int>(q);
}

// Enumerates all 2^n sign assignments of the observed mid-ranks.
inline double wilcoxon_enumerated_p(std::span<const double> diffs) {
  std::vector<double> nz;
  for (double d : diffs)
    if (d != 0) nz.push_back(d);
  const auto n = nz.size();
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(nz[i]);
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      below += mags[j] < mags[i];
      equal += mags[j] == mags[i];
    }
    ranks[i] = below + (equal + 1) / 2;
  }
  double wp = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (nz[i] > 0) wp += ranks[i];
  }
  const double w_obs = std::min(wp, total - wp);
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s += ranks[i];
    if (s <= w_obs + 1e-9) ++hits;
  }
  return std::min(1.0, 2.0 * static_cast<double>(hits) / static_cast<double>(1ull << n));
}

// Two-sided sign-test p from a Pascal row in long double.
inline double binomial_two_sided(std::int64_t b, std::int64_t c) {
  const std::int64_t n = b + c;
  std::vector<long double> row(static_cast<std::size_t>(n) + 1, 0.0L);
  row[0] = 1.0L;
  for (std::int64_t i = 1; i <= n; ++i)
    for (std::int64_t k = i; k >= 1; --k) row[k] += row[k - 1];
  long double tail = 0;
  for (std::int64_t k = 0; k <= std::min(b, c); ++k) tail += row[k];
  return static_cast<double>(std::min(1.0L, 2.0L * tail / std::pow(2.0L, static_cast<long double>(n))));
}

inline double pearson_definition(std::span<const double> x, std::span<const double> y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace oracles
