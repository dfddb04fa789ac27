#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace teststats {

/// Upper-tail p-value of Pearson's statistic against expected proportions.
inline double chi_square_p(const std::vector<std::size_t>& observed,
                           const std::vector<double>& proportions) {
  std::size_t n = 0;
  for (auto o : observed) n += o;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = proportions[i] * static_cast<double>(n);
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Kolmogorov-Smirnov statistic against U[lo, hi].
inline double ks_uniform_d(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = std::clamp((xs[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic p-value, Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2) with
/// the usual small-sample correction to lambda.
inline double ks_p(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace teststats
