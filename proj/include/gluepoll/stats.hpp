#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gluepoll/errors.hpp"

namespace gluepoll {

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1 denominator)
  long n = 0;
};

inline MeanVar mean_variance(std::span<const double> xs) {
  MeanVar mv;
  mv.n = static_cast<long>(xs.size());
  if (mv.n == 0) return mv;
  double s = 0.0;
  for (double x : xs) s += x;
  mv.mean = s / static_cast<double>(mv.n);
  if (mv.n < 2) return mv;
  double ss = 0.0;
  for (double x : xs) ss += (x - mv.mean) * (x - mv.mean);
  mv.variance = ss / static_cast<double>(mv.n - 1);
  return mv;
}

// Two-sided 95% Student t critical value. Tabulated through df = 30, then
// interpolated in 1/df down to the normal limit.
inline double t_quantile_975(int df) {
  static constexpr double table[31] = {
      0.0,    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
      2.074,  2.069,  2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return std::numeric_limits<double>::quiet_NaN();
  if (df <= 30) return table[df];
  const double z = 1.959964;
  // value at df=30 is 2.042; interpolate linearly in 1/df toward z
  const double t30 = 2.042;
  return z + (t30 - z) * (30.0 / static_cast<double>(df));
}

struct BatchStats {
  double mean = 0.0;
  double ci95 = std::numeric_limits<double>::quiet_NaN();  // half-width; NaN below 20 batches
  int batches = 0;
};

inline BatchStats batch_means_ci(std::span<const double> batch_means) {
  BatchStats bs;
  bs.batches = static_cast<int>(batch_means.size());
  const MeanVar mv = mean_variance(batch_means);
  bs.mean = mv.mean;
  if (bs.batches >= 20)
    bs.ci95 = t_quantile_975(bs.batches - 1) *
              std::sqrt(mv.variance / static_cast<double>(bs.batches));
  return bs;
}

inline double lag1_autocorrelation(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  const MeanVar mv = mean_variance(xs);
  if (mv.variance == 0.0) return 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) den += (xs[i] - mv.mean) * (xs[i] - mv.mean);
  for (std::size_t i = 0; i + 1 < n; ++i)
    num += (xs[i] - mv.mean) * (xs[i + 1] - mv.mean);
  return num / den;
}

// Regularized lower incomplete gamma P(a, x): series for x < a+1, continued
// fraction otherwise.
inline double lower_regularized_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("lower_regularized_gamma domain");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16)
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // modified Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

inline double gamma_cdf(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  return lower_regularized_gamma(shape, x / scale);
}

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
// Samples need not be pre-sorted.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Asymptotic Kolmogorov distribution with Stephens' finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace gluepoll
