#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gluepoll/errors.hpp"
#include "gluepoll/model.hpp"

namespace gluepoll {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Seeded random stream with hand-rolled samplers, so output is identical
// across standard libraries and platforms (std:: engines are pinned by the
// standard, std:: distributions are not). Streams are derived from one root
// seed by name, which keeps unrelated parts of a simulation on independent
// sequences.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  static RandomStream derive(std::uint64_t root, std::string_view name,
                             std::uint64_t index = 0) {
    std::uint64_t state = root ^ detail::fnv1a64(name) ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    detail::splitmix64(state);  // decorrelate nearby roots/indices
    return RandomStream(detail::splitmix64(state));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on (0,1); never returns 0 or 1.
  double uniform() {
    while (true) {
      const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Exponential(rate) conditioned on being < upper (inverse CDF).
  double truncated_exponential(double rate, double upper) {
    const double tail = -std::expm1(-rate * upper);  // P(X < upper)
    return -std::log1p(-uniform() * tail) / rate;
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang for shape >= 1, boosted by U^(1/shape) below 1.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  std::size_t discrete(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;  // guard against rounding in the final bin
  }

  double sample(const ServiceDistribution& d) {
    switch (d.family) {
      case DistFamily::exponential: return exponential(1.0 / d.mean);
      case DistFamily::deterministic: return d.mean;
      case DistFamily::gamma_shaped: return gamma(d.gamma_shape()) * d.gamma_scale();
      case DistFamily::two_point:
        return bernoulli(d.two_point_prob()) ? d.two_point_value() : 0.0;
    }
    return d.mean;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace gluepoll
