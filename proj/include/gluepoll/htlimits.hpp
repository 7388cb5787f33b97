#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gluepoll/branching.hpp"
#include "gluepoll/model.hpp"
#include "gluepoll/rng.hpp"

namespace gluepoll {

// Heavy-traffic limit laws of the scaled queue-length vectors. Every law is
// a coefficient statement: the scaled vector converges to
//
//     scale * (base + U * uniform) * Gamma(shape, 1)
//
// with scale = b^(2) / (2 b^(1) delta), U uniform on (0,1) (absent at
// embedded epochs) and an optional discrete mixture over components. The
// coefficient vectors are the primary objects; sampling is derived.

enum class CoordKind { total, queue, orbit };

struct CoordLabel {
  int station = 0;  // 0-based
  CoordKind kind = CoordKind::total;

  bool operator==(const CoordLabel&) const = default;
};

inline std::string to_string(const CoordLabel& c) {
  const char* prefix = c.kind == CoordKind::queue ? "q" : c.kind == CoordKind::orbit ? "o" : "t";
  return prefix + std::to_string(c.station + 1);
}

enum class EpochKind { glue_start, visit_start, switch_start, visit_arbitrary, arbitrary_time };

inline const char* to_string(EpochKind e) {
  switch (e) {
    case EpochKind::glue_start: return "glue_start";
    case EpochKind::visit_start: return "visit_start";
    case EpochKind::switch_start: return "switch_start";
    case EpochKind::visit_arbitrary: return "visit_arbitrary";
    case EpochKind::arbitrary_time: return "arbitrary_time";
  }
  return "unknown";
}

// Limit at an embedded epoch: scale * coeff * Gamma(shape, 1).
struct EmbeddedLimit {
  EpochKind epoch;
  int station;  // visited station, 0-based
  std::vector<CoordLabel> coords;
  std::vector<double> coeff;
  double gamma_shape;
  double scale;

  double coordinate_mean(int k) const { return scale * coeff[k] * gamma_shape; }
  double coordinate_variance(int k) const {
    const double sc = scale * coeff[k];
    return sc * sc * gamma_shape;
  }
};

struct LimitComponent {
  double probability;
  std::vector<double> base;
  std::vector<double> uniform;
};

// Mixture law: pick component C with probability p_C, then
// scale * (base_C + U * uniform_C) * Gamma(shape, 1).
struct GammaMixtureLimit {
  EpochKind epoch;
  int station;  // visited station for visit_arbitrary, -1 for arbitrary_time
  std::vector<CoordLabel> coords;
  std::vector<LimitComponent> components;
  double gamma_shape;
  double scale;

  double component_mean(int c, int k) const {
    const auto& cp = components[c];
    return scale * gamma_shape * (cp.base[k] + 0.5 * cp.uniform[k]);
  }
  double component_variance(int c, int k) const {
    const auto& cp = components[c];
    const double b = cp.base[k], d = cp.uniform[k];
    const double m2 = scale * scale * gamma_shape * (gamma_shape + 1.0) *
                      (b * b + b * d + d * d / 3.0);
    const double m = component_mean(c, k);
    return m2 - m * m;
  }
  double coordinate_mean(int k) const {
    double s = 0.0;
    for (std::size_t c = 0; c < components.size(); ++c)
      s += components[c].probability * component_mean(static_cast<int>(c), k);
    return s;
  }
  double coordinate_variance(int k) const {
    double m2 = 0.0;
    for (std::size_t c = 0; c < components.size(); ++c) {
      const auto& cp = components[c];
      const double b = cp.base[k], d = cp.uniform[k];
      m2 += cp.probability * scale * scale * gamma_shape * (gamma_shape + 1.0) *
            (b * b + b * d + d * d / 3.0);
    }
    const double m = coordinate_mean(k);
    return m2 - m * m;
  }
};

namespace detail {

inline void check_station(const BranchingSummary& s, int i) {
  if (i < 0 || i >= s.n)
    throw DomainError("station index " + std::to_string(i) + " out of range [0," +
                      std::to_string(s.n) + ")");
}

}  // namespace detail

// Scaled joint queue length at the start of glue periods of station i:
// coefficient (1/delta)(b2/2b1) u_hat^(i), shape alpha. Everyone is in orbit
// at this epoch, so coordinates are per-type totals.
inline EmbeddedLimit glue_start_limit(const LoadProfile& profile, const BranchingSummary& s,
                                      int i) {
  detail::check_station(s, i);
  EmbeddedLimit lim;
  lim.epoch = EpochKind::glue_start;
  lim.station = i;
  lim.gamma_shape = s.alpha;
  lim.scale = s.limit_scale();
  for (int j = 0; j < s.n; ++j) {
    lim.coords.push_back({j, CoordKind::total});
    lim.coeff.push_back(s.u_hat[i][j]);
  }
  (void)profile;
  return lim;
}

// At the start of the visit, station i's mass splits into queue and orbit by
// the stick probability; other stations are untouched.
inline EmbeddedLimit visit_start_limit(const LoadProfile& profile, const BranchingSummary& s,
                                       int i) {
  detail::check_station(s, i);
  const PollingConfig hat = profile.critical();
  EmbeddedLimit lim;
  lim.epoch = EpochKind::visit_start;
  lim.station = i;
  lim.gamma_shape = s.alpha;
  lim.scale = s.limit_scale();
  for (int j = 0; j < s.n; ++j) {
    if (j == i) {
      lim.coords.push_back({j, CoordKind::queue});
      lim.coeff.push_back(hat.stick_probability(i) * s.u_hat[i][i]);
      lim.coords.push_back({j, CoordKind::orbit});
      lim.coeff.push_back(hat.miss_probability(i) * s.u_hat[i][i]);
    } else {
      lim.coords.push_back({j, CoordKind::total});
      lim.coeff.push_back(s.u_hat[i][j]);
    }
  }
  return lim;
}

// At the start of the switch-over out of station i the glued customers have
// been served; each coordinate j gains the arrivals generated during that
// work, (1 - e^{-nu_i G_i}) u_i^(i) lambda_hat_j E[B_i].
inline EmbeddedLimit switch_start_limit(const LoadProfile& profile, const BranchingSummary& s,
                                        int i) {
  detail::check_station(s, i);
  const PollingConfig hat = profile.critical();
  const double served = hat.stick_probability(i) * s.u_hat[i][i];
  EmbeddedLimit lim;
  lim.epoch = EpochKind::switch_start;
  lim.station = i;
  lim.gamma_shape = s.alpha;
  lim.scale = s.limit_scale();
  for (int j = 0; j < s.n; ++j) {
    lim.coords.push_back({j, CoordKind::total});
    const double own = (j == i) ? hat.miss_probability(i) * s.u_hat[i][i] : s.u_hat[i][j];
    lim.coeff.push_back(own + served * hat.arrival_rate(j) * hat.mean_service(i));
  }
  return lim;
}

namespace detail {

// The station-i queue coefficient at a visit start collapses to lambda_hat_i:
// (1 - e^{-nu_i G_i}) u_i^(i) = lambda_hat_i. The uniform-motion vectors
// below rely on it, so verify rather than assume.
inline void check_kappa_identity(const PollingConfig& hat, const BranchingSummary& s, int i) {
  const double lhs = hat.stick_probability(i) * s.u_hat[i][i];
  const double rhs = hat.arrival_rate(i);
  if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
    throw DomainError("queue-coefficient identity violated at station " +
                      std::to_string(i + 1));
}

}  // namespace detail

// Length-biased law at an arbitrary instant inside a visit of station i:
// shape alpha + 1, with a uniform fraction U of the visit's work already
// done. The queue drains linearly while every orbit fills at rate
// lambda_hat_j rho_hat_i per unit of served queue mass.
inline GammaMixtureLimit visit_arbitrary_limit(const LoadProfile& profile,
                                               const BranchingSummary& s, int i) {
  detail::check_station(s, i);
  const PollingConfig hat = profile.critical();
  detail::check_kappa_identity(hat, s, i);
  const EmbeddedLimit start = visit_start_limit(profile, s, i);
  const double rho_i = hat.station_load(i);

  GammaMixtureLimit lim;
  lim.epoch = EpochKind::visit_arbitrary;
  lim.station = i;
  lim.coords = start.coords;
  lim.gamma_shape = s.alpha + 1.0;
  lim.scale = s.limit_scale();

  LimitComponent comp;
  comp.probability = 1.0;
  comp.base = start.coeff;
  comp.uniform.resize(start.coeff.size());
  for (std::size_t k = 0; k < start.coords.size(); ++k) {
    const CoordLabel c = start.coords[k];
    if (c.station == i && c.kind == CoordKind::queue)
      comp.uniform[k] = -hat.arrival_rate(i);
    else
      comp.uniform[k] = hat.arrival_rate(c.station) * rho_i;
  }
  lim.components.push_back(std::move(comp));
  return lim;
}

// Law at an arbitrary time point: in heavy traffic the server is in a visit
// with probability one, visiting station i with probability rho_hat_i.
// Coordinates are stacked (q1..qN, o1..oN).
inline GammaMixtureLimit arbitrary_time_limit(const LoadProfile& profile,
                                              const BranchingSummary& s) {
  const PollingConfig hat = profile.critical();
  GammaMixtureLimit lim;
  lim.epoch = EpochKind::arbitrary_time;
  lim.station = -1;
  lim.gamma_shape = s.alpha + 1.0;
  lim.scale = s.limit_scale();
  for (int j = 0; j < s.n; ++j) lim.coords.push_back({j, CoordKind::queue});
  for (int j = 0; j < s.n; ++j) lim.coords.push_back({j, CoordKind::orbit});

  for (int i = 0; i < s.n; ++i) {
    detail::check_kappa_identity(hat, s, i);
    LimitComponent comp;
    comp.probability = hat.station_load(i);
    comp.base.assign(2 * s.n, 0.0);
    comp.uniform.assign(2 * s.n, 0.0);
    comp.base[i] = hat.stick_probability(i) * s.u_hat[i][i];  // queue at the visited station
    comp.uniform[i] = -hat.arrival_rate(i);
    const double rho_i = hat.station_load(i);
    for (int j = 0; j < s.n; ++j) {
      comp.base[s.n + j] = (j == i) ? hat.miss_probability(i) * s.u_hat[i][i] : s.u_hat[i][j];
      comp.uniform[s.n + j] = hat.arrival_rate(j) * rho_i;
    }
    lim.components.push_back(std::move(comp));
  }
  return lim;
}

// Total scaled workload: (b2/2b1) Gamma(alpha, 1) over an arbitrary cycle,
// (b2/2b1) Gamma(alpha+1, 1) at an arbitrary instant (length biasing).
enum class WorkloadAt { cycle_start, arbitrary_time };

struct WorkloadLimit {
  double coefficient;  // b^(2) / (2 b^(1))
  double gamma_shape;

  double mean() const { return coefficient * gamma_shape; }
  double variance() const { return coefficient * coefficient * gamma_shape; }
};

inline WorkloadLimit workload_limit(const BranchingSummary& s, WorkloadAt at) {
  const double coeff = s.b2 / (2.0 * s.b1);
  return WorkloadLimit{coeff, at == WorkloadAt::cycle_start ? s.alpha : s.alpha + 1.0};
}

// Workload functional of a coefficient vector: sum_k E[B_{station(k)}] coeff_k
// times the law's scale. Identical across all the constructions above.
inline double workload_coefficient(const EmbeddedLimit& lim, const LoadProfile& profile) {
  const PollingConfig hat = profile.critical();
  double s = 0.0;
  for (std::size_t k = 0; k < lim.coords.size(); ++k)
    s += hat.mean_service(lim.coords[k].station) * lim.coeff[k];
  return lim.scale * s;
}

inline double workload_coefficient(const GammaMixtureLimit& lim, const LoadProfile& profile,
                                   int component, double u) {
  const PollingConfig hat = profile.critical();
  const auto& cp = lim.components[component];
  double s = 0.0;
  for (std::size_t k = 0; k < lim.coords.size(); ++k)
    s += hat.mean_service(lim.coords[k].station) * (cp.base[k] + u * cp.uniform[k]);
  return lim.scale * s;
}

// Draw n i.i.d. vectors from the mixture recipe. Deterministic for a fixed
// seed.
inline std::vector<std::vector<double>> sample(const GammaMixtureLimit& lim, std::uint64_t seed,
                                               int n) {
  if (n < 1) throw DomainError("sample count must be >= 1");
  RandomStream rng = RandomStream::derive(seed, "limit-sampler");
  std::vector<double> probs;
  probs.reserve(lim.components.size());
  for (const auto& c : lim.components) probs.push_back(c.probability);

  std::vector<std::vector<double>> out(n);
  for (int s = 0; s < n; ++s) {
    const std::size_t c = rng.discrete(probs);
    const double u = rng.uniform();
    const double g = rng.gamma(lim.gamma_shape);
    const auto& cp = lim.components[c];
    std::vector<double> v(lim.coords.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = lim.scale * (cp.base[k] + u * cp.uniform[k]) * g;
    out[s] = std::move(v);
  }
  return out;
}

}  // namespace gluepoll
