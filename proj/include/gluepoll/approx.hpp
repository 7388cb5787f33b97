#pragma once

#include <optional>
#include <vector>

#include "gluepoll/branching.hpp"
#include "gluepoll/htlimits.hpp"
#include "gluepoll/model.hpp"

namespace gluepoll {

// Interpolation between the light-traffic (E[L_i] -> 0) and heavy-traffic
// behaviour of the mean number of type-i customers:
//
//   E[L_i] ~= (c0 + rho c1) / (1 - rho),  c0 = 0.
//
// The c0 slot is kept for a future light-traffic derivative refinement.
struct ApproxCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
};

// c1 equals the heavy-traffic limit of (1 - rho) E[L_i]:
//   (b2 / 2 b1) ((alpha+1)/delta)
//       ( sum_j rho_hat_j (u_i^(j) + lambda_hat_i rho_hat_j / 2)
//         - lambda_hat_i rho_hat_i / 2 ).
inline double c1_coefficient(const LoadProfile& profile, const BranchingSummary& s, int i) {
  const PollingConfig hat = profile.critical();
  double inner = 0.0;
  for (int j = 0; j < s.n; ++j) {
    const double rho_j = hat.station_load(j);
    inner += rho_j * (s.u_hat[j][i] + 0.5 * hat.arrival_rate(i) * rho_j);
  }
  inner -= 0.5 * hat.arrival_rate(i) * hat.station_load(i);
  return s.limit_scale() * (s.alpha + 1.0) * inner;
}

inline std::vector<double> c1_coefficients(const LoadProfile& profile,
                                           const BranchingSummary& s) {
  std::vector<double> c(s.n);
  for (int i = 0; i < s.n; ++i) c[i] = c1_coefficient(profile, s, i);
  return c;
}

// The same constant read off the arbitrary-time limit law: mean of the
// (queue_i, orbit_i) coordinate pair.
inline double c1_from_limit(const GammaMixtureLimit& arbitrary, int i) {
  const int n = static_cast<int>(arbitrary.coords.size()) / 2;
  return arbitrary.coordinate_mean(i) + arbitrary.coordinate_mean(n + i);
}

inline double mean_customers_approx(const LoadProfile& profile, const BranchingSummary& s,
                                    int i, double rho) {
  if (!(rho < 1.0))
    throw UnstableLoadError("approximation requires rho < 1");
  if (!(rho > 0.0)) return 0.0;
  const ApproxCoefficients c{0.0, c1_coefficient(profile, s, i)};
  return (c.c0 + rho * c.c1) / (1.0 - rho);
}

struct ApproxRow {
  double rho;
  int station;  // 0-based
  double approx_mean;
  std::optional<double> sim_mean;
  std::optional<double> pct_error;
};

}  // namespace gluepoll
