#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gluepoll/matrix.hpp"
#include "gluepoll/model.hpp"

namespace gluepoll {

// The embedded queue-length vector at cycle starts is a multitype branching
// process with immigration. This module computes its mean structure and the
// constants that drive the heavy-traffic laws: the per-station matrices and
// their cycle product, the Perron root xi(rho), the critical eigenvectors
// w_hat / u_hat^(i), delta, the variance constant A, the immigration vector g
// and the gamma shape alpha.

// Offspring mean of a type-j customer produced by one type-i customer over a
// single visit to station i:
//   f_{i,j} = (1 - e^{-nu_i G_i}) lambda_j E[B_i]          (j != i)
//   f_{i,i} = (1 - e^{-nu_i G_i}) rho_i + e^{-nu_i G_i}
inline double offspring_mean(const PollingConfig& config, int i, int j) {
  const double stick = config.stick_probability(i);
  if (i == j) return stick * config.station_load(i) + config.miss_probability(i);
  return stick * config.arrival_rate(j) * config.mean_service(i);
}

// Identity except for row i, which holds the offspring means f_{i,.}.
inline Matrix station_matrix(const PollingConfig& config, int i) {
  const int n = config.size();
  if (i < 0 || i >= n)
    throw DomainError("station index " + std::to_string(i) + " out of range [0," +
                      std::to_string(n) + ")");
  Matrix m = Matrix::identity(n);
  for (int j = 0; j < n; ++j) m(i, j) = offspring_mean(config, i, j);
  return m;
}

// Mean matrix over one full cycle: M = M_1 M_2 ... M_N in station order.
inline Matrix mean_matrix(const PollingConfig& config) {
  const int n = config.size();
  Matrix m = Matrix::identity(n);
  for (int i = 0; i < n; ++i) m = m * station_matrix(config, i);
  return m;
}

// Perron root by power iteration. Entries are nonnegative and, for all
// arrival rates positive, the cycle matrix is primitive, so the iteration
// converges from any positive start vector.
inline double spectral_radius(const Matrix& m, std::span<const double> start = {},
                              double tol = 1e-13, int max_iter = 100000) {
  const int n = m.size();
  if (n == 0) throw DomainError("spectral_radius of empty matrix");
  std::vector<double> x(start.begin(), start.end());
  if (x.empty()) x.assign(n, 1.0 / n);

  double lambda_prev = -1.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> y = m.apply(x);
    const double norm = l1_norm(y);
    if (norm == 0.0) return 0.0;  // nilpotent direction: radius 0 along the sweep
    const double lambda = norm / l1_norm(x);
    for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (std::abs(lambda - lambda_prev) <= tol) return lambda;
    lambda_prev = lambda;
  }
  throw ConvergenceError("power iteration did not converge in " +
                         std::to_string(max_iter) + " iterations");
}

// Right/left critical eigenvectors of the cycle matrix at rho = 1 in closed
// form, plus the per-starting-station left vectors u_hat^(i):
//   w_hat   = b / |b|
//   u_j^(i) = lambda_hat_j [ e^{-nu_j G_j}/(1 - e^{-nu_j G_j}) + (load sums) ]
// with u^(1) = u^(N+1) and delta = u^(i)^T b independent of i.
struct CriticalEigenSystem {
  std::vector<double> w_hat;                 // normalized right eigenvector
  std::vector<std::vector<double>> u_hat;    // u^(i), i = 0..N (wraps: u_hat[N] == u_hat[0])
  double delta;                              // u_hat^T b
};

inline CriticalEigenSystem left_right_eigenvectors(const LoadProfile& profile) {
  const int n = profile.size();
  const PollingConfig hat = profile.critical();

  CriticalEigenSystem es;
  es.w_hat.resize(n);
  const double b_total = hat.total_mean_service();
  for (int j = 0; j < n; ++j) es.w_hat[j] = hat.mean_service(j) / b_total;

  std::vector<double> rho_hat(n);
  for (int j = 0; j < n; ++j) rho_hat[j] = hat.station_load(j);
  // prefix[k] = sum of rho_hat[0..k)
  std::vector<double> prefix(n + 1, 0.0);
  for (int k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + rho_hat[k];

  es.u_hat.assign(n + 1, std::vector<double>(n, 0.0));
  for (int i = 0; i <= n; ++i) {      // cycle starting at station i (i == n wraps)
    for (int j = 0; j < n; ++j) {
      const double ratio = hat.miss_probability(j) / hat.stick_probability(j);
      double loads;
      if (i <= j)
        loads = (prefix[n] - prefix[j]) + prefix[i];  // tail from j plus wrapped head
      else
        loads = prefix[i] - prefix[j];                // stations j..i-1
      es.u_hat[i][j] = hat.arrival_rate(j) * (ratio + loads);
    }
  }

  std::vector<double> b(n);
  for (int j = 0; j < n; ++j) b[j] = hat.mean_service(j);
  es.delta = dot(es.u_hat[0], b);
  return es;
}

inline double spectral_radius_at(const LoadProfile& profile, double rho,
                                 double tol = 1e-13, int max_iter = 100000) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  return spectral_radius(mean_matrix(profile.materialize(rho)), es.w_hat, tol, max_iter);
}

// d xi / d rho at rho = 1 equals 1/delta; the central finite difference is
// kept as a numeric cross-check.
struct XiSlope {
  double analytic;           // 1/delta
  double finite_difference;  // (xi(1+h) - xi(1-h)) / 2h
  double step;
};

inline XiSlope xi_prime_at_1(const LoadProfile& profile, double h = 1e-5) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  const double xi_plus = spectral_radius(mean_matrix(profile.materialize(1.0 + h)), es.w_hat);
  const double xi_minus = spectral_radius(mean_matrix(profile.materialize(1.0 - h)), es.w_hat);
  return XiSlope{1.0 / es.delta, (xi_plus - xi_minus) / (2.0 * h), h};
}

// Second derivatives of the offspring generating functions at z = 1,
// K^(i)_{j,k}, evaluated at rho = 1 by the backward recursion
//   K^(i) = E[B_i^2] / (E[B_i]^2 (1-e^{-nu_i G_i})) (m_i - e^{-nu_i G_i} e_i)
//           (m_i - e^{-nu_i G_i} e_i)^T
//           + (1-e^{-nu_i G_i}) E[B_i] sum_{c>i} lambda_c K^(c)
// where m_i is row i of the cycle mean matrix.
inline std::vector<Matrix> second_moment_tensor(const LoadProfile& profile) {
  const int n = profile.size();
  const PollingConfig hat = profile.critical();
  const Matrix m = mean_matrix(hat);

  std::vector<Matrix> k(n, Matrix(n));
  for (int i = n - 1; i >= 0; --i) {
    const double miss = hat.miss_probability(i);
    const double stick = hat.stick_probability(i);
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = m(i, j) - (j == i ? miss : 0.0);

    const double front =
        hat.second_moment_service(i) / (hat.mean_service(i) * hat.mean_service(i) * stick);
    Matrix ki(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) ki(a, b) = front * row[a] * row[b];
    for (int c = i + 1; c < n; ++c) {
      const double w = stick * hat.mean_service(i) * hat.arrival_rate(c);
      if (w == 0.0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) ki(a, b) += w * k[c](a, b);
    }
    k[i] = std::move(ki);
  }
  return k;
}

// A = b^(2) / (2 delta |b| b^(1)).
inline double variance_constant(const LoadProfile& profile) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  return profile.b2() / (2.0 * es.delta * profile.total_mean_service() * profile.b1());
}

// Same constant assembled from the second-moment tensor:
// A = 1/2 sum_i v_hat_i (w_hat^T K^(i) w_hat) with v_hat = (|b|/delta) u_hat.
inline double variance_constant_from_tensor(const LoadProfile& profile) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  const std::vector<Matrix> k = second_moment_tensor(profile);
  const int n = profile.size();
  const double scale = profile.total_mean_service() / es.delta;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::vector<double> kw = k[i].apply(es.w_hat);
    acc += scale * es.u_hat[0][i] * dot(es.w_hat, kw);
  }
  return 0.5 * acc;
}

// Mean number of type-i immigrants per cycle: customers arriving in glue and
// switch-over periods (and their within-cycle descendants), which the
// branching part of the process does not account for.
inline std::vector<double> immigration_vector(const PollingConfig& config) {
  const int n = config.size();
  const Matrix m = mean_matrix(config);

  // prefix[k] = sum_{j<k} (G_j + E[S_j])
  std::vector<double> prefix(n + 1, 0.0);
  for (int j = 0; j < n; ++j)
    prefix[j + 1] = prefix[j] + config.glue(j) + config.mean_switchover(j);
  // switch_tail[k] = sum_{j>=k} E[S_j], glue_tail[k] = sum_{j>=k} G_j
  std::vector<double> switch_tail(n + 1, 0.0), glue_tail(n + 1, 0.0);
  for (int j = n - 1; j >= 0; --j) {
    switch_tail[j] = switch_tail[j + 1] + config.mean_switchover(j);
    glue_tail[j] = glue_tail[j + 1] + config.glue(j);
  }

  std::vector<double> g(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double seeded =
          prefix[k] * config.stick_probability(k) + config.glue(k);
      s += config.arrival_rate(k) * seeded * m(k, i);
    }
    s += config.arrival_rate(i) * (prefix[i] * config.miss_probability(i) +
                                   switch_tail[i] + glue_tail[i + 1]);
    g[i] = s;
  }
  for (int i = 0; i < n; ++i)
    if (!(g[i] > 0.0))
      throw DegenerateImmigrationError("immigration mean for station " +
                                       std::to_string(i + 1) + " is not positive");
  return g;
}

// alpha = 2 r delta b^(1) / b^(2), the gamma shape of the cycle-start law.
inline double gamma_shape_alpha(const LoadProfile& profile) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  return 2.0 * profile.overhead_per_cycle() * es.delta * profile.b1() / profile.b2();
}

// alpha recovered from first principles as g_hat^T w_hat / A.
inline double gamma_shape_from_immigration(const LoadProfile& profile) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  const std::vector<double> g = immigration_vector(profile.critical());
  return dot(g, es.w_hat) / variance_constant(profile);
}

// Exhaustiveness factor per station: fraction of station-j work present at a
// glue start that leaves during the cycle, (1 - e^{-nu_j G_j})(1 - rho_j).
inline std::vector<double> exhaustiveness(const PollingConfig& config) {
  std::vector<double> f(config.size());
  for (int j = 0; j < config.size(); ++j)
    f[j] = config.stick_probability(j) * (1.0 - config.station_load(j));
  return f;
}

// Limit of the normalizing series for a subcritical branching process:
// pi(xi) = 1 / (xi (1 - xi)).
inline double pi_limit(double xi) {
  if (!(xi > 0.0) || !(xi < 1.0))
    throw DomainError("pi limit requires xi in (0,1), got " + std::to_string(xi));
  return 1.0 / (xi * (1.0 - xi));
}

// (1 - rho) pi(xi(rho)) -> delta as rho -> 1: evaluated over a load grid as a
// convergence diagnostic.
struct PiConvergencePoint {
  double rho;
  double xi;
  double scaled_pi;      // (1 - rho) pi(xi(rho))
  double relative_gap;   // |scaled_pi - delta| / delta
};

inline std::vector<PiConvergencePoint> pi_convergence_diagnostic(
    const LoadProfile& profile, std::span<const double> rho_grid) {
  const CriticalEigenSystem es = left_right_eigenvectors(profile);
  std::vector<PiConvergencePoint> out;
  out.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    const double xi = spectral_radius(mean_matrix(profile.materialize(rho)), es.w_hat);
    const double scaled = (1.0 - rho) * pi_limit(xi);
    out.push_back({rho, xi, scaled, std::abs(scaled - es.delta) / es.delta});
  }
  return out;
}

// Everything the limit laws and the approximation need, evaluated once.
struct BranchingSummary {
  int n = 0;
  Matrix mean_matrix_hat;
  double xi_hat = 1.0;                       // Perron root at rho = 1 (diagnostic)
  std::vector<double> w_hat;
  std::vector<std::vector<double>> u_hat;    // u^(i), i = 0..n
  double delta = 0.0;
  double variance_const = 0.0;               // A
  double alpha = 0.0;                        // gamma shape at cycle starts
  std::vector<double> immigration_hat;       // g at rho = 1
  std::vector<double> exhaustiveness_hat;
  double b1 = 0.0, b2 = 0.0, b_total = 0.0, overhead = 0.0;

  // b^(2) / (2 b^(1) delta): the common prefactor of every limit law.
  double limit_scale() const { return b2 / (2.0 * b1 * delta); }
};

inline BranchingSummary analyze(const LoadProfile& profile) {
  BranchingSummary s;
  s.n = profile.size();
  const PollingConfig hat = profile.critical();
  s.mean_matrix_hat = mean_matrix(hat);
  CriticalEigenSystem es = left_right_eigenvectors(profile);
  s.xi_hat = spectral_radius(s.mean_matrix_hat, es.w_hat);
  s.w_hat = std::move(es.w_hat);
  s.u_hat = std::move(es.u_hat);
  s.delta = es.delta;
  s.variance_const = variance_constant(profile);
  s.alpha = gamma_shape_alpha(profile);
  s.immigration_hat = immigration_vector(hat);
  s.exhaustiveness_hat = exhaustiveness(hat);
  s.b1 = profile.b1();
  s.b2 = profile.b2();
  s.b_total = profile.total_mean_service();
  s.overhead = profile.overhead_per_cycle();
  return s;
}

}  // namespace gluepoll
