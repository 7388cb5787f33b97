#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gluepoll/errors.hpp"

namespace gluepoll {

// Two-moment distribution families with exact samplers. The analysis only
// ever touches (mean, second_moment); the simulator needs something it can
// actually draw from, and each family below is pinned down uniquely by its
// first two moments.
enum class DistFamily { exponential, deterministic, gamma_shaped, two_point };

inline const char* to_string(DistFamily f) {
  switch (f) {
    case DistFamily::exponential: return "exponential";
    case DistFamily::deterministic: return "deterministic";
    case DistFamily::gamma_shaped: return "gamma";
    case DistFamily::two_point: return "two_point";
  }
  return "unknown";
}

struct ServiceDistribution {
  DistFamily family = DistFamily::exponential;
  double mean = 1.0;
  double second_moment = 2.0;

  static ServiceDistribution exponential(double mean) {
    return {DistFamily::exponential, mean, 2.0 * mean * mean};
  }
  static ServiceDistribution deterministic(double mean) {
    return {DistFamily::deterministic, mean, mean * mean};
  }
  // scv = squared coefficient of variation, Var/mean^2.
  static ServiceDistribution gamma_shaped(double mean, double scv) {
    return {DistFamily::gamma_shaped, mean, mean * mean * (1.0 + scv)};
  }
  // Mass at 0 with probability 1-p and at mean/p with probability p,
  // p = 1/(1+scv). Spans every scv > 0.
  static ServiceDistribution two_point(double mean, double scv) {
    return {DistFamily::two_point, mean, mean * mean * (1.0 + scv)};
  }
  static ServiceDistribution from_scv(DistFamily family, double mean, double scv) {
    return {family, mean, mean * mean * (1.0 + scv)};
  }

  double variance() const { return second_moment - mean * mean; }
  double scv() const { return second_moment / (mean * mean) - 1.0; }

  // Sampler parameters (valid only after validation).
  double gamma_shape() const { return 1.0 / scv(); }
  double gamma_scale() const { return mean * scv(); }
  double two_point_prob() const { return 1.0 / (1.0 + scv()); }
  double two_point_value() const { return mean * (1.0 + scv()); }
};

struct StationParams {
  double arrival_rate = 0.0;        // Poisson rate of new customers
  ServiceDistribution service;      // per-customer service time
  ServiceDistribution switchover;   // travel time from this station to the next
  double glue_duration = 1.0;       // deterministic, strictly positive
  double retrial_rate = 1.0;        // exponential retrial rate of orbiting customers
};

// Full parameterization of the N-station cyclic system. Derived quantities
// are pure functions of the fields and recomputed on demand.
struct PollingConfig {
  std::vector<StationParams> stations;

  int size() const { return static_cast<int>(stations.size()); }

  double mean_service(int i) const { return stations[i].service.mean; }
  double second_moment_service(int i) const { return stations[i].service.second_moment; }
  double mean_switchover(int i) const { return stations[i].switchover.mean; }
  double arrival_rate(int i) const { return stations[i].arrival_rate; }
  double glue(int i) const { return stations[i].glue_duration; }
  double retrial_rate(int i) const { return stations[i].retrial_rate; }

  // Probability that an orbiting customer reaches the queue during one glue
  // period: 1 - exp(-nu_i G_i).
  double stick_probability(int i) const {
    return -std::expm1(-stations[i].retrial_rate * stations[i].glue_duration);
  }
  double miss_probability(int i) const {
    return std::exp(-stations[i].retrial_rate * stations[i].glue_duration);
  }

  double station_load(int i) const { return arrival_rate(i) * mean_service(i); }

  double total_load() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += station_load(i);
    return s;
  }

  double total_arrival_rate() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += arrival_rate(i);
    return s;
  }

  // Arrival-weighted service moments b^(1), b^(2).
  double b1() const {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < size(); ++i) {
      num += arrival_rate(i) * mean_service(i);
      den += arrival_rate(i);
    }
    return num / den;
  }
  double b2() const {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < size(); ++i) {
      num += arrival_rate(i) * second_moment_service(i);
      den += arrival_rate(i);
    }
    return num / den;
  }

  // |b| = sum of mean service times.
  double total_mean_service() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += mean_service(i);
    return s;
  }

  // r = sum of switch-over means and glue durations: the per-cycle
  // non-serving time.
  double overhead_per_cycle() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += mean_switchover(i) + glue(i);
    return s;
  }
};

namespace detail {

inline void check_moments(const ServiceDistribution& d, int station, const char* role,
                          std::vector<Violation>& out) {
  const double eps = 1e-9;
  const std::string what = std::string(role) + " distribution";
  if (!(d.mean > 0.0) || !std::isfinite(d.mean)) {
    out.push_back({ViolationCode::InvalidMoments, station, what + " mean must be > 0"});
    return;
  }
  if (!std::isfinite(d.second_moment) || d.second_moment < d.mean * d.mean * (1.0 - eps)) {
    out.push_back(
        {ViolationCode::InvalidMoments, station, what + " second moment below mean^2"});
    return;
  }
  const double scv = d.scv();
  switch (d.family) {
    case DistFamily::exponential:
      if (std::abs(scv - 1.0) > eps)
        out.push_back({ViolationCode::InvalidMoments, station,
                       what + " exponential requires second_moment = 2 mean^2"});
      break;
    case DistFamily::deterministic:
      if (std::abs(scv) > eps)
        out.push_back({ViolationCode::InvalidMoments, station,
                       what + " deterministic requires second_moment = mean^2"});
      break;
    case DistFamily::gamma_shaped:
    case DistFamily::two_point:
      // Moment equality is reserved for the deterministic family.
      if (scv <= eps)
        out.push_back({ViolationCode::InvalidMoments, station,
                       what + " needs scv > 0 (use deterministic for scv = 0)"});
      break;
  }
}

}  // namespace detail

inline std::vector<Violation> check(const PollingConfig& config) {
  std::vector<Violation> out;
  if (config.stations.empty()) {
    out.push_back({ViolationCode::EmptySystem, -1, "no stations"});
    return out;
  }
  for (int i = 0; i < config.size(); ++i) {
    const StationParams& st = config.stations[i];
    if (!(st.glue_duration > 0.0) || !std::isfinite(st.glue_duration))
      out.push_back({ViolationCode::NonPositiveGlue, i, "glue duration must be > 0"});
    if (!(st.retrial_rate > 0.0) || !std::isfinite(st.retrial_rate))
      out.push_back({ViolationCode::NonPositiveRetrialRate, i, "retrial rate must be > 0"});
    if (st.arrival_rate < 0.0 || !std::isfinite(st.arrival_rate))
      out.push_back({ViolationCode::NegativeArrivalRate, i, "arrival rate must be >= 0"});
    detail::check_moments(st.service, i, "service", out);
    detail::check_moments(st.switchover, i, "switchover", out);
  }
  return out;
}

struct ValidatedConfig {
  PollingConfig config;
  double rho;       // total load
  double b1;
  double b2;
  double b_total;   // |b|
  double overhead;  // r
  bool critical;    // rho at (or beyond) the stability boundary
};

inline ValidatedConfig validate(const PollingConfig& config) {
  auto violations = check(config);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  const double rho = config.total_load();
  return ValidatedConfig{config,
                         rho,
                         config.b1(),
                         config.b2(),
                         config.total_mean_service(),
                         config.overhead_per_cycle(),
                         rho >= 1.0 - 1e-12};
}

// A config with its arrival rates factored as lambda_i = rho * lambda_hat_i.
// Keeps the original rates so materializing at the profile's own load
// reproduces them bit-for-bit.
struct LoadProfile {
  std::vector<StationParams> stations;  // arrival_rate holds the original lambda_i
  double base_load = 1.0;               // load of `stations` as stored
  double target_load = 1.0;

  int size() const { return static_cast<int>(stations.size()); }

  double normalized_rate(int i) const { return stations[i].arrival_rate / base_load; }

  std::vector<double> normalized_rates() const {
    std::vector<double> v(stations.size());
    for (int i = 0; i < size(); ++i) v[i] = normalized_rate(i);
    return v;
  }

  // lambda_hat_i E[B_i]
  double normalized_station_load(int i) const {
    return normalized_rate(i) * stations[i].service.mean;
  }

  PollingConfig materialize(double rho) const {
    const double factor = rho / base_load;
    PollingConfig c;
    c.stations = stations;
    for (auto& st : c.stations) st.arrival_rate *= factor;
    return c;
  }
  PollingConfig materialize() const { return materialize(target_load); }

  // Everything evaluated at the stability boundary rho = 1.
  PollingConfig critical() const { return materialize(1.0); }

  double b1() const { return critical().b1(); }
  double b2() const { return critical().b2(); }
  double total_mean_service() const { return critical().total_mean_service(); }
  double overhead_per_cycle() const { return critical().overhead_per_cycle(); }
};

inline LoadProfile normalize(const PollingConfig& config) {
  auto violations = check(config);
  const double rho = config.stations.empty() ? 0.0 : config.total_load();
  if (!(rho > 0.0))
    violations.push_back({ViolationCode::ZeroLoad, -1, "all arrival rates are zero"});
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return LoadProfile{config.stations, rho, rho <= 1.0 ? rho : 1.0};
}

}  // namespace gluepoll
