#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gluepoll {

enum class ViolationCode {
  EmptySystem,
  NonPositiveGlue,
  NonPositiveRetrialRate,
  NegativeArrivalRate,
  InvalidMoments,
  ZeroLoad,
};

inline const char* to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::EmptySystem: return "EmptySystem";
    case ViolationCode::NonPositiveGlue: return "NonPositiveGlue";
    case ViolationCode::NonPositiveRetrialRate: return "NonPositiveRetrialRate";
    case ViolationCode::NegativeArrivalRate: return "NegativeArrivalRate";
    case ViolationCode::InvalidMoments: return "InvalidMoments";
    case ViolationCode::ZeroLoad: return "ZeroLoad";
  }
  return "Unknown";
}

struct Violation {
  ViolationCode code;
  int station = -1;  // 0-based, -1 for system-level violations
  std::string message;
};

// Carries every violated invariant, not just the first one found.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& vs) {
    std::string out = "invalid configuration:";
    for (const auto& v : vs) {
      out += "\n  ";
      out += to_string(v.code);
      if (v.station >= 0) out += " (station " + std::to_string(v.station + 1) + ")";
      if (!v.message.empty()) out += ": " + v.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative routine failed to reach its stopping rule.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateImmigrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnstableLoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientCyclesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gluepoll
