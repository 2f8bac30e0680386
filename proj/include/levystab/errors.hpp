#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace levystab {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  Internal = 1,
  Config = 2,
  Domain = 3,
  Acceptance = 4,
  Divergence = 5,
};

/// Compact rendering of a number for diagnostics.
inline std::string diag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed or inconsistent configuration (unknown key, bad number, empty grid).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorCode::Config, message) {}
};

/// Argument outside the mathematical domain of an operation (poles, brackets,
/// step-size preconditions).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorCode::Domain, message) {}
};

/// A simulated chain produced a non-finite iterate.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t replica, std::size_t step, const std::string& context)
      : Error(ErrorCode::Divergence, "replica " + std::to_string(replica) +
                                         " diverged at step " + std::to_string(step) +
                                         (context.empty() ? "" : " (" + context + ")")),
        replica_(replica),
        step_(step) {}

  std::size_t replica() const noexcept { return replica_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t replica_;
  std::size_t step_;
};

}  // namespace levystab
