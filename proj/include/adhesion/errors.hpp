#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adhesion {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes.
enum class ErrorKind {
  validation,        ///< bad input (non-positive mass, unsorted samples, ...)
  domain,            ///< function evaluated outside its domain
  range_exceeded,    ///< position at or beyond the finite range for alpha < 1
  degenerate,        ///< body at rest, position quantities undefined
  unsupported_law,   ///< closed form requested for a tabulated drag law
  no_solution,       ///< requested quantity never occurs (e.g. mass never doubles)
  bracket,           ///< root finder called without a sign change
  non_convergence,   ///< iteration/evaluation budget exhausted
  singularity,       ///< ODE step size underflow
  unidentifiable,    ///< calibration data carries no information
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-convergence carrying the best available estimate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best_estimate)
      : Error(ErrorKind::non_convergence, what), best_(best_estimate) {}

  double best_estimate() const noexcept { return best_; }

 private:
  double best_;
};

/// ODE step underflow; `last_good_t` is the last accepted time.
class Singularity : public Error {
 public:
  Singularity(const std::string& what, double last_good_t)
      : Error(ErrorKind::singularity, what), last_t_(last_good_t) {}

  double last_good_t() const noexcept { return last_t_; }

 private:
  double last_t_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace adhesion
