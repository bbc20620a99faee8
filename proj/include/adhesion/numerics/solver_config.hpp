#pragma once

#include <cstddef>

namespace adhesion::numerics {

/// Tolerances and budgets shared by the numerical kernels.
struct SolverConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_evaluations = 1'000'000;
  double root_tol = 1e-12;        ///< relative bracket width at termination
  double bracket_growth = 2.0;    ///< upper-bracket expansion factor

  /// Quadrature defaults (rel_tol 1e-10).
  static SolverConfig quadrature() { return {}; }

  /// ODE defaults (rel_tol 1e-9).
  static SolverConfig ode() {
    SolverConfig c;
    c.rel_tol = 1e-9;
    return c;
  }

  /// Throws a validation error unless every tolerance and budget is positive.
  void validate() const;
};

}  // namespace adhesion::numerics
