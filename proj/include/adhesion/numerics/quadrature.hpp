#pragma once

#include <cstddef>
#include <functional>

#include "adhesion/numerics/solver_config.hpp"

namespace adhesion::numerics {

struct QuadratureResult {
  double value;
  double error_estimate;
  std::size_t evaluations;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(rel_tol * |I|, abs_tol). Per-interval error is
/// |K15 - G7|, floored at 50 eps * integral of |f| for round-off.
///
/// Throws NonConvergence (carrying the current estimate) when the evaluation
/// budget runs out, and a domain error on a non-finite f value.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const SolverConfig& cfg = SolverConfig::quadrature());

}  // namespace adhesion::numerics
