#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adhesion/numerics/solver_config.hpp"

namespace adhesion::numerics {

using State = std::vector<double>;

/// Right-hand side dy/dt = f(t, y).
using OdeRhs = std::function<State(double t, const State& y)>;

struct OdeSample {
  double t;
  State y;
};

struct OdeResult {
  std::vector<OdeSample> samples;  ///< one per requested time, in order
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t evaluations = 0;
};

/// Integrates y' = f(t, y) from (t0, y0) with the Dormand-Prince 5(4) pair.
///
/// Local error per step is held below max(rel_tol * |y|, abs_tol) component
/// by component (the 5th-order solution is propagated). States at the
/// requested `sample_times` come from the 4th-order continuous extension;
/// the last requested time is the integration end and is stepped onto
/// exactly. The first step is 1e-3 of the span.
///
/// sample_times must be nondecreasing, >= t0 and finite. Throws Singularity
/// if the step size underflows and NonConvergence when the evaluation budget
/// (cfg.max_evaluations) is exhausted.
OdeResult integrate_ode(const OdeRhs& f, const State& y0, double t0,
                        std::span<const double> sample_times,
                        const SolverConfig& cfg = SolverConfig::ode());

}  // namespace adhesion::numerics
