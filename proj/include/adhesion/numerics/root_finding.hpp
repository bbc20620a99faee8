#pragma once

#include <functional>

#include "adhesion/numerics/solver_config.hpp"

namespace adhesion::numerics {

/// Root of a monotone function g on [lo, hi] where g(lo) and g(hi) differ in
/// sign (or one is zero).
///
/// Illinois false position, falling back to bisection whenever two steps in
/// a row fail to halve the bracket. g is only evaluated inside [lo, hi], the
/// bracket never grows, and iteration stops once its width is at most
/// root_tol relative to the larger endpoint magnitude. Returns the evaluated
/// point with the smallest |g|.
double find_root_monotone(const std::function<double(double)>& g, double lo, double hi,
                          const SolverConfig& cfg = SolverConfig{});

}  // namespace adhesion::numerics
