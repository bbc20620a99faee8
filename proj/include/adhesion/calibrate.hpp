#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adhesion/drag_law.hpp"

namespace adhesion {

/// Whether mass observations are indexed by elapsed time or travelled distance.
enum class SampleAxis { time, position };

const char* to_string(SampleAxis axis) noexcept;

struct MassSample {
  double independent;  ///< t in s or x in m, per the SampleAxis
  double mass;         ///< kg
};

struct FitResult {
  double lambda;
  double alpha;
  double rms_residual;  ///< kg
  std::size_t iterations;
  bool converged;
  std::vector<std::string> warnings;
  /// Sum of squared residuals at the start and after every accepted step.
  std::vector<double> trace;
};

/// Observed minus predicted mass for each sample, with the closed-form
/// power-law model. Throws range_exceeded for position samples past the
/// model's finite range.
std::vector<double> residuals(SampleAxis axis, std::span<const MassSample> samples, double m0,
                              double v0, double lambda, double alpha);

enum class DifferenceScheme { forward, central };

/// Finite-difference Jacobian of the residuals with respect to
/// (log lambda, alpha); one row per sample.
std::vector<std::array<double, 2>> residual_jacobian(SampleAxis axis,
                                                     std::span<const MassSample> samples,
                                                     double m0, double v0, double lambda,
                                                     double alpha,
                                                     DifferenceScheme scheme = DifferenceScheme::forward);

/// Least-squares fit of (lambda, alpha) to mass observations.
///
/// Damped Gauss-Newton over (log lambda, alpha) with a forward-difference
/// Jacobian; alpha is held at the bound 0 when a step would make it negative.
/// Each accepted step never increases the sum of squares (up to 30 step
/// halvings). Stops after 200 iterations or when the relative step falls
/// below 1e-10.
///
/// Needs >= 3 samples strictly increasing in the independent variable, every
/// mass >= m0, m0 > 0 and v0 > 0. All-equal masses are unidentifiable.
FitResult fit_power_law(SampleAxis axis, std::span<const MassSample> samples, double m0,
                        double v0, PowerLaw init);

}  // namespace adhesion
