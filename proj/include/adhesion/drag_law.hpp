#pragma once

#include <span>
#include <variant>
#include <vector>

namespace adhesion {

/// phi(v) = lambda * v^alpha. Units of lambda are kg s^(alpha-1) m^(-alpha).
///
/// alpha = 0 gives a drag force proportional to v (Stokes), alpha = 1 a force
/// proportional to v^2, because the force is -phi(v) * v.
struct PowerLaw {
  double lambda;
  double alpha;
};

/// phi(v) from samples, interpolated by a shape-preserving (monotone)
/// piecewise cubic. Each interpolated value lies between its neighbouring
/// samples, so phi stays positive. No extrapolation.
class Tabulated {
 public:
  struct Sample {
    double v;
    double phi;
  };

  /// Requires >= 2 samples, strictly increasing v >= 0 and phi > 0.
  explicit Tabulated(std::vector<Sample> samples);

  double operator()(double v) const;

  std::span<const Sample> samples() const noexcept { return samples_; }
  double v_min() const noexcept { return samples_.front().v; }
  double v_max() const noexcept { return samples_.back().v; }

 private:
  std::vector<Sample> samples_;
  std::vector<double> slopes_;
};

using DragLaw = std::variant<PowerLaw, Tabulated>;

/// Validated power-law constructor: lambda > 0, alpha >= 0.
DragLaw power_law(double lambda, double alpha);

/// Pointer to the power-law parameters, or nullptr for tabulated laws.
const PowerLaw* as_power_law(const DragLaw& law) noexcept;

/// phi(v) for v >= 0. 0^0 is taken as 1 so that alpha = 0 means phi = lambda.
double phi_eval(const DragLaw& law, double v);

/// F = -phi(|v|) * v for signed v.
double drag_force(const DragLaw& law, double v);

}  // namespace adhesion
