#pragma once

#include <string>
#include <variant>
#include <vector>

#include "adhesion/drag_law.hpp"
#include "adhesion/numerics/solver_config.hpp"

namespace adhesion {

/// A body of initial mass m0 launched at v0 into a medium at rest.
///
/// The medium velocity is identically zero, so accreted particles carry no
/// momentum and m * v = m0 * v0 along the whole motion.
class Scenario {
 public:
  /// Requires m0 > 0 and v0 >= 0.
  Scenario(double m0, double v0, DragLaw drag, std::string label = {});

  double m0() const noexcept { return m0_; }
  double v0() const noexcept { return v0_; }
  const DragLaw& drag() const noexcept { return drag_; }
  const std::string& label() const noexcept { return label_; }

  double momentum() const noexcept { return m0_ * v0_; }

  /// Same scenario with another launch speed.
  Scenario with_v0(double v0) const { return Scenario(m0_, v0, drag_, label_); }

 private:
  double m0_;
  double v0_;
  DragLaw drag_;
  std::string label_;
};

struct BodyState {
  double t;
  double x;
  double m;
  double v;
};

enum class Method { closed_form, implicit_inversion, ode };

const char* to_string(Method method) noexcept;

/// Sampled trajectory. t strictly increasing, m nondecreasing, v nonincreasing.
struct SolutionSeries {
  Scenario scenario;
  std::vector<BodyState> states;
  Method method;
  numerics::SolverConfig tolerances;
};

}  // namespace adhesion

namespace adhesion {

struct TimeHorizon {
  double t_end;
};

struct PositionHorizon {
  double x_end;
};

/// Sampling span of a trajectory: elapsed time or travelled distance.
using Horizon = std::variant<TimeHorizon, PositionHorizon>;

/// `count` uniformly spaced points on [0, end], both ends included exactly.
std::vector<double> uniform_grid(double end, std::size_t count);

}  // namespace adhesion
