#include "adhesion/scenario.hpp"

#include <cmath>

#include "adhesion/errors.hpp"

namespace adhesion {

Scenario::Scenario(double m0, double v0, DragLaw drag, std::string label)
    : m0_(m0), v0_(v0), drag_(std::move(drag)), label_(std::move(label)) {
  if (!(m0_ > 0.0) || !std::isfinite(m0_)) {
    fail(ErrorKind::validation, "scenario requires m0 > 0");
  }
  if (!(v0_ >= 0.0) || !std::isfinite(v0_)) {
    fail(ErrorKind::validation, "scenario requires v0 >= 0");
  }
  if (const auto* p = as_power_law(drag_)) {
    // Re-validate: PowerLaw is an aggregate and may be built unchecked.
    power_law(p->lambda, p->alpha);
  }
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::closed_form: return "closed_form";
    case Method::implicit_inversion: return "implicit_inversion";
    case Method::ode: return "ode";
  }
  return "unknown";
}

}  // namespace adhesion

namespace adhesion {

std::vector<double> uniform_grid(double end, std::size_t count) {
  if (count < 2) {
    fail(ErrorKind::validation, "sample count must be at least 2");
  }
  if (!(end > 0.0) || !std::isfinite(end)) {
    fail(ErrorKind::validation, "horizon must be positive and finite");
  }
  std::vector<double> grid(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = end * (static_cast<double>(i) / n);
  }
  grid.back() = end;
  return grid;
}

}  // namespace adhesion
