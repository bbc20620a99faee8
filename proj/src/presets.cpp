#include "adhesion/presets.hpp"

#include <cmath>
#include <numbers>

#include "adhesion/errors.hpp"

namespace adhesion {

double stokes_lambda(double eta, double radius) {
  if (!(eta > 0.0) || !(radius > 0.0) || !std::isfinite(eta) || !std::isfinite(radius)) {
    fail(ErrorKind::validation, "stokes_lambda requires eta > 0 and r > 0");
  }
  return 6.0 * std::numbers::pi * eta * radius;
}

double quadratic_lambda(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorKind::validation, "quadratic_lambda requires r > 0");
  }
  return 0.87 * radius * radius;
}

Preset parse_preset(std::string_view name) {
  if (name == "table_tennis_water") {
    return Preset::table_tennis_water;
  }
  if (name == "table_tennis_air") {
    return Preset::table_tennis_air;
  }
  fail(ErrorKind::validation,
       "unknown preset '" + std::string(name) +
           "' (expected table_tennis_water or table_tennis_air)");
}

const char* to_string(Preset preset) noexcept {
  switch (preset) {
    case Preset::table_tennis_water: return "table_tennis_water";
    case Preset::table_tennis_air: return "table_tennis_air";
  }
  return "unknown";
}

Scenario sphere_scenario(const SphereBody& body, const MediumSpec& medium, double v0,
                         std::string label) {
  if (!(body.radius > 0.0) || !(body.initial_mass > 0.0)) {
    fail(ErrorKind::validation, "sphere needs radius > 0 and initial mass > 0");
  }
  if (medium.viscosity) {
    return Scenario(body.initial_mass, v0,
                    power_law(stokes_lambda(*medium.viscosity, body.radius), 0.0),
                    std::move(label));
  }
  return Scenario(body.initial_mass, v0, power_law(quadratic_lambda(body.radius), 1.0),
                  std::move(label));
}

Scenario preset(Preset which, double v0) {
  switch (which) {
    case Preset::table_tennis_water:
      return sphere_scenario(kTableTennisBall, {kWaterViscosity20C, "water at 20 C"}, v0,
                             to_string(which));
    case Preset::table_tennis_air:
      return sphere_scenario(kTableTennisBall, {std::nullopt, "air"}, v0, to_string(which));
  }
  fail(ErrorKind::validation, "unknown preset");
}

}  // namespace adhesion
