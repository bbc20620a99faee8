#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "adhesion/scenario.hpp"

namespace adhesion {

struct SphereBody {
  double radius;        ///< m
  double initial_mass;  ///< kg
};

/// Resistive medium. A viscosity selects Stokes drag (lambda = 6 pi eta r);
/// without one the medium is air-like with the empirical quadratic
/// coefficient lambda = 0.87 r^2.
struct MediumSpec {
  std::optional<double> viscosity;  ///< Pa s
  std::string description;
};

/// 6 pi eta r, in kg/s.
double stokes_lambda(double eta, double radius);

/// 0.87 r^2, in kg/m. The constant absorbs the density of air, r in metres.
double quadratic_lambda(double radius);

/// Table-tennis ball: r = 2 cm, m0 = 2.7 g.
inline constexpr SphereBody kTableTennisBall{0.02, 0.0027};

/// Water at 20 C. Viscosity in Pa s, i.e. 1.005e-3 (some sources print
/// 1.005 with mismatched units; only 1.005e-3 reproduces lambda = 3.79e-4 kg/s).
inline constexpr double kWaterViscosity20C = 1.005e-3;

enum class Preset { table_tennis_water, table_tennis_air };

/// Parses "table_tennis_water" / "table_tennis_air"; validation error otherwise.
Preset parse_preset(std::string_view name);
const char* to_string(Preset preset) noexcept;

/// Power-law drag (alpha = 0 or 1) on a sphere in the given medium.
Scenario sphere_scenario(const SphereBody& body, const MediumSpec& medium, double v0,
                         std::string label = {});

/// table_tennis_water: Stokes drag in water, alpha = 0.
/// table_tennis_air: quadratic drag in air, alpha = 1.
/// Full-precision coefficients are used throughout.
Scenario preset(Preset which, double v0);

}  // namespace adhesion
