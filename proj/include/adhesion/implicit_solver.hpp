#pragma once

#include <cstddef>

#include "adhesion/numerics/solver_config.hpp"
#include "adhesion/scenario.hpp"

/// Mass evolution for an arbitrary drag coefficient phi, by quadrature of the
/// implicit solutions
///
///   t = m0        * int_{m0}^{m} ds / (s   phi(m0 v0 / s))
///   x = m0^2 v0   * int_{m0}^{m} ds / (s^2 phi(m0 v0 / s))
///
/// and their monotone inversion, or by direct integration of the mass ODEs.
/// phi must stay positive on the velocities visited, v in [m0 v0 / m, v0].
namespace adhesion {

double time_for_mass(const Scenario& s, double m_target,
                     const numerics::SolverConfig& cfg = numerics::SolverConfig::quadrature());

/// Requires v0 > 0.
double position_for_mass(const Scenario& s, double m_target,
                         const numerics::SolverConfig& cfg = numerics::SolverConfig::quadrature());

/// Inverts time_for_mass. The upper bracket starts at 2 m0 and grows by
/// cfg.bracket_growth up to 2^60 m0 before giving up with NonConvergence.
double mass_at_time_numeric(const Scenario& s, double t,
                            const numerics::SolverConfig& cfg = numerics::SolverConfig::quadrature());

/// Inverts position_for_mass. For power laws with a finite range, positions
/// within a relative 1e-9 of max_range are refused with range_exceeded.
double mass_at_position_numeric(const Scenario& s, double x,
                                const numerics::SolverConfig& cfg = numerics::SolverConfig::quadrature());

struct TrajectoryRequest {
  Scenario scenario;
  Horizon horizon;
  std::size_t sample_count = 21;
  Method method = Method::ode;
  numerics::SolverConfig cfg = numerics::SolverConfig::ode();
};

/// Uniformly sampled trajectory over the horizon.
///
/// Method::ode integrates (m, x) in t, or (m, t) in x for a position
/// horizon; Method::implicit_inversion evaluates each sample by inversion.
/// Velocity is always reported as m0 v0 / m. Method::closed_form is
/// forwarded to closed_form_series.
SolutionSeries integrate_trajectory(const TrajectoryRequest& req);

/// v(t) of a body of constant mass m0 under drag force -phi(v) v, from the
/// ODE m0 dv/dt = -phi(v) v. With no accretion this should coincide with
/// m0 v0 / m(t) of the accreting body.
double constant_mass_velocity(const Scenario& s, double t,
                              const numerics::SolverConfig& cfg = numerics::SolverConfig::ode());

}  // namespace adhesion
