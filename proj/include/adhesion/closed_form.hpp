#pragma once

#include <cstddef>

#include "adhesion/scenario.hpp"

/// Closed-form motion of a body accreting resting medium under power-law drag.
///
/// With v = m0 v0 / m the mass obeys dm/dt = phi(v) m / m0, which integrates to
///
///   alpha = 0:  m(t) = m0 exp(lambda t / m0)
///   alpha > 0:  m(t) = m0 (1 + lambda alpha v0^alpha t / m0)^(1/alpha)
///
/// and, as a function of travelled distance (dm/dx = phi(v) m^2 / (m0^2 v0)),
///
///   alpha = 1:  m(x) = m0 exp(lambda x / m0)
///   otherwise:  m(x) = m0 v0 (v0^(1-alpha) + lambda (alpha-1) x / m0)^(1/(alpha-1))
///
/// For alpha < 1 the second form has a pole at max_range(): the body never
/// travels further than that. Branches are selected by exact comparison on
/// alpha. All entry points reject tabulated drag laws with
/// ErrorKind::unsupported_law.
namespace adhesion {

double mass_at_time_closed(const Scenario& s, double t);

/// Requires v0 > 0 and, for alpha < 1, x < max_range(s).
double mass_at_position_closed(const Scenario& s, double x);

/// Inverse of mass_at_time_closed for m >= m0.
double time_for_mass_closed(const Scenario& s, double m);

/// v(t) = m0 v0 / m(t) for any mass-at-time evaluator.
template <class MassSource>
double velocity_at_time(const Scenario& s, double t, MassSource&& mass_at) {
  return s.momentum() / mass_at(t);
}

double velocity_at_time(const Scenario& s, double t);

/// Distance travelled by time t; 0 for a body at rest.
double position_at_time(const Scenario& s, double t);

/// Time at which the mass reaches 2 m0. Fails with no_solution when
/// alpha > 0 and v0 = 0 (the mass never changes).
double doubling_time(const Scenario& s);

/// Distance at which the mass reaches 2 m0.
double doubling_distance(const Scenario& s);

/// Total travel m0 v0^(1-alpha) / (lambda (1-alpha)) for alpha < 1,
/// +infinity otherwise.
double max_range(const Scenario& s);

/// Closed-form trajectory sampled uniformly over the horizon.
SolutionSeries closed_form_series(const Scenario& s, const Horizon& horizon,
                                  std::size_t sample_count);

}  // namespace adhesion
