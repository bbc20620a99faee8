#include "adhesion/implicit_solver.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "adhesion/closed_form.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/numerics/ode.hpp"
#include "adhesion/numerics/quadrature.hpp"
#include "adhesion/numerics/root_finding.hpp"

namespace adhesion {

using numerics::SolverConfig;

namespace {

constexpr double kMaxBracket = 1152921504606846976.0;  // 2^60
constexpr double kRangeGuard = 1e-9;

double positive_phi(const Scenario& s, double v) {
  const double phi = phi_eval(s.drag(), v);
  if (!(phi > 0.0)) {
    std::ostringstream os;
    os << "phi vanishes at v = " << v << "; the implicit solution needs phi > 0";
    fail(ErrorKind::domain, os.str());
  }
  return phi;
}

void require_target(const Scenario& s, double m_target) {
  if (!(m_target >= s.m0()) || !std::isfinite(m_target)) {
    fail(ErrorKind::domain, "target mass must be finite and >= m0");
  }
}

void require_moving(const Scenario& s) {
  if (s.v0() == 0.0) {
    fail(ErrorKind::degenerate, "body at rest (v0 = 0): position quantities are undefined");
  }
}

// Integral of the time integrand over [from, to].
double time_integral(const Scenario& s, double from, double to, const SolverConfig& cfg) {
  const double p = s.momentum();
  auto integrand = [&](double m) { return 1.0 / (m * positive_phi(s, p / m)); };
  return s.m0() * numerics::integrate_1d(integrand, from, to, cfg).value;
}

double position_integral(const Scenario& s, double from, double to, const SolverConfig& cfg) {
  const double p = s.momentum();
  auto integrand = [&](double m) { return 1.0 / (m * m * positive_phi(s, p / m)); };
  return s.m0() * p * numerics::integrate_1d(integrand, from, to, cfg).value;
}

using Integral = double (*)(const Scenario&, double, double, const SolverConfig&);

// Smallest m with integral(m0, m) == target, for an increasing integral.
double invert(const Scenario& s, double target, Integral integral, const SolverConfig& cfg) {
  double lo = s.m0();
  double at_lo = 0.0;
  double hi = s.m0() * 2.0;
  double at_hi = integral(s, lo, hi, cfg);
  while (at_hi < target) {
    lo = hi;
    at_lo = at_hi;
    hi *= cfg.bracket_growth;
    if (hi > kMaxBracket * s.m0()) {
      std::ostringstream os;
      os << "mass bracket exceeded 2^60 m0 while inverting for " << target;
      throw NonConvergence(os.str(), lo);
    }
    at_hi = at_lo + integral(s, lo, hi, cfg);
  }
  const double base = lo;
  auto residual = [&](double m) { return at_lo + integral(s, base, m, cfg) - target; };
  return numerics::find_root_monotone(residual, lo, hi, cfg);
}

bool mass_is_frozen(const Scenario& s) {
  return s.v0() == 0.0 && phi_eval(s.drag(), 0.0) == 0.0;
}

}  // namespace

double time_for_mass(const Scenario& s, double m_target, const SolverConfig& cfg) {
  require_target(s, m_target);
  if (m_target == s.m0()) {
    return 0.0;
  }
  return time_integral(s, s.m0(), m_target, cfg);
}

double position_for_mass(const Scenario& s, double m_target, const SolverConfig& cfg) {
  require_moving(s);
  require_target(s, m_target);
  if (m_target == s.m0()) {
    return 0.0;
  }
  return position_integral(s, s.m0(), m_target, cfg);
}

double mass_at_time_numeric(const Scenario& s, double t, const SolverConfig& cfg) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorKind::domain, "t must be finite and >= 0");
  }
  if (t == 0.0 || mass_is_frozen(s)) {
    return s.m0();
  }
  return invert(s, t, &time_integral, cfg);
}

double mass_at_position_numeric(const Scenario& s, double x, const SolverConfig& cfg) {
  require_moving(s);
  if (!(x >= 0.0) || !std::isfinite(x)) {
    fail(ErrorKind::domain, "x must be finite and >= 0");
  }
  if (x == 0.0) {
    return s.m0();
  }
  if (as_power_law(s.drag()) != nullptr) {
    const double range = max_range(s);
    if (std::isfinite(range) && !(x < range * (1.0 - kRangeGuard))) {
      std::ostringstream os;
      os << "x = " << x << " is at or beyond the maximum range " << range;
      fail(ErrorKind::range_exceeded, os.str());
    }
  }
  return invert(s, x, &position_integral, cfg);
}

namespace {

SolutionSeries ode_in_time(const TrajectoryRequest& req, double t_end) {
  const Scenario& s = req.scenario;
  const double p = s.momentum();
  const double m0 = s.m0();
  // y = (m, x)
  auto rhs = [&](double, const numerics::State& y) -> numerics::State {
    const double v = p / y[0];
    return {phi_eval(s.drag(), v) * y[0] / m0, v};
  };
  const auto grid = uniform_grid(t_end, req.sample_count);
  const auto out = numerics::integrate_ode(rhs, {m0, 0.0}, 0.0, grid, req.cfg);

  SolutionSeries series{s, {}, Method::ode, req.cfg};
  series.states.reserve(out.samples.size());
  for (const auto& sample : out.samples) {
    series.states.push_back({sample.t, sample.y[1], sample.y[0], p / sample.y[0]});
  }
  return series;
}

SolutionSeries ode_in_position(const TrajectoryRequest& req, double x_end) {
  const Scenario& s = req.scenario;
  const double p = s.momentum();
  const double m0 = s.m0();
  // y = (m, t); dm/dx = phi(v) m^2 / (m0^2 v0), dt/dx = 1 / v
  auto rhs = [&](double, const numerics::State& y) -> numerics::State {
    const double v = p / y[0];
    return {phi_eval(s.drag(), v) * y[0] / (m0 * v), 1.0 / v};
  };
  const auto grid = uniform_grid(x_end, req.sample_count);
  const auto out = numerics::integrate_ode(rhs, {m0, 0.0}, 0.0, grid, req.cfg);

  SolutionSeries series{s, {}, Method::ode, req.cfg};
  series.states.reserve(out.samples.size());
  for (const auto& sample : out.samples) {
    series.states.push_back({sample.y[1], sample.t, sample.y[0], p / sample.y[0]});
  }
  return series;
}

SolutionSeries inversion_in_time(const TrajectoryRequest& req, double t_end) {
  const Scenario& s = req.scenario;
  SolutionSeries series{s, {}, Method::implicit_inversion, req.cfg};
  for (double t : uniform_grid(t_end, req.sample_count)) {
    const double m = mass_at_time_numeric(s, t, req.cfg);
    const double x = s.v0() > 0.0 ? position_for_mass(s, m, req.cfg) : 0.0;
    series.states.push_back({t, x, m, s.momentum() / m});
  }
  return series;
}

SolutionSeries inversion_in_position(const TrajectoryRequest& req, double x_end) {
  const Scenario& s = req.scenario;
  SolutionSeries series{s, {}, Method::implicit_inversion, req.cfg};
  for (double x : uniform_grid(x_end, req.sample_count)) {
    const double m = mass_at_position_numeric(s, x, req.cfg);
    series.states.push_back({time_for_mass(s, m, req.cfg), x, m, s.momentum() / m});
  }
  return series;
}

}  // namespace

SolutionSeries integrate_trajectory(const TrajectoryRequest& req) {
  req.cfg.validate();
  if (req.method == Method::closed_form) {
    auto series = closed_form_series(req.scenario, req.horizon, req.sample_count);
    series.tolerances = req.cfg;
    return series;
  }
  if (const auto* th = std::get_if<TimeHorizon>(&req.horizon)) {
    uniform_grid(th->t_end, req.sample_count);  // validates the request
    return req.method == Method::ode ? ode_in_time(req, th->t_end)
                                     : inversion_in_time(req, th->t_end);
  }
  const double x_end = std::get<PositionHorizon>(req.horizon).x_end;
  uniform_grid(x_end, req.sample_count);
  require_moving(req.scenario);
  if (as_power_law(req.scenario.drag()) != nullptr && !(x_end < max_range(req.scenario))) {
    fail(ErrorKind::range_exceeded, "x_end is not below the maximum range");
  }
  return req.method == Method::ode ? ode_in_position(req, x_end)
                                   : inversion_in_position(req, x_end);
}

double constant_mass_velocity(const Scenario& s, double t, const SolverConfig& cfg) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorKind::domain, "t must be finite and >= 0");
  }
  if (t == 0.0 || s.v0() == 0.0) {
    return s.v0();
  }
  const double m0 = s.m0();
  auto rhs = [&](double, const numerics::State& y) -> numerics::State {
    return {drag_force(s.drag(), y[0]) / m0};
  };
  const std::array<double, 1> at{t};
  return numerics::integrate_ode(rhs, {s.v0()}, 0.0, at, cfg).samples.back().y[0];
}

}  // namespace adhesion
