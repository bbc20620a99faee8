#include "adhesion/closed_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "adhesion/errors.hpp"

namespace adhesion {
namespace {

const PowerLaw& require_power_law(const Scenario& s) {
  const auto* p = as_power_law(s.drag());
  if (p == nullptr) {
    fail(ErrorKind::unsupported_law,
         "closed form needs a power-law drag; use the implicit solver for tabulated laws");
  }
  return *p;
}

void require_moving(const Scenario& s) {
  if (s.v0() == 0.0) {
    fail(ErrorKind::degenerate, "body at rest (v0 = 0): position quantities are undefined");
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be finite and >= 0, got " << value;
    fail(ErrorKind::domain, os.str());
  }
}

// lambda * alpha * v0^alpha / m0, the rate in m(t) = m0 (1 + rate t)^(1/alpha).
double time_rate(const Scenario& s, const PowerLaw& p) {
  return p.lambda * p.alpha * std::pow(s.v0(), p.alpha) / s.m0();
}

}  // namespace

double mass_at_time_closed(const Scenario& s, double t) {
  const auto& p = require_power_law(s);
  require_nonnegative(t, "t");
  if (p.alpha == 0.0) {
    return s.m0() * std::exp(p.lambda * t / s.m0());
  }
  return s.m0() * std::exp(std::log1p(time_rate(s, p) * t) / p.alpha);
}

double max_range(const Scenario& s) {
  const auto& p = require_power_law(s);
  require_moving(s);
  if (p.alpha >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  return s.m0() * std::pow(s.v0(), 1.0 - p.alpha) / (p.lambda * (1.0 - p.alpha));
}

double mass_at_position_closed(const Scenario& s, double x) {
  const auto& p = require_power_law(s);
  require_moving(s);
  require_nonnegative(x, "x");
  if (p.alpha == 1.0) {
    return s.m0() * std::exp(p.lambda * x / s.m0());
  }
  if (p.alpha < 1.0) {
    const double range = max_range(s);
    if (!(x < range)) {
      std::ostringstream os;
      os << "x = " << x << " is not below the maximum range " << range;
      fail(ErrorKind::range_exceeded, os.str());
    }
  }
  // m0 v0 (v0^(1-a) + lambda (a-1) x / m0)^(1/(a-1)) == m0 (1 + u)^(1/(a-1))
  const double am1 = p.alpha - 1.0;
  const double u = p.lambda * am1 * x * std::pow(s.v0(), am1) / s.m0();
  if (!(u > -1.0)) {
    fail(ErrorKind::range_exceeded, "x at or beyond the maximum range");
  }
  return s.m0() * std::exp(std::log1p(u) / am1);
}

double time_for_mass_closed(const Scenario& s, double m) {
  const auto& p = require_power_law(s);
  if (!(m >= s.m0()) || !std::isfinite(m)) {
    fail(ErrorKind::domain, "target mass must be finite and >= m0");
  }
  const double log_ratio = std::log(m / s.m0());
  if (p.alpha == 0.0) {
    return s.m0() * log_ratio / p.lambda;
  }
  if (m == s.m0()) {
    return 0.0;
  }
  const double rate = time_rate(s, p);
  if (rate == 0.0) {
    fail(ErrorKind::no_solution, "mass is constant for a body at rest with alpha > 0");
  }
  return std::expm1(p.alpha * log_ratio) / rate;
}

double velocity_at_time(const Scenario& s, double t) {
  return velocity_at_time(s, t, [&s](double tau) { return mass_at_time_closed(s, tau); });
}

double position_at_time(const Scenario& s, double t) {
  const auto& p = require_power_law(s);
  require_nonnegative(t, "t");
  if (s.v0() == 0.0 || t == 0.0) {
    return 0.0;
  }
  if (p.alpha == 0.0) {
    return s.momentum() / p.lambda * -std::expm1(-p.lambda * t / s.m0());
  }
  if (p.alpha == 1.0) {
    return s.m0() / p.lambda * std::log1p(p.lambda * s.v0() * t / s.m0());
  }
  // x = v0 int_0^t (1 + c tau)^(-1/alpha) dtau
  const double rate = time_rate(s, p);
  const double q = (p.alpha - 1.0) / p.alpha;
  return s.v0() / (rate * q) * std::expm1(q * std::log1p(rate * t));
}

double doubling_time(const Scenario& s) {
  const auto& p = require_power_law(s);
  if (p.alpha == 0.0) {
    return s.m0() * std::log(2.0) / p.lambda;
  }
  if (s.v0() == 0.0) {
    fail(ErrorKind::no_solution, "mass never doubles: alpha > 0 and v0 = 0");
  }
  return s.m0() * std::expm1(p.alpha * std::log(2.0)) / (p.lambda * p.alpha * std::pow(s.v0(), p.alpha));
}

double doubling_distance(const Scenario& s) {
  const auto& p = require_power_law(s);
  require_moving(s);
  if (p.alpha == 1.0) {
    return s.m0() * std::log(2.0) / p.lambda;
  }
  const double am1 = p.alpha - 1.0;
  // m0 v0^(1-a) (2^(a-1) - 1) / (lambda (a - 1)), positive for every a >= 0
  return s.m0() * std::pow(s.v0(), -am1) * std::expm1(am1 * std::log(2.0)) / (p.lambda * am1);
}

SolutionSeries closed_form_series(const Scenario& s, const Horizon& horizon,
                                  std::size_t sample_count) {
  require_power_law(s);
  SolutionSeries series{s, {}, Method::closed_form, {}};
  series.states.reserve(sample_count);
  if (const auto* th = std::get_if<TimeHorizon>(&horizon)) {
    for (double t : uniform_grid(th->t_end, sample_count)) {
      const double m = mass_at_time_closed(s, t);
      series.states.push_back({t, position_at_time(s, t), m, s.momentum() / m});
    }
    return series;
  }
  const double x_end = std::get<PositionHorizon>(horizon).x_end;
  require_moving(s);
  if (!(x_end < max_range(s))) {
    fail(ErrorKind::range_exceeded, "x_end is not below the maximum range");
  }
  for (double x : uniform_grid(x_end, sample_count)) {
    const double m = mass_at_position_closed(s, x);
    series.states.push_back({time_for_mass_closed(s, m), x, m, s.momentum() / m});
  }
  return series;
}

}  // namespace adhesion
