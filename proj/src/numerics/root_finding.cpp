#include "adhesion/numerics/root_finding.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "adhesion/errors.hpp"

namespace adhesion::numerics {
namespace {

double checked(const std::function<double(double)>& g, double x) {
  const double y = g(x);
  if (std::isnan(y)) {
    std::ostringstream os;
    os << "root function is NaN at x = " << x;
    fail(ErrorKind::domain, os.str());
  }
  return y;
}

}  // namespace

double find_root_monotone(const std::function<double(double)>& g, double lo, double hi,
                          const SolverConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    fail(ErrorKind::validation, "find_root_monotone requires finite lo <= hi");
  }

  double f_lo = checked(g, lo);
  if (f_lo == 0.0) {
    return lo;
  }
  double f_hi = checked(g, hi);
  if (f_hi == 0.0) {
    return hi;
  }
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]: g(lo) = " << f_lo
       << ", g(hi) = " << f_hi;
    fail(ErrorKind::bracket, os.str());
  }

  std::size_t evaluations = 2;
  // Illinois keeps scaled copies of the endpoint values for the secant.
  double w_lo = f_lo;
  double w_hi = f_hi;
  int retained_side = 0;  // -1: lo kept twice in a row, +1: hi kept
  int slow_steps = 0;

  auto best = [&] { return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi; };

  while (true) {
    const double width = hi - lo;
    const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
    if (width <= cfg.root_tol * scale) {
      return best();
    }
    if (evaluations >= cfg.max_evaluations) {
      throw NonConvergence("root finder exhausted its evaluation budget", best());
    }

    const double mid = lo + 0.5 * width;
    double x = mid;
    if (slow_steps < 2) {
      const double secant = hi - w_hi * width / (w_hi - w_lo);
      if (secant > lo && secant < hi) {
        x = secant;
      }
    } else {
      slow_steps = 0;
    }
    if (!(x > lo && x < hi)) {
      // Bracket at floating-point resolution.
      return best();
    }

    const double fx = checked(g, x);
    ++evaluations;
    if (fx == 0.0) {
      return x;
    }
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = w_lo = fx;
      if (retained_side == 1) {
        w_hi *= 0.5;
      }
      retained_side = 1;
    } else {
      hi = x;
      f_hi = w_hi = fx;
      if (retained_side == -1) {
        w_lo *= 0.5;
      }
      retained_side = -1;
    }
    slow_steps = (hi - lo) > 0.5 * width ? slow_steps + 1 : 0;
  }
}

}  // namespace adhesion::numerics
