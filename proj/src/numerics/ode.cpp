#include "adhesion/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adhesion/errors.hpp"

namespace adhesion::numerics {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// 5th minus 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, dopri5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

struct Dense {
  State r1, r2, r3, r4, r5;

  State at(double theta) const {
    State y(r1.size());
    const double one_m = 1.0 - theta;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = r1[i] + theta * (r2[i] + one_m * (r3[i] + theta * (r4[i] + one_m * r5[i])));
    }
    return y;
  }
};

}  // namespace

OdeResult integrate_ode(const OdeRhs& f, const State& y0, double t0,
                        std::span<const double> sample_times, const SolverConfig& cfg) {
  cfg.validate();
  if (y0.empty() || !all_finite(y0) || !std::isfinite(t0)) {
    fail(ErrorKind::validation, "integrate_ode needs a finite, non-empty initial state");
  }
  if (sample_times.empty()) {
    fail(ErrorKind::validation, "integrate_ode needs at least one sample time");
  }
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double ts = sample_times[i];
    if (!std::isfinite(ts) || ts < t0 || (i > 0 && ts < sample_times[i - 1])) {
      fail(ErrorKind::validation, "sample times must be finite, nondecreasing and >= t0");
    }
  }

  const std::size_t n = y0.size();
  const double t_end = sample_times.back();
  OdeResult result;
  result.samples.reserve(sample_times.size());
  std::size_t next = 0;

  double t = t0;
  State y = y0;
  auto emit_until = [&](double t_reached, auto&& state_at) {
    while (next < sample_times.size() && sample_times[next] <= t_reached) {
      result.samples.push_back({sample_times[next], state_at(sample_times[next])});
      ++next;
    }
  };
  emit_until(t, [&](double) { return y; });
  if (next == sample_times.size()) {
    return result;
  }

  auto eval = [&](double tt, const State& yy) {
    ++result.evaluations;
    State k = f(tt, yy);
    if (k.size() != n) {
      fail(ErrorKind::validation, "ODE right-hand side returned a state of the wrong size");
    }
    return k;
  };

  State k1 = eval(t, y);
  State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  double h = 1e-3 * (t_end - t0);
  bool last_rejected = false;

  while (t < t_end) {
    if (result.evaluations + 6 > cfg.max_evaluations) {
      std::ostringstream os;
      os << "ODE evaluation budget exhausted at t = " << t;
      throw NonConvergence(os.str(), t);
    }
    const bool final_step = t + h >= t_end;
    if (final_step) {
      h = t_end - t;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-300)) {
      if (final_step && !last_rejected) {
        // Remaining span is round-off; the current state is the end state.
        t = t_end;
        emit_until(t, [&](double) { return y; });
        break;
      }
      std::ostringstream os;
      os << "ODE step size underflow at t = " << t;
      throw Singularity(os.str(), t);
    }

    bool finite = all_finite(k1);
    auto stage = [&](State& k, double tc, auto&& combine) {
      if (!finite) {
        return;
      }
      for (std::size_t i = 0; i < n; ++i) {
        tmp[i] = y[i] + h * combine(i);
      }
      k = eval(t + tc * h, tmp);
      finite = all_finite(k);
    };
    stage(k2, c2, [&](std::size_t i) { return a21 * k1[i]; });
    stage(k3, c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    stage(k4, c4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    stage(k5, c5, [&](std::size_t i) {
      return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
    });
    stage(k6, 1.0, [&](std::size_t i) {
      return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      }
      finite = all_finite(y_new);
    }
    if (finite) {
      k7 = eval(t + h, y_new);
      finite = all_finite(k7);
    }

    double err = std::numeric_limits<double>::infinity();
    if (finite) {
      err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale =
            std::max(cfg.abs_tol, cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i])));
        err = std::max(err, std::abs(e) / scale);
      }
    }

    if (err > 1.0) {
      ++result.rejected_steps;
      const double factor =
          std::isfinite(err) ? std::max(kMinFactor, kSafety * std::pow(err, -0.2)) : 0.25;
      h *= factor;
      last_rejected = true;
      continue;
    }

    ++result.accepted_steps;
    const double t_new = final_step ? t_end : t + h;
    if (next < sample_times.size() && sample_times[next] < t_new) {
      Dense dense{y, State(n), State(n), State(n), State(n)};
      for (std::size_t i = 0; i < n; ++i) {
        const double dy = y_new[i] - y[i];
        const double bspl = h * k1[i] - dy;
        dense.r2[i] = dy;
        dense.r3[i] = bspl;
        dense.r4[i] = dy - h * k7[i] - bspl;
        dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * k7[i]);
      }
      const double t_old = t;
      const double h_used = h;
      emit_until(std::nextafter(t_new, t_old),
                 [&](double ts) { return dense.at((ts - t_old) / h_used); });
    }
    t = t_new;
    y = y_new;
    k1 = k7;
    emit_until(t, [&](double) { return y; });

    double factor = err == 0.0 ? kMaxFactor : kSafety * std::pow(err, -0.2);
    factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
    h *= factor;
    last_rejected = false;
  }
  return result;
}

}  // namespace adhesion::numerics
