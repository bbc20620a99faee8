#include "adhesion/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adhesion/closed_form.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/scenario.hpp"

namespace adhesion {
namespace {

constexpr std::size_t kMaxIterations = 200;
constexpr int kMaxHalvings = 30;
constexpr double kStepTol = 1e-10;
constexpr double kStationaryStepTol = 1e-8;
constexpr double kGradientTol = 1e-6;
constexpr double kZeroAlpha = 1e-6;
constexpr double kMaxLogLambdaStep = 2.0;
constexpr double kMaxAlphaStep = 1.0;
constexpr int kMaxStartShrinks = 20;

struct Params {
  double log_lambda;
  double alpha;
};

double predicted(SampleAxis axis, const Scenario& s, double at) {
  return axis == SampleAxis::time ? mass_at_time_closed(s, at) : mass_at_position_closed(s, at);
}

std::vector<double> predictions_at(SampleAxis axis, std::span<const MassSample> samples, double m0,
                                   double v0, Params p) {
  const Scenario s(m0, v0, PowerLaw{std::exp(p.log_lambda), p.alpha});
  std::vector<double> m;
  m.reserve(samples.size());
  for (const auto& sample : samples) {
    m.push_back(predicted(axis, s, sample.independent));
  }
  return m;
}

std::vector<double> residuals_at(SampleAxis axis, std::span<const MassSample> samples, double m0,
                                 double v0, Params p) {
  auto r = predictions_at(axis, samples, m0, v0, p);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = samples[i].mass - r[i];
  }
  return r;
}

double sum_of_squares(const std::vector<double>& r) {
  double ssr = 0.0;
  for (double v : r) {
    ssr += v * v;
  }
  return std::isfinite(ssr) ? ssr : std::numeric_limits<double>::infinity();
}

// Sum of squares at p, or infinity where the model is undefined there.
double objective(SampleAxis axis, std::span<const MassSample> samples, double m0, double v0,
                 Params p, std::vector<double>* r_out = nullptr) {
  try {
    auto r = residuals_at(axis, samples, m0, v0, p);
    const double ssr = sum_of_squares(r);
    if (r_out != nullptr) {
      *r_out = std::move(r);
    }
    return ssr;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::range_exceeded || e.kind() == ErrorKind::validation) {
      return std::numeric_limits<double>::infinity();
    }
    throw;
  }
}

std::vector<std::array<double, 2>> jacobian_at(SampleAxis axis, std::span<const MassSample> samples,
                                               double m0, double v0, Params p,
                                               DifferenceScheme scheme) {
  const std::size_t n = samples.size();
  std::vector<std::array<double, 2>> jac(n);
  // Differencing predictions rather than residuals keeps the model change from
  // being absorbed by large observed masses.
  const auto base = predictions_at(axis, samples, m0, v0, p);
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const double cube_root_eps = std::cbrt(std::numeric_limits<double>::epsilon());

  for (int k = 0; k < 2; ++k) {
    double& coord = k == 0 ? p.log_lambda : p.alpha;
    const double centre = coord;
    const double h = (scheme == DifferenceScheme::forward ? root_eps : cube_root_eps) *
                     std::max(1.0, std::abs(centre));
    auto shifted = [&](double delta) {
      coord = centre + delta;
      auto r = predictions_at(axis, samples, m0, v0, p);
      coord = centre;
      return r;
    };
    if (scheme == DifferenceScheme::central && (k == 0 || centre - h >= 0.0)) {
      const auto up = shifted(h);
      const auto down = shifted(-h);
      for (std::size_t i = 0; i < n; ++i) {
        jac[i][k] = -(up[i] - down[i]) / (2.0 * h);
      }
      continue;
    }
    // Forward difference; step backwards when the forward point is outside
    // the model's domain (finite range exceeded).
    std::vector<double> r;
    double step = h;
    try {
      r = shifted(h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::range_exceeded || (k == 1 && centre - h < 0.0)) {
        throw;
      }
      step = -h;
      r = shifted(-h);
    }
    for (std::size_t i = 0; i < n; ++i) {
      jac[i][k] = -(r[i] - base[i]) / step;
    }
  }
  return jac;
}

void validate(std::span<const MassSample> samples, double m0, double v0) {
  if (!(m0 > 0.0) || !std::isfinite(m0) || !(v0 > 0.0) || !std::isfinite(v0)) {
    fail(ErrorKind::validation, "fit requires m0 > 0 and v0 > 0");
  }
  if (samples.size() < 3) {
    std::ostringstream os;
    os << "fit requires at least 3 samples, got " << samples.size();
    fail(ErrorKind::validation, os.str());
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.independent) || s.independent < 0.0) {
      fail(ErrorKind::validation, "sample independent variable must be finite and >= 0");
    }
    if (i > 0 && !(s.independent > samples[i - 1].independent)) {
      fail(ErrorKind::validation, "samples must be strictly increasing in the independent variable");
    }
    if (!std::isfinite(s.mass) || s.mass < m0) {
      std::ostringstream os;
      os << "sample " << i << " mass " << s.mass << " is below m0 = " << m0;
      fail(ErrorKind::validation, os.str());
    }
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.mass < b.mass; });
  if (lo->mass == hi->mass) {
    fail(ErrorKind::unidentifiable, "all sample masses are equal: drag parameters are unidentifiable");
  }
}

// |J^T r| / (|J| |r|); with alpha pinned at 0 only the lambda column counts.
double scaled_gradient(const std::vector<std::array<double, 2>>& jac, const std::vector<double>& r,
                       bool alpha_pinned) {
  double g0 = 0.0, g1 = 0.0, jnorm = 0.0, rnorm = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    g0 += jac[i][0] * r[i];
    jnorm += jac[i][0] * jac[i][0];
    if (!alpha_pinned) {
      g1 += jac[i][1] * r[i];
      jnorm += jac[i][1] * jac[i][1];
    }
    rnorm += r[i] * r[i];
  }
  const double denom = std::sqrt(jnorm) * std::sqrt(rnorm);
  return denom > 0.0 ? std::hypot(g0, g1) / denom : 0.0;
}

}  // namespace

const char* to_string(SampleAxis axis) noexcept {
  return axis == SampleAxis::time ? "t" : "x";
}

std::vector<double> residuals(SampleAxis axis, std::span<const MassSample> samples, double m0,
                              double v0, double lambda, double alpha) {
  power_law(lambda, alpha);
  return residuals_at(axis, samples, m0, v0, {std::log(lambda), alpha});
}

std::vector<std::array<double, 2>> residual_jacobian(SampleAxis axis,
                                                     std::span<const MassSample> samples,
                                                     double m0, double v0, double lambda,
                                                     double alpha, DifferenceScheme scheme) {
  power_law(lambda, alpha);
  return jacobian_at(axis, samples, m0, v0, {std::log(lambda), alpha}, scheme);
}

FitResult fit_power_law(SampleAxis axis, std::span<const MassSample> samples, double m0, double v0,
                        PowerLaw init) {
  validate(samples, m0, v0);
  power_law(init.lambda, init.alpha);

  Params p{std::log(init.lambda), init.alpha};
  std::vector<double> r;
  double ssr = objective(axis, samples, m0, v0, p, &r);
  // A finite-range start can fall short of the farthest sample; weaker drag
  // reaches further, so shrink lambda until every sample is covered.
  for (int shrink = 0; !std::isfinite(ssr) && shrink < kMaxStartShrinks; ++shrink) {
    p.log_lambda -= std::log(10.0);
    ssr = objective(axis, samples, m0, v0, p, &r);
  }
  if (!std::isfinite(ssr)) {
    fail(ErrorKind::validation, "initial guess is outside the model domain for these samples");
  }

  FitResult result{std::exp(p.log_lambda), p.alpha, 0.0, 0, false, {}, {ssr}};
  for (std::size_t iter = 1; iter <= kMaxIterations; ++iter) {
    result.iterations = iter;
    if (ssr == 0.0) {
      result.converged = true;
      break;
    }
    const auto jac = jacobian_at(axis, samples, m0, v0, p, DifferenceScheme::forward);

    // Normal equations (J^T J) d = -J^T r.
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, b0 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      a00 += jac[i][0] * jac[i][0];
      a01 += jac[i][0] * jac[i][1];
      a11 += jac[i][1] * jac[i][1];
      b0 -= jac[i][0] * r[i];
      b1 -= jac[i][1] * r[i];
    }
    double d0 = 0.0;
    double d1 = 0.0;
    const double det = a00 * a11 - a01 * a01;
    const bool singular = !(det > 1e-14 * a00 * a11);
    if (!singular) {
      d0 = (a11 * b0 - a01 * b1) / det;
      d1 = (a00 * b1 - a01 * b0) / det;
    }
    const bool pinned = p.alpha == 0.0 && (singular || d1 < 0.0);
    if (singular || pinned) {
      // alpha pinned at its bound (or not resolvable): lambda-only step.
      if (!(a00 > 0.0)) {
        fail(ErrorKind::unidentifiable, "residuals are insensitive to lambda");
      }
      d0 = b0 / a00;
      d1 = 0.0;
    }

    const double tol0 = std::max(1.0, std::abs(p.log_lambda));
    const double tol1 = std::max(1.0, p.alpha);
    const bool tiny_step = std::abs(d0) <= kStepTol * tol0 && std::abs(d1) <= kStepTol * tol1;
    const bool stationary =
        std::abs(d0) <= kStationaryStepTol * tol0 && std::abs(d1) <= kStationaryStepTol * tol1;

    // Cap the full step; far from the optimum the linear model overshoots badly.
    double scale = std::min({1.0, kMaxLogLambdaStep / std::max(std::abs(d0), 1e-300),
                             kMaxAlphaStep / std::max(std::abs(d1), 1e-300)});
    bool accepted = false;
    Params trial = p;
    std::vector<double> trial_r;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, scale *= 0.5) {
      trial = {p.log_lambda + scale * d0, std::max(0.0, p.alpha + scale * d1)};
      const double trial_ssr = objective(axis, samples, m0, v0, trial, &trial_r);
      if (trial_ssr < ssr) {
        accepted = true;
        ssr = trial_ssr;
        result.trace.push_back(ssr);
        break;
      }
    }

    if (!accepted) {
      // No descent: converged only if the residual is already stationary, either
      // because the full step is at round-off level or the gradient vanishes.
      result.converged = stationary || scaled_gradient(jac, r, pinned) <= kGradientTol;
      break;
    }
    p = trial;
    r = trial_r;
    if (tiny_step) {
      result.converged = true;
      break;
    }
  }

  result.lambda = std::exp(p.log_lambda);
  result.alpha = p.alpha;
  result.rms_residual = std::sqrt(ssr / static_cast<double>(samples.size()));
  if (result.converged && !std::isfinite(result.rms_residual)) {
    result.converged = false;
  }
  if (axis == SampleAxis::time && result.alpha < kZeroAlpha) {
    result.warnings.emplace_back(
        "alpha is ~0: time-series mass is independent of v0, so v0 is unidentifiable from this data");
  }
  return result;
}

}  // namespace adhesion
