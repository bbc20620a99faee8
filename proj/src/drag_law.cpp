#include "adhesion/drag_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adhesion/errors.hpp"

namespace adhesion {
namespace {

// Three-point end slope with the shape-preserving corrections used by PCHIP.
double end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (std::signbit(s) != std::signbit(d0) || s == 0.0) {
    return 0.0;
  }
  if (std::signbit(d0) != std::signbit(d1) && std::abs(s) > std::abs(3.0 * d0)) {
    return 3.0 * d0;
  }
  return s;
}

}  // namespace

Tabulated::Tabulated(std::vector<Sample> samples) : samples_(std::move(samples)) {
  const std::size_t n = samples_.size();
  if (n < 2) {
    fail(ErrorKind::validation, "tabulated drag law needs at least 2 samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.v) || !std::isfinite(s.phi) || s.v < 0.0 || s.phi <= 0.0) {
      std::ostringstream os;
      os << "tabulated sample " << i << " invalid: need v >= 0 and phi > 0";
      fail(ErrorKind::validation, os.str());
    }
    if (i > 0 && !(s.v > samples_[i - 1].v)) {
      fail(ErrorKind::validation, "tabulated v grid must be strictly increasing");
    }
  }

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = samples_[i + 1].v - samples_[i].v;
    delta[i] = (samples_[i + 1].phi - samples_[i].phi) / h[i];
  }

  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
    return;
  }
  // Fritsch-Butland weighted harmonic mean at interior knots.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d0 = delta[k - 1];
    const double d1 = delta[k];
    if (d0 == 0.0 || d1 == 0.0 || std::signbit(d0) != std::signbit(d1)) {
      slopes_[k] = 0.0;
      continue;
    }
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
  slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double Tabulated::operator()(double v) const {
  if (!(v >= v_min() && v <= v_max())) {
    std::ostringstream os;
    os << "v = " << v << " outside tabulated range [" << v_min() << ", " << v_max() << "]";
    fail(ErrorKind::domain, os.str());
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), v,
                             [](double x, const Sample& s) { return x < s.v; });
  std::size_t k = it == samples_.begin() ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
  if (k + 1 >= samples_.size()) {
    return samples_.back().phi;
  }

  const double h = samples_[k + 1].v - samples_[k].v;
  const double s = (v - samples_[k].v) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * samples_[k].phi + h10 * h * slopes_[k] + h01 * samples_[k + 1].phi +
         h11 * h * slopes_[k + 1];
}

DragLaw power_law(double lambda, double alpha) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::validation, "power law requires lambda > 0");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    fail(ErrorKind::validation, "power law requires alpha >= 0");
  }
  return PowerLaw{lambda, alpha};
}

const PowerLaw* as_power_law(const DragLaw& law) noexcept {
  return std::get_if<PowerLaw>(&law);
}

double phi_eval(const DragLaw& law, double v) {
  if (!(v >= 0.0)) {
    fail(ErrorKind::domain, "phi requires v >= 0");
  }
  if (const auto* p = as_power_law(law)) {
    return p->alpha == 0.0 ? p->lambda : p->lambda * std::pow(v, p->alpha);
  }
  return std::get<Tabulated>(law)(v);
}

double drag_force(const DragLaw& law, double v) {
  return -phi_eval(law, std::abs(v)) * v;
}

}  // namespace adhesion
