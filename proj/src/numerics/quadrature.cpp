#include "adhesion/numerics/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "adhesion/errors.hpp"

namespace adhesion::numerics {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss-Legendre nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand is not finite at x = " << x;
    fail(ErrorKind::domain, os.str());
  }
  return y;
}

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = checked(f, center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) {
      gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
  }
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);

  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const SolverConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    fail(ErrorKind::validation, "integrate_1d requires finite a <= b");
  }
  if (a == b) {
    return {0.0, 0.0, 0};
  }

  constexpr std::size_t kPerRule = 15;
  std::priority_queue<Segment> work;
  work.push(gauss_kronrod(f, a, b));
  std::size_t evaluations = kPerRule;
  double value = work.top().value;
  double error = work.top().error;

  while (error > std::max(cfg.rel_tol * std::abs(value), cfg.abs_tol)) {
    if (evaluations + 2 * kPerRule > cfg.max_evaluations) {
      std::ostringstream os;
      os << "quadrature did not converge within " << cfg.max_evaluations
         << " evaluations (estimate " << value << ", error " << error << ")";
      throw NonConvergence(os.str(), value);
    }
    const Segment worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("quadrature subinterval below floating-point resolution", value);
    }
    work.pop();
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    evaluations += 2 * kPerRule;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
  }

  // Re-sum to shed the drift from incremental updates.
  value = 0.0;
  error = 0.0;
  for (; !work.empty(); work.pop()) {
    value += work.top().value;
    error += work.top().error;
  }
  return {value, error, evaluations};
}

}  // namespace adhesion::numerics
