#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adhesion/calibrate.hpp"
#include "adhesion/closed_form.hpp"
#include "adhesion/errors.hpp"

using namespace adhesion;

namespace {

constexpr double kM0 = 0.0027;

std::vector<MassSample> time_samples(double lambda, double alpha, double v0,
                                     const std::vector<double>& times) {
  const Scenario s(kM0, v0, power_law(lambda, alpha));
  std::vector<MassSample> out;
  for (double t : times) {
    out.push_back({t, mass_at_time_closed(s, t)});
  }
  return out;
}

std::vector<double> range(double first, double last, double step) {
  std::vector<double> v;
  for (double t = first; t <= last + 1e-12; t += step) {
    v.push_back(t);
  }
  return v;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected adhesion::Error";
  return ErrorKind::validation;
}

}  // namespace

TEST(Residuals, ExactModelGivesZeros) {
  const auto samples = time_samples(0.000348, 1.0, 10.0, range(0.5, 5.0, 0.5));
  for (double r : residuals(SampleAxis::time, samples, kM0, 10.0, 0.000348, 1.0)) {
    EXPECT_NEAR(r, 0.0, 1e-16);
  }
}

TEST(Residuals, AdditiveShift) {
  auto samples = time_samples(0.000348, 1.0, 10.0, range(0.5, 5.0, 0.5));
  for (auto& s : samples) {
    s.mass += 1e-5;
  }
  for (double r : residuals(SampleAxis::time, samples, kM0, 10.0, 0.000348, 1.0)) {
    EXPECT_NEAR(r, 1e-5, 1e-16);
  }
}

TEST(Residuals, PositionSamplesBeyondRange) {
  const std::vector<MassSample> samples{{1.0, 0.003}, {5.0, 0.01}, {9.0, 0.1}};
  EXPECT_EQ(kind_of([&] { residuals(SampleAxis::position, samples, kM0, 1.0, 3.78876e-4, 0.0); }),
            ErrorKind::range_exceeded);
}

TEST(Residuals, ResponseToLambdaPerturbation) {
  const auto samples = time_samples(0.000348, 1.0, 10.0, range(0.5, 5.0, 0.5));
  const double lambda = 0.000348;
  const double dlambda = 1e-9;
  const auto base = residuals(SampleAxis::time, samples, kM0, 10.0, lambda, 1.0);
  const auto moved = residuals(SampleAxis::time, samples, kM0, 10.0, lambda + dlambda, 1.0);
  // alpha = 1: dm/dlambda = v0 t exactly.
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_NEAR(moved[i] - base[i], -10.0 * samples[i].independent * dlambda, 1e-15);
  }
}

TEST(Jacobian, PropertyForwardMatchesCentral) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> log_lambda(std::log(1e-4), std::log(1e-2));
  std::uniform_real_distribution<double> alpha(0.05, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double lam = std::exp(log_lambda(rng));
    const double a = alpha(rng);
    const auto samples = time_samples(lam * 1.3, a + 0.1, 5.0, range(0.25, 4.0, 0.25));
    const auto fwd = residual_jacobian(SampleAxis::time, samples, kM0, 5.0, lam, a,
                                       DifferenceScheme::forward);
    const auto ctr = residual_jacobian(SampleAxis::time, samples, kM0, 5.0, lam, a,
                                       DifferenceScheme::central);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(fwd[i][k], ctr[i][k], 1e-4 * std::abs(ctr[i][k]) + 1e-18) << trial;
      }
    }
  }
}

TEST(Fit, RecoversQuadraticAirCase) {
  const auto samples = time_samples(0.000348, 1.0, 10.0, range(0.5, 5.0, 0.5));
  const auto fit = fit_power_law(SampleAxis::time, samples, kM0, 10.0, {1e-4, 0.5});
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.lambda / 0.000348, 1.0, 1e-6);
  EXPECT_NEAR(fit.alpha, 1.0, 1e-6);
  EXPECT_LT(fit.rms_residual, 1e-12);
  EXPECT_TRUE(fit.warnings.empty());
}

TEST(Fit, ConstantMassIsUnidentifiable) {
  const std::vector<MassSample> samples{{1.0, kM0}, {2.0, kM0}, {3.0, kM0}, {4.0, kM0}};
  EXPECT_EQ(kind_of([&] { fit_power_law(SampleAxis::time, samples, kM0, 1.0, {1e-4, 0.5}); }),
            ErrorKind::unidentifiable);
}

TEST(Fit, InputValidation) {
  const auto samples = time_samples(0.000348, 1.0, 10.0, {1.0, 2.0, 3.0});
  std::vector<MassSample> two(samples.begin(), samples.begin() + 2);
  EXPECT_EQ(kind_of([&] { fit_power_law(SampleAxis::time, two, kM0, 10.0, {1e-4, 0.5}); }),
            ErrorKind::validation);
  auto unsorted = samples;
  std::swap(unsorted[0], unsorted[1]);
  EXPECT_EQ(kind_of([&] { fit_power_law(SampleAxis::time, unsorted, kM0, 10.0, {1e-4, 0.5}); }),
            ErrorKind::validation);
  EXPECT_EQ(kind_of([&] { fit_power_law(SampleAxis::time, samples, kM0, 0.0, {1e-4, 0.5}); }),
            ErrorKind::validation);
  auto light = samples;
  light[0].mass = 0.5 * kM0;
  EXPECT_EQ(kind_of([&] { fit_power_law(SampleAxis::time, light, kM0, 10.0, {1e-4, 0.5}); }),
            ErrorKind::validation);
}

TEST(Fit, StokesFitIgnoresLaunchSpeed) {
  const double lambda = 3.78876e-4;
  const auto samples = time_samples(lambda, 0.0, 1.0, {1.0, 2.0, 3.0, 4.0, 5.0});
  const auto slow = fit_power_law(SampleAxis::time, samples, kM0, 1.0, {1e-4, 0.5});
  const auto fast = fit_power_law(SampleAxis::time, samples, kM0, 10.0, {1e-4, 0.5});
  ASSERT_TRUE(slow.converged);
  ASSERT_TRUE(fast.converged);
  EXPECT_NEAR(slow.lambda / lambda, 1.0, 1e-6);
  EXPECT_NEAR(fast.lambda / slow.lambda, 1.0, 1e-9);
  EXPECT_NEAR(slow.alpha, 0.0, 1e-6);
  EXPECT_NEAR(fast.alpha, 0.0, 1e-6);
  EXPECT_FALSE(slow.warnings.empty());
}

TEST(Fit, PositionSeries) {
  const Scenario s(kM0, 4.0, power_law(2e-3, 0.5));
  std::vector<MassSample> samples;
  for (double x = 0.5; x < 0.9 * max_range(s); x += 0.5) {
    samples.push_back({x, mass_at_position_closed(s, x)});
  }
  const auto fit = fit_power_law(SampleAxis::position, samples, kM0, 4.0, {1e-3, 1.0});
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.lambda / 2e-3, 1.0, 1e-6);
  EXPECT_NEAR(fit.alpha, 0.5, 1e-6);
}

TEST(Fit, PropertyObjectiveNeverIncreases) {
  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0.0, 2e-6);
  auto samples = time_samples(1e-3, 1.5, 5.0, range(0.25, 5.0, 0.25));
  for (auto& s : samples) {
    s.mass = std::max(kM0, s.mass + noise(rng));
  }
  const auto fit = fit_power_law(SampleAxis::time, samples, kM0, 5.0, {1e-4, 0.3});
  EXPECT_TRUE(fit.converged);
  ASSERT_GE(fit.trace.size(), 2u);
  for (std::size_t i = 1; i < fit.trace.size(); ++i) {
    EXPECT_LE(fit.trace[i], fit.trace[i - 1]);
  }
  EXPECT_NEAR(fit.alpha, 1.5, 0.05);
}

TEST(Fit, Deterministic) {
  const auto samples = time_samples(2e-3, 0.5, 3.0, range(0.5, 6.0, 0.5));
  const auto a = fit_power_law(SampleAxis::time, samples, kM0, 3.0, {1e-4, 1.0});
  const auto b = fit_power_law(SampleAxis::time, samples, kM0, 3.0, {1e-4, 1.0});
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Jacobian, IndependentOfObservedMass) {
  auto samples = time_samples(1e-3, 1.0, 10.0, range(0.5, 5.0, 0.5));
  const auto base = residual_jacobian(SampleAxis::time, samples, kM0, 10.0, 1e-3, 1.0);
  for (auto& s : samples) {
    s.mass *= 1e30;
  }
  const auto scaled = residual_jacobian(SampleAxis::time, samples, kM0, 10.0, 1e-3, 1.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(base[i][0], scaled[i][0]);
    EXPECT_EQ(base[i][1], scaled[i][1]);
    EXPECT_NE(scaled[i][0], 0.0);
  }
}

TEST(Fit, StartWithTooShortRangeIsShrunk) {
  const Scenario s(kM0, 10.0, power_law(1e-4, 0.0));
  std::vector<MassSample> samples;
  for (int i = 1; i <= 20; ++i) {
    const double x = 0.95 * max_range(s) * i / 20.0;
    samples.push_back({x, mass_at_position_closed(s, x)});
  }
  const auto fit = fit_power_law(SampleAxis::position, samples, kM0, 10.0, {1e-2, 0.5});
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.lambda / 1e-4, 1.0, 1e-6);
  EXPECT_NEAR(fit.alpha, 0.0, 1e-6);
}

TEST(Fit, ConvergedOnlyAtTheOptimum) {
  // Masses reach ~1e32 kg; whatever the outcome, converged must mean recovered.
  const Scenario s(kM0, 10.0, power_law(1e-2, 1.0));
  std::vector<MassSample> samples;
  for (int i = 1; i <= 20; ++i) {
    samples.push_back({1.0 * i, mass_at_position_closed(s, 1.0 * i)});
  }
  for (PowerLaw init : {PowerLaw{1e-4, 0.5}, PowerLaw{1e-3, 1.0}}) {
    const auto fit = fit_power_law(SampleAxis::position, samples, kM0, 10.0, init);
    if (fit.converged) {
      EXPECT_NEAR(fit.lambda / 1e-2, 1.0, 1e-5);
      EXPECT_NEAR(fit.alpha, 1.0, 1e-5);
    }
  }
}

TEST(Fit, PropertyRoundTripGrid) {
  for (double lam : {1e-4, 1e-3, 1e-2}) {
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      const Scenario s(kM0, 10.0, power_law(lam, a));
      const double t_end = time_for_mass_closed(s, 20.0 * kM0);
      std::vector<MassSample> samples;
      for (int i = 1; i <= 20; ++i) {
        samples.push_back({t_end * i / 20.0, mass_at_time_closed(s, t_end * i / 20.0)});
      }
      const auto fit = fit_power_law(SampleAxis::time, samples, kM0, 10.0, {1e-4, 0.5});
      EXPECT_TRUE(fit.converged) << lam << " " << a;
      EXPECT_NEAR(fit.lambda / lam, 1.0, 1e-5) << lam << " " << a;
      EXPECT_NEAR(fit.alpha, a, 1e-5 * std::max(1.0, a)) << lam << " " << a;
    }
  }
}
