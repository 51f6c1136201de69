// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "enclosure/extraction.hpp"

using namespace enclosure;

namespace
{
IndicatorCurve synthetic(const std::function<double(double)> &f, double lo = 2.0, double hi = 14.0, int count = 49)
{
  IndicatorCurve c;
  c.taus = linear_tau_grid(lo, hi, count);
  for (double t : c.taus)
    c.values.push_back(f(t));
  c.floor.assign(c.taus.size(), 0.0);
  return c;
}

FitError::Kind fit_error_kind(const std::function<void()> &f)
{
  try
  {
    f();
  }
  catch (const FitError &e)
  {
    return e.kind();
  }
  ADD_FAILURE() << "no FitError thrown";
  return FitError::Kind::indeterminate;
}
}  // namespace

TEST(Distance, PureExponentialExact)
{
  const auto c = synthetic([](double t) { return std::exp(-2.0 * 1.2 * t); });
  EXPECT_NEAR(estimate_distance(c, {4, 8}).d_hat, 1.2, 1e-12);
  EXPECT_NEAR(estimate_distance(c, {4, 8}, DecayModel::power).d_hat, 1.2, 1e-10);
  const auto n = synthetic([](double t) { return -3.0 * std::exp(-2.0 * 0.7 * t); });
  EXPECT_NEAR(estimate_distance(n, {4, 8}).d_hat, 0.7, 1e-12);
}

TEST(Distance, AlgebraicPrefactorBias)
{
  const double d = 1.0;
  const auto c = synthetic([&](double t) { return std::exp(-2.0 * d * t) / t; }, 2.0, 30.0, 113);
  const double bias_6 = estimate_distance(c, {4, 8}).d_hat - d;
  const double bias_12 = estimate_distance(c, {10, 14}).d_hat - d;
  EXPECT_GT(bias_6, 0.0);
  EXPECT_NEAR(bias_6, 1.0 / (2.0 * 6.0), 0.1 / 6.0);
  EXPECT_NEAR(bias_6 / bias_12, 2.0, 0.1);
  // The power model absorbs the prefactor.
  const DistanceFit p = estimate_distance(c, {4, 8}, DecayModel::power);
  EXPECT_NEAR(p.d_hat, d, 1e-10);
  EXPECT_NEAR(p.power, -1.0, 1e-9);
}

TEST(Distance, Errors)
{
  auto zero = synthetic([](double t) { return t > 5.9 && t < 6.1 ? 0.0 : std::exp(-t); });
  EXPECT_EQ(fit_error_kind([&] { estimate_distance(zero, {4, 8}); }), FitError::Kind::window);
  auto grow = synthetic([](double t) { return std::exp(t); });
  EXPECT_EQ(fit_error_kind([&] { estimate_distance(grow, {4, 8}); }), FitError::Kind::no_decay);
  EXPECT_EQ(fit_error_kind([&] { estimate_distance(grow, {4, 4.3}); }), FitError::Kind::window);
  EXPECT_EQ(fit_error_kind([&] { estimate_distance(grow, {8, 4}); }), FitError::Kind::window);
}

TEST(Sign, Classification)
{
  const auto pos = synthetic([](double t) { return std::exp(-t); });
  EXPECT_EQ(classify_sign(pos, 0.0, {6, 12}), SignClass::positive);
  EXPECT_EQ(sign_label(SignClass::positive, Mode::robin), "A1-like");
  EXPECT_EQ(sign_label(SignClass::negative, Mode::refractive), "B2-like");
  const auto neg = synthetic([](double t) { return -std::exp(-t); });
  EXPECT_EQ(classify_sign(neg, 0.0, {6, 12}), SignClass::negative);
  // Under ten times the floor counts as undecided.
  EXPECT_EQ(classify_sign(pos, 1e-4, {6, 12}), SignClass::indeterminate);
  const auto mixed = synthetic([](double t) { return std::sin(3.0 * t); });
  EXPECT_EQ(classify_sign(mixed, 0.0, {6, 12}), SignClass::indeterminate);
}

TEST(Coefficients, NormalizedIndicator)
{
  // R = -1/(2 tau) + 1/((gamma + 1) tau + beta) against its expansion.
  const double g = 0.5, b = 0.3, tau = 50.0;
  const double c1 = (1 - g) / (2 * (g + 1)), c2 = -b / ((g + 1) * (g + 1));
  EXPECT_NEAR(normalized_indicator_1d(tau, g, b), c1 / tau + c2 / (tau * tau), 1.0 / (tau * tau * tau));
  EXPECT_NEAR(normalized_tail_1d(tau, g, b), b * b / ((g + 1) * (g + 1) * (g + 1) * tau * tau * tau), 1e-9);
  EXPECT_THROW(normalized_indicator_1d(1.0, 0.0, -1.0), PoleError);
}

namespace
{
// I = R moment^2 e^{-2 tau d} with moment = 1/tau.
IndicatorCurve from_normalized(double g, double b, double d)
{
  return synthetic([&](double t) { return normalized_indicator_1d(t, g, b) * std::exp(-2.0 * t * d) / (t * t); }, 2.0,
                   12.0, 41);
}
const auto moment = [](double t) { return 1.0 / t; };
}  // namespace

TEST(Coefficients, SyntheticRecoveryExact)
{
  for (auto [g, b] : {std::pair{0.5, 0.3}, {2.0, -0.2}, {0.0, 0.7}, {4.0, 1.5}})
  {
    const CoefficientFit f = recover_gamma_beta_1d(from_normalized(g, b, 2.0), moment, 2.0, {6, 12});
    EXPECT_NEAR(f.gamma_hat, g, 1e-3 * std::max(g, 1.0)) << g << " " << b;
    EXPECT_NEAR(f.beta_hat, b, 1e-3 * std::abs(b)) << g << " " << b;
    EXPECT_TRUE(f.determinate);
  }
}

TEST(Coefficients, TailCorrectionMatters)
{
  CoefficientOptions raw;
  raw.tail_correction = false;
  const auto c = from_normalized(0.5, 0.3, 2.0);
  const CoefficientFit plain = recover_gamma_beta_1d(c, moment, 2.0, {6, 12}, raw);
  const CoefficientFit corrected = recover_gamma_beta_1d(c, moment, 2.0, {6, 12});
  EXPECT_LT(std::abs(corrected.beta_hat - 0.3), 0.1 * std::abs(plain.beta_hat - 0.3));
}

TEST(Coefficients, InvisibleGammaLeadingTerm)
{
  // gamma = 1: c1 = 0 and beta = -4 c2.
  const CoefficientFit f = recover_gamma_beta_1d(from_normalized(1.0, 0.4, 2.0), moment, 2.0, {6, 12});
  EXPECT_NEAR(f.beta_hat, -4.0 * f.c2, 1e-12);
  EXPECT_NEAR(f.gamma_hat, 1.0, 1e-6);
  EXPECT_NEAR(f.beta_hat, 0.4, 1e-4);
}

TEST(Coefficients, DivergingGamma)
{
  // R = -1/(2 tau) exactly: c1 = -1/2, the gamma -> infinity limit.
  const auto c = synthetic([](double t) { return -0.5 / t * std::exp(-4.0 * t) / (t * t); }, 2.0, 12.0, 41);
  EXPECT_EQ(fit_error_kind([&] { recover_gamma_beta_1d(c, moment, 2.0, {6, 12}); }), FitError::Kind::diverging_gamma);
}

TEST(Coefficients, NegativeGammaIndeterminate)
{
  // c1 > 1/2 would mean gamma < 0.
  const auto c = synthetic([](double t) { return 0.8 / t * std::exp(-4.0 * t) / (t * t); }, 2.0, 12.0, 41);
  EXPECT_FALSE(recover_gamma_beta_1d(c, moment, 2.0, {6, 12}).determinate);
}

TEST(Coefficients, NormalizeByMoment)
{
  const SourceBall src{Ball{{2.5, 0, 0}, 0.3}, 2.0};
  const auto c = synthetic([](double t) { return std::exp(-2.4 * t); });
  const auto n = normalize_by_moment(c, src);
  for (std::size_t j = 0; j < c.size(); ++j)
  {
    const double m = source_moment_3d(src, c.taus[j]);
    EXPECT_NEAR(n.values[j] * m * m / c.values[j], 1.0, 1e-14);
  }
}
