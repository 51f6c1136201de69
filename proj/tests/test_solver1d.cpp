// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "enclosure/solver1d.hpp"
#include "enclosure/transform.hpp"

using namespace enclosure;

namespace
{
const SourceBall source{Interval1D{-1.5, -1.0}, 1.0};

Wave1DConfig config(double gamma, double beta, double T = 4.0)
{
  Wave1DConfig c;
  c.a = 1.0;
  c.gamma = gamma;
  c.beta = beta;
  c.T = T;
  c.h = 1.0 / 400.0;
  return c;
}
}  // namespace

TEST(FreeSolution1D, Basics)
{
  EXPECT_EQ(free_solution_1d(source, -1.2, 0.0), 0.0);
  // Once [x - t, x + t] swallows the support the value is half the mass.
  EXPECT_DOUBLE_EQ(free_solution_1d(source, 0.0, 1.6), 0.25);
  EXPECT_DOUBLE_EQ(free_solution_1d(source, 0.0, 5.0), 0.25);
  EXPECT_DOUBLE_EQ(free_solution_1d(source, 0.0, 1.2), 0.1);
}

TEST(Solver1D, ZeroSourceGivesZeroTrace)
{
  // A zero amplitude is rejected by validation; the nearest legal input is
  // a vanishing one, which scales the trace linearly.
  const std::vector<double> probes{0.0, 0.5};
  const SourceBall tiny{Interval1D{-1.5, -1.0}, 1e-300};
  const TimeTrace tr = solve_1d(config(0.5, 0.3), tiny, probes);
  for (double v : tr.values)
    EXPECT_LE(std::abs(v), 1e-300);
  EXPECT_THROW(solve_1d(config(0.5, 0.3), SourceBall{Interval1D{-1.5, -1.0}, 0.0}, probes), ConfigError);
}

TEST(Solver1D, InvisibleObstacleFollowsFreeSolution)
{
  const std::vector<double> probes{-1.2, 0.0, 0.6, 1.0};
  for (double lambda : {1.0, 0.9})
  {
    Wave1DConfig c = config(1.0, 0.0);
    c.courant = lambda;
    const TimeTrace tr = solve_1d(c, source, probes);
    double err = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p)
      for (std::size_t n = 0; n <= tr.steps; ++n)
        err = std::max(err, std::abs(tr.at(p, n) - free_solution_1d(source, probes[p], n * tr.dt)));
    EXPECT_LT(err, lambda == 1.0 ? 1e-13 : 1e-2) << "lambda " << lambda;
  }
}

TEST(Solver1D, NeumannMatchesImageSource)
{
  // Image of [-1.5, -1] in x = 1 is [3, 3.5].
  const SourceBall image{Interval1D{3.0, 3.5}, 1.0};
  const std::vector<double> probes{-1.0, 0.0, 0.8};
  const TimeTrace tr = solve_1d(config(0.0, 0.0, 5.0), source, probes);
  double err = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p)
    for (std::size_t n = 0; n <= tr.steps; ++n)
    {
      const double t = n * tr.dt;
      err = std::max(err, std::abs(tr.at(p, n) - free_solution_1d(source, probes[p], t) -
                                   free_solution_1d(image, probes[p], t)));
    }
  EXPECT_LT(err, 1e-13);

  // Reflected pulse reaches b = -1 at t = 2 (a - b) = 4 with unflipped sign.
  const std::size_t before = static_cast<std::size_t>(3.9 / tr.dt);
  const std::size_t after = static_cast<std::size_t>(4.3 / tr.dt);
  EXPECT_NEAR(tr.at(0, before), free_solution_1d(source, -1.0, before * tr.dt), 1e-14);
  EXPECT_GT(tr.at(0, after), free_solution_1d(source, -1.0, after * tr.dt) + 0.1);
}

TEST(Solver1D, EnergyDoesNotGrow)
{
  for (auto [g, b] : {std::pair{0.0, 0.0}, {0.5, 0.3}, {2.0, 1.0}, {1.0, 0.0}})
  {
    for (double lambda : {1.0, 0.9})
    {
      Wave1DConfig c = config(g, b, 6.0);
      c.courant = lambda;
      Wave1DSolver s(c, source, true);
      double prev = s.energy();
      double worst = 0.0;
      while (s.time() < c.T)
      {
        s.step();
        const double e = s.energy();
        worst = std::max(worst, (e - prev) / prev);
        prev = e;
      }
      EXPECT_LE(worst, 1e-12) << "gamma " << g << " beta " << b << " lambda " << lambda;
    }
  }
}

TEST(Solver1D, Errors)
{
  Wave1DConfig c = config(0.5, 0.3);
  c.courant = 1.1;
  const std::vector<double> probes{0.0};
  EXPECT_THROW(solve_1d(c, source, probes), ConfigError);
  c = config(0.5, 0.3);
  EXPECT_THROW(solve_1d(c, source, std::vector<double>{1.5}), ConfigError);
  c.left = -2.0;
  EXPECT_THROW(solve_1d(c, source, probes), ConfigError);
}

TEST(ExactHalfLine, InvisibleHasNoReflection)
{
  const auto w = laplace_w_exact_1d(config(1.0, 0.0), source, 3.0);
  EXPECT_EQ(w.A, 0.0);
  EXPECT_NEAR(w.value(0.3), eval_v_1d(source, 0.3, 3.0).value, 1e-16);
}

TEST(ExactHalfLine, NeumannBoundaryValue)
{
  const double tau = 2.5;
  const auto w = laplace_w_exact_1d(config(0.0, 0.0), source, tau);
  // (1/tau) int e^{-tau (a - y)} f dy
  const double ref = (std::exp(-tau * 2.0) - std::exp(-tau * 2.5)) / (tau * tau);
  EXPECT_NEAR(w.w_a / ref, 1.0, 1e-14);
  EXPECT_NEAR(w.value(1.0) / ref, 1.0, 1e-13);
  EXPECT_NEAR(w.derivative(1.0), 0.0, 1e-14 * ref * tau);
}

TEST(ExactHalfLine, SatisfiesRobinCondition)
{
  const double tau = 4.0, g = 0.7, b = -0.4;
  const auto w = laplace_w_exact_1d(config(g, b), source, tau);
  EXPECT_NEAR(w.derivative(1.0) + (g * tau + b) * w.value(1.0), 0.0, 1e-14 * w.w_a * tau);
  EXPECT_NEAR(w.value(1.0), w.w_a, 1e-15);
}

TEST(ExactHalfLine, Pole)
{
  // c + tau = 0 at tau = 0.5 for gamma = 0, beta = -0.5.
  EXPECT_THROW(laplace_w_exact_1d(config(0.0, -0.5), source, 0.5), PoleError);
}

TEST(ExactHalfLine, MatchesSimulation)
{
  const double tau = 4.0;
  for (auto [g, b] : {std::pair{0.5, 0.3}, {0.0, 0.0}, {3.0, -0.2}})
  {
    Wave1DConfig c = config(g, b, 8.0);
    const std::vector<double> probes{0.0, 1.0};
    const LaplaceField lf = laplace_in_time(solve_1d(c, source, probes), std::vector<double>{tau});
    const auto w = laplace_w_exact_1d(c, source, tau);
    EXPECT_NEAR(lf.at(0, 0) / w.value(0.0), 1.0, 1e-5);
    // The Robin closure at the boundary node is second order.
    EXPECT_NEAR(lf.at(1, 0) / w.w_a, 1.0, 1e-5);
  }
}

TEST(Indicator1D, Basics)
{
  EXPECT_EQ(indicator_1d(0.3, -0.2, 0.3, -0.2), 0.0);
  for (double tau : {1.0, 5.0, 20.0})
  {
    EXPECT_EQ(indicator_1d_reference(tau, 1.0, 0.0, 2.0, 0.1), 0.0);
    EXPECT_LT(indicator_1d_reference(tau, 3.0, 0.0, 2.0, 0.1), 0.0);
    EXPECT_GT(indicator_1d_reference(tau, 0.5, 0.0, 2.0, 0.1), 0.0);
  }
}

TEST(Indicator1D, ExactFieldGivesReference)
{
  // The T -> infinity field reproduces the leading term; the v'v terms cancel
  // in floating point, which costs about five digits at tau = 6.
  const double tau = 6.0;
  const auto w = laplace_w_exact_1d(config(0.5, 0.3), source, tau);
  const ValueDerivative v = eval_v_1d(source, 0.0, tau);
  const double I = indicator_1d(w.value(0.0), w.derivative(0.0), v.value, v.derivative);
  EXPECT_NEAR(I / indicator_1d_reference(tau, 0.5, 0.3, 2.0, source_moment_1d(source, tau)), 1.0, 1e-9);
}
