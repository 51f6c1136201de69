// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/sources.hpp"
#include "enclosure/trace.hpp"

namespace enclosure
{

// Half-line problem: u_tt - u_xx = 0 on ]-inf, a[, u(.,0) = 0, u_t(.,0) = f,
// -u_x(a,t) - gamma u_t(a,t) - beta u(a,t) = 0.
struct Wave1DConfig
{
  double a = 1.0;
  double gamma = 0.0;
  double beta = 0.0;
  // Left end of the computational domain; NaN selects it automatically.
  double left = std::numeric_limits<double>::quiet_NaN();
  double h = 1.0 / 400.0;
  // dt / h. At 1 the interior scheme is exact on the grid.
  double courant = 1.0;
  double T = 1.0;
};

namespace detail
{
inline const Interval1D &source_interval(const SourceBall &src, const char *where)
{
  const auto *iv = std::get_if<Interval1D>(&src.geometry);
  if (!iv)
    throw UnsupportedShapeError(std::string(where) + ": interval source required");
  return *iv;
}
}  // namespace detail

// Exact free-space solution (1/2) int_{x-t}^{x+t} f(y) dy.
inline double free_solution_1d(const SourceBall &src, double x, double t)
{
  if (t < 0.0)
    throw DomainError("free_solution_1d: t must be nonnegative");
  const auto &iv = detail::source_interval(src, "free_solution_1d");
  const double overlap = std::min(x + t, iv.hi) - std::max(x - t, iv.lo);
  return 0.5 * src.amplitude * std::max(0.0, overlap);
}

// Explicit leapfrog solver for the half-line problem, or for the free line
// (`with_obstacle == false`) on the same nodes extended past a.
//
// Node M sits exactly at x = a. The Robin condition is closed with a ghost
// node at a + h, centred differences for u_x and u_t:
//   (1 + lambda gamma) u^{n+1}_M = 2 (1 - lambda^2 - lambda^2 h beta) u^n_M
//                                  + 2 lambda^2 u^n_{M-1} - (1 - lambda gamma) u^{n-1}_M
// The left end (and the right end of the free line) is a homogeneous Dirichlet
// node placed beyond the reach of any reflection before T.
class Wave1DSolver
{
public:
  Wave1DSolver(const Wave1DConfig &cfg, const SourceBall &src, bool with_obstacle,
               std::span<const double> probes = {})
      : cfg_(cfg), src_(src), with_obstacle_(with_obstacle)
  {
    validate(probes);
    const auto &iv = detail::source_interval(src, "Wave1DSolver");
    dt_ = cfg.courant * cfg.h;
    lambda2_ = cfg.courant * cfg.courant;

    double lo = iv.lo;
    for (double p : probes)
      lo = std::min(lo, p);
    double left = cfg.left;
    if (std::isnan(left))
      left = lo - (cfg.T + 4.0 * cfg.h);
    // Reflections off the left end must not reach any probe before T.
    if (!(2.0 * (lo - left) > cfg.T))
      throw ConfigError("Wave1DConfig.left is too close: reflections from the artificial boundary "
                        "would reach the probes before T");

    boundary_ = static_cast<std::size_t>(std::ceil((cfg.a - left) / cfg.h - 1e-9));
    std::size_t n = boundary_ + 1;
    if (!with_obstacle)
      n += static_cast<std::size_t>(std::ceil((cfg.T + 4.0 * cfg.h) / cfg.h));
    x0_ = cfg.a - boundary_ * cfg.h;

    prev_.assign(n, 0.0);
    curr_.assign(n, 0.0);
    next_.assign(n, 0.0);
    // u^1 from the exact free evolution over one step (Taylor series to all
    // orders: dt f + dt^3/6 f'' + ... for smooth f).
    for (std::size_t j = 1; j + 1 < n; ++j)
    {
      if (with_obstacle_ && j == boundary_)
        continue;
      curr_[j] = free_solution_1d(src, x(j), dt_);
    }
    step_ = 1;
  }

  double x(std::size_t j) const { return x0_ + static_cast<double>(j) * cfg_.h; }
  double dt() const { return dt_; }
  std::size_t step_index() const { return step_; }
  double time() const { return step_ * dt_; }
  std::size_t node_count() const { return curr_.size(); }
  std::size_t boundary_node() const { return boundary_; }
  std::span<const double> current() const { return curr_; }

  void step()
  {
    const std::size_t n = curr_.size();
    const std::size_t last_interior = with_obstacle_ ? boundary_ : n - 1;
    for (std::size_t j = 1; j < last_interior; ++j)
      next_[j] = 2.0 * curr_[j] - prev_[j] + lambda2_ * (curr_[j + 1] - 2.0 * curr_[j] + curr_[j - 1]);
    next_[0] = 0.0;
    if (with_obstacle_)
    {
      const std::size_t m = boundary_;
      const double lg = cfg_.courant * cfg_.gamma;
      next_[m] = (2.0 * (1.0 - lambda2_ - lambda2_ * cfg_.h * cfg_.beta) * curr_[m] +
                  2.0 * lambda2_ * curr_[m - 1] - (1.0 - lg) * prev_[m]) /
                 (1.0 + lg);
    }
    else
    {
      next_[n - 1] = 0.0;
    }
    std::swap(prev_, curr_);
    std::swap(curr_, next_);
    ++step_;
  }

  // Linear interpolation of the current level at x.
  double sample(double xp) const
  {
    const double s = (xp - x0_) / cfg_.h;
    const double js = std::round(s);
    if (std::abs(s - js) < 1e-9)
      return curr_[static_cast<std::size_t>(js)];
    const auto j = static_cast<std::size_t>(std::floor(s));
    const double frac = s - j;
    return (1.0 - frac) * curr_[j] + frac * curr_[j + 1];
  }

  // Discrete energy between the previous and current levels:
  //   sum m_j/2 ((u^n - u^{n-1})/dt)^2 + sum_edges (du^n)(du^{n-1}) / 2h + beta u^n_M u^{n-1}_M / 2,
  // with m_j = h and h/2 at the Robin node. Non-increasing for gamma, beta >= 0.
  double energy() const
  {
    const std::size_t n = curr_.size();
    const std::size_t last = with_obstacle_ ? boundary_ : n - 1;
    double e = 0.0;
    for (std::size_t j = 1; j <= last; ++j)
    {
      const double mass = (with_obstacle_ && j == boundary_) ? 0.5 * cfg_.h : cfg_.h;
      if (!with_obstacle_ && j == last)
        continue;
      const double v = (curr_[j] - prev_[j]) / dt_;
      e += 0.5 * mass * v * v;
    }
    for (std::size_t j = 0; j < last; ++j)
      e += (curr_[j + 1] - curr_[j]) * (prev_[j + 1] - prev_[j]) / (2.0 * cfg_.h);
    if (with_obstacle_)
      e += 0.5 * cfg_.beta * curr_[boundary_] * prev_[boundary_];
    return e;
  }

private:
  void validate(std::span<const double> probes) const
  {
    if (!(cfg_.h > 0.0))
      throw ConfigError("Wave1DConfig.h must be positive");
    if (!(cfg_.courant > 0.0) || cfg_.courant > 1.0)
      throw ConfigError("CFL violation: Courant ratio must lie in (0, 1]");
    if (!(cfg_.T > 0.0))
      throw ConfigError("Wave1DConfig.T must be positive");
    if (cfg_.gamma < 0.0)
      throw ConfigError("gamma < 0 violates the dissipativity assumption gamma >= 0");
    validate_source(src_);
    const auto &iv = detail::source_interval(src_, "Wave1DSolver");
    if (!(iv.hi < cfg_.a))
      throw ConfigError("source support must lie to the left of the obstacle");
    for (double p : probes)
    {
      if (with_obstacle_ && p > cfg_.a + 1e-12)
        throw ConfigError("probe outside the domain ]-inf, a]");
      if (!std::isnan(cfg_.left) && p < cfg_.left)
        throw ConfigError("probe left of the computational domain");
    }
  }

  Wave1DConfig cfg_;
  SourceBall src_;
  bool with_obstacle_;
  double dt_ = 0.0;
  double lambda2_ = 1.0;
  double x0_ = 0.0;
  std::size_t boundary_ = 0;
  std::size_t step_ = 0;
  std::vector<double> prev_, curr_, next_;
};

namespace detail
{
inline TimeTrace run_1d(const Wave1DConfig &cfg, const SourceBall &src, std::span<const double> probes,
                        bool with_obstacle)
{
  Wave1DSolver solver(cfg, src, with_obstacle, probes);
  const double dt = solver.dt();
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.T / dt - 1e-9));
  std::vector<Vec3> points;
  points.reserve(probes.size());
  for (double p : probes)
    points.push_back({p, 0.0, 0.0});
  TimeTrace trace(std::move(points), dt, cfg.T, steps);
  // Level 0 is identically zero.
  for (std::size_t n = 1; n <= steps; ++n)
  {
    for (std::size_t p = 0; p < probes.size(); ++p)
      trace.at(p, n) = solver.sample(probes[p]);
    if (n < steps)
      solver.step();
  }
  return trace;
}
}  // namespace detail

// Traces u(x_i, t_n) of the half-line problem at the probe coordinates.
inline TimeTrace solve_1d(const Wave1DConfig &cfg, const SourceBall &src, std::span<const double> probes)
{
  return detail::run_1d(cfg, src, probes, true);
}

// Free-space control run on the same nodes (no obstacle).
inline TimeTrace solve_1d_free(const Wave1DConfig &cfg, const SourceBall &src, std::span<const double> probes)
{
  return detail::run_1d(cfg, src, probes, false);
}

// T -> infinity Laplace-domain solution of the half-line problem:
//   w(x) = v(x) + A e^{tau (x - a)},  c(tau) = gamma tau + beta,
//   A = -(c/tau - 1) / (2 (c + tau)) int e^{-tau (a - y)} f dy,
//   w(a) = int e^{-tau (a - y)} f dy / (c + tau).
struct ExactHalfLineField
{
  SourceBall source;
  double a = 0.0;
  double tau = 0.0;
  double w_a = 0.0;
  double A = 0.0;

  double value(double x) const { return eval_v_1d(source, x, tau).value + A * std::exp(tau * (x - a)); }
  double derivative(double x) const
  {
    return eval_v_1d(source, x, tau).derivative + tau * A * std::exp(tau * (x - a));
  }
};

inline ExactHalfLineField laplace_w_exact_1d(const Wave1DConfig &cfg, const SourceBall &src, double tau)
{
  detail::check_tau(tau, "laplace_w_exact_1d");
  const auto &iv = detail::source_interval(src, "laplace_w_exact_1d");
  const double c = cfg.gamma * tau + cfg.beta;
  if (std::abs(c + tau) < 1e-12 * std::max(1.0, tau))
    throw PoleError("laplace_w_exact_1d: c(tau) + tau = 0; raise tau");
  // int e^{-tau (a - y)} f(y) dy = e^{-tau (a - b)} * moment
  const double m = std::exp(-tau * (cfg.a - iv.hi)) * source_moment_1d(src, tau);
  ExactHalfLineField out;
  out.source = src;
  out.a = cfg.a;
  out.tau = tau;
  out.w_a = m / (c + tau);
  out.A = -(c / tau - 1.0) / (2.0 * (c + tau)) * m;
  return out;
}

// -v'(0) w(0) + w'(0) v(0).
inline double indicator_1d(double w0, double w0_prime, double v0, double v0_prime)
{
  return -v0_prime * w0 + w0_prime * v0;
}

// Leading term of the half-line indicator:
//   -(1/2 tau) ((gamma - 1) tau + beta) / ((gamma + 1) tau + beta) e^{-2 tau d} moment^2.
inline double indicator_1d_reference(double tau, double gamma, double beta, double d, double moment)
{
  detail::check_tau(tau, "indicator_1d_reference");
  const double den = (gamma + 1.0) * tau + beta;
  if (std::abs(den) < 1e-12 * std::max(1.0, tau))
    throw PoleError("indicator_1d_reference: (gamma + 1) tau + beta = 0");
  return -((gamma - 1.0) * tau + beta) / (2.0 * tau * den) * std::exp(-2.0 * tau * d) * moment * moment;
}

}  // namespace enclosure
