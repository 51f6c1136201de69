// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/trace.hpp"

namespace enclosure
{

// w(x_i, tau_j) for a set of probes; optional paired normal derivatives.
struct LaplaceField
{
  std::vector<double> taus;
  std::size_t probe_count = 0;
  std::vector<double> values;  // probe-major: values[p * taus.size() + j]
  std::optional<std::vector<double>> normal_derivative;

  double at(std::size_t p, std::size_t j) const { return values[p * taus.size() + j]; }
  double &at(std::size_t p, std::size_t j) { return values[p * taus.size() + j]; }
  double dn(std::size_t p, std::size_t j) const { return (*normal_derivative)[p * taus.size() + j]; }
};

inline void validate_tau_grid(std::span<const double> taus)
{
  if (taus.empty())
    throw DomainError("tau grid is empty");
  for (std::size_t j = 0; j < taus.size(); ++j)
  {
    if (!(taus[j] > 0.0) || !std::isfinite(taus[j]))
      throw DomainError("tau grid values must be positive");
    if (j > 0 && !(taus[j] > taus[j - 1]))
      throw DomainError("tau grid must be strictly increasing");
  }
}

// count points spaced linearly over [lo, hi].
inline std::vector<double> linear_tau_grid(double lo, double hi, int count)
{
  if (count < 1)
    throw DomainError("tau grid needs at least one point");
  std::vector<double> t(count);
  for (int j = 0; j < count; ++j)
    t[j] = count == 1 ? lo : lo + (hi - lo) * j / (count - 1);
  validate_tau_grid(t);
  return t;
}

namespace detail
{
// (1 - e^{-x}) / x
inline double phi1(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

// (1 - e^{-x}(1 + x)) / x^2, by series where the closed form cancels.
inline double phi2(double x)
{
  if (std::abs(x) < 0.5)
  {
    // sum_k (-1)^k (k + 1) x^k / (k + 2)!
    double term = 0.5;  // (-x)^k / (k + 2)!
    double sum = term;
    for (int k = 1; k < 30; ++k)
    {
      term *= -x / (k + 2);
      const double add = term * (k + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum))
        break;
    }
    return sum;
  }
  return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

// Weights (for u_left, u_right) of int_0^delta e^{-tau s} L(s) ds where L is
// the linear interpolant with L(0) = u_left, L(dt) = u_right.
inline std::pair<double, double> segment_weights(double tau, double dt, double delta)
{
  const double i0 = delta * phi1(tau * delta);
  const double i1 = delta * delta * phi2(tau * delta);
  return {i0 - i1 / dt, i1 / dt};
}
}  // namespace detail

// w(x, tau) = int_0^T e^{-tau t} u(x, t) dt, integrating the piecewise-linear
// interpolant of the samples exactly against the exponential.
inline LaplaceField laplace_in_time(const TimeTrace &trace, std::span<const double> taus)
{
  if (trace.probe_count() == 0 || trace.samples() < 2)
    throw DomainError("laplace_in_time: empty trace");
  if (!(trace.dt > 0.0))
    throw DomainError("laplace_in_time: trace dt must be positive");
  validate_tau_grid(taus);

  const std::size_t nt = taus.size();
  LaplaceField out;
  out.taus.assign(taus.begin(), taus.end());
  out.probe_count = trace.probe_count();
  out.values.assign(out.probe_count * nt, 0.0);

  const double dt = trace.dt;
  const double horizon = std::min(trace.horizon > 0.0 ? trace.horizon : trace.steps * dt, trace.steps * dt);
  // Full intervals [t_n, t_{n+1}] inside [0, horizon], then a partial one.
  const auto full = static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-14)));
  const std::size_t n_full = std::min(full, trace.steps);
  const double rest = horizon - n_full * dt;

  for (std::size_t j = 0; j < nt; ++j)
  {
    const double tau = taus[j];
    const auto [wa, wb] = detail::segment_weights(tau, dt, dt);
    // Per-sample weights: sample n gets wa from interval n and wb from interval n-1.
    std::vector<double> weight(trace.samples(), 0.0);
    for (std::size_t n = 0; n < n_full; ++n)
    {
      const double decay = std::exp(-tau * n * dt);
      weight[n] += wa * decay;
      weight[n + 1] += wb * decay;
    }
    if (rest > 1e-14 * dt && n_full < trace.steps)
    {
      const auto [pa, pb] = detail::segment_weights(tau, dt, rest);
      const double decay = std::exp(-tau * n_full * dt);
      weight[n_full] += pa * decay;
      weight[n_full + 1] += pb * decay;
    }
    for (std::size_t p = 0; p < out.probe_count; ++p)
    {
      const auto s = trace.series(p);
      double acc = 0.0;
      for (std::size_t n = 0; n < s.size(); ++n)
        acc += weight[n] * s[n];
      out.at(p, j) = acc;
    }
  }
  return out;
}

// Normal derivative from values at x + delta nu and x - delta nu, exact for
// e^{+-tau s} profiles along the normal (homogeneous modified Helmholtz in 1D).
inline double exp_fitted_derivative(double w_plus, double w_minus, double delta, double tau)
{
  return tau * (w_plus - w_minus) / (2.0 * std::sinh(tau * delta));
}

}  // namespace enclosure
