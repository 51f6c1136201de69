// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <variant>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/vec3.hpp"

namespace enclosure
{

// Initial velocity f = amplitude * indicator(B), B a ball (3D) or interval (1D).
// A constant profile satisfies both support and sign conditions on f by
// construction.
struct SourceBall
{
  Shape geometry = Ball{};
  double amplitude = 1.0;
};

inline void validate_source(const SourceBall &src)
{
  validate_shape(src.geometry);
  if (!std::holds_alternative<Ball>(src.geometry) && !std::holds_alternative<Interval1D>(src.geometry))
    throw ConfigError("source geometry must be a ball or an interval");
  if (!(src.amplitude != 0.0) || !std::isfinite(src.amplitude))
    throw ConfigError("source amplitude must be a finite nonzero constant");
}

inline double source_value(const SourceBall &src, const Vec3 &x)
{
  return contains(src.geometry, x) ? src.amplitude : 0.0;
}

// Default Gauss order of the free-field quadrature.
inline constexpr int default_free_field_order = 24;

namespace detail
{
inline void check_tau(double tau, const char *where)
{
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw DomainError(std::string(where) + ": tau must be positive");
}

inline const Ball &source_ball(const SourceBall &src, const char *where)
{
  const auto *b = std::get_if<Ball>(&src.geometry);
  if (!b)
    throw UnsupportedShapeError(std::string(where) + ": 3D source ball required");
  return *b;
}

// int_a^b s e^{-tau s} ds = radial_v(a) - radial_v(b)
inline double radial_v(double s, double tau) { return std::exp(-tau * s) * (tau * s + 1.0) / (tau * tau); }

// int_a^b (tau s + 1) e^{-tau s} ds = radial_grad(a) - radial_grad(b)
inline double radial_grad(double s, double tau) { return (s + 2.0 / tau) * std::exp(-tau * s); }
}  // namespace detail

// Free field v(x, tau) = (1/4 pi) int_B e^{-tau |x-y|} / |x-y| f(y) dy, the
// decaying solution of (Laplacian - tau^2) v + f = 0.
//
// Spherical coordinates are centred at x, so the radial integral (which
// carries the 1/|x-y| singularity when x is inside B) is done in closed form.
// Axial symmetry of the ball leaves a single polar integral, done with an
// `order`-point Gauss rule. Outside B the polar variable is the chord
// half-length q, which removes the square-root endpoint at the tangent cone.
inline double eval_v(const SourceBall &src, const Vec3 &x, double tau, int order = default_free_field_order)
{
  detail::check_tau(tau, "eval_v");
  const Ball &ball = detail::source_ball(src, "eval_v");
  if (src.amplitude == 0.0)
    return 0.0;
  const double rho = ball.radius;
  const double r = norm(x - ball.center);

  if (r >= rho)
  {
    const double mu_min2 = 1.0 - (rho / r) * (rho / r);
    auto integrand = [&](double q) {
      const double mu = std::sqrt(mu_min2 + q * q);
      if (mu == 0.0)
        return 0.0;
      return (q / mu) * (detail::radial_v(r * (mu - q), tau) - detail::radial_v(r * (mu + q), tau));
    };
    return 0.5 * src.amplitude * integrate_gauss(integrand, 0.0, rho / r, order);
  }

  auto integrand = [&](double mu) {
    const double s_out = r * mu + std::sqrt(rho * rho - r * r * (1.0 - mu * mu));
    return 1.0 / (tau * tau) - detail::radial_v(s_out, tau);
  };
  return 0.5 * src.amplitude * integrate_gauss(integrand, -1.0, 1.0, order);
}

// Gradient of the free field, for x outside closure(B).
inline Vec3 eval_grad_v(const SourceBall &src, const Vec3 &x, double tau, int order = default_free_field_order)
{
  detail::check_tau(tau, "eval_grad_v");
  const Ball &ball = detail::source_ball(src, "eval_grad_v");
  const Vec3 to_center = ball.center - x;
  const double r = norm(to_center);
  const double rho = ball.radius;
  if (r <= rho)
    throw DomainError("eval_grad_v: x must lie outside closure(B)");
  if (src.amplitude == 0.0)
    return {};
  const double mu_min2 = 1.0 - (rho / r) * (rho / r);
  auto integrand = [&](double q) {
    const double mu = std::sqrt(mu_min2 + q * q);
    return q * (detail::radial_grad(r * (mu - q), tau) - detail::radial_grad(r * (mu + q), tau));
  };
  const double along = 0.5 * src.amplitude * integrate_gauss(integrand, 0.0, rho / r, order);
  return along / r * to_center;
}

struct ValueDerivative
{
  double value = 0.0;
  double derivative = 0.0;
};

// One-dimensional free field v = (1/2 tau) int e^{-tau |x-y|} f(y) dy and its
// x-derivative, in closed form for a constant profile on [lo, hi].
inline ValueDerivative eval_v_1d(const SourceBall &src, double x, double tau)
{
  detail::check_tau(tau, "eval_v_1d");
  const auto *iv = std::get_if<Interval1D>(&src.geometry);
  if (!iv)
    throw UnsupportedShapeError("eval_v_1d: interval source required");
  const double c = src.amplitude;
  const double lo = iv->lo;
  const double hi = iv->hi;
  const double tail = -std::expm1(-tau * (hi - lo));  // 1 - e^{-tau eps}
  const double k = c / (2.0 * tau * tau);
  if (x >= hi)
  {
    const double v = k * std::exp(-tau * (x - hi)) * tail;
    return {v, -tau * v};
  }
  if (x <= lo)
  {
    const double v = k * std::exp(-tau * (lo - x)) * tail;
    return {v, tau * v};
  }
  // Mass to the left and to the right of x.
  const double left = -std::expm1(-tau * (x - lo)) / tau;
  const double right = -std::expm1(-tau * (hi - x)) / tau;
  return {c * (left + right) / (2.0 * tau), -0.5 * c * (left - right)};
}

// int_{b - eps}^{b} e^{-tau (b - y)} f(y) dy for an interval source [b - eps, b].
inline double source_moment_1d(const SourceBall &src, double tau)
{
  detail::check_tau(tau, "source_moment_1d");
  const auto *iv = std::get_if<Interval1D>(&src.geometry);
  if (!iv)
    throw UnsupportedShapeError("source_moment_1d: interval source required");
  return src.amplitude * (-std::expm1(-tau * (iv->hi - iv->lo))) / tau;
}

// int_B e^{-tau (rho - (y - c).e)} f(y) dy for a ball of radius rho about c
// and any unit e: 4 pi C (x cosh x - sinh x) e^{-x} / tau^3 with x = rho tau.
// Outside B the free field is v = moment e^{-tau (r - rho)} / (4 pi r).
inline double source_moment_3d(const SourceBall &src, double tau)
{
  detail::check_tau(tau, "source_moment_3d");
  const Ball &ball = detail::source_ball(src, "source_moment_3d");
  const double x = ball.radius * tau;
  double g;  // (x cosh x - sinh x) e^{-x}
  if (x < 0.5)
  {
    // x^3/3 + x^5/30 + x^7/840 + ..., times e^{-x}
    double term = x * x * x / 3.0;
    double sum = term;
    for (int k = 1; k < 20; ++k)
    {
      term *= x * x / ((2.0 * k + 3.0) * (2.0 * k));
      sum += term;
    }
    g = sum * std::exp(-x);
  }
  else
  {
    const double e2 = std::exp(-2.0 * x);
    g = 0.5 * (x * (1.0 + e2) - (1.0 - e2));
  }
  return 4.0 * std::numbers::pi * src.amplitude * g / (tau * tau * tau);
}

// One- or three-dimensional source moment, by the source geometry.
inline double source_moment(const SourceBall &src, double tau)
{
  if (std::holds_alternative<Interval1D>(src.geometry))
    return source_moment_1d(src, tau);
  return source_moment_3d(src, tau);
}

}  // namespace enclosure
