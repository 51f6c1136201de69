// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/vec3.hpp"

namespace enclosure
{

struct GaussRule
{
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of order n, computed once per order by Newton iteration
// on the Legendre recurrence.
inline const GaussRule &gauss_legendre(int n)
{
  if (n < 1)
    throw DomainError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end())
    return it->second;

  // (P_n(x), P_{n-1}(x)) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k)
    {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };

  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 2.0);
  if (n > 1)
  {
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it)
      {
        const auto [pn, pm] = legendre(x);
        const double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
        x -= dx;
        if (std::abs(dx) < 1e-16)
          break;
      }
      const auto [pn, pm] = legendre(x);
      const double dp = n * (x * pn - pm) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.nodes[i] = -x;
      rule.nodes[n - 1 - i] = x;
      rule.weights[i] = w;
      rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
      rule.nodes[n / 2] = 0.0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// Integral of g over [a, b] with an n-point Gauss rule.
template <class F>
double integrate_gauss(F &&g, double a, double b, int n)
{
  const GaussRule &rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
  return acc * half;
}

// Quadrature nodes on a closed surface with outward normals.
struct SurfaceQuadrature
{
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

// Latitude-longitude product rule on a sphere: Gauss-Legendre in cos(theta)
// about `pole`, uniform trapezoid in azimuth. Exact for spherical harmonics of
// degree < min(2 n_polar, n_azimuth).
inline SurfaceQuadrature sphere_quadrature(const Ball &ball, int n_polar, int n_azimuth,
                                           const Vec3 &pole = {1.0, 0.0, 0.0})
{
  if (n_polar < 1 || n_azimuth < 1)
    throw DomainError("sphere_quadrature: orders must be >= 1");
  const Vec3 e3 = normalized(pole);
  const Vec3 e1 = std::abs(e3.x) < 0.9 ? normalized(Vec3{0.0, e3.z, -e3.y})
                                       : normalized(Vec3{-e3.z, 0.0, e3.x});
  const Vec3 e2{e3.y * e1.z - e3.z * e1.y, e3.z * e1.x - e3.x * e1.z, e3.x * e1.y - e3.y * e1.x};
  const GaussRule &rule = gauss_legendre(n_polar);
  const double r2 = ball.radius * ball.radius;
  SurfaceQuadrature q;
  for (int i = 0; i < n_polar; ++i)
  {
    const double mu = rule.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int j = 0; j < n_azimuth; ++j)
    {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_azimuth;
      const Vec3 n = mu * e3 + s * std::cos(phi) * e1 + s * std::sin(phi) * e2;
      q.points.push_back(ball.center + ball.radius * n);
      q.normals.push_back(n);
      q.weights.push_back(r2 * rule.weights[i] * 2.0 * std::numbers::pi / n_azimuth);
    }
  }
  return q;
}

// Per-face tensor Gauss rule on the boundary of a box.
inline SurfaceQuadrature box_quadrature(const AxisBox &box, int n_per_axis)
{
  if (n_per_axis < 1)
    throw DomainError("box_quadrature: order must be >= 1");
  const GaussRule &rule = gauss_legendre(n_per_axis);
  SurfaceQuadrature q;
  for (int axis = 0; axis < 3; ++axis)
  {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const double hu = 0.5 * (box.hi[u] - box.lo[u]);
    const double hv = 0.5 * (box.hi[v] - box.lo[v]);
    for (int side = 0; side < 2; ++side)
    {
      Vec3 n;
      n[axis] = side == 0 ? -1.0 : 1.0;
      for (int i = 0; i < n_per_axis; ++i)
        for (int j = 0; j < n_per_axis; ++j)
        {
          Vec3 p;
          p[axis] = side == 0 ? box.lo[axis] : box.hi[axis];
          p[u] = box.lo[u] + hu * (1.0 + rule.nodes[i]);
          p[v] = box.lo[v] + hv * (1.0 + rule.nodes[j]);
          q.points.push_back(p);
          q.normals.push_back(n);
          q.weights.push_back(hu * hv * rule.weights[i] * rule.weights[j]);
        }
    }
  }
  return q;
}

}  // namespace enclosure
