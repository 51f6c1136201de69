// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/solver1d.hpp"
#include "enclosure/sources.hpp"
#include "enclosure/transform.hpp"

namespace enclosure
{

struct IndicatorCurve
{
  std::vector<double> taus;
  std::vector<double> values;
  std::string mode;  // "surface", "backscatter" or "1d"
  std::string scene_hash;
  // Estimated numerical noise level per tau (zero when unknown).
  std::vector<double> floor;

  std::size_t size() const { return taus.size(); }
};

// Whether a LaplaceField holds the total measured field w or the scattered
// part w - w_free (obstacle run minus a free-space run on the same grid).
enum class FieldKind
{
  total,
  scattered
};

// Machine-precision envelope used for noise floors.
inline constexpr double roundoff_factor = 64.0 * std::numeric_limits<double>::epsilon();

inline double free_field_value(const SourceBall &src, const Vec3 &x, double tau)
{
  if (std::holds_alternative<Interval1D>(src.geometry))
    return eval_v_1d(src, x.x, tau).value;
  return eval_v(src, x, tau);
}

//---------------------------------------------------------------------------//
// Surface data
//---------------------------------------------------------------------------//

// Quadrature on the measurement surface together with the probe layout used
// to record it: probe 3q is x_q, 3q + 1 is x_q + delta nu_q, 3q + 2 is x_q - delta nu_q.
struct SurfaceProbes
{
  SurfaceQuadrature quad;
  double delta = 0.0;

  std::vector<Vec3> points() const
  {
    std::vector<Vec3> p;
    p.reserve(3 * quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q)
    {
      p.push_back(quad.points[q]);
      p.push_back(quad.points[q] + delta * quad.normals[q]);
      p.push_back(quad.points[q] - delta * quad.normals[q]);
    }
    return p;
  }
};

// Default rules: 20 x 40 latitude-longitude points on a ball (pole towards
// the source), 12 x 12 Gauss points per box face.
inline SurfaceProbes make_surface_probes(const Shape &omega, const SourceBall &src, double delta, int refine = 1)
{
  if (!(delta > 0.0))
    throw DomainError("make_surface_probes: normal offset must be positive");
  SurfaceProbes sp;
  sp.delta = delta;
  if (const auto *b = std::get_if<Ball>(&omega))
  {
    Vec3 pole{1.0, 0.0, 0.0};
    if (const auto *sb = std::get_if<Ball>(&src.geometry); sb && norm(sb->center - b->center) > 0.0)
      pole = sb->center - b->center;
    sp.quad = sphere_quadrature(*b, 20 * refine, 40 * refine, pole);
  }
  else if (const auto *x = std::get_if<AxisBox>(&omega))
    sp.quad = box_quadrature(*x, 12 * refine);
  else
    throw UnsupportedShapeError("measurement surface must be a ball or an axis box");
  return sp;
}

// Sum_q weight_q [dv/dnu w - dw/dnu v](x_q). The form is bilinear and
// vanishes for w = v, so a scattered field gives the same value as the
// total field it was split from.
inline IndicatorCurve surface_indicator(const LaplaceField &lf, const SurfaceProbes &sp, const SourceBall &src,
                                        int order = default_free_field_order)
{
  const std::size_t nq = sp.quad.size();
  const bool paired = lf.normal_derivative.has_value();
  if (lf.probe_count != (paired ? nq : 3 * nq))
    throw DomainError("surface_indicator: probe set does not match the surface quadrature");
  IndicatorCurve c;
  c.taus = lf.taus;
  c.mode = "surface";
  c.values.assign(lf.taus.size(), 0.0);
  c.floor.assign(lf.taus.size(), 0.0);
  for (std::size_t j = 0; j < lf.taus.size(); ++j)
  {
    const double tau = lf.taus[j];
    double acc = 0.0;
    double mag = 0.0;
    for (std::size_t q = 0; q < nq; ++q)
    {
      const Vec3 &x = sp.quad.points[q];
      const double v = eval_v(src, x, tau, order);
      const double dv = dot(eval_grad_v(src, x, tau, order), sp.quad.normals[q]);
      double w, dw;
      if (paired)
      {
        w = lf.at(q, j);
        dw = lf.dn(q, j);
      }
      else
      {
        w = lf.at(3 * q, j);
        dw = exp_fitted_derivative(lf.at(3 * q + 1, j), lf.at(3 * q + 2, j), sp.delta, tau);
      }
      acc += sp.quad.weights[q] * (dv * w - dw * v);
      // Size of the terms that cancel when the total field is used.
      mag += sp.quad.weights[q] * 2.0 * std::abs(dv * v);
    }
    c.values[j] = acc;
    c.floor[j] = roundoff_factor * mag;
  }
  return c;
}

//---------------------------------------------------------------------------//
// Back-scattering data
//---------------------------------------------------------------------------//

// Quadrature for int_B f(y) g(y) dy: probe points with weights that already
// include the local volume element (f = amplitude on B).
struct BackscatterProbes
{
  std::vector<Vec3> points;
  std::vector<double> weights;
};

inline double source_volume(const SourceBall &src)
{
  if (const auto *b = std::get_if<Ball>(&src.geometry))
    return 4.0 / 3.0 * std::numbers::pi * b->radius * b->radius * b->radius;
  if (const auto *i = std::get_if<Interval1D>(&src.geometry))
    return i->hi - i->lo;
  throw UnsupportedShapeError("source must be a ball or an interval");
}

// Gauss points across a 1D source interval.
inline BackscatterProbes backscatter_probes_1d(const SourceBall &src, int order = 24)
{
  const auto &iv = detail::source_interval(src, "backscatter_probes_1d");
  const GaussRule &rule = gauss_legendre(order);
  const double half = 0.5 * (iv.hi - iv.lo);
  BackscatterProbes bp;
  for (int i = 0; i < order; ++i)
  {
    bp.points.push_back({iv.lo + half * (1.0 + rule.nodes[i]), 0.0, 0.0});
    bp.weights.push_back(half * rule.weights[i]);
  }
  return bp;
}

// I(tau) = int_B f (w - v) dy, or int_B f w_s dy for a scattered field.
inline IndicatorCurve backscatter_indicator(const LaplaceField &lf, const BackscatterProbes &bp,
                                            const SourceBall &src, FieldKind kind = FieldKind::total)
{
  if (lf.probe_count != bp.points.size() || bp.weights.size() != bp.points.size())
    throw DomainError("backscatter_indicator: probe set does not match the quadrature");
  double covered = 0.0;
  for (double w : bp.weights)
    covered += w;
  if (std::abs(covered / source_volume(src) - 1.0) > 0.05)
    throw DomainError("backscatter_indicator: probe set does not cover the source ball");
  IndicatorCurve c;
  c.taus = lf.taus;
  c.mode = "backscatter";
  c.values.assign(lf.taus.size(), 0.0);
  c.floor.assign(lf.taus.size(), 0.0);
  const double amp = src.amplitude;
  for (std::size_t j = 0; j < lf.taus.size(); ++j)
  {
    const double tau = lf.taus[j];
    double acc = 0.0;
    double mag = 0.0;
    for (std::size_t q = 0; q < bp.points.size(); ++q)
    {
      const double v = free_field_value(src, bp.points[q], tau);
      const double w = lf.at(q, j);
      acc += bp.weights[q] * amp * (kind == FieldKind::total ? w - v : w);
      mag += bp.weights[q] * std::abs(amp * v);
    }
    c.values[j] = acc;
    c.floor[j] = roundoff_factor * mag;
  }
  return c;
}

//---------------------------------------------------------------------------//
// One-dimensional surface data
//---------------------------------------------------------------------------//

// Probes -delta, 0, +delta around the observation point.
inline std::vector<double> observation_probes_1d(double delta) { return {0.0, delta, -delta}; }

// -v'(0) w(0) + w'(0) v(0) from a field recorded at observation_probes_1d.
inline IndicatorCurve indicator_curve_1d(const LaplaceField &lf, double delta, const SourceBall &src)
{
  if (lf.probe_count != 3)
    throw DomainError("indicator_curve_1d: expected probes at 0, +delta, -delta");
  IndicatorCurve c;
  c.taus = lf.taus;
  c.mode = "1d";
  c.values.assign(lf.taus.size(), 0.0);
  c.floor.assign(lf.taus.size(), 0.0);
  for (std::size_t j = 0; j < lf.taus.size(); ++j)
  {
    const double tau = lf.taus[j];
    const ValueDerivative v = eval_v_1d(src, 0.0, tau);
    const double w = lf.at(0, j);
    const double dw = exp_fitted_derivative(lf.at(1, j), lf.at(2, j), delta, tau);
    c.values[j] = indicator_1d(w, dw, v.value, v.derivative);
    c.floor[j] = roundoff_factor * 2.0 * std::abs(v.value * v.derivative);
  }
  return c;
}

//---------------------------------------------------------------------------//

// |I_surface - I_backscatter| per tau.
inline std::vector<double> consistency_gap(const IndicatorCurve &a, const IndicatorCurve &b)
{
  if (a.taus != b.taus)
    throw DomainError("consistency_gap: curves use different tau grids");
  std::vector<double> gap(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    gap[j] = std::abs(a.values[j] - b.values[j]);
  return gap;
}

// Pointwise maximum of two floors; the control curve contributes |I_control|.
inline std::vector<double> combine_floor(const IndicatorCurve &curve, const IndicatorCurve *control)
{
  std::vector<double> f = curve.floor.empty() ? std::vector<double>(curve.size(), 0.0) : curve.floor;
  if (control)
  {
    if (control->taus != curve.taus)
      throw DomainError("combine_floor: control curve uses a different tau grid");
    for (std::size_t j = 0; j < f.size(); ++j)
      f[j] = std::max(f[j], std::abs(control->values[j]));
  }
  return f;
}

}  // namespace enclosure
