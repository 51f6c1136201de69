// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"

namespace enclosure
{

struct TauWindow
{
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr TauWindow default_window_1d{6.0, 12.0};
inline constexpr TauWindow default_window_3d{4.0, 8.0};

// log|I| = c + s tau                  (exponential)
// log|I| = c + s tau + p log tau      (power): removes the bias of an
//                                      algebraic prefactor tau^p exactly
enum class DecayModel
{
  exponential,
  power
};

inline std::string to_string(DecayModel m) { return m == DecayModel::exponential ? "exponential" : "power"; }

struct DistanceFit
{
  double d_hat = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double power = 0.0;
  double residual = 0.0;   // RMS of log|I| residuals
  double pointwise = 0.0;  // -(1/2 tau) log|I(tau)| at the largest tau in the window
  TauWindow window;
  std::size_t points = 0;
  DecayModel model = DecayModel::exponential;
};

namespace detail
{
inline std::vector<std::size_t> window_indices(const IndicatorCurve &c, TauWindow w)
{
  if (!(w.hi > w.lo))
    throw FitError(FitError::Kind::window, "regression window must satisfy lo < hi");
  std::vector<std::size_t> idx;
  const double tol = 1e-9 * std::max(1.0, std::abs(w.hi));
  for (std::size_t j = 0; j < c.taus.size(); ++j)
    if (c.taus[j] >= w.lo - tol && c.taus[j] <= w.hi + tol)
      idx.push_back(j);
  return idx;
}

// Least squares for a small dense system by normal equations and Gaussian
// elimination with partial pivoting. rows[i] holds the basis values.
template <std::size_t N>
std::array<double, N> least_squares(const std::vector<std::array<double, N>> &rows, const std::vector<double> &rhs)
{
  std::array<std::array<double, N + 1>, N> m{};
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < N; ++i)
    {
      for (std::size_t k = 0; k < N; ++k)
        m[i][k] += rows[r][i] * rows[r][k];
      m[i][N] += rows[r][i] * rhs[r];
    }
  for (std::size_t col = 0; col < N; ++col)
  {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col]))
        piv = r;
    std::swap(m[col], m[piv]);
    if (m[col][col] == 0.0)
      throw FitError(FitError::Kind::window, "singular regression system");
    for (std::size_t r = 0; r < N; ++r)
    {
      if (r == col)
        continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k <= N; ++k)
        m[r][k] -= f * m[col][k];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = 0; i < N; ++i)
    x[i] = m[i][N] / m[i][i];
  return x;
}
}  // namespace detail

// d = -slope / 2 from a least-squares fit of log|I(tau)| over the window.
inline DistanceFit estimate_distance(const IndicatorCurve &curve, TauWindow window,
                                     DecayModel model = DecayModel::exponential)
{
  const auto idx = detail::window_indices(curve, window);
  const std::size_t min_points = model == DecayModel::exponential ? 6 : 7;
  if (idx.size() < min_points)
    throw FitError(FitError::Kind::window,
                   "regression window holds " + std::to_string(idx.size()) + " tau points, needs " +
                       std::to_string(min_points));
  std::vector<double> y;
  std::vector<double> x;
  for (std::size_t j : idx)
  {
    const double v = curve.values[j];
    if (!(v != 0.0) || !std::isfinite(v))
      throw FitError(FitError::Kind::window, "indicator is zero or non-finite inside the regression window");
    y.push_back(std::log(std::abs(v)));
    x.push_back(curve.taus[j]);
  }

  DistanceFit fit;
  fit.model = model;
  fit.window = window;
  fit.points = idx.size();
  std::vector<double> model_y(y.size());
  if (model == DecayModel::exponential)
  {
    std::vector<std::array<double, 2>> rows;
    for (double t : x)
      rows.push_back({1.0, t});
    const auto c = detail::least_squares<2>(rows, y);
    fit.intercept = c[0];
    fit.slope = c[1];
    for (std::size_t i = 0; i < x.size(); ++i)
      model_y[i] = c[0] + c[1] * x[i];
  }
  else
  {
    std::vector<std::array<double, 3>> rows;
    for (double t : x)
      rows.push_back({1.0, t, std::log(t)});
    const auto c = detail::least_squares<3>(rows, y);
    fit.intercept = c[0];
    fit.slope = c[1];
    fit.power = c[2];
    for (std::size_t i = 0; i < x.size(); ++i)
      model_y[i] = c[0] + c[1] * x[i] + c[2] * std::log(x[i]);
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    ss += (y[i] - model_y[i]) * (y[i] - model_y[i]);
  fit.residual = std::sqrt(ss / y.size());
  fit.pointwise = -y.back() / (2.0 * x.back());
  if (!(fit.slope < 0.0))
    throw FitError(FitError::Kind::no_decay,
                   "indicator does not decay in tau (T below the observation threshold, or no obstacle)");
  fit.d_hat = -0.5 * fit.slope;
  return fit;
}

// I(tau) / moment(tau)^2. The moment has no exponential factor, so the decay
// rate is unchanged; what goes is the algebraic prefactor set by the source
// shape, which is far from its asymptote when rho tau is of order one.
inline IndicatorCurve normalize_by_moment(const IndicatorCurve &curve, const SourceBall &src)
{
  IndicatorCurve out = curve;
  for (std::size_t j = 0; j < curve.size(); ++j)
  {
    const double m = source_moment(src, curve.taus[j]);
    out.values[j] = curve.values[j] / (m * m);
    if (!out.floor.empty())
      out.floor[j] = curve.floor[j] / (m * m);
  }
  return out;
}

enum class SignClass
{
  positive,
  negative,
  indeterminate
};

inline std::string to_string(SignClass s)
{
  switch (s)
  {
  case SignClass::positive:
    return "+";
  case SignClass::negative:
    return "-";
  case SignClass::indeterminate:
    return "indeterminate";
  }
  return "?";
}

// "A1-like"/"A2-like" for boundary obstacles, "B1-like"/"B2-like" for
// refractive ones.
inline std::string sign_label(SignClass s, Mode mode)
{
  if (s == SignClass::indeterminate)
    return "indeterminate";
  const char *family = mode == Mode::refractive ? "B" : "A";
  return std::string(family) + (s == SignClass::positive ? "1" : "2") + "-like";
}

// + when I > 10 floor at every tau of the upper half of the window, - when
// I < -10 floor there, indeterminate otherwise.
inline SignClass classify_sign(const IndicatorCurve &curve, const std::vector<double> &floor, TauWindow window)
{
  if (floor.size() != curve.size())
    throw DomainError("classify_sign: noise floor does not match the curve");
  const double mid = 0.5 * (window.lo + window.hi);
  bool any = false, pos = true, neg = true;
  for (std::size_t j : detail::window_indices(curve, window))
  {
    if (curve.taus[j] < mid - 1e-12)
      continue;
    any = true;
    const double v = curve.values[j];
    const double limit = 10.0 * floor[j];
    pos = pos && v > limit && v > 0.0;
    neg = neg && v < -limit && v < 0.0;
  }
  if (!any)
    return SignClass::indeterminate;
  if (pos)
    return SignClass::positive;
  if (neg)
    return SignClass::negative;
  return SignClass::indeterminate;
}

inline SignClass classify_sign(const IndicatorCurve &curve, double floor, TauWindow window)
{
  return classify_sign(curve, std::vector<double>(curve.size(), floor), window);
}

//---------------------------------------------------------------------------//
// Half-line coefficients
//---------------------------------------------------------------------------//

// Normalized half-line indicator R = e^{2 tau d} I / moment^2 in closed form:
//   R = -1/(2 tau) + 1/((gamma + 1) tau + beta)
//     = c1/tau + c2/tau^2 sum_{n>=0} (-beta/(gamma + 1))^n tau^{-n},
//   c1 = (1 - gamma) / (2 (gamma + 1)),  c2 = -beta / (gamma + 1)^2.
inline double normalized_indicator_1d(double tau, double gamma, double beta)
{
  const double den = (gamma + 1.0) * tau + beta;
  if (std::abs(den) < 1e-12 * std::max(1.0, tau))
    throw PoleError("normalized_indicator_1d: (gamma + 1) tau + beta = 0");
  return -0.5 / tau + 1.0 / den;
}

// Terms of order tau^{-3} and beyond in the expansion above.
inline double normalized_tail_1d(double tau, double gamma, double beta)
{
  const double g1 = gamma + 1.0;
  return normalized_indicator_1d(tau, gamma, beta) - (1.0 - gamma) / (2.0 * g1 * tau) + beta / (g1 * g1 * tau * tau);
}

struct CoefficientFit
{
  double gamma_hat = 0.0;
  double beta_hat = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;  // weighted RMS of the final fit
  int iterations = 0;
  bool determinate = true;
};

struct CoefficientOptions
{
  // Subtract the tau^{-3}.. tail implied by the current estimate and refit.
  bool tail_correction = true;
  int max_iterations = 100;
  double tolerance = 1e-13;
  double diverging_tolerance = 1e-6;
};

// Fit R(tau) ~ c1/tau + c2/tau^2 with weights tau^2 and invert
//   gamma = (1 - 2 c1) / (1 + 2 c1),  beta = -c2 (gamma + 1)^2.
inline CoefficientFit recover_gamma_beta_1d(const IndicatorCurve &curve, const std::function<double(double)> &moment,
                                            double d, TauWindow window, const CoefficientOptions &opt = {})
{
  const auto idx = detail::window_indices(curve, window);
  if (idx.size() < 3)
    throw FitError(FitError::Kind::window, "coefficient fit needs at least 3 tau points");
  std::vector<double> t, r;
  for (std::size_t j : idx)
  {
    const double tau = curve.taus[j];
    const double m = moment(tau);
    if (!(m != 0.0) || !std::isfinite(curve.values[j]))
      throw FitError(FitError::Kind::window, "zero source moment or non-finite indicator in window");
    t.push_back(tau);
    r.push_back(std::exp(2.0 * tau * d) * curve.values[j] / (m * m));
  }

  CoefficientFit out;
  std::vector<double> tail(t.size(), 0.0);
  const int rounds = opt.tail_correction ? opt.max_iterations : 1;
  for (int it = 0; it < rounds; ++it)
  {
    // Minimize sum tau^2 (R - c1/tau - c2/tau^2)^2 = sum (tau R - c1 - c2/tau)^2.
    std::vector<std::array<double, 2>> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
      rows.push_back({1.0, 1.0 / t[i]});
      rhs.push_back(t[i] * (r[i] - tail[i]));
    }
    const auto c = detail::least_squares<2>(rows, rhs);
    const double den = 1.0 + 2.0 * c[0];
    if (std::abs(den) < opt.diverging_tolerance)
      throw FitError(FitError::Kind::diverging_gamma, "1 + 2 c1 vanishes: gamma estimate diverges");
    const double g = (1.0 - 2.0 * c[0]) / den;
    const double b = -c[1] * (g + 1.0) * (g + 1.0);
    const bool converged = it > 0 && std::abs(g - out.gamma_hat) <= opt.tolerance * std::max(1.0, std::abs(g)) &&
                           std::abs(b - out.beta_hat) <= opt.tolerance * std::max(1.0, std::abs(b));
    out.c1 = c[0];
    out.c2 = c[1];
    out.gamma_hat = g;
    out.beta_hat = b;
    out.iterations = it + 1;
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
      const double e = rhs[i] - c[0] - c[1] / t[i];
      ss += e * e;
    }
    out.residual = std::sqrt(ss / t.size());
    if (converged || g + 1.0 <= 0.0)
      break;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
      try
      {
        tail[i] = normalized_tail_1d(t[i], g, b);
      }
      catch (const PoleError &)
      {
        tail[i] = 0.0;
      }
    }
  }
  // Standing assumption gamma >= 0.
  if (out.gamma_hat < -1e-6)
    out.determinate = false;
  else if (out.gamma_hat < 0.0)
    out.gamma_hat = 0.0;
  return out;
}

}  // namespace enclosure
