// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/vec3.hpp"

namespace enclosure
{

//---------------------------------------------------------------------------//
// Shapes
//---------------------------------------------------------------------------//

struct Ball
{
  Vec3 center;
  double radius = 1.0;
};

struct AxisBox
{
  Vec3 lo;
  Vec3 hi;
};

// The open half-line ]a, +inf[ used as the obstacle of the one-dimensional problem.
struct HalfLine1D
{
  double a = 0.0;
};

struct Interval1D
{
  double lo = 0.0;
  double hi = 1.0;
};

using Shape = std::variant<Ball, AxisBox, HalfLine1D, Interval1D>;

inline int dimension_of(const Shape &s)
{
  return std::holds_alternative<Ball>(s) || std::holds_alternative<AxisBox>(s) ? 3 : 1;
}

inline std::string shape_name(const Shape &s)
{
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>)
          return "ball";
        else if constexpr (std::is_same_v<T, AxisBox>)
          return "box";
        else if constexpr (std::is_same_v<T, HalfLine1D>)
          return "half_line";
        else
          return "interval";
      },
      s);
}

inline void validate_shape(const Shape &s)
{
  std::visit(
      [](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>)
        {
          if (!(v.radius > 0.0))
            throw ConfigError("ball radius must be positive");
        }
        else if constexpr (std::is_same_v<T, AxisBox>)
        {
          for (int i = 0; i < 3; ++i)
            if (!(v.lo[i] < v.hi[i]))
              throw ConfigError("box corners must be ordered component-wise");
        }
        else if constexpr (std::is_same_v<T, Interval1D>)
        {
          if (!(v.lo < v.hi))
            throw ConfigError("interval requires lo < hi");
        }
        else
        {
          if (!std::isfinite(v.a))
            throw ConfigError("half-line endpoint must be finite");
        }
      },
      s);
}

inline Ball make_ball(const Vec3 &center, double radius)
{
  Ball b{center, radius};
  validate_shape(b);
  return b;
}

inline Interval1D make_interval(double lo, double hi)
{
  Interval1D i{lo, hi};
  validate_shape(i);
  return i;
}

inline AxisBox make_box(const Vec3 &lo, const Vec3 &hi)
{
  AxisBox b{lo, hi};
  validate_shape(b);
  return b;
}

//---------------------------------------------------------------------------//
// Point queries
//---------------------------------------------------------------------------//

inline double distance_to_box(const Vec3 &p, const AxisBox &b)
{
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    const double g = std::max({0.0, b.lo[i] - p[i], p[i] - b.hi[i]});
    acc += g * g;
  }
  return std::sqrt(acc);
}

// Euclidean distance from a point to the boundary surface of a 3D shape.
inline double distance_to_surface(const Vec3 &p, const Shape &s)
{
  if (const auto *b = std::get_if<Ball>(&s))
    return std::abs(norm(p - b->center) - b->radius);
  if (const auto *b = std::get_if<AxisBox>(&s))
  {
    const double out = distance_to_box(p, *b);
    if (out > 0.0)
      return out;
    double in = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
      in = std::min({in, p[i] - b->lo[i], b->hi[i] - p[i]});
    return in;
  }
  throw UnsupportedShapeError("distance_to_surface: " + shape_name(s) + " is not a 3D shape");
}

// Open-set membership.
inline bool contains(const Shape &s, const Vec3 &p)
{
  if (const auto *b = std::get_if<Ball>(&s))
    return norm(p - b->center) < b->radius;
  if (const auto *b = std::get_if<AxisBox>(&s))
  {
    for (int i = 0; i < 3; ++i)
      if (!(p[i] > b->lo[i] && p[i] < b->hi[i]))
        return false;
    return true;
  }
  throw UnsupportedShapeError("contains: " + shape_name(s) + " is not a 3D shape");
}

inline bool contains(const Shape &s, double x)
{
  if (const auto *h = std::get_if<HalfLine1D>(&s))
    return x > h->a;
  if (const auto *i = std::get_if<Interval1D>(&s))
    return x > i->lo && x < i->hi;
  throw UnsupportedShapeError("contains: " + shape_name(s) + " is not a 1D shape");
}

// Outward unit normal at the boundary point closest to p.
inline Vec3 outward_normal_near(const Shape &s, const Vec3 &p)
{
  if (const auto *b = std::get_if<Ball>(&s))
  {
    const Vec3 d = p - b->center;
    return norm(d) > 0.0 ? normalized(d) : Vec3{1.0, 0.0, 0.0};
  }
  if (const auto *b = std::get_if<AxisBox>(&s))
  {
    // Nearest face, measured to the face plane.
    int best_axis = 0;
    double best_sign = 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
    {
      const double dl = std::abs(p[i] - b->lo[i]);
      const double dh = std::abs(p[i] - b->hi[i]);
      if (dl < best)
      {
        best = dl;
        best_axis = i;
        best_sign = -1.0;
      }
      if (dh < best)
      {
        best = dh;
        best_axis = i;
        best_sign = 1.0;
      }
    }
    Vec3 n;
    n[best_axis] = best_sign;
    return n;
  }
  throw UnsupportedShapeError("outward_normal_near: " + shape_name(s) + " is not a 3D shape");
}

// Axis-aligned bounding box of a 3D shape.
inline AxisBox bounding_box(const Shape &s)
{
  if (const auto *b = std::get_if<Ball>(&s))
  {
    const Vec3 r{b->radius, b->radius, b->radius};
    return {b->center - r, b->center + r};
  }
  if (const auto *b = std::get_if<AxisBox>(&s))
    return *b;
  throw UnsupportedShapeError("bounding_box: " + shape_name(s) + " is not a 3D shape");
}

//---------------------------------------------------------------------------//
// Set distances
//---------------------------------------------------------------------------//

namespace detail
{
inline double dist_1d(const Shape &a, const Shape &c)
{
  auto lo_hi = [](const Shape &s) -> std::pair<double, double> {
    if (const auto *h = std::get_if<HalfLine1D>(&s))
      return {h->a, std::numeric_limits<double>::infinity()};
    const auto &i = std::get<Interval1D>(s);
    return {i.lo, i.hi};
  };
  const auto [alo, ahi] = lo_hi(a);
  const auto [clo, chi] = lo_hi(c);
  return std::max({0.0, clo - ahi, alo - chi});
}

inline double dist_3d(const Shape &a, const Shape &c)
{
  const auto *ba = std::get_if<Ball>(&a);
  const auto *bc = std::get_if<Ball>(&c);
  const auto *xa = std::get_if<AxisBox>(&a);
  const auto *xc = std::get_if<AxisBox>(&c);
  if (ba && bc)
    return std::max(0.0, norm(ba->center - bc->center) - ba->radius - bc->radius);
  if (ba && xc)
    return std::max(0.0, distance_to_box(ba->center, *xc) - ba->radius);
  if (xa && bc)
    return std::max(0.0, distance_to_box(bc->center, *xa) - bc->radius);
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    const double g = std::max({0.0, xc->lo[i] - xa->hi[i], xa->lo[i] - xc->hi[i]});
    acc += g * g;
  }
  return std::sqrt(acc);
}
}  // namespace detail

// Euclidean distance between two sets; zero when the closures intersect.
inline double dist_sets(const Shape &a, const Shape &c)
{
  const int da = dimension_of(a);
  if (da != dimension_of(c))
    throw UnsupportedShapeError("dist_sets: unsupported combination " + shape_name(a) + "/" +
                                shape_name(c) + " (mixed dimensions)");
  return da == 1 ? detail::dist_1d(a, c) : detail::dist_3d(a, c);
}

// closure(inner) is contained in the open set outer.
inline bool closure_inside(const Shape &inner, const Shape &outer)
{
  if (dimension_of(inner) != 3 || dimension_of(outer) != 3)
    throw UnsupportedShapeError("closure_inside: 3D shapes required");
  const AxisBox ib = bounding_box(inner);
  if (const auto *ob = std::get_if<Ball>(&outer))
  {
    if (const auto *b = std::get_if<Ball>(&inner))
      return norm(b->center - ob->center) + b->radius < ob->radius;
    // Box: all corners strictly inside the ball.
    for (int m = 0; m < 8; ++m)
    {
      const Vec3 p{(m & 1) ? ib.hi.x : ib.lo.x, (m & 2) ? ib.hi.y : ib.lo.y,
                   (m & 4) ? ib.hi.z : ib.lo.z};
      if (!(norm(p - ob->center) < ob->radius))
        return false;
    }
    return true;
  }
  const auto &ob = std::get<AxisBox>(outer);
  for (int i = 0; i < 3; ++i)
    if (!(ib.lo[i] > ob.lo[i] && ib.hi[i] < ob.hi[i]))
      return false;
  return true;
}

//---------------------------------------------------------------------------//
// Scene description
//---------------------------------------------------------------------------//

// Scalar coefficient: a constant or a function of position.
class ScalarField
{
public:
  using Function = std::function<double(const Vec3 &)>;

  ScalarField(double c = 0.0) : value_(c) {}
  ScalarField(Function f) : value_(std::move(f)) {}

  double operator()(const Vec3 &x) const
  {
    if (const auto *c = std::get_if<double>(&value_))
      return *c;
    return std::get<Function>(value_)(x);
  }

  bool is_constant() const { return std::holds_alternative<double>(value_); }
  double constant() const { return std::get<double>(value_); }

private:
  std::variant<double, Function> value_;
};

enum class Mode
{
  robin,
  refractive,
  free
};

enum class DataMode
{
  surface,
  backscatter
};

inline std::string to_string(Mode m)
{
  switch (m)
  {
  case Mode::robin:
    return "robin";
  case Mode::refractive:
    return "refractive";
  case Mode::free:
    return "free";
  }
  return "?";
}

inline std::string to_string(DataMode m) { return m == DataMode::surface ? "surface" : "backscatter"; }

struct SceneSpec
{
  int dimension = 3;
  Mode mode = Mode::robin;
  Shape obstacle = Ball{};
  Shape source = Ball{};
  // Measurement surface. In 1D it is implicitly ]0, +inf[ with boundary {0}.
  std::optional<Shape> surface;
  ScalarField gamma{0.0};
  ScalarField beta{0.0};
  // Coefficient inside the obstacle for the refractive mode (1 outside).
  ScalarField alpha{1.0};
};

// Measurement surface actually used: the configured one in 3D, ]0, inf[ in 1D.
inline std::optional<Shape> effective_surface(const SceneSpec &scene)
{
  if (scene.dimension == 1)
    return Shape{HalfLine1D{0.0}};
  return scene.surface;
}

namespace detail
{
// Sample points on the boundary of a 3D shape, roughly n of them.
inline std::vector<Vec3> surface_samples(const Shape &s, int n)
{
  std::vector<Vec3> pts;
  if (const auto *b = std::get_if<Ball>(&s))
  {
    // Fibonacci lattice.
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i)
    {
      const double zc = 1.0 - (2.0 * i + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double phi = golden * i;
      pts.push_back(b->center + b->radius * Vec3{r * std::cos(phi), r * std::sin(phi), zc});
    }
    return pts;
  }
  if (const auto *b = std::get_if<AxisBox>(&s))
  {
    const int per_face = std::max(1, n / 6);
    const int m = std::max(2, static_cast<int>(std::ceil(std::sqrt(per_face))));
    for (int axis = 0; axis < 3; ++axis)
    {
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      for (double side : {b->lo[axis], b->hi[axis]})
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
          {
            Vec3 p;
            p[axis] = side;
            p[u] = b->lo[u] + (b->hi[u] - b->lo[u]) * i / (m - 1);
            p[v] = b->lo[v] + (b->hi[v] - b->lo[v]) * j / (m - 1);
            pts.push_back(p);
          }
    }
    return pts;
  }
  throw UnsupportedShapeError("surface sampling: " + shape_name(s) + " is not a 3D shape");
}

inline bool collinear_balls(const Ball &a, const Ball &b, const Ball &c, Vec3 &axis)
{
  const Vec3 ab = b.center - a.center;
  const Vec3 ac = c.center - a.center;
  const Vec3 bc = c.center - b.center;
  const double scale = std::max({norm(ab), norm(ac), 1.0});
  const Vec3 cr{ab.y * ac.z - ab.z * ac.y, ab.z * ac.x - ab.x * ac.z, ab.x * ac.y - ab.y * ac.x};
  if (norm(cr) > 1e-12 * scale * scale)
    return false;
  // Axis through D's centre (b); any direction if everything is concentric.
  if (norm(ab) > 0.0)
    axis = normalized(ab);
  else if (norm(bc) > 0.0)
    axis = normalized(bc);
  else
    axis = {1.0, 0.0, 0.0};
  return true;
}
}  // namespace detail

// Default surface sampling density of broken_path_length.
inline constexpr int default_broken_path_samples = 1000;

// inf over x in dB, y in dD, z in dOmega of |x - y| + |y - z|.
//
// The inner infima over x and z are exact point-to-surface distances, so only
// dD is searched. For three balls with collinear centres the search reduces
// to the polar angle about the axis and is solved to ~1e-12; otherwise dD is
// sampled with `samples` points.
inline double broken_path_length(const Shape &source, const Shape &obstacle, const Shape &surface,
                                 int samples = default_broken_path_samples)
{
  for (const Shape *s : {&source, &obstacle, &surface})
    if (dimension_of(*s) != 3)
      throw UnsupportedShapeError("broken_path_length: 3D shapes required");
  auto cost = [&](const Vec3 &y) {
    return distance_to_surface(y, source) + distance_to_surface(y, surface);
  };

  const auto *bb = std::get_if<Ball>(&source);
  const auto *bd = std::get_if<Ball>(&obstacle);
  const auto *bo = std::get_if<Ball>(&surface);
  Vec3 axis;
  if (bb && bd && bo && detail::collinear_balls(*bb, *bd, *bo, axis))
  {
    const Vec3 perp = std::abs(axis.x) < 0.9 ? normalized(Vec3{0, axis.z, -axis.y})
                                             : normalized(Vec3{-axis.z, 0, axis.x});
    auto at = [&](double theta) {
      return cost(bd->center + bd->radius * (std::cos(theta) * axis + std::sin(theta) * perp));
    };
    const int n = 2000;
    int best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i)
    {
      const double c = at(std::numbers::pi * i / n);
      if (c < best)
      {
        best = c;
        best_i = i;
      }
    }
    // Golden-section refinement on the bracketing cell.
    double lo = std::numbers::pi * std::max(0, best_i - 1) / n;
    double hi = std::numbers::pi * std::min(n, best_i + 1) / n;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it)
    {
      const double m1 = hi - g * (hi - lo);
      const double m2 = lo + g * (hi - lo);
      if (at(m1) < at(m2))
        hi = m2;
      else
        lo = m1;
    }
    return std::min(best, at(0.5 * (lo + hi)));
  }

  double best = std::numeric_limits<double>::infinity();
  for (const Vec3 &y : detail::surface_samples(obstacle, samples))
    best = std::min(best, cost(y));
  return best;
}

//---------------------------------------------------------------------------//
// Observation-time thresholds and scene validation
//---------------------------------------------------------------------------//

// Strict lower bound on the observation time T for the given data mode:
// 2 dist(D,B) - dist(Omega,B) for surface data, 2 dist(D,B) for back-scattering.
inline double min_observation_time(const SceneSpec &scene, DataMode mode)
{
  const double d_db = dist_sets(scene.obstacle, scene.source);
  if (mode == DataMode::backscatter)
    return 2.0 * d_db;
  const auto surface = effective_surface(scene);
  if (!surface)
    throw ConfigError("surface data mode requires a measurement surface");
  return 2.0 * d_db - dist_sets(*surface, scene.source);
}

namespace detail
{
inline std::vector<Vec3> coefficient_probe_points(const Shape &s)
{
  if (dimension_of(s) == 3)
    return surface_samples(s, 200);
  return {};
}
}  // namespace detail

// Checks every standing hypothesis; throws ConfigError naming the violated one.
inline void validate_scene(const SceneSpec &scene, DataMode mode)
{
  if (scene.dimension != 1 && scene.dimension != 3)
    throw ConfigError("dimension must be 1 or 3");
  validate_shape(scene.obstacle);
  validate_shape(scene.source);
  if (dimension_of(scene.obstacle) != scene.dimension || dimension_of(scene.source) != scene.dimension)
    throw ConfigError("obstacle and source must match the scene dimension");

  if (scene.dimension == 1)
  {
    const auto *d = std::get_if<HalfLine1D>(&scene.obstacle);
    const auto *b = std::get_if<Interval1D>(&scene.source);
    if (!d)
      throw ConfigError("1D obstacle must be a half-line ]a, inf[");
    if (!b)
      throw ConfigError("1D source must be an interval");
    if (!(d->a > 0.0))
      throw ConfigError("1D normalization requires a > 0 (obstacle to the right of the observation point 0)");
    if (!(b->hi < 0.0))
      throw ConfigError("1D normalization requires supp f inside ]-inf, 0[");
    if (scene.mode == Mode::refractive)
      throw ConfigError("1D refractive obstacles are not supported");
  }
  else
  {
    if (!std::holds_alternative<Ball>(scene.source))
      throw ConfigError("3D source must be a ball");
    if (std::holds_alternative<HalfLine1D>(scene.obstacle) ||
        std::holds_alternative<Interval1D>(scene.obstacle))
      throw ConfigError("3D obstacle must be a ball or a box");
  }

  if (!(dist_sets(scene.source, scene.obstacle) > 0.0))
    throw ConfigError("closure(B) ∩ closure(D) ≠ ∅ violates the hypothesis that the source ball "
                      "is separated from the obstacle");

  if (mode == DataMode::surface && scene.dimension == 3)
  {
    if (!scene.surface)
      throw ConfigError("surface data mode requires a measurement surface Omega");
    validate_shape(*scene.surface);
    if (dimension_of(*scene.surface) != 3)
      throw ConfigError("measurement surface must be a 3D ball or box");
    if (!closure_inside(scene.obstacle, *scene.surface))
      throw ConfigError("closure(D) ⊄ Omega violates the surface-data hypothesis that the "
                        "obstacle lies inside the measurement surface");
    if (!(dist_sets(scene.source, *scene.surface) > 0.0))
      throw ConfigError("closure(B) ∩ closure(Omega) ≠ ∅ violates the surface-data hypothesis "
                        "that the source lies outside the measurement surface");
  }

  if (scene.mode == Mode::robin)
  {
    auto check_gamma = [](double g) {
      if (!(g >= 0.0) || !std::isfinite(g))
        throw ConfigError("gamma < 0 violates the dissipativity assumption gamma >= 0");
    };
    if (scene.gamma.is_constant())
      check_gamma(scene.gamma.constant());
    else
      for (const Vec3 &p : detail::coefficient_probe_points(scene.obstacle))
        check_gamma(scene.gamma(p));
  }
  if (scene.mode == Mode::refractive)
  {
    auto check_alpha = [](double a) {
      if (!(a > 0.0) || !std::isfinite(a))
        throw ConfigError("alpha must satisfy alpha >= C > 0");
    };
    if (scene.alpha.is_constant())
      check_alpha(scene.alpha.constant());
    else
    {
      const AxisBox bb = bounding_box(scene.obstacle);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          for (int k = 0; k < 5; ++k)
          {
            const Vec3 p{bb.lo.x + (bb.hi.x - bb.lo.x) * (i + 0.5) / 5,
                         bb.lo.y + (bb.hi.y - bb.lo.y) * (j + 0.5) / 5,
                         bb.lo.z + (bb.hi.z - bb.lo.z) * (k + 0.5) / 5};
            if (contains(scene.obstacle, p))
              check_alpha(scene.alpha(p));
          }
    }
  }
}

}  // namespace enclosure
