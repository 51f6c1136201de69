// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/sources.hpp"
#include "enclosure/trace.hpp"
#include "enclosure/vec3.hpp"

namespace enclosure
{

// Uniform node grid: node (i, j, k) sits at origin + h (i, j, k).
struct Grid3D
{
  Vec3 origin;
  double h = 0.0;
  std::array<std::size_t, 3> n{0, 0, 0};

  std::size_t size() const { return n[0] * n[1] * n[2]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + n[0] * (j + n[1] * k); }
  Vec3 node(std::size_t i, std::size_t j, std::size_t k) const
  {
    return {origin.x + h * static_cast<double>(i), origin.y + h * static_cast<double>(j),
            origin.z + h * static_cast<double>(k)};
  }
  Vec3 node(std::size_t idx) const
  {
    const std::size_t i = idx % n[0];
    const std::size_t j = (idx / n[0]) % n[1];
    return node(i, j, idx / (n[0] * n[1]));
  }
  AxisBox box() const { return {origin, node(n[0] - 1, n[1] - 1, n[2] - 1)}; }
};

// Grid covering `hull` plus a margin wider than T/2, so that nothing reflected
// at the outer (Dirichlet) faces can return to the hull before T. Node
// coordinates are integer multiples of h.
inline Grid3D make_causal_grid(const AxisBox &hull, double h, double T, double extra_cells = 4.0)
{
  if (!(h > 0.0))
    throw ConfigError("grid spacing h must be positive");
  if (!(T > 0.0))
    throw ConfigError("observation time T must be positive");
  const double margin = 0.5 * T + extra_cells * h;
  Grid3D g;
  g.h = h;
  for (int a = 0; a < 3; ++a)
  {
    const double lo = std::floor((hull.lo[a] - margin) / h);
    const double hi = std::ceil((hull.hi[a] + margin) / h);
    g.origin[a] = lo * h;
    g.n[a] = static_cast<std::size_t>(hi - lo) + 1;
  }
  return g;
}

// Largest stable leapfrog step for the 7-point Laplacian with coefficient
// 1/alpha: dt = courant h sqrt(min alpha) / sqrt(3).
inline double stable_dt(double h, double courant, double alpha_min = 1.0)
{
  if (!(courant > 0.0) || courant > 1.0)
    throw ConfigError("CFL violation: Courant ratio must lie in (0, 1]");
  if (!(alpha_min > 0.0))
    throw ConfigError("alpha must be positive");
  return courant * h * std::sqrt(alpha_min) / std::sqrt(3.0);
}

namespace detail
{
// Fraction of the cube of side h centred at c that lies inside s, by s^3 midpoint samples.
inline double cell_fraction(const Shape &s, const Vec3 &c, double h, int samples)
{
  if (distance_to_surface(c, s) > 0.8660254037844387 * h)
    return contains(s, c) ? 1.0 : 0.0;
  int inside = 0;
  for (int a = 0; a < samples; ++a)
    for (int b = 0; b < samples; ++b)
      for (int d = 0; d < samples; ++d)
      {
        const Vec3 p{c.x + h * ((a + 0.5) / samples - 0.5), c.y + h * ((b + 0.5) / samples - 0.5),
                     c.z + h * ((d + 0.5) / samples - 0.5)};
        inside += contains(s, p) ? 1 : 0;
      }
  return static_cast<double>(inside) / (samples * samples * samples);
}

// Index range of nodes whose cells can intersect the bounding box of s.
inline std::array<std::array<std::size_t, 2>, 3> node_range(const Grid3D &g, const Shape &s)
{
  const AxisBox bb = bounding_box(s);
  std::array<std::array<std::size_t, 2>, 3> r{};
  for (int a = 0; a < 3; ++a)
  {
    const double lo = std::floor((bb.lo[a] - g.origin[a]) / g.h) - 1.0;
    const double hi = std::ceil((bb.hi[a] - g.origin[a]) / g.h) + 1.0;
    r[a][0] = static_cast<std::size_t>(std::clamp(lo, 0.0, static_cast<double>(g.n[a] - 1)));
    r[a][1] = static_cast<std::size_t>(std::clamp(hi, 0.0, static_cast<double>(g.n[a] - 1)));
  }
  return r;
}

// Runs body(k_begin, k_end) over the z-planes [begin, end) split into chunks.
template <class F>
void parallel_planes(std::size_t begin, std::size_t end, int workers, F &&body)
{
  const std::size_t count = end > begin ? end - begin : 0;
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || count < 2 * w)
  {
    body(begin, end);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t)
  {
    const std::size_t lo = begin + count * t / w;
    const std::size_t hi = begin + count * (t + 1) / w;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
}

inline int default_workers()
{
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}
}  // namespace detail

inline constexpr int default_fraction_samples = 6;

// Grid nodes whose cells overlap a shape, with the overlapped volume fraction.
struct NodeWeights
{
  std::vector<std::size_t> index;
  std::vector<double> fraction;

  std::size_t size() const { return index.size(); }
};

inline NodeWeights overlap_nodes(const Grid3D &g, const Shape &s, int samples = default_fraction_samples)
{
  NodeWeights out;
  const auto r = detail::node_range(g, s);
  for (std::size_t k = r[2][0]; k <= r[2][1]; ++k)
    for (std::size_t j = r[1][0]; j <= r[1][1]; ++j)
      for (std::size_t i = r[0][0]; i <= r[0][1]; ++i)
      {
        const double phi = detail::cell_fraction(s, g.node(i, j, k), g.h, samples);
        if (phi > 0.0)
        {
          out.index.push_back(g.index(i, j, k));
          out.fraction.push_back(phi);
        }
      }
  return out;
}

// Nodes carrying the source: f = C * fraction. Back-scattering quadrature
// weights at these nodes are h^3 * fraction.
inline NodeWeights source_nodes(const Grid3D &g, const SourceBall &src, int samples = default_fraction_samples)
{
  validate_source(src);
  detail::source_ball(src, "source_nodes");
  return overlap_nodes(g, src.geometry, samples);
}

// alpha at nodes: 1 outside D, alpha(x) inside, blended by cell volume fraction.
struct MediumField
{
  std::vector<double> alpha;
  double alpha_min = 1.0;
};

inline MediumField uniform_medium(const Grid3D &g)
{
  return {std::vector<double>(g.size(), 1.0), 1.0};
}

inline MediumField build_medium(const Grid3D &g, const Shape &obstacle, const ScalarField &alpha,
                                int samples = default_fraction_samples)
{
  MediumField m = uniform_medium(g);
  const NodeWeights inside = overlap_nodes(g, obstacle, samples);
  for (std::size_t q = 0; q < inside.size(); ++q)
  {
    const std::size_t idx = inside.index[q];
    const double a = alpha(g.node(idx));
    if (!(a > 0.0))
      throw ConfigError("alpha must satisfy alpha >= C > 0");
    m.alpha[idx] = 1.0 + (a - 1.0) * inside.fraction[q];
  }
  m.alpha_min = *std::min_element(m.alpha.begin(), m.alpha.end());
  return m;
}

// Staircase representation of D. Nodes inside D are frozen at zero. An
// exterior node with at least one neighbour inside D is a boundary node; each
// such neighbour is replaced by a ghost value from the Robin relation
//   (u_P - u_ghost) / h = gamma u_t + beta u   at P.
// gamma and beta are scaled per face by 1 / (|n_x| + |n_y| + |n_z|), n the
// true outward normal, so that the staircase faces carry the true surface area.
struct RobinMask
{
  enum Kind : std::uint8_t
  {
    exterior = 0,
    interior = 1,
    boundary = 2
  };
  struct BoundaryNode
  {
    std::size_t index = 0;
    int regular = 0;           // neighbours outside D
    double gamma_sum = 0.0;    // sum over ghost faces of weighted gamma
    double beta_sum = 0.0;
  };

  std::vector<std::uint8_t> kind;
  std::vector<BoundaryNode> boundary_nodes;

  bool empty() const { return boundary_nodes.empty(); }
};

inline RobinMask empty_mask(const Grid3D &g)
{
  RobinMask m;
  m.kind.assign(g.size(), RobinMask::exterior);
  return m;
}

inline RobinMask build_robin_mask(const Grid3D &g, const Shape &obstacle, const ScalarField &gamma,
                                  const ScalarField &beta)
{
  RobinMask m = empty_mask(g);
  const auto r = detail::node_range(g, obstacle);
  for (std::size_t k = r[2][0]; k <= r[2][1]; ++k)
    for (std::size_t j = r[1][0]; j <= r[1][1]; ++j)
      for (std::size_t i = r[0][0]; i <= r[0][1]; ++i)
        if (contains(obstacle, g.node(i, j, k)))
        {
          if (i == 0 || j == 0 || k == 0 || i + 1 == g.n[0] || j + 1 == g.n[1] || k + 1 == g.n[2])
            throw ConfigError("obstacle touches the outer boundary of the grid");
          m.kind[g.index(i, j, k)] = RobinMask::interior;
        }

  const std::array<std::ptrdiff_t, 6> offsets{
      1, -1, static_cast<std::ptrdiff_t>(g.n[0]), -static_cast<std::ptrdiff_t>(g.n[0]),
      static_cast<std::ptrdiff_t>(g.n[0] * g.n[1]), -static_cast<std::ptrdiff_t>(g.n[0] * g.n[1])};
  for (std::size_t k = r[2][0]; k <= r[2][1]; ++k)
    for (std::size_t j = r[1][0]; j <= r[1][1]; ++j)
      for (std::size_t i = r[0][0]; i <= r[0][1]; ++i)
      {
        const std::size_t idx = g.index(i, j, k);
        if (m.kind[idx] != RobinMask::exterior)
          continue;
        if (i == 0 || j == 0 || k == 0 || i + 1 == g.n[0] || j + 1 == g.n[1] || k + 1 == g.n[2])
          continue;
        int ghosts = 0;
        for (auto off : offsets)
          if (m.kind[idx + off] == RobinMask::interior)
            ++ghosts;
        if (ghosts == 0)
          continue;
        const Vec3 p = g.node(i, j, k);
        const Vec3 nu = outward_normal_near(obstacle, p);
        const double area = 1.0 / (std::abs(nu.x) + std::abs(nu.y) + std::abs(nu.z));
        const double gv = gamma(p);
        if (!(gv >= 0.0))
          throw ConfigError("gamma < 0 violates the dissipativity assumption gamma >= 0");
        RobinMask::BoundaryNode b;
        b.index = idx;
        b.regular = 6 - ghosts;
        b.gamma_sum = ghosts * area * gv;
        b.beta_sum = ghosts * area * beta(p);
        m.kind[idx] = RobinMask::boundary;
        m.boundary_nodes.push_back(b);
      }
  return m;
}

// Trilinear interpolation stencil for a point.
struct ProbeStencil
{
  std::array<std::size_t, 8> index{};
  std::array<double, 8> weight{};
};

inline ProbeStencil probe_stencil(const Grid3D &g, const Vec3 &p)
{
  std::array<std::size_t, 3> base{};
  std::array<double, 3> frac{};
  for (int a = 0; a < 3; ++a)
  {
    const double s = (p[a] - g.origin[a]) / g.h;
    const double rs = std::round(s);
    double fl = std::abs(s - rs) < 1e-9 ? rs : std::floor(s);
    if (fl < 0.0 || fl > static_cast<double>(g.n[a] - 1))
      throw ConfigError("probe outside the computational grid");
    double f = std::abs(s - rs) < 1e-9 ? 0.0 : s - fl;
    if (fl == static_cast<double>(g.n[a] - 1))
    {
      if (f > 0.0)
        throw ConfigError("probe outside the computational grid");
      fl -= 1.0;
      f = 1.0;
    }
    base[a] = static_cast<std::size_t>(fl);
    frac[a] = f;
  }
  ProbeStencil st;
  int c = 0;
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di, ++c)
      {
        st.index[c] = g.index(base[0] + di, base[1] + dj, base[2] + dk);
        st.weight[c] = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) *
                       (dk ? frac[2] : 1.0 - frac[2]);
      }
  return st;
}

struct Solve3DOptions
{
  double T = 1.0;
  // Time step; when absent, stable_dt(h, courant, alpha_min).
  std::optional<double> dt;
  double courant = 0.9;
  int workers = 0;  // 0 selects the hardware concurrency
  // Called after every completed step with the new level u^n.
  std::function<void(std::size_t, double, std::span<const double>)> observer;
};

// Explicit leapfrog for alpha u_tt - Laplacian u = 0 outside the frozen
// interior of an optional Robin mask:
//   u^{n+1} = 2 u^n - u^{n-1} + dt^2 / (alpha h^2) Lap_h u^n,
// with u^0 = 0, u^1 = dt f and homogeneous Dirichlet values on the outer faces.
class Wave3DSolver
{
public:
  Wave3DSolver(const Grid3D &grid, const MediumField &medium, const RobinMask &mask, const SourceBall &src,
               double dt, int workers = 0)
      : grid_(grid), medium_(medium), mask_(mask), dt_(dt),
        workers_(workers > 0 ? workers : detail::default_workers())
  {
    if (medium_.alpha.size() != grid.size() || mask_.kind.size() != grid.size())
      throw DomainError("Wave3DSolver: medium or mask does not match the grid");
    const double limit = stable_dt(grid.h, 1.0, medium_.alpha_min);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
      throw ConfigError("CFL violation: dt exceeds h sqrt(min alpha) / sqrt(3)");

    prev_.assign(grid.size(), 0.0);
    curr_.assign(grid.size(), 0.0);
    const NodeWeights f = source_nodes(grid, src);
    for (std::size_t q = 0; q < f.size(); ++q)
    {
      if (mask_.kind[f.index[q]] != RobinMask::exterior)
        throw ConfigError("source ball intersects the staircased obstacle");
      curr_[f.index[q]] = dt * src.amplitude * f.fraction[q];
    }
    const double c = dt * dt / (grid.h * grid.h);
    coef_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      coef_[i] = c / medium_.alpha[i];
  }

  const Grid3D &grid() const { return grid_; }
  double dt() const { return dt_; }
  std::size_t step_index() const { return step_; }
  std::span<const double> current() const { return curr_; }
  std::span<const double> previous() const { return prev_; }

  void step()
  {
    const std::size_t nx = grid_.n[0];
    const std::size_t sy = nx;
    const std::size_t sz = nx * grid_.n[1];
    const bool masked = !mask_.empty();
    // u^{n+1} overwrites u^{n-1} in place.
    detail::parallel_planes(1, grid_.n[2] - 1, workers_, [&](std::size_t k0, std::size_t k1) {
      for (std::size_t k = k0; k < k1; ++k)
        for (std::size_t j = 1; j + 1 < grid_.n[1]; ++j)
        {
          const std::size_t row = grid_.index(0, j, k);
          for (std::size_t i = 1; i + 1 < nx; ++i)
          {
            const std::size_t p = row + i;
            if (masked && mask_.kind[p] != RobinMask::exterior)
              continue;
            const double u = curr_[p];
            const double lap = curr_[p + 1] + curr_[p - 1] + curr_[p + sy] + curr_[p - sy] + curr_[p + sz] +
                               curr_[p - sz] - 6.0 * u;
            prev_[p] = 2.0 * u - prev_[p] + coef_[p] * lap;
          }
        }
    });
    if (masked)
    {
      const std::array<std::ptrdiff_t, 6> offsets{1, -1, static_cast<std::ptrdiff_t>(sy),
                                                  -static_cast<std::ptrdiff_t>(sy),
                                                  static_cast<std::ptrdiff_t>(sz),
                                                  -static_cast<std::ptrdiff_t>(sz)};
      const double h = grid_.h;
      for (const auto &b : mask_.boundary_nodes)
      {
        const std::size_t p = b.index;
        const double u = curr_[p];
        double sum = 0.0;
        for (auto off : offsets)
          if (mask_.kind[p + off] != RobinMask::interior)
            sum += curr_[p + off];
        const double c = coef_[p];
        const double damp = c * h * b.gamma_sum / (2.0 * dt_);
        const double rhs = 2.0 * u - prev_[p] + c * (sum - b.regular * u - h * b.beta_sum * u) + damp * prev_[p];
        prev_[p] = rhs / (1.0 + damp);
      }
    }
    std::swap(prev_, curr_);
    ++step_;
  }

  double sample(const ProbeStencil &st) const
  {
    double acc = 0.0;
    for (int c = 0; c < 8; ++c)
      acc += st.weight[c] * curr_[st.index[c]];
    return acc;
  }

  // Discrete energy between the previous and current levels,
  //   sum alpha h^3 / 2 ((u^n - u^{n-1}) / dt)^2 + sum_edges h / 2 (du^n)(du^{n-1})
  //   + sum_boundary h^2 / 2 beta u^n u^{n-1}.
  // Conserved exactly without an obstacle, non-increasing with gamma, beta >= 0.
  double energy() const
  {
    const std::size_t nx = grid_.n[0];
    const std::size_t ny = grid_.n[1];
    const std::size_t nz = grid_.n[2];
    const double h = grid_.h;
    const double h3 = h * h * h;
    std::vector<double> plane(nz, 0.0);
    auto live = [&](std::size_t p) { return mask_.kind[p] != RobinMask::interior; };
    detail::parallel_planes(0, nz, workers_, [&](std::size_t k0, std::size_t k1) {
      for (std::size_t k = k0; k < k1; ++k)
      {
        double e = 0.0;
        for (std::size_t j = 0; j < ny; ++j)
          for (std::size_t i = 0; i < nx; ++i)
          {
            const std::size_t p = grid_.index(i, j, k);
            if (!live(p))
              continue;
            const double v = (curr_[p] - prev_[p]) / dt_;
            e += 0.5 * medium_.alpha[p] * h3 * v * v;
            auto edge = [&](std::size_t q) {
              if (live(q))
                e += 0.5 * h * (curr_[q] - curr_[p]) * (prev_[q] - prev_[p]);
            };
            if (i + 1 < nx)
              edge(p + 1);
            if (j + 1 < ny)
              edge(p + nx);
            if (k + 1 < nz)
              edge(p + nx * ny);
          }
        plane[k] = e;
      }
    });
    double e = 0.0;
    for (double x : plane)
      e += x;
    for (const auto &b : mask_.boundary_nodes)
      e += 0.5 * h * h * b.beta_sum * curr_[b.index] * prev_[b.index];
    return e;
  }

private:
  Grid3D grid_;
  MediumField medium_;
  RobinMask mask_;
  double dt_;
  int workers_;
  std::size_t step_ = 1;
  std::vector<double> prev_, curr_, coef_;
};

namespace detail
{
inline TimeTrace run_3d(const Grid3D &grid, const MediumField &medium, const RobinMask &mask,
                        const SourceBall &src, std::span<const Vec3> probes, const Solve3DOptions &opt)
{
  if (!(opt.T > 0.0))
    throw ConfigError("observation time T must be positive");
  const double dt = opt.dt ? *opt.dt : stable_dt(grid.h, opt.courant, medium.alpha_min);
  Wave3DSolver solver(grid, medium, mask, src, dt, opt.workers);
  std::vector<ProbeStencil> stencils;
  stencils.reserve(probes.size());
  for (const Vec3 &p : probes)
    stencils.push_back(probe_stencil(grid, p));

  const auto steps = static_cast<std::size_t>(std::ceil(opt.T / dt - 1e-9));
  TimeTrace trace(std::vector<Vec3>(probes.begin(), probes.end()), dt, opt.T, steps);
  for (std::size_t n = 1; n <= steps; ++n)
  {
    for (std::size_t q = 0; q < stencils.size(); ++q)
      trace.at(q, n) = solver.sample(stencils[q]);
    if (opt.observer)
      opt.observer(n, n * dt, solver.current());
    if (n < steps)
      solver.step();
  }
  return trace;
}
}  // namespace detail

// Exterior Robin problem; an empty mask gives the free-space solution.
inline TimeTrace solve_robin(const Grid3D &grid, const RobinMask &mask, const SourceBall &src,
                             std::span<const Vec3> probes, const Solve3DOptions &opt)
{
  const MediumField medium = uniform_medium(grid);
  return detail::run_3d(grid, medium, mask, src, probes, opt);
}

// Transmission problem alpha u_tt - Laplacian u = 0 on the whole grid.
inline TimeTrace solve_refractive(const Grid3D &grid, const MediumField &medium, const SourceBall &src,
                                  std::span<const Vec3> probes, const Solve3DOptions &opt)
{
  const RobinMask mask = empty_mask(grid);
  return detail::run_3d(grid, medium, mask, src, probes, opt);
}

// Snapshot file: a text header followed by little-endian float32 values in
// x-fastest order.
//   enclosure-snapshot 1
//   dims <nx> <ny> <nz>
//   h <spacing>
//   origin <x> <y> <z>
//   t <time>
//   data
struct Snapshot
{
  Grid3D grid;
  double t = 0.0;
  std::vector<float> values;
};

inline void write_snapshot(const std::filesystem::path &path, const Grid3D &grid, double t,
                           std::span<const double> u)
{
  if (u.size() != grid.size())
    throw DomainError("write_snapshot: field does not match the grid");
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open snapshot file " + path.string());
  std::ostringstream head;
  head.precision(17);
  head << "enclosure-snapshot 1\n"
       << "dims " << grid.n[0] << ' ' << grid.n[1] << ' ' << grid.n[2] << '\n'
       << "h " << grid.h << '\n'
       << "origin " << grid.origin.x << ' ' << grid.origin.y << ' ' << grid.origin.z << '\n'
       << "t " << t << '\n'
       << "data\n";
  out << head.str();
  std::vector<char> buf(u.size() * 4);
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(u[i]));
    for (int b = 0; b < 4; ++b)
      buf[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline Snapshot read_snapshot(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open snapshot file " + path.string());
  Snapshot s;
  std::string line, key;
  auto expect = [&](const char *name) {
    if (!std::getline(in, line))
      throw Error("truncated snapshot header");
    std::istringstream ls(line);
    ls >> key;
    if (key != name)
      throw Error(std::string("snapshot header: expected ") + name);
    return ls;
  };
  {
    auto ls = expect("enclosure-snapshot");
    int version = 0;
    ls >> version;
    if (version != 1)
      throw Error("unsupported snapshot version");
  }
  expect("dims") >> s.grid.n[0] >> s.grid.n[1] >> s.grid.n[2];
  expect("h") >> s.grid.h;
  expect("origin") >> s.grid.origin.x >> s.grid.origin.y >> s.grid.origin.z;
  expect("t") >> s.t;
  expect("data");
  std::vector<char> buf(s.grid.size() * 4);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()))
    throw Error("truncated snapshot data");
  s.values.resize(s.grid.size());
  for (std::size_t i = 0; i < s.values.size(); ++i)
  {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[4 * i + b])) << (8 * b);
    s.values[i] = std::bit_cast<float>(bits);
  }
  return s;
}

}  // namespace enclosure
