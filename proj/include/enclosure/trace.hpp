// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/vec3.hpp"

namespace enclosure
{

// Sampled wave field u(x_i, t_n), t_n = n dt, n = 0..steps. Values are stored
// probe-major. `horizon` is the observation time T (steps * dt >= T > (steps - 1) * dt).
struct TimeTrace
{
  std::vector<Vec3> probes;  // 1D probes use the x component
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::vector<double> values;

  TimeTrace() = default;

  TimeTrace(std::vector<Vec3> points, double dt_, double horizon_, std::size_t steps_)
      : probes(std::move(points)), dt(dt_), horizon(horizon_), steps(steps_),
        values(probes.size() * (steps_ + 1), 0.0)
  {
  }

  std::size_t probe_count() const { return probes.size(); }
  std::size_t samples() const { return steps + 1; }

  double &at(std::size_t probe, std::size_t n) { return values[probe * samples() + n]; }
  double at(std::size_t probe, std::size_t n) const { return values[probe * samples() + n]; }

  std::span<const double> series(std::size_t probe) const
  {
    return {values.data() + probe * samples(), samples()};
  }
};

// a - b for traces sampled on the same probes and times.
inline TimeTrace difference(const TimeTrace &a, const TimeTrace &b)
{
  if (a.probe_count() != b.probe_count() || a.steps != b.steps || a.dt != b.dt)
    throw DomainError("difference: traces are not sampled identically");
  TimeTrace out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] -= b.values[i];
  return out;
}

}  // namespace enclosure
