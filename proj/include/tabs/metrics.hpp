#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabs/aperture.hpp"
#include "tabs/baselines.hpp"
#include "tabs/error.hpp"
#include "tabs/nearfield.hpp"
#include "tabs/trajectory.hpp"

namespace tabs {

/// Arc-length fraction of the trajectory where I ≥ γ.
///
/// Each sample's indicator is weighted by its full arc weight; no crossing
/// interpolation is attempted.
inline double spatial_outage_reliability(std::span<const IntensitySample> samples, double gamma) {
  detail::require(!samples.empty(), "no intensity samples");
  double covered = 0.0;
  double total = 0.0;
  for (const auto& s : samples) {
    detail::require(s.arc_weight > 0.0, "arc weights must be positive");
    total += s.arc_weight;
    if (s.intensity >= gamma) covered += s.arc_weight;
  }
  return covered / total;
}

struct ReliabilityCurve {
  std::string method;
  std::vector<double> thresholds;
  std::vector<double> values;
  std::size_t sample_count = 0;
};

inline constexpr std::size_t kDefaultReliabilitySamples = 2000;

inline ReliabilityCurve reliability_sweep(const BeamWeights& w, const ApertureConfig& cfg,
                                          const Trajectory& traj,
                                          std::span<const double> gammas,
                                          std::size_t count = kDefaultReliabilitySamples,
                                          std::string method = {}) {
  detail::require(count >= 100, "reliability sweeps need at least 100 samples");
  const auto samples = intensity_along_trajectory(w, cfg, traj, count);
  ReliabilityCurve c;
  c.method = std::move(method);
  c.sample_count = count;
  c.thresholds.assign(gammas.begin(), gammas.end());
  c.values.reserve(gammas.size());
  for (double g : gammas) c.values.push_back(spatial_outage_reliability(samples, g));
  return c;
}

struct RidgePoint {
  double z = 0.0;
  double x = 0.0;
};

/// Per z-row argmax of the intensity with a three-point parabolic refinement.
/// Ties resolve to the smaller x.
inline std::vector<RidgePoint> ridge_trace(const FieldGrid& grid) {
  std::vector<RidgePoint> out;
  out.reserve(grid.nz);
  const double dx = (grid.x_range.max - grid.x_range.min) / static_cast<double>(grid.nx - 1);
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    std::size_t best = 0;
    for (std::size_t ix = 1; ix < grid.nx; ++ix)
      if (grid.value(ix, iz) > grid.value(best, iz)) best = ix;
    double x = grid.x(best);
    if (best > 0 && best + 1 < grid.nx) {
      const double a = grid.value(best - 1, iz);
      const double b = grid.value(best, iz);
      const double c = grid.value(best + 1, iz);
      const double den = a - 2.0 * b + c;
      if (den < 0.0) x += 0.5 * (a - c) / den * dx;
    }
    out.push_back({grid.z(iz), x});
  }
  return out;
}

/// Number of refocus events a beam-switching receiver needs when the link
/// starts with `weights`.
inline std::size_t switch_count(const BeamWeights& weights, const ApertureConfig& cfg,
                                const Trajectory& traj, const TrackingPolicy& policy) {
  return tracking_run(traj, cfg, policy, weights).switch_count();
}

}  // namespace tabs
