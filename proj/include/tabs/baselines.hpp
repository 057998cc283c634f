#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabs/aperture.hpp"
#include "tabs/error.hpp"
#include "tabs/nearfield.hpp"
#include "tabs/trajectory.hpp"

namespace tabs {

/// Conjugate-matched focusing weights ω_n = e^{−jk0 r_n(p)}/√N. They attain
/// the unit-modulus bound (1/√N)·Σ 1/r_n at the focal point.
inline BeamWeights focus_weights(Point focal, const ApertureConfig& cfg) {
  const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.num_elements()));
  const double inv_l = 1.0 / cfg.wavelength();
  BeamWeights w;
  w.coefficients.resize(cfg.num_elements());
  for (std::size_t n = 0; n < cfg.num_elements(); ++n) {
    const double r = detail::element_distance(cfg, n, focal.x, focal.z);
    const complex t = detail::conj_channel_term(r, inv_l);
    w.coefficients[n] = std::conj(t) * (r * amp);
  }
  return w;
}

/// How several focused beams are combined into one weight vector.
enum class Superposition {
  unit_norm,   ///< Σ_k ω_k rescaled to ‖ω‖₂ = 1 (amplitudes vary per element)
  phase_only,  ///< keep only arg(Σ_k ω_k), giving unit-modulus weights
};

/// Equal-power superposition of beams focused at each point.
inline BeamWeights multipoint_weights(std::span<const Point> focals, const ApertureConfig& cfg,
                                      Superposition mode = Superposition::unit_norm) {
  detail::require(!focals.empty(), "need at least one focal point");
  const double scale = 1.0 / std::sqrt(static_cast<double>(focals.size()));
  std::vector<complex> sum(cfg.num_elements(), complex{0.0, 0.0});
  for (const Point& f : focals) {
    const BeamWeights wk = focus_weights(f, cfg);
    for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += wk.coefficients[n] * scale;
  }
  double norm2 = 0.0;
  for (const auto& c : sum) norm2 += std::norm(c);
  const double norm = std::sqrt(norm2);
  if (!(norm >= 1e-9)) throw NumericalError("focused beams cancel in superposition");

  BeamWeights w;
  w.coefficients = std::move(sum);
  if (mode == Superposition::unit_norm) {
    for (auto& c : w.coefficients) c /= norm;
    w.mode = ModulusMode::unit_norm;
  } else {
    const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.num_elements()));
    for (auto& c : w.coefficients) c = std::polar(amp, std::arg(c));
    w.mode = ModulusMode::unit_modulus;
  }
  return w;
}

/// The trajectory point with c(z) = x (smallest such z).
inline Point point_at_x(const Trajectory& traj, double x) {
  constexpr std::size_t kScan = 512;
  const double a = traj.z_start();
  const double b = traj.z_end();
  auto f = [&](double z) { return traj.position(z) - x; };
  double z_prev = a;
  double f_prev = f(a);
  if (f_prev == 0.0) return {x, a};
  for (std::size_t i = 1; i < kScan; ++i) {
    const double z = i + 1 == kScan ? b : a + (b - a) * static_cast<double>(i) / (kScan - 1);
    const double fz = f(z);
    if (fz == 0.0) return {x, z};
    if ((fz < 0.0) != (f_prev < 0.0)) {
      double lo = z_prev, hi = z, flo = f_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double zr = 0.5 * (lo + hi);
      return {traj.position(zr), zr};
    }
    z_prev = z;
    f_prev = fz;
  }
  throw InvalidArgument("trajectory never reaches x = " + std::to_string(x));
}

/// K focal points spread uniformly over the trajectory's x-extent, one at the
/// centre of each of K equal x-intervals. Paths with no x-extent fall back to
/// interval centres in z.
inline std::vector<Point> focal_points_uniform_x(const Trajectory& traj, std::size_t k) {
  detail::require(k >= 1, "need at least one focal point");
  const double xa = traj.position(traj.z_start());
  const double xb = traj.position(traj.z_end());
  std::vector<Point> pts;
  pts.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    if (std::abs(xb - xa) <= 1e-12 * (1.0 + std::abs(xa))) {
      const double z = traj.z_start() + t * (traj.z_end() - traj.z_start());
      pts.push_back({traj.position(z), z});
    } else {
      pts.push_back(point_at_x(traj, xa + t * (xb - xa)));
    }
  }
  return pts;
}

/// Reactive beam switching: refocus on the receiver whenever its strength
/// drops below the threshold.
struct TrackingPolicy {
  double threshold = 0.0;
  std::size_t resolution = 2000;  ///< samples along the trajectory
};

struct TrackingResult {
  std::vector<IntensitySample> profile;
  std::vector<bool> switched;      ///< per sample: a refocus happened here
  std::vector<double> switch_z;    ///< z of each refocus event, increasing

  std::size_t switch_count() const noexcept { return switch_z.size(); }
};

/// Walks the trajectory in increasing z starting from `initial` weights.
/// Throws NumericalError ("threshold unattainable") if even a fresh focus
/// cannot reach the threshold at some sample.
inline TrackingResult tracking_run(const Trajectory& traj, const ApertureConfig& cfg,
                                   const TrackingPolicy& policy, BeamWeights initial) {
  detail::require(std::isfinite(policy.threshold) && policy.threshold > 0.0,
                  "tracking threshold must be positive");
  detail::require(policy.resolution >= 2, "tracking resolution must be at least 2");
  const auto pts = sample_points(traj, policy.resolution);
  TrackingResult res;
  res.profile.reserve(pts.size());
  res.switched.assign(pts.size(), false);
  BeamWeights w = std::move(initial);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point p{pts[i].x, pts[i].z};
    double level = intensity(p, w, cfg);
    if (level < policy.threshold) {
      w = focus_weights(p, cfg);
      level = intensity(p, w, cfg);
      if (level < policy.threshold)
        throw NumericalError("threshold unattainable: focused strength " +
                             std::to_string(level) + " < " + std::to_string(policy.threshold) +
                             " at z = " + std::to_string(p.z));
      res.switched[i] = true;
      res.switch_z.push_back(p.z);
    }
    res.profile.push_back({pts[i].z, pts[i].x, level, pts[i].arc_weight});
  }
  return res;
}

/// Beam-focusing tracker: starts focused on the first trajectory sample.
inline TrackingResult tracking_run(const Trajectory& traj, const ApertureConfig& cfg,
                                   const TrackingPolicy& policy) {
  const Point start{traj.position(traj.z_start()), traj.z_start()};
  const BeamWeights w = focus_weights(start, cfg);
  if (intensity(start, w, cfg) < policy.threshold)
    throw NumericalError("threshold unattainable at the start of the trajectory");
  return tracking_run(traj, cfg, policy, w);
}

}  // namespace tabs
