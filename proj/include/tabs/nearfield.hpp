#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <exception>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include "tabs/aperture.hpp"
#include "tabs/error.hpp"
#include "tabs/trajectory.hpp"

namespace tabs {

/// A point in the x–z plane, wavelengths.
struct Point {
  double x = 0.0;
  double z = 0.0;
  bool operator==(const Point&) const = default;
};

/// Line-of-sight spherical-wave channel, h_n = e^{−jk0 r_n} / r_n.
struct ChannelVector {
  std::vector<complex> coefficients;
  Point point;
};

namespace detail {

// e^{+jk0 r}/r with the phase reduced modulo one wavelength first.
inline complex conj_channel_term(double r, double inv_wavelength) {
  const double cycles = r * inv_wavelength;
  const double frac = cycles - std::floor(cycles);
  const double ang = 2.0 * std::numbers::pi * frac;
  const double inv_r = 1.0 / r;
  return {std::cos(ang) * inv_r, std::sin(ang) * inv_r};
}

inline double element_distance(const ApertureConfig& cfg, std::size_t n, double x, double z) {
  const double dx = x - cfg.element_position(n);
  const double r = std::sqrt(dx * dx + z * z);
  if (!(r > 0.0)) throw InvalidArgument("receiver coincides with an array element");
  return r;
}

inline std::uint64_t fnv1a(const void* data, std::size_t bytes,
                           std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline double grid_node(double lo, double hi, std::size_t count, std::size_t i) {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace detail

inline std::uint64_t config_hash(const ApertureConfig& cfg) {
  const std::uint64_t n = cfg.num_elements();
  const double d = cfg.spacing();
  const double l = cfg.wavelength();
  std::uint64_t h = detail::fnv1a(&n, sizeof n);
  h = detail::fnv1a(&d, sizeof d, h);
  return detail::fnv1a(&l, sizeof l, h);
}

inline std::uint64_t weights_hash(const BeamWeights& w) {
  return detail::fnv1a(w.coefficients.data(), w.coefficients.size() * sizeof(complex));
}

inline ChannelVector channel(Point p, const ApertureConfig& cfg) {
  ChannelVector h;
  h.point = p;
  h.coefficients.resize(cfg.num_elements());
  const double inv_l = 1.0 / cfg.wavelength();
  for (std::size_t n = 0; n < cfg.num_elements(); ++n) {
    const double r = detail::element_distance(cfg, n, p.x, p.z);
    h.coefficients[n] = std::conj(detail::conj_channel_term(r, inv_l));
  }
  return h;
}

/// I = |h(p)^H ω|. Sums in ascending element order so results are
/// bit-reproducible regardless of how callers split their work.
inline double intensity(Point p, std::span<const complex> weights, const ApertureConfig& cfg) {
  detail::require(weights.size() == cfg.num_elements(),
                  "weight vector length does not match element count");
  const double inv_l = 1.0 / cfg.wavelength();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    const double r = detail::element_distance(cfg, n, p.x, p.z);
    const complex t = detail::conj_channel_term(r, inv_l);
    re += t.real() * weights[n].real() - t.imag() * weights[n].imag();
    im += t.real() * weights[n].imag() + t.imag() * weights[n].real();
  }
  return std::sqrt(re * re + im * im);
}

inline double intensity(Point p, const BeamWeights& w, const ApertureConfig& cfg) {
  return intensity(p, w.span(), cfg);
}

/// Upper bound (1/√N)·Σ 1/r_n on I(p) over all unit-modulus weights.
inline double focusing_bound(Point p, const ApertureConfig& cfg) {
  double s = 0.0;
  for (std::size_t n = 0; n < cfg.num_elements(); ++n)
    s += 1.0 / detail::element_distance(cfg, n, p.x, p.z);
  return s / std::sqrt(static_cast<double>(cfg.num_elements()));
}

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Range&) const = default;
};

/// Intensity sampled on a regular x–z grid. Storage is row-major with one
/// row per z node: value(ix, iz) = intensity[iz * nx + ix].
struct FieldGrid {
  Range x_range;
  Range z_range;
  std::size_t nx = 0;
  std::size_t nz = 0;
  std::vector<double> intensity;
  std::uint64_t cfg_hash = 0;
  std::uint64_t weights_hash = 0;

  double x(std::size_t ix) const { return detail::grid_node(x_range.min, x_range.max, nx, ix); }
  double z(std::size_t iz) const { return detail::grid_node(z_range.min, z_range.max, nz, iz); }
  double value(std::size_t ix, std::size_t iz) const { return intensity[iz * nx + ix]; }
  double max_value() const {
    return intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
  }
};

/// Evaluates I on every node. Rows (fixed z) are split into contiguous
/// blocks across `threads` workers; each node uses the same per-point
/// kernel, so the output does not depend on the thread count.
inline FieldGrid field_grid(const BeamWeights& w, const ApertureConfig& cfg, Range xr, Range zr,
                            std::size_t nx, std::size_t nz, unsigned threads = 1) {
  detail::require(nx >= 2 && nz >= 2, "grid needs at least 2 nodes per axis");
  detail::require(std::isfinite(xr.min) && std::isfinite(xr.max) && xr.min < xr.max,
                  "degenerate x range");
  detail::require(std::isfinite(zr.min) && std::isfinite(zr.max) && zr.min < zr.max,
                  "degenerate z range");
  detail::require(w.size() == cfg.num_elements(),
                  "weight vector length does not match element count");
  FieldGrid g;
  g.x_range = xr;
  g.z_range = zr;
  g.nx = nx;
  g.nz = nz;
  g.intensity.assign(nx * nz, 0.0);
  g.cfg_hash = config_hash(cfg);
  g.weights_hash = weights_hash(w);

  auto rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t iz = begin; iz < end; ++iz) {
      const double z = g.z(iz);
      for (std::size_t ix = 0; ix < nx; ++ix)
        g.intensity[iz * nx + ix] = intensity({g.x(ix), z}, w.span(), cfg);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, nz));
  if (threads <= 1) {
    rows(0, nz);
    return g;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t block = (nz + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t b = std::min(nz, t * block);
    const std::size_t e = std::min(nz, b + block);
    pool.emplace_back([&, t, b, e] {
      try {
        rows(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return g;
}

/// Received strength at one trajectory sample.
struct IntensitySample {
  double z = 0.0;
  double x = 0.0;
  double intensity = 0.0;
  double arc_weight = 0.0;
};

inline std::vector<IntensitySample> intensity_along_trajectory(const BeamWeights& w,
                                                               const ApertureConfig& cfg,
                                                               const Trajectory& traj,
                                                               std::size_t count) {
  const auto pts = sample_points(traj, count);
  std::vector<IntensitySample> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    out[i] = {pts[i].z, pts[i].x, intensity({pts[i].x, pts[i].z}, w, cfg), pts[i].arc_weight};
  return out;
}

}  // namespace tabs
