#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tabs/aperture.hpp"
#include "tabs/error.hpp"
#include "tabs/specfun.hpp"
#include "tabs/trajectory.hpp"

namespace tabs {

/// How aperture points outside the tangent-ray image of the trajectory are
/// handled: `strict` refuses, `zero` holds φ constant at the nearest covered
/// boundary value (no extra steering).
enum class PadMode { strict, zero };

struct DesignOptions {
  double samples_per_wavelength = 8.0;
  PadMode pad_mode = PadMode::zero;
};

/// Continuous aperture phase φ(ξ) on a uniform grid over [0, D], plus its
/// per-element samples φ_n = φ(x_n).
///
/// Phases are unwrapped. φ is anchored to zero at the smallest covered ξ;
/// only differences in φ are physical.
struct PhaseProfile {
  std::vector<double> xi;
  std::vector<double> phase;
  /// Designed dφ/dξ at each sample (k0·sinθ of the launched ray); zero in padded regions.
  std::vector<double> gradient;
  std::vector<double> element_phases;
  double covered_min = 0.0;  ///< aperture sub-interval that realizes the caustic
  double covered_max = 0.0;
  std::size_t evaluations = 0;  ///< integrand / closed-form evaluations spent
  std::vector<std::string> warnings;

  bool padded() const { return !warnings.empty(); }

  /// Linear interpolation of the samples.
  double value(double x) const {
    if (xi.size() == 1) return phase.front();
    const double tol = 1e-9 * (1.0 + std::abs(xi.back()));
    if (!(x >= xi.front() - tol && x <= xi.back() + tol))
      throw InvalidArgument("profile does not cover xi = " + std::to_string(x));
    auto it = std::upper_bound(xi.begin(), xi.end(), x);
    std::size_t i = it == xi.begin() ? 0 : static_cast<std::size_t>(it - xi.begin()) - 1;
    i = std::min(i, xi.size() - 2);
    const double t = (x - xi[i]) / (xi[i + 1] - xi[i]);
    if (t == 0.0) return phase[i];
    if (t == 1.0) return phase[i + 1];
    return phase[i] + t * (phase[i + 1] - phase[i]);
  }
};

namespace detail {

inline std::vector<double> aperture_grid(const ApertureConfig& cfg, const DesignOptions& opts) {
  require(std::isfinite(opts.samples_per_wavelength) && opts.samples_per_wavelength > 0.0,
          "samples per wavelength must be positive");
  const double d = cfg.length();
  if (d == 0.0) return {0.0};
  const auto m = static_cast<std::size_t>(
      std::ceil(d * opts.samples_per_wavelength / cfg.wavelength() - 1e-9));
  std::vector<double> xi(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    xi[i] = i == m ? d : d * static_cast<double>(i) / static_cast<double>(m);
  return xi;
}

inline void pad_outside(PhaseProfile& p, const DesignOptions& opts, const std::string& what) {
  const double tol = 1e-9 * (1.0 + p.covered_max);
  const bool uncovered = p.xi.front() < p.covered_min - tol || p.xi.back() > p.covered_max + tol;
  if (!uncovered) return;
  if (opts.pad_mode == PadMode::strict)
    throw NumericalError(what + ": aperture extends beyond the tangent-ray image [" +
                         std::to_string(p.covered_min) + ", " +
                         std::to_string(p.covered_max) + "] and pad mode is strict");
  p.warnings.push_back(what + ": aperture outside [" + std::to_string(p.covered_min) + ", " +
                       std::to_string(p.covered_max) +
                       "] held at constant phase (pad mode zero)");
}

}  // namespace detail

/// φ_n by linear interpolation of the aperture samples at the element positions.
inline std::vector<double> discretize(const PhaseProfile& profile, const ApertureConfig& cfg) {
  detail::require(!profile.xi.empty(), "profile is empty");
  std::vector<double> out(cfg.num_elements());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = profile.value(cfg.element_position(n));
  return out;
}

/// Phase profile from the tangent-ray construction: every ray leaving the
/// aperture at ξ is tangent to the trajectory at z*(ξ), so
///   dφ/dξ = k0·c′(z*)/√(1 + c′(z*)²).
///
/// The cumulative integral is taken panel by panel in the ray parameter z
/// (Simpson, dξ = T′(z)dz), which stays accurate where the gradient has a
/// square-root edge at the boundary of the tangent image.
inline PhaseProfile design_numeric(const Trajectory& traj, const ApertureConfig& cfg,
                                   const DesignOptions& opts = {}) {
  const double k0 = cfg.wave_number();
  PhaseProfile p;
  p.xi = detail::aperture_grid(cfg, opts);
  const std::size_t m = p.xi.size();
  p.phase.assign(m, 0.0);
  p.gradient.assign(m, 0.0);

  // Straight paths: every tangent ray shares one intercept; the only
  // consistent wavefront is a plane wave at the path's inclination.
  if (traj.has_constant_slope()) {
    const double s = traj.slope(traj.z_start());
    const double g = k0 * s / std::sqrt(1.0 + s * s);
    for (std::size_t i = 0; i < m; ++i) {
      p.phase[i] = g * p.xi[i];
      p.gradient[i] = g;
    }
    p.covered_min = 0.0;
    p.covered_max = cfg.length();
    p.evaluations = m;
    p.element_phases = discretize(p, cfg);
    return p;
  }

  const TangencySolver solver(traj);
  const double lo = std::max(0.0, solver.image_min());
  const double hi = std::min(cfg.length(), solver.image_max());
  if (!(hi > lo))
    throw NumericalError("tangent-ray image [" + std::to_string(solver.image_min()) + ", " +
                         std::to_string(solver.image_max()) +
                         "] does not overlap the aperture");
  p.covered_min = lo;
  p.covered_max = hi;
  detail::pad_outside(p, opts, "numeric design");

  auto integrand = [&](double z) {
    const double s = traj.slope(z);
    return k0 * s / std::sqrt(1.0 + s * s);
  };
  auto panel = [&](double za, double zb) {
    const double zm = 0.5 * (za + zb);
    const double ta = traj.tangent_intercept(za);
    const double tm = traj.tangent_intercept(zm);
    const double tb = traj.tangent_intercept(zb);
    const double dz = zb - za;
    if (dz == 0.0) return 0.0;
    const double da = (-3.0 * ta + 4.0 * tm - tb) / dz;
    const double dm = (tb - ta) / dz;
    const double db = (ta - 4.0 * tm + 3.0 * tb) / dz;
    p.evaluations += 3;
    return dz / 6.0 * (integrand(za) * da + 4.0 * integrand(zm) * dm + integrand(zb) * db);
  };

  double z_prev = solver.solve(lo);
  double phi = 0.0;
  std::size_t i = 0;
  for (; i < m && p.xi[i] < lo; ++i) p.phase[i] = 0.0;
  for (; i < m && p.xi[i] <= hi; ++i) {
    const double z = solver.solve(p.xi[i]);
    phi += panel(z_prev, z);
    p.phase[i] = phi;
    p.gradient[i] = integrand(z);
    z_prev = z;
  }
  if (i < m) {
    phi += panel(z_prev, solver.solve(hi));
    for (; i < m; ++i) p.phase[i] = phi;
  }
  p.element_phases = discretize(p, cfg);
  return p;
}

/// Closed-form profile for the circular caustic x = √(R² − z²):
///   φ(ξ) = −k0·R·(√((ξ/R)² − 1) − arcsec(ξ/R)),  ξ ≥ R.
/// The sign makes rays leave toward −x so their envelope is the circle under
/// the e^{−jk0 r} propagation convention.
inline PhaseProfile design_circular(double radius, const ApertureConfig& cfg,
                                   const DesignOptions& opts = {}) {
  detail::require(std::isfinite(radius) && radius > 0.0, "circle radius must be positive");
  if (!(cfg.length() > radius))
    throw NumericalError("aperture length must exceed the circle radius");
  const double k0 = cfg.wave_number();
  PhaseProfile p;
  p.xi = detail::aperture_grid(cfg, opts);
  p.covered_min = radius;
  p.covered_max = cfg.length();
  detail::pad_outside(p, opts, "circular design");
  p.phase.resize(p.xi.size());
  p.gradient.resize(p.xi.size());
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double u = std::max(p.xi[i] / radius, 1.0);
    const double root = std::sqrt(u * u - 1.0);
    p.phase[i] = -k0 * radius * (root - specfun::arcsec(u));
    p.gradient[i] = -k0 * root / u;
  }
  p.evaluations = p.xi.size();
  p.element_phases = discretize(p, cfg);
  return p;
}

/// Closed-form profile for the parabolic caustic x = −αz²:
///   φ(ξ) = −(4αk0ξ/3)·√(ξ/α)·₂F₁(1/2, 3/2; 5/2; −4αξ).
inline PhaseProfile design_parabolic(double alpha, const ApertureConfig& cfg,
                                    const DesignOptions& opts = {}) {
  detail::require(std::isfinite(alpha) && alpha > 0.0, "parabolic curvature must be positive");
  const double k0 = cfg.wave_number();
  PhaseProfile p;
  p.xi = detail::aperture_grid(cfg, opts);
  p.covered_min = 0.0;
  p.covered_max = cfg.length();
  p.phase.resize(p.xi.size());
  p.gradient.resize(p.xi.size());
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double x = p.xi[i];
    p.phase[i] = x == 0.0 ? 0.0
                          : -(4.0 * alpha * k0 * x / 3.0) * std::sqrt(x / alpha) *
                                specfun::gauss_2f1(specfun::kParabolicParams, -4.0 * alpha * x);
    p.gradient[i] = -2.0 * k0 * std::sqrt(alpha * x) / std::sqrt(1.0 + 4.0 * alpha * x);
  }
  p.evaluations = p.xi.size();
  p.element_phases = discretize(p, cfg);
  return p;
}

/// Total phase Ψ(ξ; x, z) accumulated at a field point, exact and Fresnel.
struct TotalPhase {
  std::vector<double> xi;
  std::vector<double> exact;    ///< φ(ξ) + k0·√((x−ξ)² + z²)
  std::vector<double> fresnel;  ///< φ(ξ) + k0·(z + (x−ξ)²/(2z))
};

inline TotalPhase total_phase(const PhaseProfile& profile, double x, double z,
                              const ApertureConfig& cfg) {
  detail::require(z > 0.0, "total phase requires z > 0");
  const double k0 = cfg.wave_number();
  TotalPhase out;
  out.xi = profile.xi;
  out.exact.resize(profile.xi.size());
  out.fresnel.resize(profile.xi.size());
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    const double dx = x - profile.xi[i];
    out.exact[i] = profile.phase[i] + k0 * std::sqrt(dx * dx + z * z);
    out.fresnel[i] = profile.phase[i] + k0 * (z + dx * dx / (2.0 * z));
  }
  return out;
}

}  // namespace tabs
