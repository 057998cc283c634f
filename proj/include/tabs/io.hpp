#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "tabs/baselines.hpp"
#include "tabs/error.hpp"
#include "tabs/metrics.hpp"
#include "tabs/nearfield.hpp"
#include "tabs/phase_design.hpp"

namespace tabs::io {

/// Fixed CSV number format: 17 significant digits, '.' decimal separator.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace detail

/// (ξ, φ) rows of the continuous profile.
inline void write_profile_samples(const std::string& path, const PhaseProfile& p) {
  auto out = detail::open(path);
  out << "xi,phase_radians\n";
  for (std::size_t i = 0; i < p.xi.size(); ++i) out << fmt(p.xi[i]) << ',' << fmt(p.phase[i]) << '\n';
}

/// (n, φ_n) rows; n is zero-based.
inline void write_element_phases(const std::string& path, const std::vector<double>& phases) {
  auto out = detail::open(path);
  out << "element_index,phase_radians\n";
  for (std::size_t n = 0; n < phases.size(); ++n) out << n << ',' << fmt(phases[n]) << '\n';
}

inline void write_grid_csv(const std::string& path, const FieldGrid& g) {
  auto out = detail::open(path);
  out << "x,z,intensity\n";
  for (std::size_t iz = 0; iz < g.nz; ++iz)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      out << fmt(g.x(ix)) << ',' << fmt(g.z(iz)) << ',' << fmt(g.value(ix, iz)) << '\n';
}

/// Binary 8-bit PGM, width nx, height nz, row iz = 0 first, scaled to the
/// grid maximum.
inline void write_grid_pgm(const std::string& path, const FieldGrid& g) {
  auto out = detail::open(path);
  out << "P5\n" << g.nx << ' ' << g.nz << "\n255\n";
  const double peak = g.max_value();
  std::vector<unsigned char> row(g.nx);
  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = peak > 0.0 ? g.value(ix, iz) / peak : 0.0;
      row[ix] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

inline void write_ridge(const std::string& path, const std::vector<RidgePoint>& ridge) {
  auto out = detail::open(path);
  out << "z,x_ridge\n";
  for (const auto& r : ridge) out << fmt(r.z) << ',' << fmt(r.x) << '\n';
}

/// (γ, R_S, method) rows for one or more curves.
inline void write_reliability(const std::string& path, const std::vector<ReliabilityCurve>& curves) {
  auto out = detail::open(path);
  out << "gamma,reliability,method\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.thresholds.size(); ++i)
      out << fmt(c.thresholds[i]) << ',' << fmt(c.values[i]) << ',' << c.method << '\n';
}

inline void write_intensity_profile(const std::string& path,
                                    const std::vector<IntensitySample>& samples) {
  auto out = detail::open(path);
  out << "z,x,intensity\n";
  for (const auto& s : samples)
    out << fmt(s.z) << ',' << fmt(s.x) << ',' << fmt(s.intensity) << '\n';
}

inline void write_tracking(const std::string& path, const TrackingResult& r) {
  auto out = detail::open(path);
  out << "z,intensity,switched\n";
  for (std::size_t i = 0; i < r.profile.size(); ++i)
    out << fmt(r.profile[i].z) << ',' << fmt(r.profile[i].intensity) << ','
        << (r.switched[i] ? 1 : 0) << '\n';
}

}  // namespace tabs::io
