#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "tabs/error.hpp"

namespace tabs {

using complex = std::complex<double>;

/// Uniform linear array along the x-axis, elements at 0, d, 2d, ..., D.
///
/// All lengths are in wavelengths, so the wave number is 2π unless a
/// different wavelength is passed explicitly.
class ApertureConfig {
 public:
  explicit ApertureConfig(std::size_t num_elements, double spacing = 0.5,
                          double wavelength = 1.0)
      : num_elements_(num_elements), spacing_(spacing), wavelength_(wavelength) {
    detail::require(num_elements_ >= 1, "aperture needs at least one element");
    detail::require(std::isfinite(spacing_) && spacing_ > 0.0,
                    "element spacing must be positive");
    detail::require(std::isfinite(wavelength_) && wavelength_ > 0.0,
                    "wavelength must be positive");
  }

  std::size_t num_elements() const noexcept { return num_elements_; }
  double spacing() const noexcept { return spacing_; }
  double wavelength() const noexcept { return wavelength_; }
  double length() const noexcept {
    return static_cast<double>(num_elements_ - 1) * spacing_;
  }
  double wave_number() const noexcept {
    return 2.0 * std::numbers::pi / wavelength_;
  }
  double element_position(std::size_t n) const noexcept {
    return static_cast<double>(n) * spacing_;
  }

  bool operator==(const ApertureConfig&) const = default;

 private:
  std::size_t num_elements_;
  double spacing_;
  double wavelength_;
};

inline std::vector<double> element_positions(const ApertureConfig& cfg) {
  std::vector<double> x(cfg.num_elements());
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = cfg.element_position(n);
  return x;
}

enum class ModulusMode { unit_modulus, unit_norm };

/// Analog beamforming vector ω. Unit-modulus weights have |ω_n| = 1/√N;
/// unit-norm weights (superposed baselines only) have ‖ω‖₂ = 1.
struct BeamWeights {
  std::vector<complex> coefficients;
  ModulusMode mode = ModulusMode::unit_modulus;

  std::size_t size() const noexcept { return coefficients.size(); }
  std::span<const complex> span() const noexcept { return coefficients; }

  /// Element phases arg(ω_n), wrapped to (-π, π].
  std::vector<double> phases() const {
    std::vector<double> out(coefficients.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = std::arg(coefficients[n]);
    return out;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += std::norm(c);
    return std::sqrt(s);
  }
};

/// ω_n = exp(jφ_n)/√N.
inline BeamWeights weights_from_phases(std::span<const double> phases) {
  detail::require(!phases.empty(), "phase vector is empty");
  const double amp = 1.0 / std::sqrt(static_cast<double>(phases.size()));
  BeamWeights w;
  w.coefficients.reserve(phases.size());
  for (double p : phases) {
    detail::require(std::isfinite(p), "phase must be finite");
    w.coefficients.push_back(std::polar(amp, p));
  }
  return w;
}

inline BeamWeights weights_from_phases(std::span<const double> phases,
                                       const ApertureConfig& cfg) {
  detail::require(phases.size() == cfg.num_elements(),
                  "phase vector length does not match element count");
  return weights_from_phases(phases);
}

}  // namespace tabs
