#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tabs/error.hpp"

namespace tabs {

// Trajectory shapes. Each describes x = c(z) in the x–z plane; the array
// sits on the x-axis and radiates toward z > 0.

/// x = x0.
struct ConstantPath {
  double x0 = 0.0;
  bool operator==(const ConstantPath&) const = default;
};

/// x = x0 + m·z.
struct LinearPath {
  double slope = 0.0;
  double intercept = 0.0;
  bool operator==(const LinearPath&) const = default;
};

/// x = apex_x + σ·α·z². σ = −1 bends toward −x, which is the orientation the
/// closed-form parabolic profile realizes from an aperture starting at x = 0.
struct ParabolicPath {
  double curvature = 0.0;
  double apex_x = 0.0;
  int orientation = -1;
  bool operator==(const ParabolicPath&) const = default;
};

/// x = cx + √(R² − (z − cz)²), the half of the circle facing the aperture.
struct CircularPath {
  double radius = 0.0;
  double center_x = 0.0;
  double center_z = 0.0;
  bool operator==(const CircularPath&) const = default;
};

/// Sampled path with linear or natural-cubic-spline interpolation.
class TabulatedPath {
 public:
  TabulatedPath(std::vector<double> z, std::vector<double> x, int order = 3)
      : z_(std::move(z)), x_(std::move(x)), order_(order) {
    detail::require(order_ == 1 || order_ == 3, "interpolation order must be 1 or 3");
    detail::require(z_.size() == x_.size(), "z and x sample counts differ");
    detail::require(z_.size() >= (order_ == 3 ? 4u : 2u),
                    "too few samples for the interpolation order");
    for (std::size_t i = 0; i < z_.size(); ++i)
      detail::require(std::isfinite(z_[i]) && std::isfinite(x_[i]),
                      "tabulated samples must be finite");
    for (std::size_t i = 1; i < z_.size(); ++i)
      detail::require(z_[i] > z_[i - 1], "tabulated z samples must be strictly increasing");
    if (order_ == 3) build_spline();
  }

  const std::vector<double>& z() const noexcept { return z_; }
  const std::vector<double>& x() const noexcept { return x_; }
  int order() const noexcept { return order_; }
  double z_min() const noexcept { return z_.front(); }
  double z_max() const noexcept { return z_.back(); }

  double value(double z) const {
    const std::size_t i = interval(z);
    const double h = z_[i + 1] - z_[i];
    const double t = (z - z_[i]) / h;
    if (order_ == 1) return x_[i] + t * (x_[i + 1] - x_[i]);
    const double a = 1.0 - t;
    return a * x_[i] + t * x_[i + 1] +
           ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[i + 1]) * h * h / 6.0;
  }

  double derivative(double z) const {
    const std::size_t i = interval(z);
    const double h = z_[i + 1] - z_[i];
    const double dx = (x_[i + 1] - x_[i]) / h;
    if (order_ == 1) return dx;
    const double t = (z - z_[i]) / h;
    const double a = 1.0 - t;
    return dx + (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * t * t - 1.0) * m_[i + 1]) * h / 6.0;
  }

  bool operator==(const TabulatedPath& o) const {
    return z_ == o.z_ && x_ == o.x_ && order_ == o.order_;
  }

 private:
  std::size_t interval(double z) const {
    auto it = std::upper_bound(z_.begin(), z_.end(), z);
    std::size_t i = it == z_.begin() ? 0 : static_cast<std::size_t>(it - z_.begin()) - 1;
    return std::min(i, z_.size() - 2);
  }

  // Natural spline second derivatives via the Thomas algorithm.
  void build_spline() {
    const std::size_t n = z_.size();
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = z_[i] - z_[i - 1];
      const double h1 = z_[i + 1] - z_[i];
      const double rhs =
          6.0 * ((x_[i + 1] - x_[i]) / h1 - (x_[i] - x_[i - 1]) / h0);
      const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
      c[i] = h1 / diag;
      d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  std::vector<double> z_;
  std::vector<double> x_;
  int order_;
  std::vector<double> m_;
};

/// A receiver path x = c(z) restricted to [z_start, z_end].
class Trajectory {
 public:
  using Shape =
      std::variant<ConstantPath, LinearPath, ParabolicPath, CircularPath, TabulatedPath>;

  Trajectory(Shape shape, double z_start, double z_end)
      : shape_(std::move(shape)), z_start_(z_start), z_end_(z_end) {
    detail::require(std::isfinite(z_start_) && std::isfinite(z_end_) && z_start_ < z_end_,
                    "trajectory segment needs z_start < z_end");
    std::visit([this](const auto& s) { validate(s); }, shape_);
  }

  const Shape& shape() const noexcept { return shape_; }
  double z_start() const noexcept { return z_start_; }
  double z_end() const noexcept { return z_end_; }
  bool contains(double z) const noexcept { return z >= z_start_ && z <= z_end_; }

  /// True when c′ is constant, i.e. every tangent ray meets the aperture at
  /// a single point and the caustic construction degenerates to a plane wave.
  bool has_constant_slope() const noexcept {
    return std::holds_alternative<ConstantPath>(shape_) ||
           std::holds_alternative<LinearPath>(shape_);
  }

  /// c(z).
  double position(double z) const {
    check(z);
    return std::visit([z](const auto& s) { return eval_position(s, z); }, shape_);
  }

  /// dc/dz.
  double slope(double z) const {
    check(z);
    return std::visit([z](const auto& s) { return eval_slope(s, z); }, shape_);
  }

  /// T(z) = c(z) − z·c′(z): where the tangent line at z crosses the aperture axis.
  double tangent_intercept(double z) const { return position(z) - z * slope(z); }

  bool operator==(const Trajectory&) const = default;

 private:
  void check(double z) const {
    if (!(z >= z_start_ && z <= z_end_))
      throw InvalidArgument("z = " + std::to_string(z) + " lies outside the trajectory segment");
  }

  void validate(const ConstantPath& s) const {
    detail::require(std::isfinite(s.x0), "constant path needs a finite x0");
  }
  void validate(const LinearPath& s) const {
    detail::require(std::isfinite(s.slope) && std::isfinite(s.intercept),
                    "linear path needs finite slope and intercept");
  }
  void validate(const ParabolicPath& s) const {
    detail::require(std::isfinite(s.curvature) && s.curvature > 0.0,
                    "parabolic curvature must be positive");
    detail::require(s.orientation == 1 || s.orientation == -1,
                    "parabolic orientation must be +1 or -1");
  }
  void validate(const CircularPath& s) const {
    detail::require(std::isfinite(s.radius) && s.radius > 0.0, "circle radius must be positive");
    detail::require(std::abs(z_start_ - s.center_z) < s.radius &&
                        std::abs(z_end_ - s.center_z) < s.radius,
                    "circular segment must satisfy |z - cz| < R at both ends");
  }
  void validate(const TabulatedPath& s) const {
    detail::require(z_start_ >= s.z_min() && z_end_ <= s.z_max(),
                    "segment extends beyond the tabulated samples");
  }

  static double eval_position(const ConstantPath& s, double) { return s.x0; }
  static double eval_position(const LinearPath& s, double z) { return s.intercept + s.slope * z; }
  static double eval_position(const ParabolicPath& s, double z) {
    return s.apex_x + s.orientation * s.curvature * z * z;
  }
  static double eval_position(const CircularPath& s, double z) {
    const double dz = z - s.center_z;
    return s.center_x + std::sqrt(s.radius * s.radius - dz * dz);
  }
  static double eval_position(const TabulatedPath& s, double z) { return s.value(z); }

  static double eval_slope(const ConstantPath&, double) { return 0.0; }
  static double eval_slope(const LinearPath& s, double) { return s.slope; }
  static double eval_slope(const ParabolicPath& s, double z) {
    return 2.0 * s.orientation * s.curvature * z;
  }
  static double eval_slope(const CircularPath& s, double z) {
    const double dz = z - s.center_z;
    const double h2 = s.radius * s.radius - dz * dz;
    if (!(h2 > 0.0)) throw NumericalError("circular trajectory is tangent-vertical at this z");
    return -dz / std::sqrt(h2);
  }
  static double eval_slope(const TabulatedPath& s, double z) { return s.derivative(z); }

  Shape shape_;
  double z_start_;
  double z_end_;
};

/// A ray launched at aperture point ξ that touches the trajectory at z*.
struct RayGeometry {
  double aperture_point = 0.0;
  double tangent_point = 0.0;
  double deviation_angle = 0.0;  ///< θ from the z-axis, tanθ = c′(z*)

  double sin_deviation() const { return std::sin(deviation_angle); }
};

/// Inverts the tangency map T(z) = c(z) − z·c′(z) on one trajectory.
///
/// Construction scans T on a uniform grid to confirm it is strictly monotone
/// (the ray-to-caustic map must be single-valued); each solve then brackets
/// ξ on that grid and bisects.
class TangencySolver {
 public:
  static constexpr std::size_t kScanPoints = 512;
  static constexpr double kTolerance = 1e-9;

  explicit TangencySolver(const Trajectory& traj) : traj_(traj) {
    z_.resize(kScanPoints);
    t_.resize(kScanPoints);
    const double a = traj.z_start();
    const double b = traj.z_end();
    for (std::size_t i = 0; i < kScanPoints; ++i) {
      z_[i] = i + 1 == kScanPoints
                  ? b
                  : a + (b - a) * static_cast<double>(i) / static_cast<double>(kScanPoints - 1);
      t_[i] = traj.tangent_intercept(z_[i]);
    }
    bool inc = true, dec = true, flat = true;
    for (std::size_t i = 1; i < kScanPoints; ++i) {
      const double d = t_[i] - t_[i - 1];
      inc = inc && d > 0.0;
      dec = dec && d < 0.0;
      flat = flat && std::abs(d) <= 1e-12 * (1.0 + std::abs(t_[i]));
    }
    if (flat) {
      kind_ = Kind::degenerate;
    } else if (inc) {
      kind_ = Kind::increasing;
    } else if (dec) {
      kind_ = Kind::decreasing;
    } else {
      throw NumericalError(
          "tangent intercept is not monotone over the segment; the trajectory is not a "
          "single-valued caustic of this aperture");
    }
  }

  bool degenerate() const noexcept { return kind_ == Kind::degenerate; }
  double image_min() const noexcept { return std::min(t_.front(), t_.back()); }
  double image_max() const noexcept { return std::max(t_.front(), t_.back()); }
  const Trajectory& trajectory() const noexcept { return traj_; }

  /// z* with |T(z*) − ξ| ≤ 1e-9 and a bracket no wider than 1e-9·(1 + |z*|). A degenerate (constant) T has the single
  /// preimage point z_start.
  double solve(double xi) const {
    if (kind_ == Kind::degenerate) {
      if (std::abs(xi - t_.front()) <= kTolerance) return traj_.z_start();
      throw InvalidArgument("xi outside image of T (all tangent rays share one intercept)");
    }
    if (!(xi >= image_min() - kTolerance && xi <= image_max() + kTolerance))
      throw InvalidArgument("xi outside image of T");
    const double sign = kind_ == Kind::increasing ? 1.0 : -1.0;
    // Bracket on the scan grid: first node with sign·T ≥ sign·ξ.
    auto it = std::lower_bound(t_.begin(), t_.end(), xi, [sign](double t, double v) {
      return sign * t < sign * v;
    });
    std::size_t hi = static_cast<std::size_t>(it - t_.begin());
    if (hi == 0) return z_.front();
    if (hi == t_.size()) return z_.back();
    double lo_z = z_[hi - 1];
    double hi_z = z_[hi];
    double mid = 0.5 * (lo_z + hi_z);
    for (int iter = 0; iter < 200; ++iter) {
      mid = 0.5 * (lo_z + hi_z);
      const double r = traj_.tangent_intercept(mid) - xi;
      if (r == 0.0) break;
      if (sign * r < 0.0) {
        lo_z = mid;
      } else {
        hi_z = mid;
      }
      // converge in z as well as in T: near a flat spot of T a small
      // residual can still hide a large error in z
      if (std::abs(r) <= kTolerance && hi_z - lo_z <= kTolerance * (1.0 + std::abs(mid))) break;
      if (hi_z - lo_z <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
    }
    return mid;
  }

  RayGeometry ray(double xi) const {
    const double z = solve(xi);
    return {xi, z, std::atan(traj_.slope(z))};
  }

 private:
  enum class Kind { increasing, decreasing, degenerate };

  Trajectory traj_;
  std::vector<double> z_;
  std::vector<double> t_;
  Kind kind_ = Kind::increasing;
};

inline double solve_tangency(const Trajectory& traj, double xi) {
  return TangencySolver(traj).solve(xi);
}

inline RayGeometry ray_geometry(const Trajectory& traj, double xi) {
  return TangencySolver(traj).ray(xi);
}

/// Geometric length ∫√(1 + c′²) dz over the segment (adaptive Gauss–Kronrod).
inline double arc_length(const Trajectory& traj) {
  auto f = [&traj](double z) {
    const double s = traj.slope(z);
    return std::sqrt(1.0 + s * s);
  };
  double error = 0.0;
  const double len = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, traj.z_start(), traj.z_end(), 20, 1e-12, &error);
  return len;
}

struct TrajectorySample {
  double x = 0.0;
  double z = 0.0;
  double arc_weight = 0.0;
};

/// Uniform-in-z samples with trapezoidal arc-length weights.
inline std::vector<TrajectorySample> sample_points(const Trajectory& traj, std::size_t count) {
  detail::require(count >= 2, "sample count must be at least 2");
  std::vector<TrajectorySample> out(count);
  const double a = traj.z_start();
  const double b = traj.z_end();
  const double dz = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = i + 1 == count ? b : a + dz * static_cast<double>(i);
    const double s = traj.slope(z);
    const double w = (i == 0 || i + 1 == count) ? 0.5 * dz : dz;
    out[i] = {traj.position(z), z, std::sqrt(1.0 + s * s) * w};
  }
  return out;
}

/// Reads a two-column (z, x) CSV. A non-numeric first line is treated as a header.
inline TabulatedPath load_tabulated_csv(const std::string& path, int order = 3) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open trajectory table: " + path);
  std::vector<double> z, x;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double zv = 0.0, xv = 0.0;
    if (!(ss >> zv >> xv)) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidArgument("malformed trajectory table row: " + line);
    }
    first = false;
    z.push_back(zv);
    x.push_back(xv);
  }
  return TabulatedPath(std::move(z), std::move(x), order);
}

}  // namespace tabs
