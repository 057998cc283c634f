#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "tabs/error.hpp"

namespace tabs::specfun {

/// Parameters (a, b; c) of the Gauss hypergeometric function ₂F₁.
struct Hyp2F1Params {
  double a = 0.5;
  double b = 1.5;
  double c = 2.5;
};

/// The instance that appears in the parabolic-trajectory phase profile.
inline constexpr Hyp2F1Params kParabolicParams{0.5, 1.5, 2.5};

namespace detail {

inline void check_params(const Hyp2F1Params& p) {
  const bool c_nonpositive_int = p.c <= 0.0 && std::floor(p.c) == p.c;
  if (c_nonpositive_int)
    throw InvalidArgument("2F1: c must not be a non-positive integer");
}

inline constexpr std::size_t kMaxTerms = 10'000'000;

}  // namespace detail

/// Direct power series Σ (a)_k (b)_k / (c)_k · x^k / k!, valid for |x| < 1.
/// Terms are accumulated until |term| < 1e-16·|sum|.
inline double hyp2f1_series(const Hyp2F1Params& p, double x) {
  detail::check_params(p);
  if (!(std::abs(x) < 1.0))
    throw InvalidArgument("2F1 series requires |x| < 1");
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t k = 0; k < detail::kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    term *= (p.a + kd) * (p.b + kd) / ((p.c + kd) * (kd + 1.0)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw NumericalError("2F1 series did not converge");
}

/// Pfaff transformation: ₂F₁(a,b;c;x) = (1−x)^(−a) ₂F₁(a, c−b; c; x/(x−1)).
/// For x ≤ 0 the transformed argument lies in [0, 1).
inline double hyp2f1_pfaff(const Hyp2F1Params& p, double x) {
  if (x > 0.0) throw InvalidArgument("2F1 Pfaff path requires x <= 0");
  const double y = x / (x - 1.0);
  return std::pow(1.0 - x, -p.a) * hyp2f1_series({p.a, p.c - p.b, p.c}, y);
}

/// ₂F₁(a,b;c;x) for x ≤ 0: direct series for |x| < 0.5, Pfaff otherwise.
inline double gauss_2f1(const Hyp2F1Params& p, double x) {
  detail::check_params(p);
  if (!(x <= 0.0)) throw InvalidArgument("2F1 is only supported for x <= 0");
  if (x == 0.0) return 1.0;
  if (x > -0.5) return hyp2f1_series(p, x);
  return hyp2f1_pfaff(p, x);
}

/// Principal arcsec(x) = arccos(1/x) ∈ [0, π], |x| ≥ 1.
inline double arcsec(double x) {
  if (!(std::abs(x) >= 1.0)) throw InvalidArgument("arcsec requires |x| >= 1");
  return std::acos(1.0 / x);
}

}  // namespace tabs::specfun
