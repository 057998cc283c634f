#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"
#include "tabs/phase_design.hpp"

using namespace tabs;
using test::rel_err;
constexpr double kPi = std::numbers::pi;
constexpr double kK0 = 2.0 * kPi;

namespace {

const ApertureConfig kPaperArray(1001, 0.5);

std::size_t index_of(const PhaseProfile& p, double xi) {
  const auto it = std::lower_bound(p.xi.begin(), p.xi.end(), xi - 1e-12);
  return static_cast<std::size_t>(it - p.xi.begin());
}

double central_diff(const PhaseProfile& p, std::size_t i) {
  return (p.phase[i + 1] - p.phase[i - 1]) / (p.xi[i + 1] - p.xi[i - 1]);
}

double circle_gradient(double xi, double r) {
  const double u = xi / r;
  return -kK0 * std::sqrt(u * u - 1.0) / u;
}

}  // namespace

TEST(ApertureGrid, UniformAndEndsExactly) {
  const auto p = design_numeric(Trajectory(ConstantPath{0.0}, 1.0, 10.0), kPaperArray);
  EXPECT_EQ(p.xi.size(), 4001u);
  EXPECT_EQ(p.xi.front(), 0.0);
  EXPECT_EQ(p.xi.back(), 500.0);
  for (std::size_t i = 1; i < p.xi.size(); ++i) ASSERT_GT(p.xi[i], p.xi[i - 1]);
  EXPECT_THROW(design_numeric(Trajectory(ConstantPath{0.0}, 1.0, 10.0), kPaperArray, {0.0}),
               InvalidArgument);
}

TEST(DesignNumeric, ConstantTrajectoryGivesZeroPhase) {
  const auto p = design_numeric(Trajectory(ConstantPath{12.0}, 1.0, 100.0), kPaperArray);
  for (double v : p.phase) ASSERT_EQ(v, 0.0);
  for (double v : p.element_phases) ASSERT_EQ(v, 0.0);
  EXPECT_FALSE(p.padded());
}

TEST(DesignNumeric, LinearTrajectoryIsPlaneWave) {
  const double m = 0.75;
  const auto p = design_numeric(Trajectory(LinearPath{m, 10.0}, 1.0, 100.0), kPaperArray);
  for (std::size_t i = 0; i < p.xi.size(); i += 97)
    EXPECT_NEAR(p.phase[i], kK0 * p.xi[i] * m / std::sqrt(1.0 + m * m), 1e-9);
}

TEST(Discretize, PlaneWaveThreeElements) {
  const ApertureConfig cfg(3, 0.5);
  const auto p = design_numeric(Trajectory(LinearPath{1.0 / std::sqrt(3.0)}, 1.0, 10.0), cfg);
  ASSERT_EQ(p.element_phases.size(), 3u);
  EXPECT_NEAR(p.element_phases[0], 0.0, 1e-14);
  EXPECT_NEAR(p.element_phases[1], kPi / 2, 1e-12);
  EXPECT_NEAR(p.element_phases[2], kPi, 1e-12);
}

TEST(DesignCircular, ClosedFormValues) {
  const auto p = design_circular(80.0, kPaperArray);
  EXPECT_EQ(p.phase[index_of(p, 80.0)], 0.0);
  // |φ(2R)| = k0·80·(√3 − π/3); negative under the e^{−jk0r} convention
  EXPECT_LT(rel_err(p.phase[index_of(p, 160.0)], -344.24479344099210861), 1e-13);
  EXPECT_TRUE(p.padded());
  EXPECT_EQ(p.covered_min, 80.0);
  EXPECT_THROW(design_circular(500.0, kPaperArray), NumericalError);
  EXPECT_THROW(design_circular(80.0, kPaperArray, {8.0, PadMode::strict}), NumericalError);
  EXPECT_THROW(design_circular(-1.0, kPaperArray), InvalidArgument);
}

TEST(DesignCircular, ElementPhasesMatchDirectEvaluation) {
  const auto p = design_circular(80.0, kPaperArray);
  for (std::size_t n = 160; n < kPaperArray.num_elements(); ++n) {
    const double u = kPaperArray.element_position(n) / 80.0;
    const double direct = -kK0 * 80.0 * (std::sqrt(u * u - 1.0) - specfun::arcsec(u));
    ASSERT_NEAR(p.element_phases[n], direct, 1e-3) << "n=" << n;
  }
}

TEST(DesignNumeric, CircleGradientMatchesClosedForm) {
  const Trajectory circle(CircularPath{80.0}, 0.0, 79.9);
  const auto p = design_numeric(circle, kPaperArray);
  for (std::size_t i = index_of(p, 1.05 * 80); p.xi[i] <= 3 * 80; ++i)
    ASSERT_LT(rel_err(central_diff(p, i), circle_gradient(p.xi[i], 80.0)), 1e-4) << p.xi[i];
}

TEST(DesignNumeric, CircleGradientAcrossFullCoveredRange) {
  const Trajectory circle(CircularPath{80.0}, 0.0, 79.9);
  const auto pn = design_numeric(circle, kPaperArray);
  const auto pc = design_circular(80.0, kPaperArray);
  for (std::size_t i = index_of(pn, 80.0); i < pn.xi.size(); ++i)
    ASSERT_LT(rel_err(pn.gradient[i], pc.gradient[i]), 1e-6) << pn.xi[i];
}

TEST(DesignParabolic, OracleValue) {
  const auto p = design_parabolic(0.0001, kPaperArray);
  EXPECT_EQ(p.phase[0], 0.0);
  EXPECT_LT(rel_err(p.phase[index_of(p, 100.0)], -82.791493812207985859), 1e-12);
  EXPECT_FALSE(p.padded());
  EXPECT_THROW(design_parabolic(0.0, kPaperArray), InvalidArgument);
}

TEST(DesignParabolic, MatchesNumericOnMatchingParabola) {
  const double a = 0.0001;
  const Trajectory traj(ParabolicPath{a, 0.0, -1}, 0.0, std::sqrt(500.0 / a));
  const auto pn = design_numeric(traj, kPaperArray);
  const auto pp = design_parabolic(a, kPaperArray);
  ASSERT_EQ(pn.xi, pp.xi);
  for (std::size_t i = 1; i < pn.xi.size(); ++i) {
    ASSERT_LT(rel_err(pn.gradient[i], pp.gradient[i]), 1e-3) << pn.xi[i];
    ASSERT_NEAR(pn.phase[i], pp.phase[i], 1e-6 * (1.0 + std::abs(pp.phase[i])));
  }
}

TEST(DesignNumeric, StrictPadRefusesUncoveredAperture) {
  const Trajectory traj(ParabolicPath{0.0001, 0.0, -1}, 0.0, 1000.0);  // T up to 100
  EXPECT_THROW(design_numeric(traj, kPaperArray, {8.0, PadMode::strict}), NumericalError);
  const auto p = design_numeric(traj, kPaperArray);
  EXPECT_TRUE(p.padded());
  const double last = p.phase[index_of(p, 100.0)];
  for (std::size_t i = index_of(p, 100.0); i < p.xi.size(); ++i) ASSERT_NEAR(p.phase[i], last, 1e-9);
}

TEST(DesignNumeric, NoOverlapWithAperture) {
  const Trajectory traj(ParabolicPath{0.0001, 0.0, +1}, 1.0, 1000.0);  // T < 0
  EXPECT_THROW(design_numeric(traj, kPaperArray), NumericalError);
}

TEST(TotalPhase, Examples) {
  const auto flat = design_numeric(Trajectory(ConstantPath{0.0}, 1.0, 10.0), kPaperArray);
  const auto tp = total_phase(flat, 0.0, 100.0, kPaperArray);
  EXPECT_NEAR(tp.exact[0], 200.0 * kPi, 1e-10);
  const auto t2 = total_phase(flat, 10.0, 100.0, kPaperArray);
  EXPECT_NEAR(t2.fresnel[0] - t2.exact[0], 0.0078149554574572016376, 1e-10);
  EXPECT_THROW(total_phase(flat, 0.0, 0.0, kPaperArray), InvalidArgument);
}

namespace {

struct Designed {
  const char* name;
  Trajectory traj;
};

std::vector<Designed> designed_cases() {
  return {{"circle", Trajectory(CircularPath{80.0}, 0.0, 79.9)},
          {"parabola", Trajectory(ParabolicPath{0.0001, 0.0, -1}, 0.0, 2236.1)},
          {"paper_link", Trajectory(ParabolicPath{0.00025, 0.0, -1}, 0.0, 1414.3)},
          {"offset_circle", Trajectory(CircularPath{120.0, 30.0, 0.0}, 0.0, 110.0)}};
}

}  // namespace

// Generalized Snell law: dφ/dξ = k0·sinθ of the ray tangent to the path.
TEST(DesignProperties, SnellGradientLaw) {
  for (const auto& c : designed_cases()) {
    const auto p = design_numeric(c.traj, kPaperArray);
    const TangencySolver s(c.traj);
    for (std::size_t i = 1; i + 1 < p.xi.size(); ++i) {
      if (p.xi[i] < p.covered_min + 1.0 || p.xi[i] > p.covered_max - 1.0) continue;
      const double snell = kK0 * s.ray(p.xi[i]).sin_deviation();
      ASSERT_LE(std::abs(central_diff(p, i) - snell) / kK0, 1e-3) << c.name << " xi=" << p.xi[i];
    }
  }
}

TEST(DesignProperties, SteeringLimit) {
  for (const auto& c : designed_cases()) {
    const auto p = design_numeric(c.traj, kPaperArray);
    for (std::size_t i = 1; i < p.xi.size(); ++i)
      ASSERT_LE(std::abs(p.phase[i] - p.phase[i - 1]) / (p.xi[i] - p.xi[i - 1]), kK0) << c.name;
  }
}

// At a caustic point both stationary-phase conditions hold at ξ = T(z):
// ∂Ψ/∂ξ has a double zero there (it touches zero rather than crossing) and
// ∂²Ψ/∂ξ² vanishes.
TEST(DesignProperties, StationaryPhaseAtCausticPoints) {
  for (const auto& c : designed_cases()) {
    const auto p = design_numeric(c.traj, kPaperArray);
    const double dxi = p.xi[1] - p.xi[0];
    for (double f : {0.3, 0.5, 0.7}) {
      const double z = c.traj.z_start() + f * (c.traj.z_end() - c.traj.z_start());
      const double x = c.traj.position(z);
      const double xi_t = c.traj.tangent_intercept(z);
      if (xi_t < p.covered_min + 2 || xi_t > p.covered_max - 2) continue;
      auto dpsi = [&](std::size_t i) {
        const double dx = x - p.xi[i];
        return p.gradient[i] - kK0 * dx / std::sqrt(dx * dx + z * z);
      };
      const std::size_t i0 = index_of(p, xi_t);
      std::size_t best = i0;
      for (std::size_t i = i0 - 20; i <= i0 + 20; ++i)
        if (std::abs(dpsi(i)) < std::abs(dpsi(best))) best = i;
      EXPECT_LE(std::abs(p.xi[best] - xi_t), dxi) << c.name << " z=" << z;
      EXPECT_LE(std::abs(dpsi(best)) / kK0, 1e-4) << c.name << " z=" << z;

      const auto psi = total_phase(p, x, z, kPaperArray);
      const double d2 = (psi.exact[i0 + 1] - 2 * psi.exact[i0] + psi.exact[i0 - 1]) / (dxi * dxi);
      EXPECT_LT(std::abs(d2) / (kK0 / z), 2e-2) << c.name << " z=" << z;
    }
  }
}

TEST(DesignProperties, ResolutionDoublingConverges) {
  for (const auto& c : designed_cases()) {
    const auto a = design_numeric(c.traj, kPaperArray, {8.0});
    const auto b = design_numeric(c.traj, kPaperArray, {16.0});
    double ss = 0.0;
    for (std::size_t n = 0; n < a.element_phases.size(); ++n)
      ss += std::pow(a.element_phases[n] - b.element_phases[n], 2);
    EXPECT_LE(std::sqrt(ss / a.element_phases.size()), 1e-4) << c.name;
  }
}
