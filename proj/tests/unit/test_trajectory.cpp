#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "tabs/trajectory.hpp"

using namespace tabs;
using test::rel_err;

TEST(Trajectory, PositionSlopeIntercept) {
  const Trajectory c(ConstantPath{5.0}, 0.0, 100.0);
  EXPECT_EQ(c.position(10.0), 5.0);
  EXPECT_EQ(c.slope(10.0), 0.0);
  EXPECT_EQ(c.tangent_intercept(37.0), 5.0);

  const Trajectory l(LinearPath{0.3, 2.0}, 0.0, 100.0);
  EXPECT_EQ(l.slope(3.0), 0.3);
  EXPECT_NEAR(l.tangent_intercept(60.0), 2.0, 1e-13);

  const Trajectory p(ParabolicPath{0.0001, 0.0, +1}, 0.0, 500.0);
  EXPECT_NEAR(p.position(100.0), 1.0, 1e-15);
  EXPECT_NEAR(p.slope(100.0), 0.02, 1e-16);

  const Trajectory q(ParabolicPath{0.0001, 20.0, -1}, 0.0, 500.0);
  EXPECT_NEAR(q.tangent_intercept(100.0), 21.0, 1e-13);

  const Trajectory circle(CircularPath{80.0, 0.0, 0.0}, 0.0, 79.0);
  EXPECT_EQ(circle.position(0.0), 80.0);
  EXPECT_EQ(circle.slope(0.0), 0.0);
}

TEST(Trajectory, Validation) {
  EXPECT_THROW(Trajectory(ConstantPath{0.0}, 5.0, 5.0), InvalidArgument);
  EXPECT_THROW(Trajectory(ParabolicPath{0.0}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(Trajectory(ParabolicPath{-1.0}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(Trajectory(ParabolicPath{1.0, 0.0, 0}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(Trajectory(CircularPath{80.0}, 0.0, 80.0), InvalidArgument);
  EXPECT_THROW(Trajectory(CircularPath{0.0}, 0.0, 1.0), InvalidArgument);
  const Trajectory t(ConstantPath{1.0}, 0.0, 10.0);
  EXPECT_THROW(t.position(10.5), InvalidArgument);
  EXPECT_THROW(t.slope(-0.1), InvalidArgument);
}

TEST(Tangency, ParabolaAndCircleExamples) {
  const Trajectory q(ParabolicPath{0.0001, 20.0, -1}, 0.0, 500.0);
  EXPECT_NEAR(solve_tangency(q, 21.0), 100.0, 1e-6);

  const Trajectory circle(CircularPath{80.0}, 0.0, 79.5);
  const double z = solve_tangency(circle, 160.0);
  EXPECT_NEAR(z, 69.282032302755091741, 1e-6);
  EXPECT_NEAR(circle.position(z), 40.0, 1e-6);
}

TEST(Tangency, DegenerateLinearImage) {
  const Trajectory l(LinearPath{0.5, 3.0}, 0.0, 100.0);
  TangencySolver s(l);
  EXPECT_TRUE(s.degenerate());
  EXPECT_EQ(s.solve(3.0), 0.0);
  try {
    s.solve(10.0);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("xi outside image of T"), std::string::npos);
  }
}

TEST(Tangency, OutsideImageAndNonMonotone) {
  const Trajectory q(ParabolicPath{0.0001, 0.0, -1}, 0.0, 1000.0);
  EXPECT_THROW(solve_tangency(q, -1.0), InvalidArgument);
  EXPECT_THROW(solve_tangency(q, 101.0), InvalidArgument);
  // T(z) = α z² is not monotone across the apex.
  const Trajectory both(ParabolicPath{0.0001, 0.0, -1}, -100.0, 100.0);
  EXPECT_THROW(TangencySolver{both}, NumericalError);
}

TEST(Tangency, PropertyLeftInverse) {
  auto g = test::rng(11);
  const Trajectory traj[] = {
      Trajectory(ParabolicPath{0.00025, 0.0, -1}, 10.0, 1400.0),
      Trajectory(ParabolicPath{0.001, 5.0, +1}, 1.0, 300.0),
      Trajectory(CircularPath{80.0}, 0.0, 79.0),
      Trajectory(CircularPath{50.0, 200.0, 10.0}, 10.0, 55.0),
  };
  for (const auto& t : traj) {
    const TangencySolver s(t);
    for (int i = 0; i < 200; ++i) {
      const double z = test::uniform(g, t.z_start(), t.z_end());
      EXPECT_NEAR(s.solve(t.tangent_intercept(z)), z, 1e-7) << "z=" << z;
    }
  }
}

TEST(Tangency, PropertySecondOrderContact) {
  const Trajectory t(ParabolicPath{0.00025, 0.0, -1}, 10.0, 1400.0);
  for (double z : {50.0, 300.0, 900.0}) {
    const double s = t.slope(z);
    auto line = [&](double zz) { return t.position(z) + s * (zz - z); };
    const double e1 = std::abs(t.position(z + 1.0) - line(z + 1.0));
    const double e2 = std::abs(t.position(z + 0.5) - line(z + 0.5));
    EXPECT_NEAR(e1 / e2, 4.0, 1e-6);
  }
}

TEST(ArcLength, Examples) {
  EXPECT_NEAR(arc_length(Trajectory(ConstantPath{3.0}, 0.0, 100.0)), 100.0, 1e-12);
  EXPECT_NEAR(arc_length(Trajectory(LinearPath{1.0}, 0.0, 100.0)), 100.0 * std::sqrt(2.0), 1e-10);
  const Trajectory p(ParabolicPath{0.00025, 0.0, +1}, 0.0, 200.0);
  EXPECT_LT(rel_err(arc_length(p), 200.33283511041646603), 1e-12);
  // dense trapezoid oracle
  const std::size_t m = 200000;
  double sum = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double z = 200.0 * i / m;
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    sum += w * std::sqrt(1.0 + std::pow(2 * 0.00025 * z, 2));
  }
  EXPECT_LT(rel_err(arc_length(p), sum * 200.0 / m), 1e-6);
}

TEST(ArcLength, PropertyAtLeastSegmentLength) {
  auto g = test::rng(12);
  for (int i = 0; i < 50; ++i) {
    const double a = test::uniform(g, 0.0, 100.0);
    const double b = a + test::uniform(g, 1.0, 500.0);
    const Trajectory p(ParabolicPath{test::uniform(g, 1e-5, 1e-2), 0.0, -1}, a, b);
    EXPECT_GT(arc_length(p), b - a);
    EXPECT_NEAR(arc_length(Trajectory(ConstantPath{1.0}, a, b)), b - a, 1e-12 * b);
  }
}

TEST(SamplePoints, WeightsMatchArcLength) {
  const auto c = sample_points(Trajectory(ConstantPath{2.0}, 0.0, 100.0), 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].z, 0.0);
  EXPECT_EQ(c[1].z, 100.0);
  EXPECT_EQ(c[0].arc_weight, 50.0);
  EXPECT_EQ(c[1].arc_weight, 50.0);

  double sum = 0.0;
  for (const auto& s : sample_points(Trajectory(LinearPath{1.0}, 0.0, 100.0), 101)) sum += s.arc_weight;
  EXPECT_NEAR(sum, 141.42135623730951, 1e-10);

  const Trajectory p(ParabolicPath{0.00025, 0.0, -1}, 0.0, 200.0);
  sum = 0.0;
  for (const auto& s : sample_points(p, 1000)) sum += s.arc_weight;
  EXPECT_LT(rel_err(sum, arc_length(p)), 1e-6);
  EXPECT_THROW(sample_points(p, 1), InvalidArgument);
}

TEST(Tabulated, CubicSplineErrorOrder) {
  const Trajectory exact(CircularPath{80.0}, 0.0, 70.0);
  auto max_err = [&](std::size_t n) {
    std::vector<double> z(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = 70.0 * i / (n - 1);
      x[i] = exact.position(z[i]);
    }
    const TabulatedPath tp(z, x, 3);
    double ev = 0.0, ed = 0.0;
    // interior only: the natural end condition is first order at the ends
    for (double zz = 10.0; zz <= 60.0; zz += 0.137) {
      ev = std::max(ev, std::abs(tp.value(zz) - exact.position(zz)));
      ed = std::max(ed, std::abs(tp.derivative(zz) - exact.slope(zz)));
    }
    return std::pair{ev, ed};
  };
  const auto [v1, d1] = max_err(41);
  const auto [v2, d2] = max_err(81);
  EXPECT_GT(v1 / v2, 12.0);  // ≈ 16 for O(h⁴)
  EXPECT_GT(d1 / d2, 6.0);   // ≈ 8 for O(h³)
  EXPECT_LT(v2, 1e-6);
}

TEST(Tabulated, LinearOrderAndValidation) {
  const TabulatedPath lin({0.0, 1.0, 3.0}, {0.0, 2.0, 2.0}, 1);
  EXPECT_EQ(lin.value(0.5), 1.0);
  EXPECT_EQ(lin.derivative(2.0), 0.0);
  EXPECT_THROW(TabulatedPath({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, 3), InvalidArgument);
  EXPECT_THROW(TabulatedPath({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 3.0}, 3), InvalidArgument);
  EXPECT_THROW(TabulatedPath({0.0, 1.0}, {0.0, 1.0}, 2), InvalidArgument);
  EXPECT_THROW(Trajectory(lin, 0.0, 4.0), InvalidArgument);
}

TEST(Tabulated, LoadsCsvWithHeader) {
  const auto path = std::filesystem::temp_directory_path() / "tabs_traj_test.csv";
  {
    std::ofstream f(path);
    f << "# sampled parabola\nz,x\n";
    for (int i = 0; i <= 20; ++i) f << i * 10 << ',' << -0.001 * i * i * 100 << '\n';
  }
  const auto tp = load_tabulated_csv(path.string());
  EXPECT_EQ(tp.z().size(), 21u);
  EXPECT_NEAR(tp.value(100.0), -10.0, 1e-12);
  std::filesystem::remove(path);
  EXPECT_THROW(load_tabulated_csv("/nonexistent/t.csv"), InvalidArgument);
}
