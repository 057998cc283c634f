// Designs a parabolic-trajectory beam for a 1001-element array and compares
// its received strength along the path with a single focused beam.
#include <cstdio>

#include "tabs/baselines.hpp"
#include "tabs/metrics.hpp"
#include "tabs/phase_design.hpp"

int main() {
  const tabs::ApertureConfig cfg(1001, 0.5);
  const double alpha = 0.00025;
  const tabs::Trajectory traj(tabs::ParabolicPath{alpha, 0.0, -1}, 200.0, 1350.0);

  const auto profile = tabs::design_parabolic(alpha, cfg);
  const auto tabs_w = tabs::weights_from_phases(profile.element_phases, cfg);
  const auto bf_w = tabs::focus_weights(tabs::point_at_x(traj, -100.0), cfg);

  const auto a = tabs::intensity_along_trajectory(tabs_w, cfg, traj, 2000);
  const auto b = tabs::intensity_along_trajectory(bf_w, cfg, traj, 2000);
  for (double g : {0.0015, 0.005, 0.01})
    std::printf("gamma %-7g  designed %.3f  focused %.3f\n", g,
                tabs::spatial_outage_reliability(a, g), tabs::spatial_outage_reliability(b, g));
}
