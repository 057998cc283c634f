#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tabs/aperture.hpp"
#include "tabs/baselines.hpp"
#include "tabs/io.hpp"
#include "tabs/metrics.hpp"
#include "tabs/nearfield.hpp"
#include "tabs/phase_design.hpp"
#include "tabs/scenario.hpp"
#include "tabs/trajectory.hpp"

namespace tabs::commands {

namespace fs = std::filesystem;
using scenario::DesignMethod;
using scenario::Scenario;
using scenario::ScenarioError;

struct Options {
  fs::path out_dir;          ///< empty: use the scenario's `output`
  fs::path scenario_dir;     ///< base for relative paths inside the scenario
  unsigned threads = 1;
  std::optional<std::size_t> samples;
};

/// Weights produced by the scenario's design method.
struct Design {
  std::string label;
  BeamWeights weights;
  std::optional<PhaseProfile> profile;
};

/// Everything a command needs, built once from a validated scenario.
struct Context {
  Scenario scenario;
  ApertureConfig cfg;
  Trajectory traj;
  fs::path out;
  unsigned threads;
  std::size_t samples;
};

inline Context make_context(const Scenario& s, const Options& opt) {
  scenario::validate(s);
  ApertureConfig cfg = scenario::make_aperture(s);
  Trajectory traj = scenario::make_trajectory(s, opt.scenario_dir);
  fs::path out = opt.out_dir.empty() ? fs::path(s.output) : opt.out_dir;
  fs::create_directories(out);
  const std::size_t samples = opt.samples.value_or(s.evaluation.samples);
  if (samples < 100) throw ScenarioError("evaluation needs at least 100 trajectory samples");
  return {s, cfg, std::move(traj), std::move(out), std::max(1u, opt.threads), samples};
}

inline Design build_design(const Context& ctx, std::ostream& log) {
  const auto& d = ctx.scenario.design;
  const DesignOptions opts{d.samples_per_wavelength, d.pad_mode};
  Design out;
  switch (d.method) {
    case DesignMethod::numeric:
      out.profile = design_numeric(ctx.traj, ctx.cfg, opts);
      break;
    case DesignMethod::circular:
      out.profile = design_circular(ctx.scenario.trajectory.radius, ctx.cfg, opts);
      break;
    case DesignMethod::parabolic:
      out.profile = design_parabolic(ctx.scenario.trajectory.curvature, ctx.cfg, opts);
      break;
    case DesignMethod::focus:
      out.label = "bf";
      out.weights = focus_weights(scenario::resolve_focal(*d.focal, ctx.traj), ctx.cfg);
      return out;
    case DesignMethod::multipoint: {
      out.label = "multipoint";
      const auto pts = focal_points_uniform_x(ctx.traj, d.focal_count);
      out.weights = multipoint_weights(pts, ctx.cfg, d.superposition);
      return out;
    }
    case DesignMethod::tracking: {
      out.label = "tracking";
      const double z0 = ctx.traj.z_start();
      out.weights = focus_weights({ctx.traj.position(z0), z0}, ctx.cfg);
      return out;
    }
  }
  for (const auto& w : out.profile->warnings) log << "warning: " << w << '\n';
  out.label = "tabs";
  out.weights = weights_from_phases(out.profile->element_phases, ctx.cfg);
  return out;
}

/// `design`: aperture profile (ξ, φ) and element phases (n, φ_n).
inline void run_design(const Context& ctx, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Design d = build_design(ctx, log);
  const auto t1 = std::chrono::steady_clock::now();
  if (d.profile) {
    io::write_profile_samples((ctx.out / "profile_samples.csv").string(), *d.profile);
    io::write_element_phases((ctx.out / "element_phases.csv").string(), d.profile->element_phases);
  } else {
    io::write_element_phases((ctx.out / "element_phases.csv").string(), d.weights.phases());
  }
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const std::size_t ops = d.profile ? d.profile->evaluations : ctx.cfg.num_elements();
  log << "design " << scenario::to_string(ctx.scenario.design.method) << ": "
      << ctx.cfg.num_elements() << " elements, " << ops << " evaluations, " << ms << " ms\n";
}

inline FieldGrid compute_fieldmap(const Context& ctx, const BeamWeights& w) {
  if (!ctx.scenario.grid) throw ScenarioError("fieldmap needs a 'grid' section");
  const auto& g = *ctx.scenario.grid;
  return field_grid(w, ctx.cfg, {g.x_min, g.x_max}, {g.z_min, g.z_max}, g.nx, g.nz, ctx.threads);
}

/// `fieldmap`: intensity grid as CSV and PGM, plus its ridge.
inline void run_fieldmap(const Context& ctx, std::ostream& log) {
  const Design d = build_design(ctx, log);
  const FieldGrid grid = compute_fieldmap(ctx, d.weights);
  io::write_grid_csv((ctx.out / "field.csv").string(), grid);
  io::write_grid_pgm((ctx.out / "field.pgm").string(), grid);
  io::write_ridge((ctx.out / "ridge.csv").string(), ridge_trace(grid));
  log << "fieldmap: " << grid.nx << "x" << grid.nz << " nodes, peak " << io::fmt(grid.max_value())
      << '\n';
}

inline std::vector<IntensitySample> design_profile(const Context& ctx, const Design& d) {
  if (ctx.scenario.design.method == DesignMethod::tracking) {
    const TrackingPolicy policy{ctx.scenario.evaluation.tracking_gamma, ctx.samples};
    return tracking_run(ctx.traj, ctx.cfg, policy).profile;
  }
  return intensity_along_trajectory(d.weights, ctx.cfg, ctx.traj, ctx.samples);
}

/// `reliability`: R_S(γ) per method, plus the multipoint count sweep.
inline void run_reliability(const Context& ctx, std::ostream& log) {
  const auto& ev = ctx.scenario.evaluation;
  if (ev.gammas.empty()) throw ScenarioError("reliability needs evaluation.gammas");
  const Design d = build_design(ctx, log);

  auto curve = [&](const std::vector<IntensitySample>& samples, std::string label) {
    ReliabilityCurve c;
    c.method = std::move(label);
    c.sample_count = samples.size();
    c.thresholds = ev.gammas;
    for (double g : ev.gammas) c.values.push_back(spatial_outage_reliability(samples, g));
    return c;
  };

  const auto design_samples = design_profile(ctx, d);
  std::vector<ReliabilityCurve> curves{curve(design_samples, d.label)};
  if (ev.baseline_focal) {
    const auto bf = focus_weights(scenario::resolve_focal(*ev.baseline_focal, ctx.traj), ctx.cfg);
    curves.push_back(curve(intensity_along_trajectory(bf, ctx.cfg, ctx.traj, ctx.samples), "bf"));
  }
  io::write_reliability((ctx.out / "reliability.csv").string(), curves);
  for (const auto& c : curves) {
    log << "reliability " << c.method << ':';
    for (std::size_t i = 0; i < c.values.size(); ++i)
      log << " R(" << c.thresholds[i] << ")=" << c.values[i];
    log << '\n';
  }

  if (!ev.multipoint_counts.empty()) {
    const double g = ev.multipoint_gamma;
    const double design_rs = spatial_outage_reliability(design_samples, g);
    auto out = io::detail::open((ctx.out / "multipoint.csv").string());
    out << "focal_count,gamma,reliability_multipoint," << "reliability_" << d.label << '\n';
    for (std::size_t k : ev.multipoint_counts) {
      const auto pts = focal_points_uniform_x(ctx.traj, k);
      const auto w = multipoint_weights(pts, ctx.cfg, ctx.scenario.design.superposition);
      const auto s = intensity_along_trajectory(w, ctx.cfg, ctx.traj, ctx.samples);
      const double rs = spatial_outage_reliability(s, g);
      out << k << ',' << io::fmt(g) << ',' << io::fmt(rs) << ',' << io::fmt(design_rs) << '\n';
      log << "multipoint K=" << k << ": R(" << g << ")=" << rs << '\n';
    }
  }
}

/// `compare`: trajectory profiles per method and beam-switching counts.
inline void run_compare(const Context& ctx, std::ostream& log) {
  const auto& ev = ctx.scenario.evaluation;
  const Design d = build_design(ctx, log);
  auto out = io::detail::open((ctx.out / "summary.csv").string());
  out << "method,switch_count,min_intensity,max_intensity\n";

  auto summarize = [&](const std::string& label, const std::vector<IntensitySample>& s,
                       std::size_t switches) {
    double lo = s.front().intensity, hi = lo;
    for (const auto& p : s) {
      lo = std::min(lo, p.intensity);
      hi = std::max(hi, p.intensity);
    }
    out << label << ',' << switches << ',' << io::fmt(lo) << ',' << io::fmt(hi) << '\n';
    log << "compare " << label << ": " << switches << " switches, I in [" << lo << ", " << hi
        << "]\n";
  };

  const auto design_samples = intensity_along_trajectory(d.weights, ctx.cfg, ctx.traj, ctx.samples);
  io::write_intensity_profile((ctx.out / ("profile_" + d.label + ".csv")).string(), design_samples);
  std::optional<BeamWeights> bf;
  if (ev.baseline_focal) {
    bf = focus_weights(scenario::resolve_focal(*ev.baseline_focal, ctx.traj), ctx.cfg);
    io::write_intensity_profile((ctx.out / "profile_bf.csv").string(),
                                intensity_along_trajectory(*bf, ctx.cfg, ctx.traj, ctx.samples));
  }

  if (ev.tracking_gamma > 0.0) {
    const TrackingPolicy policy{ev.tracking_gamma, ctx.samples};
    const auto tracked = tracking_run(ctx.traj, ctx.cfg, policy);
    io::write_tracking((ctx.out / "tracking_bf.csv").string(), tracked);
    summarize("tracking_bf", tracked.profile, tracked.switch_count());
    const auto own = tracking_run(ctx.traj, ctx.cfg, policy, d.weights);
    io::write_tracking((ctx.out / ("tracking_" + d.label + ".csv")).string(), own);
    summarize("tracking_" + d.label, own.profile, own.switch_count());
  } else {
    summarize(d.label, design_samples, 0);
  }
}

}  // namespace tabs::commands
