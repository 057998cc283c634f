#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "tabs/aperture.hpp"
#include "tabs/baselines.hpp"
#include "tabs/error.hpp"
#include "tabs/phase_design.hpp"
#include "tabs/trajectory.hpp"

namespace tabs::scenario {

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent scenario file.
class ScenarioError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class ShapeKind { constant, linear, parabolic, circular, tabulated };
enum class DesignMethod { numeric, circular, parabolic, focus, multipoint, tracking };

struct ApertureSpec {
  std::size_t num_elements = 0;
  double spacing = 0.5;
  bool operator==(const ApertureSpec&) const = default;
};

/// Flat description of a trajectory; only the fields of `shape` are used.
struct TrajectorySpec {
  ShapeKind shape = ShapeKind::constant;
  double x0 = 0.0;         // constant
  double slope = 0.0;      // linear
  double intercept = 0.0;  // linear
  double curvature = 0.0;  // parabolic
  double apex_x = 0.0;     // parabolic
  int orientation = -1;    // parabolic
  double radius = 0.0;     // circular
  double center_x = 0.0;   // circular
  double center_z = 0.0;   // circular
  std::string file;        // tabulated, relative to the scenario file
  int order = 3;           // tabulated
  double z_start = 0.0;
  double z_end = 0.0;
  bool operator==(const TrajectorySpec&) const = default;
};

/// A point given by x, z, or both; missing coordinates are resolved on the
/// trajectory.
struct FocalSpec {
  std::optional<double> x;
  std::optional<double> z;
  bool operator==(const FocalSpec&) const = default;
};

struct DesignSpec {
  DesignMethod method = DesignMethod::numeric;
  double samples_per_wavelength = 8.0;
  PadMode pad_mode = PadMode::zero;
  std::optional<FocalSpec> focal;  // focus
  std::size_t focal_count = 1;     // multipoint
  Superposition superposition = Superposition::unit_norm;
  bool operator==(const DesignSpec&) const = default;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t nx = 0;
  std::size_t nz = 0;
  bool operator==(const GridSpec&) const = default;
};

struct EvaluationSpec {
  std::size_t samples = 2000;
  std::vector<double> gammas;
  std::optional<FocalSpec> baseline_focal;
  std::vector<std::size_t> multipoint_counts;
  double multipoint_gamma = 0.0;
  double tracking_gamma = 0.0;
  bool operator==(const EvaluationSpec&) const = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string output = "out";
  ApertureSpec aperture;
  TrajectorySpec trajectory;
  DesignSpec design;
  std::optional<GridSpec> grid;
  EvaluationSpec evaluation;
  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// Enum names

inline const char* to_string(ShapeKind s) {
  switch (s) {
    case ShapeKind::constant: return "constant";
    case ShapeKind::linear: return "linear";
    case ShapeKind::parabolic: return "parabolic";
    case ShapeKind::circular: return "circular";
    case ShapeKind::tabulated: return "tabulated";
  }
  return "?";
}

inline const char* to_string(DesignMethod m) {
  switch (m) {
    case DesignMethod::numeric: return "numeric";
    case DesignMethod::circular: return "circular";
    case DesignMethod::parabolic: return "parabolic";
    case DesignMethod::focus: return "focus";
    case DesignMethod::multipoint: return "multipoint";
    case DesignMethod::tracking: return "tracking";
  }
  return "?";
}

inline const char* to_string(PadMode p) { return p == PadMode::strict ? "strict" : "zero"; }

inline const char* to_string(Superposition s) {
  return s == Superposition::unit_norm ? "unit_norm" : "phase_only";
}

namespace detail {

template <typename E, std::size_t K>
E parse_enum(const std::string& text, const E (&all)[K], const char* what) {
  for (E e : all)
    if (text == to_string(e)) return e;
  throw ScenarioError(std::string("unknown ") + what + " '" + text + "'");
}

template <typename T>
T get(const YAML::Node& node, const char* key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) throw ScenarioError(where + ": missing required key '" + key + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(where + ": key '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const YAML::Node& node, const char* key, T fallback, const std::string& where) {
  if (!node[key]) return fallback;
  return get<T>(node, key, where);
}

inline std::optional<FocalSpec> parse_focal(const YAML::Node& node, const char* key,
                                            const std::string& where) {
  const YAML::Node f = node[key];
  if (!f) return std::nullopt;
  if (!f.IsMap()) throw ScenarioError(where + ": '" + key + "' must be a map with x and/or z");
  FocalSpec out;
  if (f["x"]) out.x = get<double>(f, "x", where + "." + key);
  if (f["z"]) out.z = get<double>(f, "z", where + "." + key);
  if (!out.x && !out.z) throw ScenarioError(where + ": '" + key + "' needs x or z");
  return out;
}

inline void emit_focal(YAML::Emitter& e, const char* key, const FocalSpec& f) {
  e << YAML::Key << key << YAML::Value << YAML::BeginMap;
  if (f.x) e << YAML::Key << "x" << YAML::Value << *f.x;
  if (f.z) e << YAML::Key << "z" << YAML::Value << *f.z;
  e << YAML::EndMap;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing

inline Scenario parse(const YAML::Node& root) {
  if (!root.IsMap()) throw ScenarioError("scenario root must be a map");
  Scenario s;
  s.schema_version = detail::get<int>(root, "schema_version", "scenario");
  if (s.schema_version != kSchemaVersion)
    throw ScenarioError("unsupported schema_version " + std::to_string(s.schema_version));
  s.name = detail::get_or<std::string>(root, "name", "", "scenario");
  s.output = detail::get_or<std::string>(root, "output", "out", "scenario");

  const YAML::Node ap = root["aperture"];
  if (!ap) throw ScenarioError("scenario: missing 'aperture'");
  s.aperture.num_elements = detail::get<std::size_t>(ap, "num_elements", "aperture");
  s.aperture.spacing = detail::get_or<double>(ap, "spacing", 0.5, "aperture");

  const YAML::Node tr = root["trajectory"];
  if (!tr) throw ScenarioError("scenario: missing 'trajectory'");
  auto& t = s.trajectory;
  static constexpr ShapeKind kShapes[] = {ShapeKind::constant, ShapeKind::linear,
                                          ShapeKind::parabolic, ShapeKind::circular,
                                          ShapeKind::tabulated};
  t.shape = detail::parse_enum(detail::get<std::string>(tr, "shape", "trajectory"), kShapes,
                               "trajectory shape");
  t.z_start = detail::get<double>(tr, "z_start", "trajectory");
  t.z_end = detail::get<double>(tr, "z_end", "trajectory");
  switch (t.shape) {
    case ShapeKind::constant:
      t.x0 = detail::get<double>(tr, "x0", "trajectory");
      break;
    case ShapeKind::linear:
      t.slope = detail::get<double>(tr, "slope", "trajectory");
      t.intercept = detail::get_or<double>(tr, "intercept", 0.0, "trajectory");
      break;
    case ShapeKind::parabolic:
      t.curvature = detail::get<double>(tr, "curvature", "trajectory");
      t.apex_x = detail::get_or<double>(tr, "apex_x", 0.0, "trajectory");
      t.orientation = detail::get_or<int>(tr, "orientation", -1, "trajectory");
      break;
    case ShapeKind::circular:
      t.radius = detail::get<double>(tr, "radius", "trajectory");
      t.center_x = detail::get_or<double>(tr, "center_x", 0.0, "trajectory");
      t.center_z = detail::get_or<double>(tr, "center_z", 0.0, "trajectory");
      break;
    case ShapeKind::tabulated:
      t.file = detail::get<std::string>(tr, "file", "trajectory");
      t.order = detail::get_or<int>(tr, "order", 3, "trajectory");
      break;
  }

  const YAML::Node de = root["design"];
  if (!de) throw ScenarioError("scenario: missing 'design'");
  static constexpr DesignMethod kMethods[] = {DesignMethod::numeric,  DesignMethod::circular,
                                              DesignMethod::parabolic, DesignMethod::focus,
                                              DesignMethod::multipoint, DesignMethod::tracking};
  static constexpr PadMode kPads[] = {PadMode::strict, PadMode::zero};
  static constexpr Superposition kSups[] = {Superposition::unit_norm, Superposition::phase_only};
  s.design.method = detail::parse_enum(detail::get<std::string>(de, "method", "design"), kMethods,
                                       "design method");
  s.design.samples_per_wavelength =
      detail::get_or<double>(de, "samples_per_wavelength", 8.0, "design");
  s.design.pad_mode =
      detail::parse_enum(detail::get_or<std::string>(de, "pad_mode", "zero", "design"), kPads,
                         "pad mode");
  s.design.focal = detail::parse_focal(de, "focal", "design");
  s.design.focal_count = detail::get_or<std::size_t>(de, "focal_count", 1, "design");
  s.design.superposition = detail::parse_enum(
      detail::get_or<std::string>(de, "superposition", "unit_norm", "design"), kSups,
      "superposition");

  if (const YAML::Node g = root["grid"]) {
    GridSpec gs;
    gs.x_min = detail::get<double>(g, "x_min", "grid");
    gs.x_max = detail::get<double>(g, "x_max", "grid");
    gs.z_min = detail::get<double>(g, "z_min", "grid");
    gs.z_max = detail::get<double>(g, "z_max", "grid");
    gs.nx = detail::get<std::size_t>(g, "nx", "grid");
    gs.nz = detail::get<std::size_t>(g, "nz", "grid");
    s.grid = gs;
  }

  if (const YAML::Node ev = root["evaluation"]) {
    auto& e = s.evaluation;
    e.samples = detail::get_or<std::size_t>(ev, "samples", 2000, "evaluation");
    e.gammas = detail::get_or<std::vector<double>>(ev, "gammas", {}, "evaluation");
    e.baseline_focal = detail::parse_focal(ev, "baseline_focal", "evaluation");
    e.multipoint_counts =
        detail::get_or<std::vector<std::size_t>>(ev, "multipoint_counts", {}, "evaluation");
    e.multipoint_gamma = detail::get_or<double>(ev, "multipoint_gamma", 0.0, "evaluation");
    e.tracking_gamma = detail::get_or<double>(ev, "tracking_gamma", 0.0, "evaluation");
  }
  return s;
}

inline Scenario parse_string(const std::string& text) {
  try {
    return parse(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("YAML error: ") + e.what());
  }
}

inline Scenario load(const std::filesystem::path& path) {
  try {
    return parse(YAML::LoadFile(path.string()));
  } catch (const YAML::BadFile&) {
    throw ScenarioError("cannot read scenario file " + path.string());
  } catch (const YAML::Exception& e) {
    throw ScenarioError(path.string() + ": YAML error: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string serialize(const Scenario& s) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "schema_version" << YAML::Value << s.schema_version;
  e << YAML::Key << "name" << YAML::Value << s.name;
  e << YAML::Key << "output" << YAML::Value << s.output;

  e << YAML::Key << "aperture" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "num_elements" << YAML::Value << s.aperture.num_elements;
  e << YAML::Key << "spacing" << YAML::Value << s.aperture.spacing;
  e << YAML::EndMap;

  const auto& t = s.trajectory;
  e << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "shape" << YAML::Value << to_string(t.shape);
  switch (t.shape) {
    case ShapeKind::constant:
      e << YAML::Key << "x0" << YAML::Value << t.x0;
      break;
    case ShapeKind::linear:
      e << YAML::Key << "slope" << YAML::Value << t.slope;
      e << YAML::Key << "intercept" << YAML::Value << t.intercept;
      break;
    case ShapeKind::parabolic:
      e << YAML::Key << "curvature" << YAML::Value << t.curvature;
      e << YAML::Key << "apex_x" << YAML::Value << t.apex_x;
      e << YAML::Key << "orientation" << YAML::Value << t.orientation;
      break;
    case ShapeKind::circular:
      e << YAML::Key << "radius" << YAML::Value << t.radius;
      e << YAML::Key << "center_x" << YAML::Value << t.center_x;
      e << YAML::Key << "center_z" << YAML::Value << t.center_z;
      break;
    case ShapeKind::tabulated:
      e << YAML::Key << "file" << YAML::Value << t.file;
      e << YAML::Key << "order" << YAML::Value << t.order;
      break;
  }
  e << YAML::Key << "z_start" << YAML::Value << t.z_start;
  e << YAML::Key << "z_end" << YAML::Value << t.z_end;
  e << YAML::EndMap;

  const auto& d = s.design;
  e << YAML::Key << "design" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "method" << YAML::Value << to_string(d.method);
  e << YAML::Key << "samples_per_wavelength" << YAML::Value << d.samples_per_wavelength;
  e << YAML::Key << "pad_mode" << YAML::Value << to_string(d.pad_mode);
  if (d.focal) detail::emit_focal(e, "focal", *d.focal);
  e << YAML::Key << "focal_count" << YAML::Value << d.focal_count;
  e << YAML::Key << "superposition" << YAML::Value << to_string(d.superposition);
  e << YAML::EndMap;

  if (s.grid) {
    const auto& g = *s.grid;
    e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "x_min" << YAML::Value << g.x_min;
    e << YAML::Key << "x_max" << YAML::Value << g.x_max;
    e << YAML::Key << "z_min" << YAML::Value << g.z_min;
    e << YAML::Key << "z_max" << YAML::Value << g.z_max;
    e << YAML::Key << "nx" << YAML::Value << g.nx;
    e << YAML::Key << "nz" << YAML::Value << g.nz;
    e << YAML::EndMap;
  }

  const auto& ev = s.evaluation;
  e << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "samples" << YAML::Value << ev.samples;
  e << YAML::Key << "gammas" << YAML::Value << YAML::Flow << ev.gammas;
  if (ev.baseline_focal) detail::emit_focal(e, "baseline_focal", *ev.baseline_focal);
  e << YAML::Key << "multipoint_counts" << YAML::Value << YAML::Flow << ev.multipoint_counts;
  e << YAML::Key << "multipoint_gamma" << YAML::Value << ev.multipoint_gamma;
  e << YAML::Key << "tracking_gamma" << YAML::Value << ev.tracking_gamma;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Construction of library objects

inline ApertureConfig make_aperture(const Scenario& s) {
  try {
    return ApertureConfig(s.aperture.num_elements, s.aperture.spacing);
  } catch (const InvalidArgument& e) {
    throw ScenarioError(std::string("aperture: ") + e.what());
  }
}

inline Trajectory make_trajectory(const Scenario& s, const std::filesystem::path& base_dir = {}) {
  const auto& t = s.trajectory;
  try {
    switch (t.shape) {
      case ShapeKind::constant:
        return Trajectory(ConstantPath{t.x0}, t.z_start, t.z_end);
      case ShapeKind::linear:
        return Trajectory(LinearPath{t.slope, t.intercept}, t.z_start, t.z_end);
      case ShapeKind::parabolic:
        return Trajectory(ParabolicPath{t.curvature, t.apex_x, t.orientation}, t.z_start,
                          t.z_end);
      case ShapeKind::circular:
        return Trajectory(CircularPath{t.radius, t.center_x, t.center_z}, t.z_start, t.z_end);
      case ShapeKind::tabulated: {
        std::filesystem::path p(t.file);
        if (p.is_relative()) p = base_dir / p;
        return Trajectory(load_tabulated_csv(p.string(), t.order), t.z_start, t.z_end);
      }
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ScenarioError(std::string("trajectory: ") + e.what());
  }
  throw ScenarioError("trajectory: unknown shape");
}

/// Resolves a focal spec against the trajectory: z alone means (c(z), z),
/// x alone means the trajectory point whose position is x.
inline Point resolve_focal(const FocalSpec& f, const Trajectory& traj) {
  if (f.x && f.z) return {*f.x, *f.z};
  try {
    if (f.z) return {traj.position(*f.z), *f.z};
    return point_at_x(traj, *f.x);
  } catch (const InvalidArgument& e) {
    throw ScenarioError(std::string("focal point: ") + e.what());
  }
}

/// Checks cross-field consistency that the parser alone cannot see.
inline void validate(const Scenario& s) {
  const auto& t = s.trajectory;
  const auto& d = s.design;
  if (d.method == DesignMethod::circular &&
      (t.shape != ShapeKind::circular || t.center_x != 0.0 || t.center_z != 0.0))
    throw ScenarioError("design 'circular' needs a circular trajectory centred at the origin");
  if (d.method == DesignMethod::parabolic &&
      (t.shape != ShapeKind::parabolic || t.orientation != -1 || t.apex_x != 0.0))
    throw ScenarioError(
        "design 'parabolic' needs a parabolic trajectory with apex_x 0 and orientation -1");
  if (d.method == DesignMethod::focus && !d.focal)
    throw ScenarioError("design 'focus' needs design.focal");
  if (d.method == DesignMethod::multipoint && d.focal_count < 1)
    throw ScenarioError("design 'multipoint' needs focal_count >= 1");
  if (d.method == DesignMethod::tracking && !(s.evaluation.tracking_gamma > 0.0))
    throw ScenarioError("design 'tracking' needs evaluation.tracking_gamma > 0");
  if (!(d.samples_per_wavelength > 0.0))
    throw ScenarioError("design.samples_per_wavelength must be positive");
  if (s.grid) {
    const auto& g = *s.grid;
    if (g.nx < 2 || g.nz < 2 || !(g.x_min < g.x_max) || !(g.z_min < g.z_max))
      throw ScenarioError("grid ranges must be non-degenerate with nx, nz >= 2");
  }
  for (double g : s.evaluation.gammas)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ScenarioError("gammas must be finite and >= 0");
  for (std::size_t k : s.evaluation.multipoint_counts)
    if (k < 1) throw ScenarioError("multipoint_counts entries must be >= 1");
}

}  // namespace tabs::scenario
