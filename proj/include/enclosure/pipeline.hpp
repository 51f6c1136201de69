// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "enclosure/errors.hpp"
#include "enclosure/extraction.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/solver1d.hpp"
#include "enclosure/solver3d.hpp"
#include "enclosure/sources.hpp"
#include "enclosure/transform.hpp"

namespace enclosure
{

inline constexpr const char *version = "1.0.0";

using json = nlohmann::json;

//---------------------------------------------------------------------------//
// Configuration
//---------------------------------------------------------------------------//

struct Discretization
{
  double h = 0.0;
  double courant = 0.0;
  int workers = 0;
  int fraction_samples = default_fraction_samples;
};

struct TauSpec
{
  double min = 0.0;
  double max = 0.0;
  int count = 24;
};

enum class FitNormalization
{
  none,
  moment
};

struct ExperimentConfig
{
  std::string name;
  SceneSpec scene;
  DataMode data_mode = DataMode::backscatter;
  // Either a fixed T or a multiple of the observation threshold.
  std::optional<double> T;
  double T_factor = 1.25;
  Discretization disc;
  TauSpec tau;
  TauWindow window;
  DecayModel fit_model = DecayModel::power;
  FitNormalization fit_normalization = FitNormalization::moment;
  bool coefficients = false;
  bool coefficients_use_scene_distance = true;
  bool tail_correction = true;
  json echo;

  double observation_time() const
  {
    return T ? *T : T_factor * min_observation_time(scene, data_mode);
  }
};

namespace detail
{
[[noreturn]] inline void config_fail(const std::string &path, const std::string &msg)
{
  throw ConfigError(path + ": " + msg);
}

inline const json &member(const json &j, const std::string &key, const std::string &path)
{
  if (!j.is_object() || !j.contains(key))
    config_fail(path + "." + key, "missing");
  return j.at(key);
}

inline double number(const json &j, const std::string &path)
{
  if (!j.is_number())
    config_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    config_fail(path, "must be finite");
  return v;
}

inline double number_or(const json &j, const std::string &key, double fallback, const std::string &path)
{
  if (!j.is_object() || !j.contains(key))
    return fallback;
  return number(j.at(key), path + "." + key);
}

inline Vec3 vec3(const json &j, const std::string &path)
{
  if (!j.is_array() || j.size() != 3)
    config_fail(path, "expected an array of 3 numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

inline Shape parse_shape(const json &j, const std::string &path)
{
  const json &t = member(j, "type", path);
  if (!t.is_string())
    config_fail(path + ".type", "expected a string");
  const std::string type = t.get<std::string>();
  Shape s;
  if (type == "ball")
    s = Ball{vec3(member(j, "center", path), path + ".center"), number(member(j, "radius", path), path + ".radius")};
  else if (type == "box")
    s = AxisBox{vec3(member(j, "lo", path), path + ".lo"), vec3(member(j, "hi", path), path + ".hi")};
  else if (type == "half_line")
    s = HalfLine1D{number(member(j, "a", path), path + ".a")};
  else if (type == "interval")
    s = Interval1D{number(member(j, "lo", path), path + ".lo"), number(member(j, "hi", path), path + ".hi")};
  else
    config_fail(path + ".type", "unknown shape '" + type + "' (ball, box, half_line, interval)");
  try
  {
    validate_shape(s);
  }
  catch (const ConfigError &e)
  {
    config_fail(path, e.what());
  }
  return s;
}

inline std::string string_or(const json &j, const std::string &key, const std::string &fallback,
                             const std::string &path)
{
  if (!j.is_object() || !j.contains(key))
    return fallback;
  if (!j.at(key).is_string())
    config_fail(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

inline bool bool_or(const json &j, const std::string &key, bool fallback, const std::string &path)
{
  if (!j.is_object() || !j.contains(key))
    return fallback;
  if (!j.at(key).is_boolean())
    config_fail(path + "." + key, "expected true or false");
  return j.at(key).get<bool>();
}
}  // namespace detail

// Parses and validates a configuration. Every error names the offending key.
inline ExperimentConfig parse_config(const json &j)
{
  using namespace detail;
  const std::string root = "config";
  if (!j.is_object())
    config_fail(root, "expected a JSON object");
  ExperimentConfig c;
  c.echo = j;
  c.name = string_or(j, "name", "experiment", root);

  const json &dim = member(j, "dimension", root);
  if (!dim.is_number_integer() || (dim.get<int>() != 1 && dim.get<int>() != 3))
    config_fail(root + ".dimension", "must be 1 or 3");
  c.scene.dimension = dim.get<int>();
  const bool one_d = c.scene.dimension == 1;

  const std::string mode = string_or(j, "mode", "robin", root);
  if (mode == "robin")
    c.scene.mode = Mode::robin;
  else if (mode == "refractive")
    c.scene.mode = Mode::refractive;
  else if (mode == "free")
    c.scene.mode = Mode::free;
  else
    config_fail(root + ".mode", "must be robin, refractive or free");

  const std::string data = string_or(j, "data_mode", one_d ? "surface" : "backscatter", root);
  if (data == "surface")
    c.data_mode = DataMode::surface;
  else if (data == "backscatter")
    c.data_mode = DataMode::backscatter;
  else
    config_fail(root + ".data_mode", "must be surface or backscatter");

  c.scene.obstacle = parse_shape(member(j, "obstacle", root), root + ".obstacle");
  const json &src = member(j, "source", root);
  c.scene.source = parse_shape(src, root + ".source");
  if (j.contains("surface"))
    c.scene.surface = parse_shape(j.at("surface"), root + ".surface");
  c.scene.gamma = number_or(j, "gamma", 0.0, root);
  c.scene.beta = number_or(j, "beta", 0.0, root);
  c.scene.alpha = number_or(j, "alpha", 1.0, root);
  const double amp = number_or(src, "amplitude", 1.0, root + ".source");
  if (amp == 0.0)
    config_fail(root + ".source.amplitude", "must be nonzero");

  if (j.contains("T"))
  {
    const json &t = j.at("T");
    if (t.is_string() && t.get<std::string>() == "auto")
      c.T_factor = 1.25;
    else if (t.is_object())
      c.T_factor = number(member(t, "factor", root + ".T"), root + ".T.factor");
    else
      c.T = number(t, root + ".T");
    if (c.T && !(*c.T > 0.0))
      config_fail(root + ".T", "must be positive");
    if (!(c.T_factor > 0.0))
      config_fail(root + ".T.factor", "must be positive");
  }

  const json disc = j.contains("discretization") ? j.at("discretization") : json::object();
  const std::string dpath = root + ".discretization";
  c.disc.h = number_or(disc, "h", one_d ? 1.0 / 400.0 : 0.05, dpath);
  c.disc.courant = number_or(disc, "courant", one_d ? 1.0 : 0.9, dpath);
  c.disc.workers = static_cast<int>(number_or(disc, "workers", 0, dpath));
  c.disc.fraction_samples = static_cast<int>(number_or(disc, "fraction_samples", default_fraction_samples, dpath));
  if (!(c.disc.h > 0.0))
    config_fail(dpath + ".h", "must be positive");
  if (!(c.disc.courant > 0.0) || c.disc.courant > 1.0)
    config_fail(dpath + ".courant", "CFL violation: Courant ratio must lie in (0, 1]");
  if (c.disc.fraction_samples < 1)
    config_fail(dpath + ".fraction_samples", "must be at least 1");

  const json tau = j.contains("tau") ? j.at("tau") : json::object();
  c.tau.min = number_or(tau, "min", 2.0, root + ".tau");
  c.tau.max = number_or(tau, "max", one_d ? 12.0 : 10.0, root + ".tau");
  c.tau.count = static_cast<int>(number_or(tau, "count", 24, root + ".tau"));
  if (!(c.tau.min > 0.0) || !(c.tau.max > c.tau.min) || c.tau.count < 2)
    config_fail(root + ".tau", "need 0 < min < max and count >= 2");

  const TauWindow def = one_d ? default_window_1d : default_window_3d;
  const json win = j.contains("window") ? j.at("window") : json::object();
  c.window.lo = number_or(win, "lo", def.lo, root + ".window");
  c.window.hi = number_or(win, "hi", def.hi, root + ".window");
  if (!(c.window.hi > c.window.lo))
    config_fail(root + ".window", "need lo < hi");

  const json fit = j.contains("distance_fit") ? j.at("distance_fit") : json::object();
  const std::string model = string_or(fit, "model", "power", root + ".distance_fit");
  if (model == "power")
    c.fit_model = DecayModel::power;
  else if (model == "exponential")
    c.fit_model = DecayModel::exponential;
  else
    config_fail(root + ".distance_fit.model", "must be power or exponential");
  const std::string norm = string_or(fit, "normalize", "moment", root + ".distance_fit");
  if (norm == "moment")
    c.fit_normalization = FitNormalization::moment;
  else if (norm == "none")
    c.fit_normalization = FitNormalization::none;
  else
    config_fail(root + ".distance_fit.normalize", "must be moment or none");

  const json coef = j.contains("coefficients") ? j.at("coefficients") : json::object();
  c.coefficients = bool_or(coef, "enabled", one_d && c.scene.mode == Mode::robin, root + ".coefficients");
  const std::string cd = string_or(coef, "distance", "scene", root + ".coefficients");
  if (cd != "scene" && cd != "estimated")
    config_fail(root + ".coefficients.distance", "must be scene or estimated");
  c.coefficients_use_scene_distance = cd == "scene";
  c.tail_correction = bool_or(coef, "tail_correction", true, root + ".coefficients");
  if (c.coefficients && (!one_d || c.scene.mode != Mode::robin))
    config_fail(root + ".coefficients.enabled", "coefficient recovery exists only for 1D boundary obstacles");

  try
  {
    validate_scene(c.scene, c.data_mode);
    validate_source(SourceBall{c.scene.source, amp});
  }
  catch (const Error &e)
  {
    config_fail(root, e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(j);
}

inline SourceBall config_source(const ExperimentConfig &c)
{
  const json &s = c.echo.at("source");
  return {c.scene.source, s.contains("amplitude") ? s.at("amplitude").get<double>() : 1.0};
}

// FNV-1a of the canonical (key-sorted) JSON of the scene-defining keys.
inline std::string scene_hash(const ExperimentConfig &c)
{
  json scene;
  for (const char *k : {"dimension", "mode", "obstacle", "source", "surface", "gamma", "beta", "alpha"})
    if (c.echo.contains(k))
      scene[k] = c.echo.at(k);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : scene.dump())
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

//---------------------------------------------------------------------------//
// Pipeline
//---------------------------------------------------------------------------//

struct SimulationInfo
{
  double T = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t nodes = 0;
  std::size_t probes = 0;
};

struct RunResult
{
  IndicatorCurve curve;
  std::vector<double> floor;
  SimulationInfo sim;
  double T_min = 0.0;
  bool threshold_ok = true;
  SignClass sign = SignClass::indeterminate;
  std::optional<DistanceFit> distance;
  std::optional<CoefficientFit> coefficients;
  double coefficient_distance = 0.0;
  std::vector<std::string> errors;
  // "ok", "threshold_violation", "fit_failure"
  std::string status = "ok";

  int exit_code() const
  {
    if (status == "threshold_violation")
      return 4;
    if (status == "fit_failure")
      return 3;
    return 0;
  }
};

namespace detail
{
inline IndicatorCurve simulate_1d(const ExperimentConfig &c, const std::vector<double> &taus, SimulationInfo &info)
{
  const SourceBall src = config_source(c);
  Wave1DConfig cfg;
  cfg.a = std::get<HalfLine1D>(c.scene.obstacle).a;
  cfg.gamma = c.scene.gamma(Vec3{cfg.a, 0.0, 0.0});
  cfg.beta = c.scene.beta(Vec3{cfg.a, 0.0, 0.0});
  cfg.h = c.disc.h;
  cfg.courant = c.disc.courant;
  cfg.T = c.observation_time();

  std::vector<double> probes;
  BackscatterProbes bp;
  if (c.data_mode == DataMode::surface)
    probes = observation_probes_1d(c.disc.h);
  else
  {
    bp = backscatter_probes_1d(src);
    for (const Vec3 &p : bp.points)
      probes.push_back(p.x);
  }
  TimeTrace obstacle = c.scene.mode == Mode::free ? solve_1d_free(cfg, src, probes) : solve_1d(cfg, src, probes);
  const TimeTrace control = solve_1d_free(cfg, src, probes);
  const LaplaceField lf = laplace_in_time(difference(obstacle, control), taus);
  info = {cfg.T, obstacle.dt, obstacle.steps, 0, probes.size()};
  Wave1DSolver probe_grid(cfg, src, true, probes);
  info.nodes = probe_grid.node_count();
  if (c.data_mode == DataMode::surface)
    return indicator_curve_1d(lf, c.disc.h, src);
  return backscatter_indicator(lf, bp, src, FieldKind::scattered);
}

inline IndicatorCurve simulate_3d(const ExperimentConfig &c, const std::vector<double> &taus, SimulationInfo &info)
{
  const SourceBall src = config_source(c);
  const double T = c.observation_time();
  const double h = c.disc.h;

  std::optional<SurfaceProbes> sp;
  std::vector<Vec3> surface_points;
  if (c.data_mode == DataMode::surface)
  {
    sp = make_surface_probes(*c.scene.surface, src, h);
    surface_points = sp->points();
  }
  AxisBox hull = bounding_box(c.scene.source);
  auto grow = [&hull](const AxisBox &b) {
    for (int a = 0; a < 3; ++a)
    {
      hull.lo[a] = std::min(hull.lo[a], b.lo[a]);
      hull.hi[a] = std::max(hull.hi[a], b.hi[a]);
    }
  };
  grow(bounding_box(c.scene.obstacle));
  for (const Vec3 &p : surface_points)
    grow({p, p});
  const Grid3D grid = make_causal_grid(hull, h, T);

  BackscatterProbes bp;
  std::vector<Vec3> points;
  if (c.data_mode == DataMode::backscatter)
  {
    const NodeWeights nodes = source_nodes(grid, src, c.disc.fraction_samples);
    for (std::size_t q = 0; q < nodes.size(); ++q)
    {
      bp.points.push_back(grid.node(nodes.index[q]));
      bp.weights.push_back(h * h * h * nodes.fraction[q]);
    }
    points = bp.points;
  }
  else
    points = surface_points;

  Solve3DOptions opt;
  opt.T = T;
  opt.courant = c.disc.courant;
  opt.workers = c.disc.workers;
  TimeTrace obstacle, control;
  if (c.scene.mode == Mode::refractive)
  {
    const MediumField medium = build_medium(grid, c.scene.obstacle, c.scene.alpha, c.disc.fraction_samples);
    opt.dt = stable_dt(h, c.disc.courant, medium.alpha_min);
    obstacle = solve_refractive(grid, medium, src, points, opt);
    control = solve_refractive(grid, uniform_medium(grid), src, points, opt);
  }
  else
  {
    opt.dt = stable_dt(h, c.disc.courant);
    const RobinMask none = empty_mask(grid);
    if (c.scene.mode == Mode::robin)
    {
      const RobinMask mask = build_robin_mask(grid, c.scene.obstacle, c.scene.gamma, c.scene.beta);
      obstacle = solve_robin(grid, mask, src, points, opt);
    }
    else
      obstacle = solve_robin(grid, none, src, points, opt);
    control = solve_robin(grid, none, src, points, opt);
  }
  info = {T, obstacle.dt, obstacle.steps, grid.size(), points.size()};
  const LaplaceField lf = laplace_in_time(difference(obstacle, control), taus);
  if (c.data_mode == DataMode::surface)
    return surface_indicator(lf, *sp, src);
  return backscatter_indicator(lf, bp, src, FieldKind::scattered);
}
}  // namespace detail

inline std::vector<double> config_taus(const ExperimentConfig &c)
{
  return linear_tau_grid(c.tau.min, c.tau.max, c.tau.count);
}

// Extraction on an already computed curve.
inline void extract(const ExperimentConfig &c, RunResult &r)
{
  const SourceBall src = config_source(c);
  r.floor = combine_floor(r.curve, nullptr);
  r.sign = classify_sign(r.curve, r.floor, c.window);

  bool above = false;
  for (std::size_t j : detail::window_indices(r.curve, c.window))
    above = above || std::abs(r.curve.values[j]) > 10.0 * r.floor[j];
  try
  {
    if (!above)
      throw FitError(FitError::Kind::floor, "indicator stays at the noise floor on the whole regression window");
    const IndicatorCurve fit_curve =
        c.fit_normalization == FitNormalization::moment ? normalize_by_moment(r.curve, src) : r.curve;
    r.distance = estimate_distance(fit_curve, c.window, c.fit_model);
    r.distance->pointwise = estimate_distance(r.curve, c.window, DecayModel::exponential).pointwise;
  }
  catch (const FitError &e)
  {
    r.errors.push_back(std::string("distance: ") + e.what());
    r.status = "fit_failure";
  }

  if (c.coefficients)
  {
    try
    {
      if (c.coefficients_use_scene_distance)
        r.coefficient_distance = dist_sets(c.scene.obstacle, c.scene.source);
      else if (r.distance)
        r.coefficient_distance = r.distance->d_hat;
      else
        throw FitError(FitError::Kind::window, "no distance estimate available");
      CoefficientOptions opt;
      opt.tail_correction = c.tail_correction;
      r.coefficients = recover_gamma_beta_1d(
          r.curve, [&src](double tau) { return source_moment_1d(src, tau); }, r.coefficient_distance, c.window, opt);
      if (!r.coefficients->determinate)
        r.errors.push_back("coefficients: fit implies gamma < 0; reported as indeterminate");
    }
    catch (const Error &e)
    {
      r.errors.push_back(std::string("coefficients: ") + e.what());
      r.status = "fit_failure";
    }
  }
  if (!r.threshold_ok)
    r.status = "threshold_violation";
}

inline RunResult run_pipeline(const ExperimentConfig &c)
{
  RunResult r;
  r.T_min = min_observation_time(c.scene, c.data_mode);
  const double T = c.observation_time();
  r.threshold_ok = T > r.T_min;
  const std::vector<double> taus = config_taus(c);
  r.curve = c.scene.dimension == 1 ? detail::simulate_1d(c, taus, r.sim) : detail::simulate_3d(c, taus, r.sim);
  r.curve.scene_hash = scene_hash(c);
  extract(c, r);
  return r;
}

//---------------------------------------------------------------------------//
// Artifacts
//---------------------------------------------------------------------------//

inline std::string format_number(double x)
{
  if (!std::isfinite(x))
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// tau,indicator,log_abs_indicator,pointwise_estimate
inline std::string curve_csv(const IndicatorCurve &c)
{
  std::string out = "tau,indicator,log_abs_indicator,pointwise_estimate\n";
  for (std::size_t j = 0; j < c.size(); ++j)
  {
    const double v = c.values[j];
    const double la = std::log(std::abs(v));
    out += format_number(c.taus[j]) + ',' + format_number(v) + ',' + format_number(la) + ',' +
           format_number(-la / (2.0 * c.taus[j])) + '\n';
  }
  return out;
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json report_json(const ExperimentConfig &c, const RunResult &r)
{
  json j;
  j["schema"] = "enclosure-report/1";
  j["name"] = c.name;
  j["scene_hash"] = r.curve.scene_hash;
  j["dimension"] = c.scene.dimension;
  j["mode"] = to_string(c.scene.mode);
  j["data_mode"] = to_string(c.data_mode);
  j["status"] = r.status;
  j["errors"] = r.errors;

  json th;
  th["T"] = r.sim.T;
  th["T_min"] = r.T_min;
  th["satisfied"] = r.threshold_ok;
  if (c.scene.dimension == 3 && c.data_mode == DataMode::surface)
    th["broken_path_length"] = broken_path_length(c.scene.source, c.scene.obstacle, *c.scene.surface);
  j["threshold"] = th;

  json d;
  d["true_distance"] = dist_sets(c.scene.obstacle, c.scene.source);
  d["reliable"] = r.threshold_ok && r.distance.has_value();
  if (r.distance)
  {
    const DistanceFit &f = *r.distance;
    d["d_hat"] = f.d_hat;
    d["model"] = to_string(f.model);
    d["normalization"] = c.fit_normalization == FitNormalization::moment ? "moment" : "none";
    d["slope"] = f.slope;
    d["power"] = f.power;
    d["residual"] = f.residual;
    d["pointwise"] = number_or_null(f.pointwise);
    d["window"] = {f.window.lo, f.window.hi};
    d["points"] = f.points;
  }
  else
    d["d_hat"] = nullptr;
  j["distance"] = d;

  json s;
  s["class"] = to_string(r.sign);
  s["label"] = sign_label(r.sign, c.scene.mode);
  s["noise_floor"] = r.floor.empty() ? 0.0 : r.floor.back();
  j["sign"] = s;

  if (c.coefficients)
  {
    json k;
    if (r.coefficients)
    {
      k["gamma_hat"] = r.coefficients->determinate ? json(r.coefficients->gamma_hat) : json(nullptr);
      k["beta_hat"] = r.coefficients->determinate ? json(r.coefficients->beta_hat) : json(nullptr);
      k["c1"] = r.coefficients->c1;
      k["c2"] = r.coefficients->c2;
      k["iterations"] = r.coefficients->iterations;
      k["residual"] = r.coefficients->residual;
      k["determinate"] = r.coefficients->determinate;
    }
    else
    {
      k["gamma_hat"] = nullptr;
      k["beta_hat"] = nullptr;
    }
    k["distance_used"] = r.coefficient_distance;
    j["coefficients"] = k;
  }

  json sim;
  sim["dt"] = r.sim.dt;
  sim["steps"] = r.sim.steps;
  sim["nodes"] = r.sim.nodes;
  sim["probes"] = r.sim.probes;
  sim["h"] = c.disc.h;
  sim["courant"] = c.disc.courant;
  j["simulation"] = sim;
  return j;
}

inline void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  out << text;
}

struct RunArtifacts
{
  std::filesystem::path curve;
  std::filesystem::path report;
  std::filesystem::path provenance;
  int exit_code = 0;
};

// Runs the pipeline and writes indicator.csv, report.json and provenance.json
// into `out`. The first two depend only on the configuration.
inline RunArtifacts run_experiment(const ExperimentConfig &c, const std::filesystem::path &out)
{
  std::filesystem::create_directories(out);
  RunArtifacts a{out / "indicator.csv", out / "report.json", out / "provenance.json", 0};
  const auto start = std::chrono::steady_clock::now();
  json prov;
  prov["version"] = version;
  prov["config"] = c.echo;
  try
  {
    const RunResult r = run_pipeline(c);
    write_text(a.curve, curve_csv(r.curve));
    write_text(a.report, report_json(c, r).dump(2) + "\n");
    a.exit_code = r.exit_code();
    prov["partial"] = false;
  }
  catch (const Error &e)
  {
    json j;
    j["schema"] = "enclosure-report/1";
    j["name"] = c.name;
    j["status"] = "error";
    j["partial"] = true;
    j["errors"] = {std::string("simulation: ") + e.what()};
    write_text(a.report, j.dump(2) + "\n");
    prov["partial"] = true;
    a.exit_code = dynamic_cast<const ConfigError *>(&e) ? 2 : 3;
  }
  prov["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(a.provenance, prov.dump(2) + "\n");
  return a;
}

//---------------------------------------------------------------------------//
// Sweeps
//---------------------------------------------------------------------------//

struct SweepRow
{
  double value = 0.0;
  std::optional<double> d_hat;
  std::string sign = "indeterminate";
  std::optional<double> gamma_hat;
  std::optional<double> beta_hat;
  std::optional<double> residual;
  std::string status;
};

struct SweepSpec
{
  json base;
  std::string parameter;  // JSON pointer into the template
  std::vector<double> values;
};

inline SweepSpec parse_sweep(const json &j, const std::filesystem::path &base_dir = {})
{
  SweepSpec s;
  if (!j.is_object())
    throw ConfigError("sweep: expected a JSON object");
  const json &t = detail::member(j, "template", "sweep");
  if (t.is_string())
  {
    std::ifstream in(base_dir / t.get<std::string>());
    if (!in)
      throw ConfigError("sweep.template: cannot open " + t.get<std::string>());
    s.base = json::parse(in);
  }
  else
    s.base = t;
  const json &p = detail::member(j, "parameter", "sweep");
  if (!p.is_string())
    throw ConfigError("sweep.parameter: expected a JSON pointer string");
  s.parameter = p.get<std::string>();
  const json &v = detail::member(j, "values", "sweep");
  if (!v.is_array())
    throw ConfigError("sweep.values: expected an array");
  for (std::size_t i = 0; i < v.size(); ++i)
    s.values.push_back(detail::number(v[i], "sweep.values[" + std::to_string(i) + "]"));
  try
  {
    const json::json_pointer ptr(s.parameter);
    if (!s.base.contains(ptr))
      throw ConfigError("sweep.parameter: " + s.parameter + " does not resolve in the template");
  }
  catch (const json::exception &e)
  {
    throw ConfigError("sweep.parameter: " + std::string(e.what()));
  }
  return s;
}

inline SweepRow sweep_one(const SweepSpec &s, double value)
{
  SweepRow row;
  row.value = value;
  try
  {
    json cfg = s.base;
    cfg[json::json_pointer(s.parameter)] = value;
    const ExperimentConfig c = parse_config(cfg);
    const RunResult r = run_pipeline(c);
    if (r.distance)
    {
      row.d_hat = r.distance->d_hat;
      row.residual = r.distance->residual;
    }
    row.sign = to_string(r.sign);
    if (r.coefficients && r.coefficients->determinate)
    {
      row.gamma_hat = r.coefficients->gamma_hat;
      row.beta_hat = r.coefficients->beta_hat;
    }
    row.status = r.status;
  }
  catch (const ConfigError &e)
  {
    row.status = std::string("config_error: ") + e.what();
  }
  catch (const Error &e)
  {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

// One pipeline run per value, `workers` runs at a time; rows keep value order.
inline std::vector<SweepRow> sweep(const SweepSpec &s, int workers = 1)
{
  std::vector<SweepRow> rows(s.values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++)
      rows[i] = sweep_one(s, s.values[i]);
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  if (w <= 1)
    work();
  else
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < w; ++t)
      pool.emplace_back(work);
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow> &rows)
{
  auto opt = [](const std::optional<double> &x) { return x ? format_number(*x) : std::string(); };
  std::string out = "value,d_hat,sign,gamma_hat,beta_hat,residual,status\n";
  for (const auto &r : rows)
  {
    std::string status = r.status;
    for (char &ch : status)
      if (ch == ',' || ch == '\n')
        ch = ';';
    out += format_number(r.value) + ',' + opt(r.d_hat) + ',' + r.sign + ',' + opt(r.gamma_hat) + ',' +
           opt(r.beta_hat) + ',' + opt(r.residual) + ',' + status + '\n';
  }
  return out;
}

//---------------------------------------------------------------------------//
// Reference curves (1D, no simulation)
//---------------------------------------------------------------------------//

// tau,reference_indicator,normalized_exact,normalized_two_term
inline std::string reference_csv(const ExperimentConfig &c)
{
  if (c.scene.dimension != 1 || c.scene.mode != Mode::robin)
    throw ConfigError("config.dimension: emit-reference is available for 1D boundary obstacles only");
  const SourceBall src = config_source(c);
  const double d = dist_sets(c.scene.obstacle, c.scene.source);
  const double a = std::get<HalfLine1D>(c.scene.obstacle).a;
  const double g = c.scene.gamma(Vec3{a, 0.0, 0.0});
  const double b = c.scene.beta(Vec3{a, 0.0, 0.0});
  const double c1 = (1.0 - g) / (2.0 * (g + 1.0));
  const double c2 = -b / ((g + 1.0) * (g + 1.0));
  std::string out = "tau,reference_indicator,normalized_exact,normalized_two_term\n";
  for (double tau : config_taus(c))
  {
    const double m = source_moment_1d(src, tau);
    out += format_number(tau) + ',' + format_number(indicator_1d_reference(tau, g, b, d, m)) + ',' +
           format_number(normalized_indicator_1d(tau, g, b)) + ',' + format_number(c1 / tau + c2 / (tau * tau)) +
           '\n';
  }
  return out;
}

}  // namespace enclosure
