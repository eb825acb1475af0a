#pragma once

// YAML experiment configuration. Schema (every key optional unless noted):
//
//   seed: 1                        # master seed
//   scenario:
//     preset: table1 | table2      # starting point, default table1
//     K: 2
//     N: 32
//     M: 4
//     aris_x: 10                   # table2 only
//     jammer_power_w: 10
//     noise_power_w: 1
//     targets: [5, 5]              # linear SINR, one per user
//     beta_max: 1
//     jammer: intelligent | white
//     gains: {h: [5, 2], f: 2, g: [1, 1], h_j: 1, G_j: 0.2}
//     geometry: {K0: 3e5, alpha_direct: 3, alpha_other: 2, bs: [0, 0], aris: [10, 65],
//                jammer: [50, -80], users: [[30, -15], [50, -30]]}
//   solver: {eps_abs, eps_rel, max_iters, rho, relaxation, adapt_interval, adapt_threshold,
//            anderson_memory, safeguard, warm_start}
//   algorithm: {eps_outer, relative, max_outer, literal_beta_bound, dinkelbach_eps,
//               dinkelbach_max_iters, samples, rank1_tol}
//   sweep: {variable: N | M | aris_x, values: [...], trials: 50}
//
// `gains` is only valid with table1, `geometry` and `aris_x` only with table2.

#include <cstdint>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "arisopt/orchestrator.hpp"

namespace arisopt {

enum class SweepVariable { N, M, ArisX };

inline std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::N: return "N";
    case SweepVariable::M: return "M";
    case SweepVariable::ArisX: return "aris_x";
  }
  return "unknown";
}

inline SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "N") return SweepVariable::N;
  if (name == "M") return SweepVariable::M;
  if (name == "aris_x") return SweepVariable::ArisX;
  throw Error(ErrorCode::Config, "sweep.variable must be N, M or aris_x, got '" + name + "'");
}

inline JammerMode parse_jammer_mode(const std::string& name) {
  if (name == "intelligent") return JammerMode::Intelligent;
  if (name == "white" || name == "white_noise") return JammerMode::WhiteNoise;
  throw Error(ErrorCode::Config, "jammer must be 'intelligent' or 'white', got '" + name + "'");
}

struct SweepSpec {
  SweepVariable variable = SweepVariable::N;
  std::vector<double> values;
  int trials = 50;
  ScenarioConfig base;
  JammerMode jammer_mode = JammerMode::Intelligent;

  void validate() const {
    require(!values.empty(), ErrorCode::Config, "sweep.values must not be empty");
    require(trials >= 1, ErrorCode::Config, "sweep.trials must be >= 1");
    if (variable != SweepVariable::ArisX)
      for (double v : values)
        require(v >= 1.0 && v == std::floor(v), ErrorCode::Config, "N and M sweep values must be positive integers");
    if (variable == SweepVariable::ArisX)
      require(std::holds_alternative<Geometry>(base.gains), ErrorCode::Config, "aris_x sweeps need the table2 preset");
  }
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  ScenarioConfig scenario = table1_config(2, 32, 4);
  AlgorithmSettings algorithm;
  std::optional<SweepSpec> sweep;
};

/// Tolerances used by experiments unless the config overrides them. Looser than
/// the solver's own defaults so that sweeps at N = 128 stay within budget.
inline sdp::SolverSettings experiment_solver_defaults() {
  sdp::SolverSettings s;
  s.eps_abs = 1e-5;
  s.eps_rel = 1e-4;
  return s;
}

namespace detail {

inline void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  require(node.IsMap(), ErrorCode::Config, "'" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    require(allowed.count(key) > 0, ErrorCode::Config, "unknown key '" + key + "' in " + section);
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::Config, "bad value for " + where + "." + key);
  }
}

template <class T>
void maybe(const YAML::Node& node, const std::string& key, const std::string& where, T& out) {
  if (node[key]) out = get<T>(node, key, where);
}

inline Point2 point(const YAML::Node& node, const std::string& where) {
  require(node.IsSequence() && node.size() == 2, ErrorCode::Config, where + " must be a pair [x, y]");
  try {
    return {node[0].as<double>(), node[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::Config, where + " must hold two numbers");
  }
}

inline ScenarioConfig parse_scenario(const YAML::Node& n) {
  check_keys(n, "scenario", {"preset", "K", "N", "M", "aris_x", "jammer_power_w", "noise_power_w", "targets",
                             "beta_max", "jammer", "gains", "geometry"});
  const std::string preset = n["preset"] ? get<std::string>(n, "preset", "scenario") : "table1";
  require(preset == "table1" || preset == "table2", ErrorCode::Config, "scenario.preset must be table1 or table2");
  int K = 2, N = 32, M = 4;
  double aris_x = 10.0;
  maybe(n, "K", "scenario", K);
  maybe(n, "N", "scenario", N);
  maybe(n, "M", "scenario", M);
  require(K >= 1 && N >= 1 && M >= 1, ErrorCode::Config, "scenario K, N and M must be >= 1");
  require(!(preset == "table1" && (n["geometry"] || n["aris_x"])), ErrorCode::Config,
          "geometry and aris_x need preset table2");
  require(!(preset == "table2" && n["gains"]), ErrorCode::Config, "gains need preset table1");
  maybe(n, "aris_x", "scenario", aris_x);

  ScenarioConfig c;
  if (K <= 3) {
    c = preset == "table1" ? table1_config(K, N, M) : table2_config(K, N, M, aris_x);
  } else {
    // Presets define three users; larger K must spell out every per-user entry.
    c = preset == "table1" ? table1_config(1, N, M) : table2_config(1, N, M, aris_x);
    c.dims.K = K;
    c.targets.assign(K, c.targets.front());
  }
  maybe(n, "jammer_power_w", "scenario", c.jammer_power);
  maybe(n, "noise_power_w", "scenario", c.noise_power);
  maybe(n, "beta_max", "scenario", c.beta_max);
  if (n["targets"]) c.targets = get<std::vector<double>>(n, "targets", "scenario");
  if (n["jammer"]) c.jammer_mode = parse_jammer_mode(get<std::string>(n, "jammer", "scenario"));

  if (const YAML::Node g = n["gains"]) {
    check_keys(g, "scenario.gains", {"h", "f", "g", "h_j", "G_j"});
    auto& fg = std::get<FixedGains>(c.gains);
    if (g["h"]) fg.h = get<std::vector<double>>(g, "h", "scenario.gains");
    if (g["g"]) fg.g = get<std::vector<double>>(g, "g", "scenario.gains");
    maybe(g, "f", "scenario.gains", fg.f);
    maybe(g, "h_j", "scenario.gains", fg.h_j);
    maybe(g, "G_j", "scenario.gains", fg.G_j);
  }
  if (const YAML::Node g = n["geometry"]) {
    check_keys(g, "scenario.geometry", {"K0", "alpha_direct", "alpha_other", "bs", "aris", "jammer", "users"});
    auto& geo = std::get<Geometry>(c.gains);
    maybe(g, "K0", "scenario.geometry", geo.K0);
    maybe(g, "alpha_direct", "scenario.geometry", geo.alpha_direct);
    maybe(g, "alpha_other", "scenario.geometry", geo.alpha_other);
    if (g["bs"]) geo.bs = point(g["bs"], "scenario.geometry.bs");
    if (g["aris"]) geo.aris = point(g["aris"], "scenario.geometry.aris");
    if (g["jammer"]) geo.jammer = point(g["jammer"], "scenario.geometry.jammer");
    if (g["users"]) {
      require(g["users"].IsSequence(), ErrorCode::Config, "scenario.geometry.users must be a list of [x, y]");
      geo.users.clear();
      for (const auto& u : g["users"]) geo.users.push_back(point(u, "scenario.geometry.users"));
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, "scenario: " + e.detail());
  }
  return c;
}

inline void parse_solver(const YAML::Node& n, sdp::SolverSettings& s) {
  check_keys(n, "solver", {"eps_abs", "eps_rel", "max_iters", "rho", "relaxation", "adapt_interval",
                           "adapt_threshold", "anderson_memory", "safeguard", "warm_start"});
  maybe(n, "eps_abs", "solver", s.eps_abs);
  maybe(n, "eps_rel", "solver", s.eps_rel);
  maybe(n, "max_iters", "solver", s.max_iters);
  maybe(n, "rho", "solver", s.rho);
  maybe(n, "relaxation", "solver", s.relaxation);
  maybe(n, "adapt_interval", "solver", s.adapt_interval);
  maybe(n, "adapt_threshold", "solver", s.adapt_threshold);
  maybe(n, "anderson_memory", "solver", s.anderson_memory);
  maybe(n, "safeguard", "solver", s.safeguard);
  maybe(n, "warm_start", "solver", s.warm_start);
  require(s.eps_abs > 0.0 && s.eps_rel >= 0.0 && s.max_iters >= 1 && s.rho > 0.0, ErrorCode::Config,
          "solver tolerances, rho and max_iters must be positive");
  require(s.relaxation > 0.0 && s.relaxation < 2.0, ErrorCode::Config, "solver.relaxation must lie in (0, 2)");
  require(s.anderson_memory >= 0, ErrorCode::Config, "solver.anderson_memory must be >= 0");
}

inline void parse_algorithm(const YAML::Node& n, AlgorithmSettings& a) {
  check_keys(n, "algorithm", {"eps_outer", "relative", "max_outer", "literal_beta_bound", "dinkelbach_eps",
                              "dinkelbach_max_iters", "samples", "rank1_tol"});
  maybe(n, "eps_outer", "algorithm", a.eps_outer);
  maybe(n, "relative", "algorithm", a.relative);
  a.dinkelbach.relative = a.relative;
  maybe(n, "max_outer", "algorithm", a.max_outer);
  maybe(n, "literal_beta_bound", "algorithm", a.literal_beta_bound);
  maybe(n, "dinkelbach_eps", "algorithm", a.dinkelbach.eps);
  maybe(n, "dinkelbach_max_iters", "algorithm", a.dinkelbach.max_iters);
  maybe(n, "samples", "algorithm", a.rounding.samples);
  maybe(n, "rank1_tol", "algorithm", a.rounding.rank1_tol);
  require(a.eps_outer > 0.0 && a.dinkelbach.eps > 0.0, ErrorCode::Config, "convergence thresholds must be > 0");
  require(a.max_outer >= 1 && a.dinkelbach.max_iters >= 1, ErrorCode::Config, "iteration caps must be >= 1");
  require(a.rounding.samples >= 0, ErrorCode::Config, "algorithm.samples must be >= 0");
}

}  // namespace detail

inline ExperimentConfig parse_config(const YAML::Node& root) {
  ExperimentConfig cfg;
  cfg.algorithm.dinkelbach.solver = experiment_solver_defaults();
  if (!root || root.IsNull()) return cfg;
  detail::check_keys(root, "config", {"seed", "scenario", "solver", "algorithm", "sweep"});
  detail::maybe(root, "seed", "config", cfg.seed);
  if (root["scenario"]) cfg.scenario = detail::parse_scenario(root["scenario"]);
  if (root["solver"]) detail::parse_solver(root["solver"], cfg.algorithm.dinkelbach.solver);
  if (root["algorithm"]) detail::parse_algorithm(root["algorithm"], cfg.algorithm);
  cfg.scenario.seed = cfg.seed;
  if (const YAML::Node s = root["sweep"]) {
    detail::check_keys(s, "sweep", {"variable", "values", "trials"});
    SweepSpec spec;
    spec.variable = parse_sweep_variable(detail::get<std::string>(s, "variable", "sweep"));
    spec.values = detail::get<std::vector<double>>(s, "values", "sweep");
    detail::maybe(s, "trials", "sweep", spec.trials);
    spec.base = cfg.scenario;
    spec.jammer_mode = cfg.scenario.jammer_mode;
    spec.validate();
    cfg.sweep = spec;
  }
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  try {
    return parse_config(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::Config, std::string("YAML: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Config, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_string(ss.str());
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, path + ": " + e.detail());
  }
}

}  // namespace arisopt
