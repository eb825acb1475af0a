#pragma once

// Monte-Carlo sweeps over N, M or the A-RIS x-coordinate, aggregation into
// per-point rows, and the CSV / JSON outputs consumed by the plotting scripts.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "arisopt/config.hpp"

namespace arisopt {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr const char* kCsvHeader =
    "sweep_var,value,trials,mean_sum_power_w,std_sum_power_w,mean_sum_power_dbm,mean_beta,std_beta,"
    "mean_sigma_j2_w,conv_rate,mean_outer_iters";

enum class TrialStatus { Converged, Unconverged, Failed };

struct TrialOutcome {
  TrialStatus status = TrialStatus::Failed;
  std::uint64_t seed = 0;
  double sum_power_w = 0.0;
  double mean_reflection = 0.0;
  double sigma_j2_w = 0.0;
  int outer_iters = 0;
  int sdp_iters = 0;
  double max_sinr_error = 0.0;   // max_k |gamma_k - T_k| after repair
  double max_reflection = 0.0;   // max_n |phi_n|
  double seconds = 0.0;
  std::string error;
};

struct AggregateRow {
  std::string sweep_var;
  double value = 0.0;
  int trials = 0;       // requested
  int converged = 0;
  int unconverged = 0;
  int failed = 0;
  double mean_sum_power_w = 0.0;
  double std_sum_power_w = 0.0;
  double mean_sum_power_dbm = 0.0;
  double mean_beta = 0.0;
  double std_beta = 0.0;
  double mean_sigma_j2_w = 0.0;
  double conv_rate = 0.0;
  double mean_outer_iters = 0.0;
};

struct SweepResult {
  std::vector<AggregateRow> rows;
  std::vector<std::vector<TrialOutcome>> trials;  // [point][trial]
  double seconds = 0.0;
};

/// Pairwise summation; the result depends only on the order of `v`.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : pairwise_sum(v.data(), v.size()) / v.size();
}

/// Sample standard deviation; 0 for a single value.
inline double std_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (v.size() == 1) return 0.0;
  const double m = mean_of(v);
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / (v.size() - 1));
}

/// Seed of trial `trial` at sweep value `value`.
inline std::uint64_t trial_seed(std::uint64_t master, double value, int trial) {
  return derive_seed(master, {std::bit_cast<std::uint64_t>(value), static_cast<std::uint64_t>(trial)});
}

/// Scenario for one sweep point.
inline ScenarioConfig point_config(const SweepSpec& spec, double value) {
  ScenarioConfig c = spec.base;
  c.jammer_mode = spec.jammer_mode;
  switch (spec.variable) {
    case SweepVariable::N: c.dims.N = static_cast<int>(value); break;
    case SweepVariable::M: c.dims.M = static_cast<int>(value); break;
    case SweepVariable::ArisX: std::get<Geometry>(c.gains).aris.x = value; break;
  }
  c.validate();
  return c;
}

/// One realization through Algorithm 1. Errors are captured, never thrown.
inline TrialOutcome run_trial(const ScenarioConfig& config, std::uint64_t seed, AlgorithmSettings settings) {
  TrialOutcome out;
  out.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RandomSource rng(seed);
    const ScenarioRealization s = draw(config, rng);
    settings.rounding.seed = derive_seed(seed, {1});
    const RunResult r = run_algorithm1(s, settings);
    out.status = r.converged ? TrialStatus::Converged : TrialStatus::Unconverged;
    out.sum_power_w = r.sum_power_w;
    out.mean_reflection = r.mean_reflection;
    out.sigma_j2_w = r.sigma_j2_final;
    out.outer_iters = r.outer_iters;
    out.sdp_iters = r.total_sdp_iters;
    out.max_sinr_error = (r.achieved_sinrs - s.targets).cwiseAbs().maxCoeff();
    out.max_reflection = r.phi_star.max_magnitude();
  } catch (const std::exception& e) {
    out.status = TrialStatus::Failed;
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Means over converged trials only; unconverged and failed trials are counted.
inline AggregateRow aggregate(const std::string& sweep_var, double value, const std::vector<TrialOutcome>& trials) {
  AggregateRow row;
  row.sweep_var = sweep_var;
  row.value = value;
  row.trials = static_cast<int>(trials.size());
  std::vector<double> power, beta, sj2, outer;
  for (const auto& t : trials) {
    if (t.status == TrialStatus::Failed) {
      ++row.failed;
      continue;
    }
    if (t.status == TrialStatus::Unconverged) {
      ++row.unconverged;
      continue;
    }
    ++row.converged;
    power.push_back(t.sum_power_w);
    beta.push_back(t.mean_reflection);
    sj2.push_back(t.sigma_j2_w);
    outer.push_back(t.outer_iters);
  }
  row.mean_sum_power_w = mean_of(power);
  row.std_sum_power_w = std_of(power);
  row.mean_sum_power_dbm = watts_to_dbm(row.mean_sum_power_w);
  row.mean_beta = mean_of(beta);
  row.std_beta = std_of(beta);
  row.mean_sigma_j2_w = mean_of(sj2);
  row.conv_rate = row.trials > 0 ? static_cast<double>(row.converged) / row.trials : 0.0;
  row.mean_outer_iters = mean_of(outer);
  return row;
}

/// Runs `fn(i)` for i in [0, count) on `threads` workers.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Every (value, trial) pair is an independent task. `log` receives one line
/// per failed or unconverged trial.
inline SweepResult run_sweep(const SweepSpec& spec, std::uint64_t master_seed, const AlgorithmSettings& settings,
                             int threads = 1, std::ostream* log = nullptr) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t P = spec.values.size(), T = static_cast<std::size_t>(spec.trials);
  std::vector<ScenarioConfig> configs;
  configs.reserve(P);
  for (double v : spec.values) configs.push_back(point_config(spec, v));

  SweepResult res;
  res.trials.assign(P, std::vector<TrialOutcome>(T));
  std::mutex log_mutex;
  parallel_for(P * T, threads, [&](std::size_t task) {
    const std::size_t p = task / T, t = task % T;
    const double value = spec.values[p];
    TrialOutcome out = run_trial(configs[p], trial_seed(master_seed, value, static_cast<int>(t)), settings);
    if (log != nullptr && out.status != TrialStatus::Converged) {
      std::lock_guard<std::mutex> lock(log_mutex);
      *log << "trial " << to_string(spec.variable) << '=' << value << " t=" << t
           << (out.status == TrialStatus::Failed ? " failed: " + out.error : std::string(" unconverged")) << '\n';
    }
    res.trials[p][t] = std::move(out);
  });

  for (std::size_t p = 0; p < P; ++p) res.rows.push_back(aggregate(to_string(spec.variable), spec.values[p], res.trials[p]));
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// Shortest representation with at most 9 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.sweep_var << ',' << format_number(r.value) << ',' << r.trials << ',' << format_number(r.mean_sum_power_w)
       << ',' << format_number(r.std_sum_power_w) << ',' << format_number(r.mean_sum_power_dbm) << ','
       << format_number(r.mean_beta) << ',' << format_number(r.std_beta) << ',' << format_number(r.mean_sigma_j2_w)
       << ',' << format_number(r.conv_rate) << ',' << format_number(r.mean_outer_iters) << '\n';
  }
}

inline void emit_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_csv(out, rows);
  out.flush();
  require(static_cast<bool>(out), ErrorCode::Io, "write to '" + path + "' failed");
}

inline nlohmann::json settings_json(const AlgorithmSettings& a) {
  const auto& s = a.dinkelbach.solver;
  return {
      {"algorithm",
       {{"eps_outer", a.eps_outer},
        {"relative", a.relative},
        {"max_outer", a.max_outer},
        {"literal_beta_bound", a.literal_beta_bound},
        {"dinkelbach_eps", a.dinkelbach.eps},
        {"dinkelbach_max_iters", a.dinkelbach.max_iters},
        {"samples", a.rounding.samples},
        {"rank1_tol", a.rounding.rank1_tol}}},
      {"solver",
       {{"eps_abs", s.eps_abs},
        {"eps_rel", s.eps_rel},
        {"max_iters", s.max_iters},
        {"rho", s.rho},
        {"relaxation", s.relaxation},
        {"adapt_interval", s.adapt_interval},
        {"adapt_threshold", s.adapt_threshold},
        {"anderson_memory", s.anderson_memory},
        {"safeguard", s.safeguard},
        {"warm_start", s.warm_start}}},
  };
}

inline nlohmann::json scenario_json(const ScenarioConfig& c) {
  nlohmann::json j = {{"K", c.dims.K},
                      {"N", c.dims.N},
                      {"M", c.dims.M},
                      {"jammer_power_w", c.jammer_power},
                      {"noise_power_w", c.noise_power},
                      {"targets", c.targets},
                      {"beta_max", c.beta_max},
                      {"jammer", to_string(c.jammer_mode)}};
  if (const auto* fg = std::get_if<FixedGains>(&c.gains)) {
    j["preset"] = "table1";
    j["gains"] = {{"h", fg->h}, {"f", fg->f}, {"g", fg->g}, {"h_j", fg->h_j}, {"G_j", fg->G_j}};
  } else {
    const auto& g = std::get<Geometry>(c.gains);
    auto pt = [](const Point2& p) { return std::vector<double>{p.x, p.y}; };
    std::vector<std::vector<double>> users;
    for (const auto& u : g.users) users.push_back(pt(u));
    j["preset"] = "table2";
    j["geometry"] = {{"K0", g.K0},           {"alpha_direct", g.alpha_direct}, {"alpha_other", g.alpha_other},
                     {"bs", pt(g.bs)},       {"aris", pt(g.aris)},             {"jammer", pt(g.jammer)},
                     {"users", users}};
  }
  return j;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Sidecar metadata for a sweep CSV.
inline nlohmann::json sweep_metadata(const SweepSpec& spec, std::uint64_t master_seed, const AlgorithmSettings& settings,
                                     const SweepResult& res, int threads) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& r : res.rows)
    points.push_back({{"value", r.value},
                      {"trials", r.trials},
                      {"converged", r.converged},
                      {"unconverged", r.unconverged},
                      {"failed", r.failed}});
  return {
      {"tool", "arisopt"},
      {"version", kVersion},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
      {"rng", std::string(RandomSource::kAlgorithm)},
      {"master_seed", master_seed},
      {"sweep", {{"variable", to_string(spec.variable)}, {"values", spec.values}, {"trials", spec.trials}}},
      {"scenario", scenario_json(spec.base)},
      {"jammer", to_string(spec.jammer_mode)},
      {"settings", settings_json(settings)},
      {"threads", threads},
      {"points", points},
      {"elapsed_s", res.seconds},
      {"created_utc", utc_timestamp()},
  };
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  require(static_cast<bool>(out), ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace arisopt
