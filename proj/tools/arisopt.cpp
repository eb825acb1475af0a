// arisopt command-line experiment runner.
//
//   arisopt run      --config run.yaml [--seed S] [--jammer intelligent|white] [--out result.json]
//   arisopt sweep    --config sweep.yaml [--seed S] [--trials T] [--threads P] [--out sweep.csv]
//   arisopt validate [--seed S]
//
// Exit codes: 0 success, 1 config error, 2 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "arisopt/experiment.hpp"

namespace {

using namespace arisopt;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> jammer;
  std::string out;
  int threads = default_threads();
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? parse_config(YAML::Node()) : load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.scenario.seed = *o.seed;
  }
  if (o.jammer) {
    cfg.scenario.jammer_mode = parse_jammer_mode(*o.jammer);
    if (cfg.sweep) cfg.sweep->jammer_mode = cfg.scenario.jammer_mode;
  }
  if (o.trials) {
    require(cfg.sweep.has_value(), ErrorCode::Config, "--trials needs a config with a sweep section");
    cfg.sweep->trials = *o.trials;
    cfg.sweep->validate();
  }
  return cfg;
}

int cmd_run(const Options& o) {
  const ExperimentConfig cfg = load(o);
  AlgorithmSettings settings = cfg.algorithm;
  settings.rounding.seed = derive_seed(cfg.seed, {1});
  RandomSource rng(cfg.seed);
  const ScenarioRealization s = draw(cfg.scenario, rng);
  RunLog log(&std::cout);
  const RunResult r = run_algorithm1(s, settings, &log);

  std::cout << "result sum_power_w=" << format_number(r.sum_power_w) << " sum_power_dbm=" << format_number(r.sum_power_dbm)
            << " mean_reflection=" << format_number(r.mean_reflection) << " sigma_j2_w=" << format_number(r.sigma_j2_final)
            << " converged=" << (r.converged ? 1 : 0) << '\n';
  if (!o.out.empty()) {
    nlohmann::json j = {{"seed", cfg.seed},
                        {"scenario", scenario_json(cfg.scenario)},
                        {"settings", settings_json(settings)},
                        {"sum_power_w", r.sum_power_w},
                        {"sum_power_dbm", r.sum_power_dbm},
                        {"mean_reflection", r.mean_reflection},
                        {"sigma_j2_w", r.sigma_j2_final},
                        {"sigma_j2_off_w", r.sigma_j2_off},
                        {"outer_iters", r.outer_iters},
                        {"total_sdp_iters", r.total_sdp_iters},
                        {"converged", r.converged},
                        {"rank_one", r.rank_one},
                        {"rank_one_gap", r.rank_one_gap},
                        {"powers_w", std::vector<double>(r.p_star.p.data(), r.p_star.p.data() + r.p_star.size())},
                        {"achieved_sinrs",
                         std::vector<double>(r.achieved_sinrs.data(), r.achieved_sinrs.data() + r.achieved_sinrs.size())}};
    std::vector<double> re, im;
    for (Index n = 0; n < r.phi_star.phi.size(); ++n) {
      re.push_back(r.phi_star.phi(n).real());
      im.push_back(r.phi_star.phi(n).imag());
    }
    j["phi_re"] = re;
    j["phi_im"] = im;
    write_json(j, o.out);
  }
  return r.converged ? kOk : kRuntimeError;
}

int cmd_sweep(const Options& o) {
  const ExperimentConfig cfg = load(o);
  require(cfg.sweep.has_value(), ErrorCode::Config, "sweep needs a config with a sweep section");
  const std::string out = o.out.empty() ? "sweep.csv" : o.out;
  const SweepResult res = run_sweep(*cfg.sweep, cfg.seed, cfg.algorithm, o.threads, &std::cerr);
  emit_csv(res.rows, out);
  write_json(sweep_metadata(*cfg.sweep, cfg.seed, cfg.algorithm, res, o.threads), out + ".meta.json");
  int failed = 0;
  for (const auto& r : res.rows) {
    failed += r.failed;
    std::cerr << r.sweep_var << '=' << format_number(r.value) << " converged=" << r.converged << '/' << r.trials
              << " unconverged=" << r.unconverged << " failed=" << r.failed
              << " mean_sum_power_w=" << format_number(r.mean_sum_power_w) << " mean_beta=" << format_number(r.mean_beta)
              << '\n';
  }
  std::cerr << "wrote " << out << " in " << format_number(res.seconds) << " s\n";
  return kOk;
}

// Quick property checks on tiny instances.
int cmd_validate(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(1);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    failures += ok ? 0 : 1;
  };

  {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      RandomSource rng(derive_seed(seed, {10, static_cast<std::uint64_t>(t)}));
      const ScenarioRealization s = draw(table1_config(3, 16, 8), rng);
      const LiftedForms forms = build_lifted(s);
      RISResponse r{VectorXcd(16)};
      for (Index n = 0; n < 16; ++n) r.phi(n) = rng.complex_normal();
      clip_to_disc(r.phi, 1.0);
      const VectorXcd pb = AugmentedResponse::from(r).phibar;
      const VectorXd q = effective_gains(s, r);
      for (Index k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(quadratic_form(forms.F[k], pb) - q(k)) / (1.0 + q(k)));
      const double jg = jammer_link_gain(s, r);
      worst = std::max(worst, std::abs(quadratic_form(forms.F_j, pb) - jg) / (1.0 + jg));
    }
    report("lifting", worst <= 1e-10, "max_rel_err=" + format_number(worst));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      RandomSource rng(derive_seed(seed, {11, static_cast<std::uint64_t>(t)}));
      const int K = 1 + static_cast<int>(rng.uniform() * 6);
      LpInstance inst;
      inst.traces = VectorXd(K);
      inst.targets = VectorXd(K);
      for (int k = 0; k < K; ++k) {
        inst.traces(k) = 0.1 + 5.0 * rng.uniform();
        inst.targets(k) = 0.5 + 2.0 * rng.uniform();
      }
      inst.jammer_trace = rng.uniform();
      inst.jammer_power = 10.0 * rng.uniform();
      inst.noise_power = 1.0;
      const PowerVector a = solve_powers(inst), b = solve_powers_generic(inst);
      worst = std::max(worst, (a.p - b.p).cwiseAbs().maxCoeff() / a.p.cwiseAbs().maxCoeff());
    }
    report("lp_oracle", worst <= 1e-8, "max_rel_err=" + format_number(worst));
  }
  {
    sdp::SdpProblem<std::complex<double>> P;
    P.dim = 4;
    P.C = -MatrixXcd::Ones(4, 4);
    for (Index j = 0; j < 3; ++j) P.diag_ub.push_back({j, 1.0});
    P.diag_eq.push_back({3, 1.0});
    sdp::SolverSettings tight;
    tight.eps_abs = 1e-10;
    tight.eps_rel = 1e-10;
    const auto sol = sdp::solve(P, tight);
    report("sdp_analytic", sol.status == sdp::SdpStatus::Optimal && std::abs(sol.objective + 16.0) <= 1e-6,
           "objective=" + format_number(sol.objective));
  }
  {
    RandomSource rng(seed);
    const ScenarioRealization s = draw(table1_config(2, 4, 1), rng);
    AlgorithmSettings settings;
    settings.rounding.seed = derive_seed(seed, {1});
    const RunResult r = run_algorithm1(s, settings);
    const double baseline = solve_powers(lp_instance(s, RISResponse::off(4))).sum();
    const double sinr_err = (r.achieved_sinrs - s.targets).cwiseAbs().maxCoeff();
    report("tiny_run", r.converged && sinr_err <= 1e-6 && r.phi_star.feasible(1.0) && r.sum_power_w <= baseline,
           "sum_power_w=" + format_number(r.sum_power_w) + " baseline_w=" + format_number(baseline));
  }
  return failures == 0 ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A-RIS / uplink NOMA transmit power minimization under jamming"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string jammer;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "YAML config file");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--jammer", jammer, "jammer model")->check(CLI::IsMember({"intelligent", "white"}));
  };
  CLI::App* run = app.add_subcommand("run", "optimize one scenario realization");
  common(run);
  run->add_option("--out", o.out, "write the result as JSON");
  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep to CSV");
  common(sweep);
  sweep->add_option("--trials", trials, "trials per sweep point (overrides the config)")->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "CSV path (metadata goes to <out>.meta.json)");
  sweep->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  CLI::App* validate = app.add_subcommand("validate", "property checks on tiny instances");
  validate->add_option("--seed", seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  for (CLI::App* sub : {run, sweep, validate}) {
    if (sub->count("--seed") > 0) o.seed = seed;
    if (sub->get_option_no_throw("--jammer") != nullptr && sub->count("--jammer") > 0) o.jammer = jammer;
    if (sub->get_option_no_throw("--trials") != nullptr && sub->count("--trials") > 0) o.trials = trials;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    return cmd_validate(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Config ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
