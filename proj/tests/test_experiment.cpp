#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "arisopt/experiment.hpp"

using namespace arisopt;

namespace {

std::string csv_of(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("arisopt_test_" + name);
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const ExperimentConfig c = parse_config_string("");
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.scenario.dims.K, 2);
  EXPECT_EQ(c.scenario.dims.N, 32);
  EXPECT_EQ(c.scenario.dims.M, 4);
  EXPECT_FALSE(c.sweep.has_value());
  EXPECT_EQ(c.algorithm.dinkelbach.solver.eps_abs, experiment_solver_defaults().eps_abs);
}

TEST(Config, FullDocument) {
  const ExperimentConfig c = parse_config_string(R"(
seed: 42
scenario:
  preset: table2
  K: 3
  N: 16
  M: 8
  aris_x: 40
  jammer: white
  targets: [3, 4, 5]
  geometry: {K0: 1e5, jammer: [0, -50]}
solver: {eps_abs: 1e-6, max_iters: 900}
algorithm: {eps_outer: 1e-3, max_outer: 7, samples: 10}
sweep: {variable: aris_x, values: [10, 20, 30], trials: 4}
)");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.scenario.dims.K, 3);
  EXPECT_EQ(c.scenario.jammer_mode, JammerMode::WhiteNoise);
  const auto& geo = std::get<Geometry>(c.scenario.gains);
  EXPECT_DOUBLE_EQ(geo.K0, 1e5);
  EXPECT_DOUBLE_EQ(geo.aris.x, 40.0);
  EXPECT_DOUBLE_EQ(geo.jammer.y, -50.0);
  EXPECT_EQ(c.scenario.targets, (std::vector<double>{3, 4, 5}));
  EXPECT_DOUBLE_EQ(c.algorithm.dinkelbach.solver.eps_abs, 1e-6);
  EXPECT_EQ(c.algorithm.dinkelbach.solver.max_iters, 900);
  EXPECT_EQ(c.algorithm.max_outer, 7);
  EXPECT_EQ(c.algorithm.rounding.samples, 10);
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->variable, SweepVariable::ArisX);
  EXPECT_EQ(c.sweep->trials, 4);
  EXPECT_EQ(c.sweep->jammer_mode, JammerMode::WhiteNoise);
}

TEST(Config, Errors) {
  for (const char* text : {"bogus: 1", "scenario: {K: 0}", "scenario: {beta_max: 2}", "scenario: {targets: [1]}",
                           "scenario: {aris_x: 5}", "solver: {relaxation: 2.5}", "sweep: {variable: K, values: [1]}",
                           "sweep: {variable: N, values: []}", "sweep: {variable: aris_x, values: [1]}",
                           "sweep: {variable: N, values: [3.5]}", "scenario: {N: abc}", "seed: [1", "scenario: [1, 2]"}) {
    try {
      parse_config_string(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Config) << text;
    }
  }
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/arisopt.yaml");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/arisopt.yaml"), std::string::npos);
  }
}

TEST(Csv, HeaderContract) {
  EXPECT_EQ(csv_of({}),
            "sweep_var,value,trials,mean_sum_power_w,std_sum_power_w,mean_sum_power_dbm,mean_beta,std_beta,"
            "mean_sigma_j2_w,conv_rate,mean_outer_iters\n");
}

TEST(Csv, OneRowGivesTwoLines) {
  AggregateRow r;
  r.sweep_var = "N";
  r.value = 32;
  r.trials = 50;
  r.mean_sum_power_w = 0.28;
  r.mean_sum_power_dbm = watts_to_dbm(0.28);
  r.mean_beta = 1.0 / 3.0;
  r.conv_rate = 1.0;
  const std::string text = csv_of({r});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const std::string row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(row, "N,32,50,0.28,0,24.4715803,0.333333333,0,0,1,0\n");
}

TEST(Csv, NineSignificantDigits) {
  EXPECT_EQ(format_number(0.123456789123), "0.123456789");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_NEAR(std::stod(format_number(watts_to_dbm(0.28))), 24.47, 5e-3);
}

TEST(Csv, FileOutputAndIoErrors) {
  const auto path = temp_path("rows.csv");
  emit_csv({}, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line + "\n", csv_of({}));
  std::filesystem::remove(path);
  try {
    emit_csv({}, "/nonexistent/dir/out.csv");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"), std::string::npos);
  }
}

TEST(Aggregate, ExcludesUnconvergedAndFailed) {
  std::vector<TrialOutcome> t(4);
  t[0].status = TrialStatus::Converged;
  t[0].sum_power_w = 1.0;
  t[0].mean_reflection = 0.5;
  t[0].outer_iters = 2;
  t[1].status = TrialStatus::Converged;
  t[1].sum_power_w = 3.0;
  t[1].mean_reflection = 1.0;
  t[1].outer_iters = 4;
  t[2].status = TrialStatus::Unconverged;
  t[2].sum_power_w = 100.0;
  t[3].status = TrialStatus::Failed;
  const AggregateRow r = aggregate("M", 4, t);
  EXPECT_EQ(r.trials, 4);
  EXPECT_EQ(r.converged, 2);
  EXPECT_EQ(r.unconverged, 1);
  EXPECT_EQ(r.failed, 1);
  EXPECT_DOUBLE_EQ(r.mean_sum_power_w, 2.0);
  EXPECT_DOUBLE_EQ(r.std_sum_power_w, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.mean_sum_power_dbm, watts_to_dbm(2.0));
  EXPECT_DOUBLE_EQ(r.mean_beta, 0.75);
  EXPECT_DOUBLE_EQ(r.conv_rate, 0.5);
  EXPECT_DOUBLE_EQ(r.mean_outer_iters, 3.0);
  EXPECT_GE(r.std_beta, 0.0);
}

TEST(Aggregate, PairwiseSumIsOrderStable) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  const double a = mean_of(v);
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_NEAR(a, naive / v.size(), 1e-15);
  EXPECT_TRUE(std::isnan(mean_of({})));
  EXPECT_EQ(std_of({2.0}), 0.0);
}

TEST(Sweep, SeedsDependOnlyOnPointAndTrial) {
  EXPECT_EQ(trial_seed(7, 32.0, 3), trial_seed(7, 32.0, 3));
  EXPECT_NE(trial_seed(7, 32.0, 3), trial_seed(7, 64.0, 3));
  EXPECT_NE(trial_seed(7, 32.0, 3), trial_seed(7, 32.0, 4));
  EXPECT_NE(trial_seed(7, 32.0, 3), trial_seed(8, 32.0, 3));
}

TEST(Sweep, TrialCountDoesNotChangeEarlierTrials) {
  SweepSpec spec;
  spec.variable = SweepVariable::N;
  spec.values = {4};
  spec.base = table1_config(2, 4, 1);
  AlgorithmSettings a;
  a.dinkelbach.solver = experiment_solver_defaults();
  spec.trials = 2;
  const SweepResult two = run_sweep(spec, 5, a);
  spec.trials = 3;
  const SweepResult three = run_sweep(spec, 5, a, 2);
  for (int t = 0; t < 2; ++t) {
    EXPECT_EQ(two.trials[0][t].seed, three.trials[0][t].seed);
    EXPECT_EQ(two.trials[0][t].sum_power_w, three.trials[0][t].sum_power_w);
  }
}

TEST(Sweep, ReproducibleBitExact) {
  SweepSpec spec;
  spec.variable = SweepVariable::M;
  spec.values = {1, 2};
  spec.trials = 1;
  spec.base = table1_config(2, 6, 1);
  AlgorithmSettings a;
  a.dinkelbach.solver = experiment_solver_defaults();
  const SweepResult x = run_sweep(spec, 11, a, 1), y = run_sweep(spec, 11, a, 2);
  EXPECT_EQ(csv_of(x.rows), csv_of(y.rows));
  for (const auto& row : x.rows) {
    EXPECT_EQ(row.failed, 0);
    EXPECT_GE(row.conv_rate, 0.0);
    EXPECT_LE(row.conv_rate, 1.0);
  }
}

TEST(Sweep, FailedTrialsAreCapturedNotThrown) {
  ScenarioConfig c = table1_config(1, 2, 1);
  auto& g = std::get<FixedGains>(c.gains);
  g.h = {0.0};
  g.f = 0.0;
  AlgorithmSettings a;
  a.dinkelbach.solver = experiment_solver_defaults();
  const TrialOutcome out = run_trial(c, 1, a);
  EXPECT_EQ(out.status, TrialStatus::Failed);
  EXPECT_FALSE(out.error.empty());
}

TEST(Metadata, SidecarKeys) {
  SweepSpec spec;
  spec.variable = SweepVariable::N;
  spec.values = {2};
  spec.trials = 1;
  spec.base = table1_config(1, 2, 1);
  AlgorithmSettings a;
  a.dinkelbach.solver = experiment_solver_defaults();
  const SweepResult res = run_sweep(spec, 3, a);
  const nlohmann::json j = sweep_metadata(spec, 3, a, res, 1);
  for (const char* key : {"tool", "version", "eigen_version", "compiler", "rng", "master_seed", "sweep", "scenario",
                          "jammer", "settings", "threads", "points", "elapsed_s", "created_utc"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["master_seed"], 3);
  EXPECT_EQ(j["settings"]["solver"]["eps_abs"], 1e-5);
  EXPECT_EQ(j["points"][0]["trials"], 1);

  const auto path = temp_path("meta.json");
  write_json(j, path.string());
  std::ifstream in(path);
  const nlohmann::json back = nlohmann::json::parse(in);
  EXPECT_EQ(back["version"], kVersion);
  std::filesystem::remove(path);
}
