#include <gtest/gtest.h>

#include "arisopt/config.hpp"
#include "support.hpp"

using namespace arisopt;
using arisopt::testing::random_response;
using arisopt::testing::table1_draw;

namespace {

ScenarioRealization with_direct_gains(std::vector<double> mags) {
  ScenarioRealization s = table1_draw(static_cast<int>(mags.size()), 3, 1, 1);
  for (std::size_t k = 0; k < mags.size(); ++k) s.h(k) = std::polar(mags[k], 0.3 * k);
  return s;
}

std::vector<Index> ids(std::initializer_list<Index> v) { return v; }

AlgorithmSettings fast_settings(std::uint64_t seed) {
  AlgorithmSettings a;
  a.dinkelbach.solver = experiment_solver_defaults();
  a.rounding.seed = seed;
  return a;
}

}  // namespace

TEST(Ordering, Examples) {
  EXPECT_EQ(user_ordering(with_direct_gains({5, 2, 1})), ids({0, 1, 2}));
  EXPECT_EQ(user_ordering(with_direct_gains({1, 5})), ids({1, 0}));
  EXPECT_EQ(user_ordering(with_direct_gains({2, 2, 3})), ids({2, 0, 1}));
}

TEST(Initialize, NoJammer) {
  ScenarioConfig c = table1_config(2, 4, 2);
  auto& gains = std::get<FixedGains>(c.gains);
  gains.G_j = 0.0;
  gains.h_j = 0.0;
  RandomSource rng(3);
  const ScenarioRealization s = draw(c, rng);
  const LiftedForms forms = build_lifted(s);
  const SubproblemData data = SubproblemData::from(s);
  const Initialization init = initialize(forms, s, data, sdp::SolverSettings{});
  EXPECT_NEAR(trace_product(forms.F_j, init.Phibar_jammer), 0.0, 1e-12);
  LpInstance free = lp_instance(forms, init.Phibar_jammer, s);
  free.jammer_power = 0.0;
  const PowerVector expected = solve_powers(free);
  EXPECT_LE((init.p0.p - expected.p).cwiseAbs().maxCoeff(), 1e-12 * expected.p.maxCoeff());
}

TEST(Initialize, SingleAntennaJammerIsNulled) {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const ScenarioRealization s = table1_draw(2, 8, 1, seed);
    const LiftedForms forms = build_lifted(s);
    const Initialization init = initialize(forms, s, SubproblemData::from(s), sdp::SolverSettings{});
    const double off = jammer_link_gain(s, RISResponse::off(8));
    EXPECT_LE(trace_product(forms.F_j, init.Phibar_jammer), 1e-4 * off) << "seed " << seed;
  }
}

TEST(Initialize, ScalarGridOracle) {
  for (std::uint64_t seed : {7, 8}) {
    const ScenarioRealization s = table1_draw(1, 1, 1, seed);
    const LiftedForms forms = build_lifted(s);
    sdp::SolverSettings st;
    st.eps_abs = 1e-10;
    st.eps_rel = 1e-10;
    const Initialization init = initialize(forms, s, SubproblemData::from(s), st);
    double best = std::numeric_limits<double>::infinity();
    for (int ib = 0; ib <= 400; ++ib)
      for (int it = 0; it < 1440; ++it)
        best = std::min(best, jammer_link_gain(s, {VectorXcd::Constant(1, std::polar(ib / 400.0, it * M_PI / 720.0))}));
    EXPECT_NEAR(trace_product(forms.F_j, init.Phibar_jammer), best, 1e-4 * (1.0 + best)) << "seed " << seed;
  }
}

TEST(Repair, ZeroSurfaceMatchesNoRisLp) {
  const ScenarioRealization s = table1_draw(3, 5, 2, 4);
  const PowerVector p = repair_powers(s, RISResponse::off(5));
  LpInstance inst;
  inst.traces = s.h.cwiseAbs2();
  inst.jammer_trace = s.h_j.squaredNorm();
  inst.jammer_power = s.jammer_power;
  inst.noise_power = s.noise_power;
  inst.targets = s.targets;
  EXPECT_LE((p.p - solve_powers(inst).p).cwiseAbs().maxCoeff(), 1e-12 * p.p.maxCoeff());
}

TEST(Repair, PerturbedResponseMeetsTargets) {
  const ScenarioRealization s = table1_draw(3, 6, 2, 5);
  RandomSource rng(6);
  for (int t = 0; t < 10; ++t) {
    const RISResponse r = random_response(6, rng);
    const VectorXd gamma = achieved_sinrs(s, r, repair_powers(s, r).p);
    EXPECT_LE((gamma - s.targets).cwiseAbs().maxCoeff(), 1e-9 * s.targets.maxCoeff());
  }
}

TEST(Algorithm1, SingleUserWithoutJammerOrSurface) {
  ScenarioRealization s = table1_draw(1, 3, 2, 2);
  s.f.setZero();
  s.jammer_power = 0.0;
  const RunResult r = run_algorithm1(s, fast_settings(1));
  EXPECT_NEAR(r.sum_power_w, s.targets(0) * s.noise_power / std::norm(s.h(0)), 1e-12);
}

TEST(Algorithm1, NeverWorseThanSurfaceOff) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScenarioRealization s = table1_draw(2, 4, 1, seed);
    const RunResult r = run_algorithm1(s, fast_settings(seed));
    const double baseline = repair_powers(s, RISResponse::off(4)).sum();
    EXPECT_LE(r.sum_power_w, baseline * (1.0 + 1e-9)) << "seed " << seed;
  }
}

TEST(Algorithm1, FeasibleOutputAndBetaBound) {
  for (double beta : {1.0, 0.6}) {
    ScenarioRealization s = table1_draw(3, 8, 2, 13);
    s.beta_max = beta;
    const RunResult r = run_algorithm1(s, fast_settings(2));
    EXPECT_LE((r.achieved_sinrs - s.targets).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE(r.phi_star.max_magnitude(), beta + 1e-9);
    EXPECT_NEAR(r.sum_power_dbm, watts_to_dbm(r.sum_power_w), 1e-12);
    EXPECT_NEAR(r.mean_reflection, r.phi_star.phi.cwiseAbs().mean(), 1e-15);
  }
}

TEST(Algorithm1, OuterSumPowerNonIncreasing) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const ScenarioRealization s = table1_draw(2, 8, 2, seed);
    AlgorithmSettings a = fast_settings(seed);
    const RunResult r = run_algorithm1(s, a);
    const auto& st = a.dinkelbach.solver;
    for (std::size_t q = 1; q < r.outer_sum_power.size(); ++q) {
      const double prev = r.outer_sum_power[q - 1];
      EXPECT_LE(r.outer_sum_power[q], prev + 10.0 * (st.eps_abs + st.eps_rel * prev)) << "seed " << seed;
    }
  }
}

TEST(Algorithm1, GlobalPhaseInvariance) {
  for (std::uint64_t seed : {3, 4}) {
    const ScenarioRealization s = table1_draw(2, 6, 2, seed);
    ScenarioRealization rotated = s;
    rotated.f *= std::polar(1.0, 0.9);
    // Equal only up to solver accuracy, so solve far below the 1e-8 check.
    AlgorithmSettings a;
    a.rounding.seed = 5;
    a.dinkelbach.solver.eps_abs = 1e-11;
    a.dinkelbach.solver.eps_rel = 1e-10;
    const RunResult x = run_algorithm1(s, a), y = run_algorithm1(rotated, a);
    EXPECT_NEAR(y.sum_power_w / x.sum_power_w, 1.0, 1e-8) << "seed " << seed;
  }
}

TEST(Algorithm1, JammerNulledWithSurplusElements) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const ScenarioRealization s = table1_draw(2, 32, 4, seed);
    const RunResult r = run_algorithm1(s, fast_settings(seed));
    EXPECT_LE(r.sigma_j2_final, 1e-3 * r.sigma_j2_off) << "seed " << seed;
  }
}

TEST(Algorithm1, DecodingOrderIsRestored) {
  ScenarioRealization s = table1_draw(2, 4, 1, 6);
  std::swap(s.h(0), s.h(1));
  if (std::abs(s.h(0)) > std::abs(s.h(1))) std::swap(s.h(0), s.h(1));
  s.targets << 2.0, 6.0;
  const RunResult r = run_algorithm1(s, fast_settings(1));
  EXPECT_EQ(r.decoding_order, ids({1, 0}));
  EXPECT_NEAR(r.achieved_sinrs(0), 2.0, 1e-6);
  EXPECT_NEAR(r.achieved_sinrs(1), 6.0, 1e-6);
}

TEST(Algorithm1, RunLogRecords) {
  const ScenarioRealization s = table1_draw(2, 4, 1, 2);
  RunLog log;
  const RunResult r = run_algorithm1(s, fast_settings(1), &log);
  int outer = 0, inner = 0, init = 0, final_lines = 0;
  for (const std::string& line : log.lines()) {
    if (line.rfind("outer q=", 0) == 0) ++outer;
    if (line.rfind("inner q=", 0) == 0) ++inner;
    if (line.rfind("init stage=", 0) == 0) ++init;
    if (line.rfind("final ", 0) == 0) ++final_lines;
  }
  EXPECT_EQ(outer, r.outer_iters);
  EXPECT_GE(inner, outer);
  EXPECT_EQ(init, 3);
  EXPECT_EQ(final_lines, 1);
}
