#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "arisopt/dinkelbach.hpp"
#include "arisopt/rank_one.hpp"

namespace arisopt {

struct AlgorithmSettings {
  double eps_outer = 1e-4;  // stop once max_k |p_k^(q) - p_k^(q-1)| < eps (times max_k p_k when relative)
  bool relative = true;
  int max_outer = 50;
  bool literal_beta_bound = false;  // bound Phibar(n,n) by beta_max instead of beta_max^2
  DinkelbachSettings dinkelbach;
  RoundingSettings rounding;
};

struct RunResult {
  PowerVector p_star;               // original user indexing
  RISResponse phi_star;
  double sum_power_w = 0.0;
  double sum_power_dbm = 0.0;
  VectorXd achieved_sinrs;          // original user indexing
  double mean_reflection = 0.0;
  double sigma_j2_final = 0.0;
  double sigma_j2_off = 0.0;        // received jammer power with the surface switched off
  int outer_iters = 0;
  int total_sdp_iters = 0;
  bool converged = false;
  double relaxed_sum_power = 0.0;   // LP optimum at the relaxed Phibar*
  double rank_one_gap = 0.0;        // (sum_power_w - relaxed_sum_power) / relaxed_sum_power
  bool rank_one = false;
  double eigen_ratio = 0.0;         // lambda_2 / lambda_1 of the relaxed Phibar*
  bool lambda_warning = false;
  std::vector<Index> decoding_order;  // decoding_order[i] = original index of the i-th decoded user
  std::vector<double> outer_sum_power;  // sum of p^(q), q = 0, 1, ...
  std::vector<std::vector<double>> lambda_histories;
};

/// Decoding order: users sorted by |h_k| descending, ties by original index.
inline std::vector<Index> user_ordering(const ScenarioRealization& s) {
  std::vector<Index> order(s.h.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(s.h(a)) > std::abs(s.h(b)); });
  return order;
}

/// Realization with users permuted so user i is original user order[i].
inline ScenarioRealization reorder_users(const ScenarioRealization& s, const std::vector<Index>& order) {
  ScenarioRealization out = s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.h(i) = s.h(order[i]);
    out.g.col(i) = s.g.col(order[i]);
    out.targets(i) = s.targets(order[i]);
  }
  return out;
}

/// Powers meeting every SINR target with equality at the actual response phi.
inline PowerVector repair_powers(const ScenarioRealization& s, const RISResponse& phi) {
  return solve_powers(lp_instance(s, phi));
}

struct Initialization {
  MatrixXcd Phibar_jammer;  // minimizer of tr(F_j Phibar) over the box
  PowerVector p0;
  MatrixXcd Phibar0;        // additionally feasible for the SINR rows at p0
  ComplexSdpSolution solution;
  int sdp_iterations = 0;
};

/// Three-step start: minimize the jammer term, solve powers there, then
/// minimize the jammer term again subject to the SINR rows at those powers.
inline Initialization initialize(const LiftedForms& forms, const ScenarioRealization& s, const SubproblemData& data,
                                 const sdp::SolverSettings& solver, RunLog* log = nullptr) {
  Initialization init;
  ComplexSdp first = relaxation_skeleton(forms, data.diag_bound);
  first.C = forms.F_j;
  ComplexSdpSolution sol1 = sdp::solve(first, solver);
  init.sdp_iterations += sol1.iterations;
  init.Phibar_jammer = sol1.X;
  if (log != nullptr)
    log->emit(RunLog::Record("init").kv("stage", "jammer_min").kv("jammer_gain", sol1.objective)
                  .kv("sdp_status", sdp::to_string(sol1.status)).kv("sdp_iters", sol1.iterations));

  init.p0 = solve_powers(lp_instance(forms, init.Phibar_jammer, s));
  if (log != nullptr) log->emit(RunLog::Record("init").kv("stage", "powers").kv("sum_power_w", init.p0.sum()));

  ComplexSdp second = relaxation_skeleton(forms, data.diag_bound);
  second.C = forms.F_j;
  add_sinr_constraints(second, forms, init.p0, data);
  ComplexSdpSolution sol2 = sdp::solve(second, solver, &sol1);
  init.sdp_iterations += sol2.iterations;
  if (sol2.status == sdp::SdpStatus::Infeasible)
    throw Error(ErrorCode::InitInfeasible, "no A-RIS matrix meets the SINR targets at the initial powers");
  init.Phibar0 = sol2.X;
  init.solution = std::move(sol2);
  if (log != nullptr)
    log->emit(RunLog::Record("init").kv("stage", "constrained").kv("jammer_gain", init.solution.objective)
                  .kv("sdp_status", sdp::to_string(init.solution.status)).kv("sdp_iters", init.solution.iterations));
  return init;
}

/// Alternating LP + Dinkelbach/SDR optimization of powers and A-RIS response,
/// followed by rank-one recovery and a final power repair at the recovered phi.
inline RunResult run_algorithm1(const ScenarioRealization& original, const AlgorithmSettings& settings = {},
                                RunLog* log = nullptr) {
  original.validate();
  RunResult result;
  result.decoding_order = user_ordering(original);
  const ScenarioRealization s = reorder_users(original, result.decoding_order);
  const Index K = s.h.size(), N = s.f.size();
  const LiftedForms forms = build_lifted(s);
  const SubproblemData data = SubproblemData::from(s, settings.literal_beta_bound);

  Initialization init = initialize(forms, s, data, settings.dinkelbach.solver, log);
  result.total_sdp_iters += init.sdp_iterations;

  MatrixXcd Phibar = init.Phibar0;
  PowerVector p_prev = init.p0;
  result.outer_sum_power.push_back(p_prev.sum());
  ComplexSdpSolution warm = init.solution;

  for (int q = 1; q <= settings.max_outer; ++q) {
    const PowerVector p = solve_powers(lp_instance(forms, Phibar, s));
    const double change = (p.p - p_prev.p).cwiseAbs().maxCoeff();
    result.outer_sum_power.push_back(p.sum());

    DinkelbachResult inner = inner_loop(forms, p, Phibar, data, settings.dinkelbach, &warm, log, q);
    result.total_sdp_iters += inner.sdp_iterations;
    result.lambda_histories.push_back(inner.history);
    result.lambda_warning = result.lambda_warning || inner.non_decreasing_lambda;
    Phibar = inner.Phibar;
    warm = inner.last_solution;
    result.outer_iters = q;
    if (log != nullptr)
      log->emit(RunLog::Record("outer")
                    .kv("q", q)
                    .kv("sum_power_w", p.sum())
                    .kv("max_power_change_w", change)
                    .kv("lambda", inner.lambda)
                    .kv("inner_iters", inner.iterations)
                    .kv("sdp_iters", inner.sdp_iterations)
                    .kv("jammer_gain", trace_product(forms.F_j, Phibar)));
    p_prev = p;
    const double tol = settings.relative ? settings.eps_outer * std::max(p.p.cwiseAbs().maxCoeff(), 1e-300)
                                         : settings.eps_outer;
    if (change < tol) {
      result.converged = true;
      break;
    }
  }

  const PowerVector relaxed = solve_powers(lp_instance(forms, Phibar, s));
  result.relaxed_sum_power = relaxed.sum();

  auto repaired_sum = [&s](const RISResponse& r) {
    try {
      return repair_powers(s, r).sum();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const RoundingResult rounded = extract_rank_one(Phibar, s.beta_max, repaired_sum, settings.rounding);
  result.rank_one = rounded.rank_one;
  result.eigen_ratio = rounded.eigen_ratio;
  RISResponse phi = rounded.response.normalized();
  clip_to_disc(phi.phi, s.beta_max);

  const PowerVector p_sorted = repair_powers(s, phi);
  const VectorXd sinr_sorted = achieved_sinrs(s, phi, p_sorted.p);
  result.p_star.p.resize(K);
  result.achieved_sinrs.resize(K);
  for (Index i = 0; i < K; ++i) {
    result.p_star.p(result.decoding_order[i]) = p_sorted.p(i);
    result.achieved_sinrs(result.decoding_order[i]) = sinr_sorted(i);
  }
  result.phi_star = phi;
  result.sum_power_w = p_sorted.sum();
  result.sum_power_dbm = watts_to_dbm(result.sum_power_w);
  result.mean_reflection = phi.mean_reflection();
  result.sigma_j2_final = jammer_power(s, phi);
  result.sigma_j2_off = jammer_power(s, RISResponse::off(N));
  result.rank_one_gap = (result.sum_power_w - result.relaxed_sum_power) / result.relaxed_sum_power;
  if (log != nullptr)
    log->emit(RunLog::Record("final")
                  .kv("sum_power_w", result.sum_power_w)
                  .kv("relaxed_sum_power_w", result.relaxed_sum_power)
                  .kv("mean_reflection", result.mean_reflection)
                  .kv("sigma_j2_w", result.sigma_j2_final)
                  .kv("rank_one", result.rank_one ? 1 : 0)
                  .kv("outer_iters", result.outer_iters)
                  .kv("sdp_iters", result.total_sdp_iters)
                  .kv("converged", result.converged ? 1 : 0));
  return result;
}

}  // namespace arisopt
