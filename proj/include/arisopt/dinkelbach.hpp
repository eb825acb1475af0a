#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "arisopt/lifting.hpp"
#include "arisopt/lp_power.hpp"
#include "arisopt/sdp.hpp"
#include "arisopt/telemetry.hpp"

namespace arisopt {

using ComplexSdp = sdp::SdpProblem<std::complex<double>>;
using ComplexSdpSolution = sdp::SdpSolution<std::complex<double>>;

/// Constants shared by every A-RIS subproblem.
struct SubproblemData {
  VectorXd targets;
  double jammer_power = 0.0;  // effective P_j
  double noise_power = 1.0;
  double diag_bound = 1.0;    // upper bound on Phibar(n,n), n <= N

  static SubproblemData from(const ScenarioRealization& s, bool literal_beta_bound = false) {
    return {s.targets, s.effective_jammer_power(), s.noise_power,
            literal_beta_bound ? s.beta_max : s.beta_max * s.beta_max};
  }
};

/// Box part of the relaxation: Phibar(n,n) <= bound for n < N, Phibar(N,N) = 1.
inline ComplexSdp relaxation_skeleton(const LiftedForms& forms, double diag_bound) {
  ComplexSdp P;
  P.dim = forms.dim();
  const Index N = P.dim - 1;
  for (Index n = 0; n < N; ++n) P.diag_ub.push_back({n, diag_bound});
  P.diag_eq.push_back({N, 1.0});
  return P;
}

/// SINR rows for users 1..K-1 at fixed powers p:
///   T_k (P_j F_j + sum_{i>k} p_i F_i) - p_k F_k  with bound  -T_k sigma^2.
inline void add_sinr_constraints(ComplexSdp& P, const LiftedForms& forms, const PowerVector& p,
                                 const SubproblemData& data) {
  const Index K = forms.users();
  require(p.size() == K, ErrorCode::DimensionMismatch, "power vector must have K entries");
  for (Index k = 0; k + 1 < K; ++k) {
    MatrixXcd A = data.jammer_power * forms.F_j;
    for (Index i = k + 1; i < K; ++i) A += p.p(i) * forms.F[i];
    A *= data.targets(k);
    A -= p.p(k) * forms.F[k];
    P.ineqs.push_back({std::move(A), -data.targets(k) * data.noise_power});
  }
}

/// Dinkelbach parameter at a fixed Phibar:
///   lambda = T_K (P_j tr(F_j Phibar) + sigma^2) / tr(F_K Phibar).
inline double lambda_update(const MatrixXcd& F_j, const MatrixXcd& F_K, const MatrixXcd& Phibar, double jammer_power,
                            double noise_power, double target_K, double tol = kUsableChannelTol) {
  const double denom = trace_product(F_K, Phibar);
  if (!(denom > tol))
    throw Error(ErrorCode::DegenerateDenominator, "tr(F_K Phibar) = " + std::to_string(denom) + " is not positive");
  return target_K * (jammer_power * trace_product(F_j, Phibar) + noise_power) / denom;
}

struct DinkelbachSettings {
  double eps = 1e-5;      // stop once |lambda_l - lambda_{l-1}| < eps (times |lambda| when relative)
  bool relative = true;
  int max_iters = 100;
  double monotone_slack = 10.0;  // lambda may rise by this many solver tolerances before warning
  sdp::SolverSettings solver;
};

struct DinkelbachResult {
  MatrixXcd Phibar;
  double lambda = 0.0;
  std::vector<double> history;  // lambda^(0), lambda^(1), ...
  int iterations = 0;
  bool converged = false;
  bool non_decreasing_lambda = false;
  int sdp_iterations = 0;
  ComplexSdpSolution last_solution;
};

/// Ratio subproblem objective T_K (P_j tr(F_j X) + sigma^2) / tr(F_K X).
inline double ratio_objective(const LiftedForms& forms, const MatrixXcd& X, const SubproblemData& data) {
  return lambda_update(forms.F_j, forms.F.back(), X, data.jammer_power, data.noise_power, data.targets(data.targets.size() - 1));
}

/// Alternates the closed-form lambda with the linear SDP
///   min T_K P_j tr(F_j X) - lambda tr(F_K X)  s.t. SINR rows at p, box, PSD
/// until lambda settles. Returns the iterate with the smallest lambda.
inline DinkelbachResult inner_loop(const LiftedForms& forms, const PowerVector& p, const MatrixXcd& Phibar0,
                                   const SubproblemData& data, const DinkelbachSettings& settings,
                                   const ComplexSdpSolution* warm = nullptr, RunLog* log = nullptr, int outer = 0) {
  const Index K = forms.users();
  const MatrixXcd& F_K = forms.F[K - 1];
  const double T_K = data.targets(K - 1);

  ComplexSdp P = relaxation_skeleton(forms, data.diag_bound);
  add_sinr_constraints(P, forms, p, data);

  DinkelbachResult res;
  res.Phibar = Phibar0;
  res.lambda = lambda_update(forms.F_j, F_K, Phibar0, data.jammer_power, data.noise_power, T_K);
  res.history.push_back(res.lambda);
  double lambda = res.lambda;
  ComplexSdpSolution previous;
  const ComplexSdpSolution* seed = warm;

  for (int l = 1; l <= settings.max_iters; ++l) {
    P.C = T_K * data.jammer_power * forms.F_j - lambda * F_K;
    ComplexSdpSolution sol = sdp::solve(P, settings.solver, seed);
    res.sdp_iterations += sol.iterations;
    res.iterations = l;
    if (sol.status == sdp::SdpStatus::Infeasible)
      throw Error(ErrorCode::Infeasible, "Dinkelbach subproblem reported infeasible");

    const double next = lambda_update(forms.F_j, F_K, sol.X, data.jammer_power, data.noise_power, T_K);
    if (log != nullptr)
      log->emit(RunLog::Record("inner")
                    .kv("q", outer)
                    .kv("l", l)
                    .kv("lambda", next)
                    .kv("objective", sol.objective + T_K * data.noise_power)
                    .kv("sdp_status", sdp::to_string(sol.status))
                    .kv("sdp_iters", sol.iterations)
                    .kv("primal_res", sol.primal_residual)
                    .kv("dual_res", sol.dual_residual));
    res.history.push_back(next);
    const double slack = settings.monotone_slack * settings.solver.eps_abs * std::max(1.0, std::abs(lambda));
    if (next > lambda + slack) res.non_decreasing_lambda = true;
    if (next < res.lambda) {
      res.lambda = next;
      res.Phibar = sol.X;
      res.last_solution = sol;
    }
    previous = std::move(sol);
    seed = &previous;

    const double tol = settings.relative ? settings.eps * std::max(std::abs(lambda), 1e-300) : settings.eps;
    const double step = std::abs(next - lambda);
    lambda = next;
    if (step < tol) {
      res.converged = true;
      break;
    }
  }
  if (res.last_solution.X.size() == 0) res.last_solution = previous;
  return res;
}

}  // namespace arisopt
