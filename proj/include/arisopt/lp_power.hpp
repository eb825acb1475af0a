#pragma once

#include <string>

#include "arisopt/lifting.hpp"
#include "arisopt/simplex.hpp"

namespace arisopt {

/// User transmit powers in W, indexed in decoding order.
struct PowerVector {
  VectorXd p;

  double sum() const { return p.sum(); }
  Index size() const { return p.size(); }
};

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

/// Data of the power subproblem at a fixed (relaxed) A-RIS matrix.
/// traces(k) = tr(F_k Phibar), jammer_trace = tr(F_j Phibar).
struct LpInstance {
  VectorXd traces;
  double jammer_trace = 0.0;
  double jammer_power = 0.0;
  double noise_power = 1.0;
  VectorXd targets;

  Index users() const { return traces.size(); }
};

inline constexpr double kUsableChannelTol = 1e-12;

inline LpInstance lp_instance(const LiftedForms& forms, const MatrixXcd& Phibar, const ScenarioRealization& s) {
  LpInstance inst;
  inst.traces.resize(forms.users());
  for (Index k = 0; k < forms.users(); ++k) inst.traces(k) = trace_product(forms.F[k], Phibar);
  inst.jammer_trace = trace_product(forms.F_j, Phibar);
  inst.jammer_power = s.effective_jammer_power();
  inst.noise_power = s.noise_power;
  inst.targets = s.targets;
  return inst;
}

/// Rank-one instance at an actual reflection vector phi.
inline LpInstance lp_instance(const ScenarioRealization& s, const RISResponse& r) {
  LpInstance inst;
  inst.traces = effective_gains(s, r);
  inst.jammer_trace = jammer_link_gain(s, r);
  inst.jammer_power = s.effective_jammer_power();
  inst.noise_power = s.noise_power;
  inst.targets = s.targets;
  return inst;
}

struct LpMatrices {
  MatrixXd A;
  VectorXd b;
};

/// Inequality form A p <= b of the SINR constraints. A is upper triangular with
/// A(k,k) = -t_k, A(k,i) = T_k t_i for i > k; b(k) = -T_k (P_j t_j + sigma^2).
inline LpMatrices lp_matrices(const LpInstance& inst) {
  const Index K = inst.users();
  require(inst.targets.size() == K, ErrorCode::DimensionMismatch, "targets must have K entries");
  LpMatrices out{MatrixXd::Zero(K, K), VectorXd(K)};
  for (Index k = 0; k < K; ++k) {
    out.A(k, k) = -inst.traces(k);
    for (Index i = k + 1; i < K; ++i) out.A(k, i) = inst.targets(k) * inst.traces(i);
    out.b(k) = -inst.targets(k) * (inst.jammer_power * inst.jammer_trace + inst.noise_power);
  }
  return out;
}

/// Minimum-sum-power solution. Every SINR constraint is tight at the optimum, so
/// the triangular system is solved by back-substitution from the last user.
inline PowerVector solve_powers(const LpInstance& inst) {
  const Index K = inst.users();
  require(inst.targets.size() == K, ErrorCode::DimensionMismatch, "targets must have K entries");
  PowerVector out{VectorXd(K)};
  const double base = inst.jammer_power * inst.jammer_trace + inst.noise_power;
  double interference = 0.0;
  for (Index k = K - 1; k >= 0; --k) {
    if (!(inst.traces(k) > kUsableChannelTol))
      throw Error(ErrorCode::Infeasible, "user " + std::to_string(k + 1) + " has no usable channel (t_k = " +
                                             std::to_string(inst.traces(k)) + ")");
    out.p(k) = inst.targets(k) * (base + interference) / inst.traces(k);
    interference += out.p(k) * inst.traces(k);
  }
  return out;
}

/// Same problem through the generic simplex; kept as an independent check.
inline PowerVector solve_powers_generic(const LpInstance& inst) {
  const auto [A, b] = lp_matrices(inst);
  const LpResult r = solve_lp(VectorXd::Ones(inst.users()), A, b);
  require(r.status == LpStatus::Optimal, ErrorCode::Infeasible, "generic LP did not reach an optimum");
  return {r.x};
}

}  // namespace arisopt
