#pragma once

#include <cmath>
#include <vector>

#include "arisopt/scenario.hpp"

namespace arisopt {

/// Reflection coefficients beta_n e^{j theta_n} of the A-RIS.
struct RISResponse {
  VectorXcd phi;

  static RISResponse off(Index N) { return {VectorXcd::Zero(N)}; }

  double max_magnitude() const { return phi.size() == 0 ? 0.0 : phi.cwiseAbs().maxCoeff(); }

  /// Mean reflection amplitude (1/N) sum |phi_n|.
  double mean_reflection() const { return phi.size() == 0 ? 0.0 : phi.cwiseAbs().mean(); }

  bool feasible(double beta_max, double tol = 1e-9) const { return max_magnitude() <= beta_max + tol; }

  MatrixXcd diagonal() const { return phi.asDiagonal(); }
};

/// phibar = [phi; 1] up to a common factor; the last entry carries the reference phase.
struct AugmentedResponse {
  VectorXcd phibar;

  static AugmentedResponse from(const RISResponse& r) {
    AugmentedResponse a;
    a.phibar.resize(r.phi.size() + 1);
    a.phibar.head(r.phi.size()) = r.phi;
    a.phibar(r.phi.size()) = 1.0;
    return a;
  }

  /// phi = phibar(1:N)/phibar(N+1). A vanishing reference entry maps to the
  /// switched-off surface.
  RISResponse normalized() const {
    const Index N = phibar.size() - 1;
    const std::complex<double> ref = phibar(N);
    if (std::abs(ref) < 1e-300) return RISResponse::off(N);
    return {phibar.head(N) / ref};
  }
};

/// Quadratic-form matrices: phibar^H F_k phibar = |h_k + f^T Phi g_k|^2 and
/// phibar^H F_j phibar = ||h_j^T + f^T Phi G_j||^2.
struct LiftedForms {
  std::vector<MatrixXcd> F;
  MatrixXcd F_j;

  Index dim() const { return F_j.rows(); }
  Index users() const { return static_cast<Index>(F.size()); }
};

inline void symmetrize(MatrixXcd& X) { X = (0.5 * (X + X.adjoint())).eval(); }

inline LiftedForms build_lifted(const ScenarioRealization& s) {
  s.validate();
  const Index K = s.h.size(), N = s.f.size(), M = s.h_j.size();
  LiftedForms forms;
  forms.F.reserve(K);
  for (Index k = 0; k < K; ++k) {
    // F_k = w w^H with w = [conj(f .* g_k); conj(h_k)]
    VectorXcd w(N + 1);
    w.head(N) = s.f.cwiseProduct(s.g.col(k)).conjugate();
    w(N) = std::conj(s.h(k));
    MatrixXcd Fk = w * w.adjoint();
    symmetrize(Fk);
    forms.F.push_back(std::move(Fk));
  }
  // F_j = W W^H with W = [conj(diag(f) G_j); h_j^H]
  MatrixXcd W(N + 1, M);
  W.topRows(N) = (s.f.asDiagonal() * s.G_j).conjugate();
  W.row(N) = s.h_j.adjoint();
  forms.F_j = W * W.adjoint();
  symmetrize(forms.F_j);
  return forms;
}

/// Effective channel gains q_k = |h_k + f^T Phi g_k|^2.
inline VectorXd effective_gains(const ScenarioRealization& s, const RISResponse& r) {
  return received_signal_power_terms(s, r.phi, VectorXd::Ones(s.h.size()));
}

/// ||h_j^T + f^T Phi G_j||^2, the jammer link gain without the power factor.
inline double jammer_link_gain(const ScenarioRealization& s, const RISResponse& r) {
  require(r.phi.size() == s.f.size(), ErrorCode::DimensionMismatch, "phi must have N entries");
  const Eigen::RowVectorXcd eff = s.h_j.transpose() + s.f.cwiseProduct(r.phi).transpose() * s.G_j;
  return eff.squaredNorm();
}

/// Received jammer power sigma_j^2. The intelligent jammer transmits the matched
/// filter and reaches P_j ||.||^2; a white-noise jammer reaches 1/M of that.
inline double jammer_power(const ScenarioRealization& s, const RISResponse& r) {
  return s.effective_jammer_power() * jammer_link_gain(s, r);
}

/// SIC SINRs given the effective gains q and received jammer power:
/// gamma_k = p_k q_k / (sum_{i>k} p_i q_i + sigma_j^2 + sigma^2).
inline VectorXd sinrs_from_gains(const VectorXd& q, const VectorXd& p, double sigma_j2, double noise_power) {
  const Index K = q.size();
  VectorXd gamma(K);
  double interference = 0.0;
  for (Index k = K - 1; k >= 0; --k) {
    gamma(k) = p(k) * q(k) / (interference + sigma_j2 + noise_power);
    interference += p(k) * q(k);
  }
  return gamma;
}

inline VectorXd achieved_sinrs(const ScenarioRealization& s, const RISResponse& r, const VectorXd& p) {
  require(p.size() == s.h.size(), ErrorCode::DimensionMismatch, "power vector must have K entries");
  require((p.array() >= 0.0).all(), ErrorCode::InvalidArgument, "powers must be nonnegative");
  return sinrs_from_gains(effective_gains(s, r), p, jammer_power(s, r), s.noise_power);
}

/// Real part of tr(A X) for Hermitian A, X.
inline double trace_product(const MatrixXcd& A, const MatrixXcd& X) {
  return (A.array().conjugate() * X.array()).sum().real();
}

inline double quadratic_form(const MatrixXcd& F, const VectorXcd& v) { return v.dot(F * v).real(); }

}  // namespace arisopt
