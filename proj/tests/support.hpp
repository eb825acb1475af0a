#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "arisopt/orchestrator.hpp"

namespace arisopt::testing {

inline ScenarioRealization table1_draw(int K, int N, int M, std::uint64_t seed) {
  RandomSource rng(seed);
  return draw(table1_config(K, N, M, seed), rng);
}

inline RISResponse random_response(Index N, RandomSource& rng, double beta_max = 1.0) {
  RISResponse r{VectorXcd(N)};
  for (Index n = 0; n < N; ++n) {
    const double mag = beta_max * rng.uniform();
    const double ang = 2.0 * M_PI * rng.uniform();
    r.phi(n) = std::polar(mag, ang);
  }
  return r;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Direct evaluation of h_k + f^T diag(phi) g_k.
inline std::complex<double> combined_channel(const ScenarioRealization& s, const VectorXcd& phi, Index k) {
  std::complex<double> acc = s.h(k);
  for (Index n = 0; n < s.f.size(); ++n) acc += s.f(n) * phi(n) * s.g(n, k);
  return acc;
}

}  // namespace arisopt::testing

namespace arisopt::testing {

/// Independent KKT check of an SDP solution; every entry is scale-relative.
struct Certificate {
  double primal_violation = 0.0;
  double x_negativity = 0.0;
  double s_negativity = 0.0;
  double stationarity = 0.0;
  double multiplier_negativity = 0.0;
  double gap = 0.0;

  double worst() const {
    return std::max({primal_violation, x_negativity, s_negativity, stationarity, multiplier_negativity, gap});
  }
};

template <class Scalar>
Certificate certify(const sdp::SdpProblem<Scalar>& P, const sdp::SdpSolution<Scalar>& sol) {
  Certificate c;
  const double cn = 1.0 + P.C.norm();
  c.primal_violation = std::max(0.0, P.max_violation(sol.X));
  Eigen::SelfAdjointEigenSolver<sdp::Mat<Scalar>> ex(sol.X, Eigen::EigenvaluesOnly);
  c.x_negativity = std::max(0.0, -ex.eigenvalues().minCoeff() / (1.0 + sol.X.norm()));
  Eigen::SelfAdjointEigenSolver<sdp::Mat<Scalar>> es(sol.S, Eigen::EigenvaluesOnly);
  c.s_negativity = std::max(0.0, -es.eigenvalues().minCoeff() / cn);
  c.stationarity = sdp::dual_stationarity(P, sol).norm() / cn;
  double m = 0.0;
  if (sol.ineq_mult.size() > 0) m = std::min(m, sol.ineq_mult.minCoeff());
  if (sol.diag_ub_mult.size() > 0) m = std::min(m, sol.diag_ub_mult.minCoeff());
  c.multiplier_negativity = -m;
  const double pobj = P.objective(sol.X), dobj = sdp::dual_value(P, sol);
  c.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  return c;
}

/// Bounded, strictly feasible random SDP: Hermitian objective, upper bounds on
/// every diagonal entry but the last, last diagonal fixed to 1, and `rows`
/// trace inequalities that hold with margin at X = I/2 (+ last entry 1).
inline sdp::SdpProblem<std::complex<double>> random_sdp(Index n, int rows, RandomSource& rng) {
  auto hermitian = [&] {
    MatrixXcd A(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) = rng.complex_normal();
    return MatrixXcd(0.5 * (A + A.adjoint()));
  };
  sdp::SdpProblem<std::complex<double>> P;
  P.dim = n;
  P.C = hermitian();
  MatrixXcd X0 = 0.5 * MatrixXcd::Identity(n, n);
  X0(n - 1, n - 1) = 1.0;
  for (int r = 0; r < rows; ++r) {
    MatrixXcd A = hermitian();
    const double b = sdp::inner(A, X0) + 0.2 + rng.uniform();
    P.ineqs.push_back({std::move(A), b});
  }
  for (Index j = 0; j + 1 < n; ++j) P.diag_ub.push_back({j, 0.6 + rng.uniform()});
  P.diag_eq.push_back({n - 1, 1.0});
  return P;
}

}  // namespace arisopt::testing
