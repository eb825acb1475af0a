#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "arisopt/lifting.hpp"
#include "arisopt/rng.hpp"

namespace arisopt {

struct RoundingSettings {
  int samples = 200;        // Gaussian randomization draws
  double rank1_tol = 1e-3;  // accept the principal eigenvector when lambda_2/lambda_1 <= tol
  std::uint64_t seed = 0;
};

struct RoundingResult {
  AugmentedResponse response;
  bool rank_one = false;
  double eigen_ratio = 0.0;  // lambda_2 / lambda_1
  int candidates = 0;
  double objective = std::numeric_limits<double>::quiet_NaN();  // best candidate value when randomized
};

/// Scores a candidate reflection vector; lower is better.
using CandidateObjective = std::function<double(const RISResponse&)>;

/// Clip each entry to the disc |phi_n| <= beta_max.
inline void clip_to_disc(VectorXcd& phi, double beta_max) {
  for (Index n = 0; n < phi.size(); ++n) {
    const double mag = std::abs(phi(n));
    if (mag > beta_max) phi(n) *= beta_max / mag;
  }
}

/// Feasible response from an (N+1)-vector: normalize by the reference entry,
/// then clip magnitudes.
inline AugmentedResponse project_candidate(const VectorXcd& v, double beta_max) {
  RISResponse r = AugmentedResponse{v}.normalized();
  clip_to_disc(r.phi, beta_max);
  return AugmentedResponse::from(r);
}

/// Recovers a feasible phibar from a relaxed PSD solution X. A numerically
/// rank-one X yields its principal eigenvector; otherwise Gaussian
/// randomization draws xi ~ CN(0, X), projects each draw, and keeps the
/// candidate (principal eigenvector included) with the lowest objective.
inline RoundingResult extract_rank_one(const MatrixXcd& X, double beta_max, const CandidateObjective& objective,
                                       const RoundingSettings& settings = {}) {
  const Index n = X.rows();
  require(n >= 2 && X.cols() == n, ErrorCode::DimensionMismatch, "X must be (N+1) x (N+1)");
  RoundingResult out;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (X + X.adjoint()));
  VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  MatrixXcd V = es.eigenvectors();
  // Canonical eigenvector phases (reference entry real, nonnegative) so the
  // draws commute with diagonal unitary changes of the channels.
  for (Index c = 0; c < n; ++c) {
    const std::complex<double> ref = V(n - 1, c);
    if (std::abs(ref) > 0.0) V.col(c) *= std::conj(ref) / std::abs(ref);
  }
  const double l1 = lam(n - 1);
  if (!(l1 > 1e-300)) {
    out.response = AugmentedResponse::from(RISResponse::off(n - 1));
    out.rank_one = true;
    out.candidates = 1;
    return out;
  }
  out.eigen_ratio = lam(n - 2) / l1;
  const AugmentedResponse principal = project_candidate(std::sqrt(l1) * V.col(n - 1), beta_max);
  out.response = principal;
  out.candidates = 1;
  if (out.eigen_ratio <= settings.rank1_tol || !objective) {
    out.rank_one = out.eigen_ratio <= settings.rank1_tol;
    return out;
  }

  out.objective = objective(principal.normalized());
  const MatrixXcd factor = V * lam.cwiseSqrt().asDiagonal();
  RandomSource rng(settings.seed);
  VectorXcd r(n);
  for (int s = 0; s < settings.samples; ++s) {
    for (Index i = 0; i < n; ++i) r(i) = rng.complex_normal();
    const AugmentedResponse cand = project_candidate(factor * r, beta_max);
    const double value = objective(cand.normalized());
    ++out.candidates;
    if (value < out.objective) {
      out.objective = value;
      out.response = cand;
    }
  }
  return out;
}

}  // namespace arisopt
