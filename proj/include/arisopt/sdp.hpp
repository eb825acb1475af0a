#pragma once

// Linear SDP over a Hermitian (or real symmetric) PSD matrix variable:
//
//   minimize    tr(C X)
//   subject to  tr(A_i X) <= b_i        (trace inequalities)
//               X(j,j)    <= u_j        (diagonal upper bounds)
//               X(k,k)     = v_k        (diagonal equalities)
//               X PSD
//
// Solved by ADMM on the standard form  A(X, s) = b, (X, s) in PSD x R+  where
// every inequality row gets a nonnegative slack. One iteration is an affine
// projection (a solve with the precomputed row Gram matrix) followed by a
// projection onto PSD x R+ through one eigendecomposition. The iteration is
// written as a fixed-point map on the pre-projection point and sped up with
// safeguarded type-II Anderson acceleration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "arisopt/errors.hpp"

namespace arisopt::sdp {

using Eigen::Index;
using Eigen::VectorXd;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Real part of tr(A^H B); equals tr(A B) for Hermitian A.
template <class Derived1, class Derived2>
double inner(const Eigen::MatrixBase<Derived1>& A, const Eigen::MatrixBase<Derived2>& B) {
  return std::real((A.array().conjugate() * B.array()).sum());
}

template <class Scalar>
struct TraceInequality {
  Mat<Scalar> A;
  double b = 0.0;
};

struct DiagonalConstraint {
  Index index = 0;
  double value = 0.0;
};

template <class Scalar>
struct SdpProblem {
  Index dim = 0;
  Mat<Scalar> C;
  std::vector<TraceInequality<Scalar>> ineqs;
  std::vector<DiagonalConstraint> diag_ub;
  std::vector<DiagonalConstraint> diag_eq;

  void validate() const {
    require(dim >= 1, ErrorCode::InvalidArgument, "SDP dimension must be >= 1");
    auto hermitian = [this](const Mat<Scalar>& A) {
      return A.rows() == dim && A.cols() == dim && (A - A.adjoint()).norm() <= 1e-9 * (1.0 + A.norm());
    };
    require(hermitian(C), ErrorCode::InvalidArgument, "objective matrix must be Hermitian of size dim");
    for (const auto& row : ineqs) {
      require(hermitian(row.A), ErrorCode::InvalidArgument, "constraint matrices must be Hermitian of size dim");
      require(std::isfinite(row.b), ErrorCode::InvalidArgument, "constraint bounds must be finite");
    }
    for (const auto& d : diag_ub)
      require(d.index >= 0 && d.index < dim && d.value >= 0.0 && std::isfinite(d.value), ErrorCode::InvalidArgument,
              "diagonal bounds must be finite, >= 0 and in range");
    for (const auto& d : diag_eq)
      require(d.index >= 0 && d.index < dim && d.value >= 0.0 && std::isfinite(d.value), ErrorCode::InvalidArgument,
              "diagonal equalities must be finite, >= 0 and in range");
  }

  double objective(const Mat<Scalar>& X) const { return inner(C, X); }

  /// Largest violation over all affine constraints, each trace row measured
  /// after normalizing A_i to unit Frobenius norm.
  double max_violation(const Mat<Scalar>& X) const {
    double worst = 0.0;
    for (const auto& row : ineqs) {
      const double scale = std::max(row.A.norm(), 1e-300);
      worst = std::max(worst, (inner(row.A, X) - row.b) / scale);
    }
    for (const auto& d : diag_ub) worst = std::max(worst, std::real(X(d.index, d.index)) - d.value);
    for (const auto& d : diag_eq) worst = std::max(worst, std::abs(std::real(X(d.index, d.index)) - d.value));
    return worst;
  }
};

enum class SdpStatus { Optimal, Infeasible, MaxIters };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::MaxIters: return "max_iters";
  }
  return "unknown";
}

struct SolverSettings {
  double eps_abs = 1e-7;
  double eps_rel = 1e-6;
  int max_iters = 50000;
  double rho = 1.0;              // initial penalty
  double relaxation = 1.0;       // over-relaxation factor in (0, 2)
  int adapt_interval = 100;      // residual balancing period, 0 disables
  double adapt_threshold = 5.0;  // rebalance when residual ratio leaves [1/t, t]
  double eps_infeasible = 1e-6;
  int infeasibility_interval = 50;
  bool warm_start = true;
  int anderson_memory = 20;      // type-II Anderson acceleration depth, 0 disables
  double safeguard = 2.0;        // reject an accelerated step whose residual grows by more than this factor
};

/// Solver output. Residuals and gap refer to the normalized problem (objective
/// and every trace row scaled to unit Frobenius norm).
template <class Scalar>
struct SdpSolution {
  Mat<Scalar> X;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  SdpStatus status = SdpStatus::MaxIters;
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  double rho = 0.0;

  // Dual certificate: C + sum mu_i A_i + sum nu_j E_jj - sum eta_k E_kk = S, S PSD, mu, nu >= 0.
  Mat<Scalar> S;
  VectorXd ineq_mult;
  VectorXd diag_ub_mult;
  VectorXd diag_eq_mult;
};

/// Dual objective -mu^T b - nu^T u + eta^T v of a certificate.
template <class Scalar>
double dual_value(const SdpProblem<Scalar>& P, const SdpSolution<Scalar>& sol) {
  double d = 0.0;
  for (std::size_t i = 0; i < P.ineqs.size(); ++i) d -= sol.ineq_mult(i) * P.ineqs[i].b;
  for (std::size_t j = 0; j < P.diag_ub.size(); ++j) d -= sol.diag_ub_mult(j) * P.diag_ub[j].value;
  for (std::size_t k = 0; k < P.diag_eq.size(); ++k) d += sol.diag_eq_mult(k) * P.diag_eq[k].value;
  return d;
}

/// Stationarity residual C + sum mu A + sum nu E - sum eta E - S.
template <class Scalar>
Mat<Scalar> dual_stationarity(const SdpProblem<Scalar>& P, const SdpSolution<Scalar>& sol) {
  Mat<Scalar> R = P.C - sol.S;
  for (std::size_t i = 0; i < P.ineqs.size(); ++i) R += sol.ineq_mult(i) * P.ineqs[i].A;
  for (std::size_t j = 0; j < P.diag_ub.size(); ++j) R(P.diag_ub[j].index, P.diag_ub[j].index) += sol.diag_ub_mult(j);
  for (std::size_t k = 0; k < P.diag_eq.size(); ++k) R(P.diag_eq[k].index, P.diag_eq[k].index) -= sol.diag_eq_mult(k);
  return R;
}

namespace detail {

/// Type-II Anderson acceleration of a fixed-point map x -> x + g(x).
class Anderson {
 public:
  Anderson(int memory, Index dim) : memory_(std::max(memory, 0)) {
    if (memory_ > 0) {
      S_.resize(dim, memory_);
      Y_.resize(dim, memory_);
      YtY_.setZero(memory_, memory_);
    }
  }

  bool enabled() const { return memory_ > 0; }
  void reset() { count_ = 0, next_ = 0, has_prev_ = false; }

  VectorXd step(const VectorXd& x, const VectorXd& g) {
    if (memory_ == 0) return x + g;
    // A pair with no change in g means the map is locally a translation; it
    // carries no curvature information and would only blow up the weights.
    if (has_prev_ && (g - g_prev_).norm() > 1e-10 * std::max(g.norm(), 1e-300)) {
      S_.col(next_) = x - x_prev_;
      Y_.col(next_) = g - g_prev_;
      count_ = std::min(count_ + 1, memory_);
      // Only the new column's inner products change.
      const VectorXd row = Y_.leftCols(count_).transpose() * Y_.col(next_);
      YtY_.row(next_).head(count_) = row.transpose();
      YtY_.col(next_).head(count_) = row;
      next_ = (next_ + 1) % memory_;
    }
    x_prev_ = x;
    g_prev_ = g;
    has_prev_ = true;
    if (count_ == 0) return x + g;
    const auto Y = Y_.leftCols(count_);
    const auto S = S_.leftCols(count_);
    Eigen::MatrixXd M = YtY_.topLeftCorner(count_, count_);
    M.diagonal().array() += 1e-8 * std::max(M.diagonal().maxCoeff(), 1e-300);
    const VectorXd gamma = M.ldlt().solve(Y.transpose() * g);
    if (!gamma.allFinite() || gamma.norm() > kMaxWeightNorm) {
      reset();
      return x + g;
    }
    VectorXd out = x + g;
    out.noalias() -= S * gamma;
    out.noalias() -= Y * gamma;
    return out;
  }

 private:
  static constexpr double kMaxWeightNorm = 1e6;
  int memory_;
  int count_ = 0, next_ = 0;
  bool has_prev_ = false;
  Eigen::MatrixXd S_, Y_, YtY_;
  VectorXd x_prev_, g_prev_;
};

template <class Scalar>
class AdmmSolver {
 public:
  AdmmSolver(const SdpProblem<Scalar>& P, const SolverSettings& settings) : P_(P), st_(settings) {
    P_.validate();
    n_ = P_.dim;
    mg_ = static_cast<Index>(P_.ineqs.size());
    mu_ = static_cast<Index>(P_.diag_ub.size());
    me_ = static_cast<Index>(P_.diag_eq.size());
    rows_ = mg_ + mu_ + me_;
    slacks_ = mg_ + mu_;

    c_scale_ = P_.C.norm();
    if (!(c_scale_ > 0.0)) c_scale_ = 1.0;
    C_ = P_.C / c_scale_;
    row_scale_.resize(mg_);
    A_.reserve(mg_);
    b_.resize(rows_);
    for (Index r = 0; r < mg_; ++r) {
      double a = P_.ineqs[r].A.norm();
      if (!(a > 0.0)) a = 1.0;
      row_scale_(r) = a;
      A_.push_back(P_.ineqs[r].A / a);
      b_(r) = P_.ineqs[r].b / a;
    }
    for (Index j = 0; j < mu_; ++j) b_(mg_ + j) = P_.diag_ub[j].value;
    for (Index k = 0; k < me_; ++k) b_(mg_ + mu_ + k) = P_.diag_eq[k].value;
    build_gram();
  }

  SdpSolution<Scalar> solve(const SdpSolution<Scalar>* warm) {
    double rho = st_.rho;
    Mat<Scalar> Xz0 = Mat<Scalar>::Zero(n_, n_), Xu0 = Mat<Scalar>::Zero(n_, n_);
    VectorXd sz0 = VectorXd::Zero(slacks_), su0 = VectorXd::Zero(slacks_);
    if (warm != nullptr && st_.warm_start) load_warm(*warm, Xz0, sz0, Xu0, su0, rho);

    // Governing sequence s = x_hat + u; the map T below recovers the cone point
    // z = Pi_K(s) and scaled dual u = s - z, then performs one ADMM pass.
    VectorXd s = pack(Xz0 + Xu0, sz0 + su0);
    Anderson aa(st_.anderson_memory, s.size());
    Evaluation e, best;
    double best_score = std::numeric_limits<double>::infinity();
    bool best_set = false;
    VectorXd s_plain, y_prev_check;
    bool last_accelerated = false;
    double prev_res = std::numeric_limits<double>::infinity();
    SdpStatus status = SdpStatus::MaxIters;
    int iter = 0;

    for (iter = 1; iter <= st_.max_iters; ++iter) {
      evaluate(s, rho, e);
      if (last_accelerated && !(e.fixed_point_res <= st_.safeguard * prev_res)) {
        s = s_plain;
        aa.reset();
        evaluate(s, rho, e);
      }

      if (e.converged) {
        status = SdpStatus::Optimal;
        break;
      }
      if (e.score < best_score) {
        best_score = e.score;
        best = e;
        best_set = true;
      }

      if (st_.infeasibility_interval > 0 && iter % st_.infeasibility_interval == 0) {
        if (y_prev_check.size() == rows_ && !e.primal_ok && infeasibility_certified(e.y - y_prev_check)) {
          status = SdpStatus::Infeasible;
          break;
        }
        y_prev_check = e.y;
      }

      if (st_.adapt_interval > 0 && iter % st_.adapt_interval == 0) {
        const double ratio =
            std::sqrt((e.r_prim / e.prim_scale) / std::max(e.r_dual / std::max(e.dual_scale, 1e-300), 1e-300));
        if (std::isfinite(ratio) && (ratio > st_.adapt_threshold || ratio < 1.0 / st_.adapt_threshold)) {
          const double new_rho = std::clamp(rho * ratio, 1e-6, 1e6);
          const double f = rho / new_rho;
          s = pack(e.Xz + f * e.Xu, e.sz + f * e.su);
          rho = new_rho;
          aa.reset();
          last_accelerated = false;
          prev_res = std::numeric_limits<double>::infinity();
          continue;
        }
      }

      prev_res = e.fixed_point_res;
      s_plain = e.next;
      last_accelerated = aa.enabled();
      s = aa.step(s, e.next - s);
    }

    const Evaluation& out_eval = (status == SdpStatus::MaxIters && best_set) ? best : e;
    SdpSolution<Scalar> out = finish(out_eval, status, std::min(iter, st_.max_iters));
    out.primal_residual = out_eval.r_prim;
    out.dual_residual = out_eval.r_dual;
    out.gap = out_eval.gap;
    return out;
  }

 private:
  struct Evaluation {
    Mat<Scalar> Xz, Xu;
    VectorXd sz, su, y, next;
    double rho = 1.0;
    double r_prim = 0.0, r_dual = 0.0, gap = 0.0, pobj = 0.0, dobj = 0.0;
    double prim_scale = 1.0, dual_scale = 1.0, fixed_point_res = 0.0, score = 0.0;
    bool primal_ok = false, converged = false;
  };

  /// One application of the ADMM map at governing point s.
  void evaluate(const VectorXd& s, double rho, Evaluation& e) {
    unpack(s, W_, sW_);
    project_psd(W_, e.Xz);
    e.Xu = W_ - e.Xz;
    e.sz = sW_.cwiseMax(0.0);
    e.su = sW_ - e.sz;
    e.rho = rho;

    // Affine projection of z - u - c/rho onto A(x) = b.
    V_ = e.Xz - e.Xu - C_ / rho;
    sv_ = e.sz - e.su;
    apply_A(V_, sv_, w_);
    w_ -= b_;
    w_ = gram_.solve(w_);
    apply_AT(w_, ATw_, ATw_s_);
    Xx_ = V_ - ATw_;
    sx_ = sv_ - ATw_s_;

    const double alpha = st_.relaxation;
    e.next = pack(alpha * Xx_ + (1.0 - alpha) * e.Xz + e.Xu, alpha * sx_ + (1.0 - alpha) * e.sz + e.su);
    e.fixed_point_res = (e.next - s).norm();

    // Certificate at (z, y, S) with y = -rho w and S = -rho u:
    // c - A^T y - S = rho (z - x).
    e.y = -rho * w_;
    apply_A(e.Xz, e.sz, Az_);
    e.prim_scale = std::max({b_.norm(), Az_.norm(), 1e-300});
    e.r_prim = (Az_ - b_).norm();
    e.r_dual = rho * std::sqrt((e.Xz - Xx_).squaredNorm() + (e.sz - sx_).squaredNorm());
    e.dual_scale = std::max({C_.norm(), rho * std::sqrt(ATw_.squaredNorm() + ATw_s_.squaredNorm()),
                             rho * std::sqrt(e.Xu.squaredNorm() + e.su.squaredNorm())});
    e.pobj = inner(C_, e.Xz);
    e.dobj = b_.dot(e.y);
    e.gap = std::abs(e.pobj - e.dobj);
    const double tol_p = st_.eps_abs + st_.eps_rel * e.prim_scale;
    const double tol_d = st_.eps_abs + st_.eps_rel * e.dual_scale;
    const double tol_g = st_.eps_abs + st_.eps_rel * std::max({1.0, std::abs(e.pobj), std::abs(e.dobj)});
    e.primal_ok = e.r_prim <= tol_p;
    e.converged = e.primal_ok && e.r_dual <= tol_d && e.gap <= tol_g;
    e.score = std::max({e.r_prim / tol_p, e.r_dual / tol_d, e.gap / tol_g});
  }

  VectorXd pack(const Mat<Scalar>& X, const VectorXd& sl) const {
    constexpr Index per = std::is_same_v<Scalar, double> ? 1 : 2;
    VectorXd v(per * n_ * n_ + slacks_);
    v.head(per * n_ * n_) = Eigen::Map<const VectorXd>(reinterpret_cast<const double*>(X.data()), per * n_ * n_);
    v.tail(slacks_) = sl;
    return v;
  }

  void unpack(const VectorXd& v, Mat<Scalar>& X, VectorXd& sl) const {
    constexpr Index per = std::is_same_v<Scalar, double> ? 1 : 2;
    X.resize(n_, n_);
    Eigen::Map<VectorXd>(reinterpret_cast<double*>(X.data()), per * n_ * n_) = v.head(per * n_ * n_);
    sl = v.tail(slacks_);
  }

  // Row r of the operator: general rows use A_r + slack, bound rows E_jj + slack,
  // equality rows E_kk.
  Index diag_index(Index r) const {
    return r < mg_ + mu_ ? P_.diag_ub[r - mg_].index : P_.diag_eq[r - mg_ - mu_].index;
  }

  void build_gram() {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(rows_, rows_);
    for (Index r = 0; r < rows_; ++r) {
      for (Index c = r; c < rows_; ++c) {
        double v = 0.0;
        if (r < mg_ && c < mg_) {
          v = inner(A_[r], A_[c]);
        } else if (r < mg_) {
          const Index j = diag_index(c);
          v = std::real(A_[r](j, j));
        } else {
          v = diag_index(r) == diag_index(c) ? 1.0 : 0.0;
        }
        if (r == c && r < slacks_) v += 1.0;
        G(r, c) = v;
        G(c, r) = v;
      }
    }
    gram_.compute(G);
    if (gram_.info() != Eigen::Success || gram_.rcond() < 1e-13) {
      G.diagonal().array() += 1e-10 * std::max(1.0, G.diagonal().maxCoeff());
      gram_.compute(G);
    }
  }

  void apply_A(const Mat<Scalar>& X, const VectorXd& s, VectorXd& out) const {
    out.resize(rows_);
    for (Index r = 0; r < mg_; ++r) out(r) = inner(A_[r], X) + s(r);
    for (Index r = mg_; r < rows_; ++r) {
      const Index j = diag_index(r);
      out(r) = std::real(X(j, j)) + (r < slacks_ ? s(r) : 0.0);
    }
  }

  void apply_AT(const VectorXd& w, Mat<Scalar>& X, VectorXd& s) const {
    X.setZero(n_, n_);
    for (Index r = 0; r < mg_; ++r) X += w(r) * A_[r];
    for (Index r = mg_; r < rows_; ++r) {
      const Index j = diag_index(r);
      X(j, j) += w(r);
    }
    s = w.head(slacks_);
  }

  void project_psd(Mat<Scalar>& W, Mat<Scalar>& out) {
    W = (0.5 * (W + W.adjoint())).eval();
    eig_.compute(W);
    const auto& lam = eig_.eigenvalues();
    Index first = 0;
    while (first < n_ && lam(first) <= 0.0) ++first;
    const Index npos = n_ - first;
    if (npos == 0) {
      out.setZero(n_, n_);
      return;
    }
    if (first == 0) {
      out = W;
      return;
    }
    // Rebuild from whichever side of the spectrum has fewer eigenpairs.
    if (npos <= first) {
      B_ = eig_.eigenvectors().rightCols(npos) * lam.tail(npos).cwiseSqrt().asDiagonal();
      out.setZero(n_, n_);
      out.template selfadjointView<Eigen::Lower>().rankUpdate(B_);
    } else {
      B_ = eig_.eigenvectors().leftCols(first) * (-lam.head(first)).cwiseSqrt().asDiagonal();
      out = W;
      out.template selfadjointView<Eigen::Lower>().rankUpdate(B_);
    }
    out.template triangularView<Eigen::StrictlyUpper>() = out.adjoint();
  }

  bool infeasibility_certified(const VectorXd& dy) {
    const double norm = dy.norm();
    if (!(norm > 0.0)) return false;
    const VectorXd d = dy / norm;
    if (b_.dot(d) <= st_.eps_infeasible) return false;
    if (slacks_ > 0 && d.head(slacks_).maxCoeff() > st_.eps_infeasible) return false;
    Mat<Scalar> M;
    VectorXd ms;
    apply_AT(d, M, ms);
    M = -M;
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -st_.eps_infeasible;
  }

  void load_warm(const SdpSolution<Scalar>& warm, Mat<Scalar>& Xz, VectorXd& sz, Mat<Scalar>& Xu, VectorXd& su,
                 double& rho) const {
    if (warm.X.rows() != n_ || warm.X.cols() != n_) return;
    Xz = warm.X;
    for (Index r = 0; r < mg_; ++r) sz(r) = std::max(0.0, b_(r) - inner(A_[r], Xz));
    for (Index r = mg_; r < slacks_; ++r) sz(r) = std::max(0.0, b_(r) - std::real(Xz(diag_index(r), diag_index(r))));
    if (warm.rho > 0.0) rho = warm.rho;
    const bool duals_match = warm.S.rows() == n_ && warm.ineq_mult.size() == mg_ && warm.diag_ub_mult.size() == mu_;
    if (!duals_match) return;
    Xu = -warm.S / (c_scale_ * rho);
    for (Index r = 0; r < mg_; ++r) su(r) = -warm.ineq_mult(r) * row_scale_(r) / (c_scale_ * rho);
    for (Index j = 0; j < mu_; ++j) su(mg_ + j) = -warm.diag_ub_mult(j) / (c_scale_ * rho);
  }

  SdpSolution<Scalar> finish(const Evaluation& e, SdpStatus status, int iterations) const {
    SdpSolution<Scalar> out;
    out.X = e.Xz;
    out.status = status;
    out.iterations = iterations;
    out.rho = e.rho;
    out.objective = P_.objective(e.Xz);
    out.S = -e.rho * c_scale_ * e.Xu;
    out.ineq_mult.resize(mg_);
    out.diag_ub_mult.resize(mu_);
    out.diag_eq_mult.resize(me_);
    for (Index r = 0; r < mg_; ++r) out.ineq_mult(r) = std::max(0.0, -e.rho * e.su(r)) * c_scale_ / row_scale_(r);
    for (Index j = 0; j < mu_; ++j) out.diag_ub_mult(j) = std::max(0.0, -e.rho * e.su(mg_ + j)) * c_scale_;
    for (Index k = 0; k < me_; ++k) out.diag_eq_mult(k) = e.y(mg_ + mu_ + k) * c_scale_;
    out.dual_objective = dual_value(P_, out);
    return out;
  }

  const SdpProblem<Scalar>& P_;
  SolverSettings st_;
  Index n_ = 0, mg_ = 0, mu_ = 0, me_ = 0, rows_ = 0, slacks_ = 0;
  double c_scale_ = 1.0;
  Mat<Scalar> C_;
  std::vector<Mat<Scalar>> A_;
  VectorXd row_scale_;
  VectorXd b_;
  Eigen::LDLT<Eigen::MatrixXd> gram_;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig_;
  Mat<Scalar> W_, V_, Xx_, ATw_, B_;
  VectorXd sW_, sv_, sx_, w_, ATw_s_, Az_;
};

}  // namespace detail

/// Solves the SDP. `warm` (optional) seeds the iterate with a previous solution
/// of a problem with the same dimension and constraint layout.
template <class Scalar>
SdpSolution<Scalar> solve(const SdpProblem<Scalar>& P, const SolverSettings& settings = {},
                          const SdpSolution<Scalar>* warm = nullptr) {
  detail::AdmmSolver<Scalar> solver(P, settings);
  return solver.solve(warm);
}

// ---------------------------------------------------------------------------
// Hermitian -> real symmetric embedding: X = A + iB  ->  [[A, -B], [B, A]].

inline Mat<double> embed(const Mat<std::complex<double>>& X) {
  const Index n = X.rows();
  Mat<double> Y(2 * n, 2 * n);
  Y.topLeftCorner(n, n) = X.real();
  Y.topRightCorner(n, n) = -X.imag();
  Y.bottomLeftCorner(n, n) = X.imag();
  Y.bottomRightCorner(n, n) = X.real();
  return Y;
}

/// Inverse of `embed`, averaging the redundant blocks.
inline Mat<std::complex<double>> unembed(const Mat<double>& Y) {
  const Index n = Y.rows() / 2;
  const Mat<double> re = 0.5 * (Y.topLeftCorner(n, n) + Y.bottomRightCorner(n, n));
  const Mat<double> im = 0.5 * (Y.bottomLeftCorner(n, n) - Y.topRightCorner(n, n));
  Mat<std::complex<double>> X(n, n);
  X.real() = re;
  X.imag() = im;
  return X;
}

/// Real symmetric SDP of dimension 2n equivalent to P. With Y = embed(X),
/// tr(C X) = tr(embed(C) Y)/2, so every trace row and the objective use the
/// halved embedded matrix; a diagonal row on X(j,j) becomes a trace row on
/// (Y(j,j) + Y(j+n,j+n))/2.
inline SdpProblem<double> real_embed(const SdpProblem<std::complex<double>>& P) {
  P.validate();
  const Index n = P.dim;
  SdpProblem<double> R;
  R.dim = 2 * n;
  R.C = 0.5 * embed(P.C);
  for (const auto& row : P.ineqs) R.ineqs.push_back({0.5 * embed(row.A), row.b});
  auto diag_row = [n](Index j) {
    Mat<double> E = Mat<double>::Zero(2 * n, 2 * n);
    E(j, j) = 0.5;
    E(j + n, j + n) = 0.5;
    return E;
  };
  for (const auto& d : P.diag_ub) R.ineqs.push_back({diag_row(d.index), d.value});
  for (const auto& d : P.diag_eq) {
    R.ineqs.push_back({diag_row(d.index), d.value});
    R.ineqs.push_back({-diag_row(d.index), -d.value});
  }
  return R;
}

// ---------------------------------------------------------------------------
// Plain-text dump for cross-checking with external solvers.
//
//   sdp <dim> <num_ineq> <num_diag_ub> <num_diag_eq>
//   C
//   <dim rows: re im re im ... (2*dim numbers per row)>
//   ineq <b>
//   <dim rows as above>                      (repeated num_ineq times)
//   diag_ub <index> <value>                  (0-based index, repeated)
//   diag_eq <index> <value>                  (repeated)

namespace detail {

inline void write_matrix(std::ostream& os, const Mat<std::complex<double>>& A) {
  for (Index r = 0; r < A.rows(); ++r) {
    for (Index c = 0; c < A.cols(); ++c) {
      if (c > 0) os << ' ';
      os << A(r, c).real() << ' ' << A(r, c).imag();
    }
    os << '\n';
  }
}

inline Mat<std::complex<double>> read_matrix(std::istream& is, Index n) {
  Mat<std::complex<double>> A(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      double re = 0.0, im = 0.0;
      is >> re >> im;
      A(r, c) = {re, im};
    }
  require(static_cast<bool>(is), ErrorCode::Io, "truncated SDP matrix");
  return A;
}

inline void expect_token(std::istream& is, const std::string& token) {
  std::string got;
  is >> got;
  require(got == token, ErrorCode::Io, "expected '" + token + "' in SDP dump, got '" + got + "'");
}

}  // namespace detail

inline void write_problem(std::ostream& os, const SdpProblem<std::complex<double>>& P) {
  const auto old_precision = os.precision(17);
  os << "sdp " << P.dim << ' ' << P.ineqs.size() << ' ' << P.diag_ub.size() << ' ' << P.diag_eq.size() << '\n';
  os << "C\n";
  detail::write_matrix(os, P.C);
  for (const auto& row : P.ineqs) {
    os << "ineq " << row.b << '\n';
    detail::write_matrix(os, row.A);
  }
  for (const auto& d : P.diag_ub) os << "diag_ub " << d.index << ' ' << d.value << '\n';
  for (const auto& d : P.diag_eq) os << "diag_eq " << d.index << ' ' << d.value << '\n';
  os.precision(old_precision);
}

inline SdpProblem<std::complex<double>> read_problem(std::istream& is) {
  SdpProblem<std::complex<double>> P;
  std::size_t ni = 0, nu = 0, ne = 0;
  detail::expect_token(is, "sdp");
  is >> P.dim >> ni >> nu >> ne;
  require(static_cast<bool>(is) && P.dim >= 1, ErrorCode::Io, "bad SDP dump header");
  detail::expect_token(is, "C");
  P.C = detail::read_matrix(is, P.dim);
  for (std::size_t i = 0; i < ni; ++i) {
    detail::expect_token(is, "ineq");
    double b = 0.0;
    is >> b;
    P.ineqs.push_back({detail::read_matrix(is, P.dim), b});
  }
  auto read_diag = [&](const char* tag, std::size_t count, std::vector<DiagonalConstraint>& out) {
    for (std::size_t i = 0; i < count; ++i) {
      detail::expect_token(is, tag);
      DiagonalConstraint d;
      is >> d.index >> d.value;
      require(static_cast<bool>(is), ErrorCode::Io, "truncated diagonal constraint");
      out.push_back(d);
    }
  };
  read_diag("diag_ub", nu, P.diag_ub);
  read_diag("diag_eq", ne, P.diag_eq);
  return P;
}

}  // namespace arisopt::sdp
