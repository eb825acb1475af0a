#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace arisopt {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

/// Dense two-phase tableau simplex with Bland's rule for
///   min c^T x  s.t.  A x <= b,  x >= 0.
/// Intended for small instances (tens of variables).
inline LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         double tol = 1e-11) {
  const Eigen::Index m = A.rows(), n = A.cols();
  std::vector<Eigen::Index> artificial_rows;
  for (Eigen::Index i = 0; i < m; ++i)
    if (b(i) < 0.0) artificial_rows.push_back(i);
  const Eigen::Index na = static_cast<Eigen::Index>(artificial_rows.size());
  const Eigen::Index cols = n + m + na;  // x | slack/surplus | artificial

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, cols + 1);
  std::vector<Eigen::Index> basis(m);
  Eigen::Index next_art = n + m;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign * A.row(i);
    T(i, n + i) = sign;
    T(i, cols) = sign * b(i);
    if (b(i) < 0.0) {
      T(i, next_art) = 1.0;
      basis[i] = next_art++;
    } else {
      basis[i] = n + i;
    }
  }

  auto pivot = [&](Eigen::Index row, Eigen::Index col) {
    T.row(row) /= T(row, col);
    for (Eigen::Index i = 0; i < m; ++i)
      if (i != row && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(row);
    basis[row] = col;
  };

  // Runs the simplex on cost vector `cost` over columns [0, active_cols).
  auto run = [&](const Eigen::VectorXd& cost, Eigen::Index active_cols) -> bool {
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::VectorXd reduced = cost.head(active_cols);
      for (Eigen::Index i = 0; i < m; ++i) reduced -= cost(basis[i]) * T.row(i).head(active_cols).transpose();
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < active_cols; ++j)
        if (reduced(j) < -tol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) > tol) {
          const double ratio = T(i, cols) / T(i, enter);
          if (ratio < best - tol || (std::abs(ratio - best) <= tol && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return false;
  };

  LpResult result;
  if (na > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(na).setOnes();
    run(phase1, cols);
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (basis[i] >= n + m) infeasibility += T(i, cols);
    if (infeasibility > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis[i] < n + m) continue;
      for (Eigen::Index j = 0; j < n + m; ++j)
        if (std::abs(T(i, j)) > tol) {
          pivot(i, j);
          break;
        }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(n) = c;
  if (!run(phase2, n + m)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) result.x(basis[i]) = T(i, cols);
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace arisopt
