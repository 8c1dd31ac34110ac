#pragma once

// Feasibility LP with two-sided constraint blocks
//   A_ub x <= b_ub,  A_lb x >= b_lb,  x >= 0,
// solved by a phase-1 dense simplex. Either a primal point or a Farkas
// certificate (y_ub, y_lb >= 0 with A_ub^T y_ub - A_lb^T y_lb >= 0 and
// b_ub . y_ub - b_lb . y_lb < 0) is returned, and it is verified before return.

#include <Eigen/Dense>

namespace lpdual {

struct LpProblem {
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_lb;
  Eigen::VectorXd b_lb;

  int variables() const;
};

struct LpOptions {
  /// Residual tolerance for the primal point and the certificate sign conditions.
  double tolerance = 1e-9;
  /// Re-solve in exact rational arithmetic when the floating result fails
  /// verification and the instance is small enough.
  bool allow_exact = true;
  int exact_max_constraints = 200;
  /// Solve in exact arithmetic from the start (requires the size limit).
  bool force_exact = false;
  /// Pivot cap; 0 picks 50 * (rows + columns).
  long max_pivots = 0;
  /// Consecutive degenerate pivots before switching from Dantzig to Bland.
  int degenerate_switch = 50;
};

struct LpResult {
  bool feasible = false;
  Eigen::VectorXd point;  ///< x >= 0 when feasible
  Eigen::VectorXd y_ub;   ///< Farkas multipliers when infeasible, normalized to sum 1
  Eigen::VectorXd y_lb;
  /// Largest constraint violation of `point`, or of the certificate sign conditions.
  double residual = 0.0;
  /// b_ub . y_ub - b_lb . y_lb, strictly negative for a certificate.
  double farkas_value = 0.0;
  bool exact = false;
  long pivots = 0;
};

LpResult lp_solve(const LpProblem& problem, const LpOptions& options = {});

}  // namespace lpdual
