#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace sapr {

/// Inequality-form linear program:
///   minimize c^T x  subject to  G x <= h,  x_i >= lower_i
/// with lower_i = -inf marking a free variable.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::VectorXd lower;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(h.size()); }
  bool dimensions_consistent() const;

  static constexpr double kFree = -std::numeric_limits<double>::infinity();
};

enum class LpStatus { Optimal, Infeasible, Unbounded, MaxIterations };

const char* to_string(LpStatus status);

struct LpIterRecord {
  int iter = 0;
  double mu = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  LpStatus status = LpStatus::MaxIterations;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  bool regularized = false;  // normal equations needed extra regularization
  std::vector<LpIterRecord> trace;
};

// Primal-dual path-following interior point (Mehrotra predictor-corrector),
// dense, with the normal equations formed on the constraint dimension.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-8,
                    int max_iter = 100);

/// l1_augment splits selected variables so weight * |x_i| can enter the
/// objective. Variables with lower bound 0 take the weight directly; free
/// variables are split x_i = p_i - q_i with p, q >= 0.
struct L1Augmented {
  LinearProgram lp;
  int original_vars = 0;
  std::vector<std::pair<int, int>> splits;  // (original index, q column)

  // Map an augmented solution vector back to the original variables.
  Eigen::VectorXd recover(const Eigen::VectorXd& x_aug) const;
};

L1Augmented l1_augment(const LinearProgram& lp, double weight,
                       const std::vector<int>& indices);

}  // namespace sapr
