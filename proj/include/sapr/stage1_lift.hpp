#pragma once

#include <Eigen/Dense>

#include "sapr/array_model.hpp"
#include "sapr/lp_solver.hpp"

namespace sapr {

/// Lifted operator for the stage-1 relaxation. Row k of A_hat is
/// vec(f_k f_k^H)^T with column-major vec ordering, so that
/// [A_hat vec(s s^H)]_k = |f_k^H s|^2. A_bar/b_bar are the real embedding.
struct LiftedOperator {
  Eigen::MatrixXcd A_hat;  // N x K^2
  Eigen::MatrixXd A_bar;   // 2N x 2K^2
  Eigen::VectorXd b_bar;   // 2N, [b^2; 0]
  int K = 0;

  bool real_part_built() const { return A_bar.size() > 0; }
};

LiftedOperator lift_rows(const ManifoldMatrix& manifold);
void real_embed(LiftedOperator& op, const Eigen::VectorXd& intensity);

// Stage-1 LP over [s_bar; delta] with the regularization of the l1 weight
// applied via l1_augment. Layout with weight > 0: the first 2K^2+1 entries
// are the p-parts plus delta, followed by 2K^2 q-parts in index order.
L1Augmented assemble_stage1_lp(const LiftedOperator& op, double l1_weight);

Eigen::MatrixXcd recover_S(const Eigen::VectorXd& s_bar, int K);

struct RankOneResult {
  Eigen::VectorXcd s_opt;
  double lambda_max = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Dominant eigenvector by shifted power iteration with a deterministic start
// (e0 plus a fixed perturbation); phase convention makes the largest-modulus
// entry real positive. s_opt = sqrt(max(lambda, 0)) * v.
RankOneResult rank_one_extract(const Eigen::MatrixXcd& S, int iters = 500,
                               double tol = 1e-12);

struct Stage1Init {
  Eigen::VectorXcd b_est;       // model field of s_opt, entries f_k^H s_opt
  Eigen::VectorXcd b0_dagger;   // |b| projected onto the estimated phases
};

Stage1Init stage1_initialize(const ManifoldMatrix& manifold,
                             const Eigen::VectorXcd& s_opt,
                             const Eigen::VectorXd& magnitudes);

struct Stage1Config {
  double l1_weight = 1.0;
  double lp_tol = 1e-8;
  int lp_max_iter = 100;
  int power_iters = 500;
  double power_tol = 1e-12;
};

struct LiftedSolution {
  Eigen::MatrixXcd S;
  double delta = 0.0;
  Eigen::VectorXcd s_opt;
  double lambda_max = 0.0;
  Eigen::VectorXcd b_est;
  Eigen::VectorXcd b0_dagger;
  LpStatus lp_status = LpStatus::MaxIterations;
  int lp_iterations = 0;
  double lp_primal_residual = 0.0;
  bool power_converged = false;
};

// Full stage 1: lift, solve the relaxed LP, recover S, extract the rank-one
// initialization and the projected aperture estimate.
LiftedSolution run_stage1(const ManifoldMatrix& manifold,
                          const Eigen::VectorXd& intensity,
                          const Eigen::VectorXd& magnitude,
                          const Stage1Config& config);

}  // namespace sapr
