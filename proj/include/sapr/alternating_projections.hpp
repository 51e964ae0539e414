#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sapr/array_model.hpp"
#include "sapr/lp_solver.hpp"
#include "sapr/stage1_lift.hpp"

namespace sapr {

enum class PhaseUpdate {
  Accumulate,  // Algorithm box: b1 = b_prev .* exp(-j angle(A s_proj))
  Replace,     // Eq.-24 variant: b1 = |b| .* exp(-j angle(A s_proj))
};

struct LineSearchSpec {
  double bracket_growth = 2.0;
  double tol = 1e-6;
  int max_evals = 80;
};

struct ApConfig {
  int k_hat = 1;
  double nu = 0.0;  // diagonal loading; 0 selects 1e-6 * ||b1||^2 / N
  int n_cg = 20;
  int n_ap = 50;
  LineSearchSpec line_search;
  double stop_tol_scale = 1e-8;  // delta-change stop, scaled by max intensity;
                                 // 0 disables early stopping
  PhaseUpdate phase_update = PhaseUpdate::Accumulate;
  double stage2_l1_weight = 1e-3;
  double lp_tol = 1e-8;
  int lp_max_iter = 100;
};

struct Stage2Result {
  Eigen::VectorXcd s_proj;  // K-long, at most k_hat nonzero entries
  double delta = 0.0;       // minimax real-embedding residual of s_proj
  double lp_delta = 0.0;    // the LP's own optimal delta (diagnostic)
  LpStatus status = LpStatus::MaxIterations;
};

// Eq. 21-23: real-embedded minimax fit of b_est over the grid, then pruning
// to the k_hat largest complex moduli (ties broken toward lower index).
Stage2Result stage2_project(const ManifoldMatrix& manifold,
                            const Eigen::VectorXcd& b_est, int k_hat,
                            double lp_tol, int lp_max_iter = 100,
                            double l1_weight = 0.0);

Eigen::VectorXcd phase_update(const Eigen::VectorXcd& b_prev_dagger,
                              const ManifoldMatrix& manifold,
                              const Eigen::VectorXcd& s_proj,
                              PhaseUpdate mode);

double output_power(const Eigen::VectorXcd& w, const Eigen::MatrixXcd& R);

// Gradient of P(w) = w^H R w over pure phase rotations, oriented so that
// w <- exp(-j t Diag[grad]) w ascends for small t > 0.
Eigen::VectorXd power_gradient(const Eigen::VectorXcd& w,
                               const Eigen::MatrixXcd& R);

double line_search(const Eigen::VectorXcd& w, const Eigen::VectorXd& h_dir,
                   const Eigen::MatrixXcd& R, const LineSearchSpec& spec);

struct Stage3Result {
  Eigen::VectorXcd w;
  std::vector<double> power_trace;
  bool stationary_exit = false;
};

Stage3Result stage3_cg(const Eigen::VectorXcd& b1_dagger,
                       const Eigen::VectorXcd& s_proj,
                       const ManifoldMatrix& manifold, const ApConfig& config);

struct ApIterRecord {
  int iter = 0;
  double delta = 0.0;
  double lp_delta = 0.0;
  double power = 0.0;
  double wall_ms = 0.0;
};

/// Final estimate. Magnitudes are the measured magnitudes verbatim; the
/// complex output is assembled from them so pinning is structural.
struct PhaseEstimate {
  Eigen::VectorXd magnitudes;
  Eigen::VectorXd phases;
  std::vector<ApIterRecord> trace;
  bool converged = false;
  int iterations = 0;
  double stage1_delta = 0.0;
  double stage1_lambda = 0.0;
  LpStatus stage1_status = LpStatus::MaxIterations;

  Eigen::VectorXcd b_final() const;
};

struct PipelineConfig {
  Stage1Config stage1;
  ApConfig ap;
};

PhaseEstimate run_pipeline(const ManifoldMatrix& manifold_s1,
                           const ManifoldMatrix& manifold_s2,
                           const Eigen::VectorXd& intensity,
                           const Eigen::VectorXd& magnitude,
                           const PipelineConfig& config);

}  // namespace sapr
