#include "sapr/stage1_lift.hpp"

#include <cmath>
#include <stdexcept>

namespace sapr {

LiftedOperator lift_rows(const ManifoldMatrix& manifold) {
  const int n = manifold.elements();
  const int k = manifold.angles();
  if (n < 1 || k < 1) {
    throw std::invalid_argument("lift needs a nonempty manifold");
  }
  LiftedOperator op;
  op.K = k;
  op.A_hat.resize(n, k * k);
  for (int row = 0; row < n; ++row) {
    // vec(f f^H) column-major: entry (a + K*b) = f_a * conj(f_b)
    const Eigen::VectorXcd f = manifold.A.row(row).transpose();
    for (int b = 0; b < k; ++b) {
      const Complex fb = std::conj(f[b]);
      for (int a = 0; a < k; ++a) {
        op.A_hat(row, a + k * b) = f[a] * fb;
      }
    }
  }
  return op;
}

void real_embed(LiftedOperator& op, const Eigen::VectorXd& intensity) {
  const int n = static_cast<int>(op.A_hat.rows());
  const int kk = static_cast<int>(op.A_hat.cols());
  if (intensity.size() != n) {
    throw std::invalid_argument("intensity length does not match the lift");
  }
  op.A_bar.resize(2 * n, 2 * kk);
  op.A_bar.topLeftCorner(n, kk) = op.A_hat.real();
  op.A_bar.topRightCorner(n, kk) = -op.A_hat.imag();
  op.A_bar.bottomLeftCorner(n, kk) = op.A_hat.imag();
  op.A_bar.bottomRightCorner(n, kk) = op.A_hat.real();
  op.b_bar.setZero(2 * n);
  op.b_bar.head(n) = intensity;
}

L1Augmented assemble_stage1_lp(const LiftedOperator& op, double l1_weight) {
  if (!op.real_part_built()) {
    throw std::invalid_argument("real embedding must be built first");
  }
  if (l1_weight < 0.0) {
    throw std::invalid_argument("l1 weight must be >= 0");
  }
  const int rows2n = static_cast<int>(op.A_bar.rows());
  const int cols = static_cast<int>(op.A_bar.cols());
  LinearProgram lp;
  lp.c.setZero(cols + 1);
  lp.c[cols] = 1.0;
  lp.G.resize(2 * rows2n, cols + 1);
  lp.G.topLeftCorner(rows2n, cols) = op.A_bar;
  lp.G.bottomLeftCorner(rows2n, cols) = -op.A_bar;
  lp.G.col(cols).setConstant(-1.0);
  lp.h.resize(2 * rows2n);
  lp.h.head(rows2n) = op.b_bar;
  lp.h.tail(rows2n) = -op.b_bar;
  lp.lower.setConstant(cols + 1, LinearProgram::kFree);
  lp.lower[cols] = 0.0;  // delta >= 0 as a native bound

  if (l1_weight > 0.0) {
    std::vector<int> idx(cols + 1);
    for (int i = 0; i <= cols; ++i) idx[i] = i;
    return l1_augment(lp, l1_weight, idx);
  }
  L1Augmented aug;
  aug.lp = std::move(lp);
  aug.original_vars = cols + 1;
  return aug;
}

Eigen::MatrixXcd recover_S(const Eigen::VectorXd& s_bar, int K) {
  if (s_bar.size() != 2 * K * K) {
    throw std::invalid_argument("s_bar length must be 2*K^2");
  }
  Eigen::MatrixXcd S(K, K);
  for (int b = 0; b < K; ++b) {
    for (int a = 0; a < K; ++a) {
      const int i = a + K * b;
      S(a, b) = Complex(s_bar[i], s_bar[K * K + i]);
    }
  }
  return 0.5 * (S + S.adjoint()).eval();
}

RankOneResult rank_one_extract(const Eigen::MatrixXcd& S, int iters,
                               double tol) {
  const int k = static_cast<int>(S.rows());
  if (S.cols() != k || k < 1) {
    throw std::invalid_argument("S must be square");
  }
  if (iters < 1) {
    throw std::invalid_argument("power iteration budget must be >= 1");
  }
  const double herm_err = (S - S.adjoint()).norm();
  if (herm_err > 1e-6 * std::max(1.0, S.norm())) {
    throw std::invalid_argument("S is not Hermitian within tolerance");
  }

  RankOneResult res;
  // Shift makes the largest algebraic eigenvalue dominant.
  const double sigma = 1.5 * S.norm() + 1e-300;
  Eigen::MatrixXcd B = S;
  B.diagonal().array() += sigma;

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(k);
  v[0] = 1.0;
  for (int i = 0; i < k; ++i) v[i] += 1e-3 * (1.0 + i % 7);
  v.normalize();

  for (res.iterations = 0; res.iterations < iters; ++res.iterations) {
    Eigen::VectorXcd u = B * v;
    const double nu = u.norm();
    if (nu == 0.0) break;
    u /= nu;
    if ((u - v).norm() < tol) {
      v = u;
      res.converged = true;
      break;
    }
    v = u;
  }

  res.lambda_max = std::real(v.dot(S * v));  // v^H S v (dot conjugates)
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (std::abs(v[imax]) > 0.0) {
    v *= std::polar(1.0, -std::arg(v[imax]));
  }
  res.s_opt = std::sqrt(std::max(res.lambda_max, 0.0)) * v;
  return res;
}

Stage1Init stage1_initialize(const ManifoldMatrix& manifold,
                             const Eigen::VectorXcd& s_opt,
                             const Eigen::VectorXd& magnitudes) {
  if (magnitudes.size() != manifold.elements()) {
    throw std::invalid_argument("magnitude length mismatch");
  }
  Stage1Init init;
  init.b_est = model_field(manifold, s_opt);
  init.b0_dagger.resize(magnitudes.size());
  for (Eigen::Index i = 0; i < magnitudes.size(); ++i) {
    const double ang = init.b_est[i] == Complex(0, 0) ? 0.0
                                                      : std::arg(init.b_est[i]);
    init.b0_dagger[i] = magnitudes[i] * std::polar(1.0, -ang);
  }
  return init;
}

LiftedSolution run_stage1(const ManifoldMatrix& manifold,
                          const Eigen::VectorXd& intensity,
                          const Eigen::VectorXd& magnitude,
                          const Stage1Config& config) {
  LiftedOperator op = lift_rows(manifold);
  real_embed(op, intensity);
  L1Augmented aug = assemble_stage1_lp(op, config.l1_weight);
  LpSolution sol = solve_lp(aug.lp, config.lp_tol, config.lp_max_iter);
  if (sol.status == LpStatus::Infeasible || sol.status == LpStatus::Unbounded) {
    throw std::runtime_error(std::string("stage 1 LP failed: ") +
                             to_string(sol.status));
  }
  const Eigen::VectorXd x = aug.recover(sol.x);
  const int k = op.K;

  LiftedSolution out;
  out.S = recover_S(x.head(2 * k * k), k);
  out.delta = x[2 * k * k];
  out.lp_status = sol.status;
  out.lp_iterations = sol.iterations;
  out.lp_primal_residual = sol.primal_residual;

  RankOneResult r1 = rank_one_extract(out.S, config.power_iters, config.power_tol);
  out.s_opt = r1.s_opt;
  out.lambda_max = r1.lambda_max;
  out.power_converged = r1.converged;

  Stage1Init init = stage1_initialize(manifold, out.s_opt, magnitude);
  out.b_est = std::move(init.b_est);
  out.b0_dagger = std::move(init.b0_dagger);
  return out;
}

}  // namespace sapr
