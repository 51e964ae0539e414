#include "sapr/alternating_projections.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sapr {

namespace {

double angle_or_zero(const Complex& z) {
  return z == Complex(0, 0) ? 0.0 : std::arg(z);
}

Eigen::VectorXd phases_of(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = angle_or_zero(v[i]);
  return out;
}

Eigen::VectorXcd unit_phasors(const Eigen::VectorXd& phases) {
  Eigen::VectorXcd out(phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    out[i] = std::polar(1.0, phases[i]);
  }
  return out;
}

}  // namespace

Stage2Result stage2_project(const ManifoldMatrix& manifold,
                            const Eigen::VectorXcd& b_est, int k_hat,
                            double lp_tol, int lp_max_iter, double l1_weight) {
  const int n = manifold.elements();
  const int k = manifold.angles();
  if (b_est.size() != n) {
    throw std::invalid_argument("b_est length mismatch");
  }
  if (k_hat < 1) {
    throw std::invalid_argument("k_hat must be >= 1");
  }

  // Eq. 21 real embedding of A and b_est.
  Eigen::MatrixXd At(2 * n, 2 * k);
  At.topLeftCorner(n, k) = manifold.A.real();
  At.topRightCorner(n, k) = -manifold.A.imag();
  At.bottomLeftCorner(n, k) = manifold.A.imag();
  At.bottomRightCorner(n, k) = manifold.A.real();
  Eigen::VectorXd bt(2 * n);
  bt.head(n) = b_est.real();
  bt.tail(n) = b_est.imag();

  LinearProgram lp;
  lp.c.setZero(2 * k + 1);
  lp.c[2 * k] = 1.0;
  lp.G.resize(4 * n, 2 * k + 1);
  lp.G.topLeftCorner(2 * n, 2 * k) = At;
  lp.G.bottomLeftCorner(2 * n, 2 * k) = -At;
  lp.G.col(2 * k).setConstant(-1.0);
  lp.h.resize(4 * n);
  lp.h.head(2 * n) = bt;
  lp.h.tail(2 * n) = -bt;
  lp.lower.setConstant(2 * k + 1, LinearProgram::kFree);
  lp.lower[2 * k] = 0.0;

  Eigen::VectorXd x;
  LpSolution sol;
  if (l1_weight > 0.0) {
    std::vector<int> idx(2 * k);
    std::iota(idx.begin(), idx.end(), 0);
    L1Augmented aug = l1_augment(lp, l1_weight, idx);
    sol = solve_lp(aug.lp, lp_tol, lp_max_iter);
    x = aug.recover(sol.x);
  } else {
    sol = solve_lp(lp, lp_tol, lp_max_iter);
    x = sol.x;
  }
  if (sol.status == LpStatus::Infeasible || sol.status == LpStatus::Unbounded) {
    throw std::runtime_error(std::string("stage 2 LP failed: ") +
                             to_string(sol.status));
  }

  Stage2Result res;
  res.status = sol.status;
  res.lp_delta = x[2 * k];
  res.s_proj.resize(k);
  for (int i = 0; i < k; ++i) {
    res.s_proj[i] = Complex(x[i], x[k + i]);
  }

  // Keep the k_hat largest moduli in place; ties go to the lower index.
  if (k_hat < k) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(res.s_proj[a]) > std::abs(res.s_proj[b]);
    });
    std::vector<bool> keep(k, false);
    for (int j = 0; j < k_hat; ++j) keep[order[j]] = true;
    for (int i = 0; i < k; ++i) {
      if (!keep[i]) res.s_proj[i] = Complex(0, 0);
    }
  }

  // Reported delta: minimax residual of the pruned source vector.
  const Eigen::VectorXcd resid = manifold.A * res.s_proj - b_est;
  res.delta = std::max(resid.real().cwiseAbs().maxCoeff(),
                       resid.imag().cwiseAbs().maxCoeff());
  return res;
}

Eigen::VectorXcd phase_update(const Eigen::VectorXcd& b_prev_dagger,
                              const ManifoldMatrix& manifold,
                              const Eigen::VectorXcd& s_proj,
                              PhaseUpdate mode) {
  if (b_prev_dagger.size() != manifold.elements()) {
    throw std::invalid_argument("b_prev length mismatch");
  }
  const Eigen::VectorXcd model = manifold.A * s_proj;
  Eigen::VectorXcd out(b_prev_dagger.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double ph = angle_or_zero(model[i]);
    if (mode == PhaseUpdate::Accumulate) {
      const double mag = std::abs(b_prev_dagger[i]);
      out[i] = mag * std::polar(1.0, angle_or_zero(b_prev_dagger[i]) - ph);
    } else {
      out[i] = std::abs(b_prev_dagger[i]) * std::polar(1.0, -ph);
    }
  }
  return out;
}

double output_power(const Eigen::VectorXcd& w, const Eigen::MatrixXcd& R) {
  if (w.size() != R.rows() || R.rows() != R.cols()) {
    throw std::invalid_argument("power dimensions mismatch");
  }
  return std::real(w.dot(R * w));
}

Eigen::VectorXd power_gradient(const Eigen::VectorXcd& w,
                               const Eigen::MatrixXcd& R) {
  if (w.size() != R.rows() || R.rows() != R.cols()) {
    throw std::invalid_argument("gradient dimensions mismatch");
  }
  const double herm = (R - R.adjoint()).norm();
  if (herm > 1e-8 * std::max(1.0, R.norm())) {
    throw std::invalid_argument("R must be Hermitian");
  }
  const double wnorm2 = std::real(w.dot(w));
  // diag of the commutator [w w^H, R - Ps I]; the Ps I part drops out of the
  // imaginary diagonal, leaving -2 Im((R w) .* conj(w)).
  const Eigen::VectorXcd rw = R * w;
  Eigen::VectorXd g(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    g[i] = -2.0 * std::imag(rw[i] * std::conj(w[i])) / wnorm2;
  }
  return g;
}

double line_search(const Eigen::VectorXcd& w, const Eigen::VectorXd& h_dir,
                   const Eigen::MatrixXcd& R, const LineSearchSpec& spec) {
  const double hmax = h_dir.size() ? h_dir.cwiseAbs().maxCoeff() : 0.0;
  if (hmax == 0.0) return 0.0;

  auto rotate = [&](double t) {
    Eigen::VectorXcd wt(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      wt[i] = std::polar(1.0, -t * h_dir[i]) * w[i];
    }
    return wt;
  };
  auto phi = [&](double t) { return output_power(rotate(t), R); };

  const double p0 = phi(0.0);
  double t = 0.1 / hmax;
  int evals = 1;
  if (phi(t * 1e-3) <= p0 && phi(t * 1e-6) <= p0) {
    return 0.0;  // no ascent at the origin
  }
  evals += 2;

  double a = 0.0, fa = p0;
  double b = t, fb = phi(b);
  ++evals;
  while (fb >= fa && evals < spec.max_evals) {
    a = b;
    fa = fb;
    b *= spec.bracket_growth;
    fb = phi(b);
    ++evals;
  }
  double lo = a > 0.0 ? a / spec.bracket_growth : 0.0;
  double hi = b;

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  evals += 2;
  while (hi - lo > spec.tol * (1.0 + hi) && evals < spec.max_evals) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = phi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = phi(x1);
    }
    ++evals;
  }
  const double ts = 0.5 * (lo + hi);
  return phi(ts) > p0 ? ts : 0.0;
}

Stage3Result stage3_cg(const Eigen::VectorXcd& b1_dagger,
                       const Eigen::VectorXcd& s_proj,
                       const ManifoldMatrix& manifold, const ApConfig& config) {
  const int n = static_cast<int>(b1_dagger.size());
  if (n != manifold.elements()) {
    throw std::invalid_argument("b1 length mismatch");
  }
  double nu = config.nu;
  if (nu <= 0.0) {
    nu = 1e-6 * std::real(b1_dagger.dot(b1_dagger)) / n;
  }
  Eigen::MatrixXcd R = b1_dagger * b1_dagger.adjoint();
  R.diagonal().array() += nu;

  Stage3Result res;
  const Eigen::VectorXcd model = manifold.A * s_proj;
  res.w.resize(n);
  for (int i = 0; i < n; ++i) {
    res.w[i] = std::polar(1.0, -angle_or_zero(model[i]));
  }
  res.power_trace.push_back(output_power(res.w, R));

  Eigen::VectorXd g = power_gradient(res.w, R);
  Eigen::VectorXd h = g;
  for (int kiter = 0; kiter < config.n_cg; ++kiter) {
    if (g.norm() == 0.0) {
      res.stationary_exit = true;
      break;
    }
    double t = line_search(res.w, h, R, config.line_search);
    if (t == 0.0 && kiter > 0) {
      h = g;  // restart along the gradient when the conjugate direction stalls
      t = line_search(res.w, h, R, config.line_search);
    }
    for (int i = 0; i < n; ++i) {
      res.w[i] = std::polar(1.0, -t * h[i]) * res.w[i];
    }
    const Eigen::VectorXd g_new = power_gradient(res.w, R);
    const double denom = g.squaredNorm();
    const double gamma = denom > 0.0 ? (g_new - g).dot(g_new) / denom : 0.0;
    h = g_new + gamma * h;
    g = g_new;
    res.power_trace.push_back(output_power(res.w, R));
  }
  return res;
}

Eigen::VectorXcd PhaseEstimate::b_final() const {
  Eigen::VectorXcd out(magnitudes.size());
  for (Eigen::Index i = 0; i < magnitudes.size(); ++i) {
    out[i] = magnitudes[i] * std::polar(1.0, phases[i]);
  }
  return out;
}

PhaseEstimate run_pipeline(const ManifoldMatrix& manifold_s1,
                           const ManifoldMatrix& manifold_s2,
                           const Eigen::VectorXd& intensity,
                           const Eigen::VectorXd& magnitude,
                           const PipelineConfig& config) {
  if (manifold_s1.elements() != manifold_s2.elements() ||
      intensity.size() != manifold_s1.elements() ||
      magnitude.size() != intensity.size()) {
    throw std::invalid_argument("pipeline dimensions mismatch");
  }
  const ApConfig& ap = config.ap;
  if (ap.k_hat < 1 || ap.n_cg < 1 || ap.n_ap < 1) {
    throw std::invalid_argument("ap config invalid");
  }

  PhaseEstimate est;
  est.magnitudes = magnitude;

  LiftedSolution s1 = run_stage1(manifold_s1, intensity, magnitude, config.stage1);
  est.stage1_delta = s1.delta;
  est.stage1_lambda = s1.lambda_max;
  est.stage1_status = s1.lp_status;

  // Step 8 equates b_est with the magnitude-projected iterate, so the first
  // stage-2 pass consumes b0_dagger.
  Eigen::VectorXd iter_phases = phases_of(s1.b0_dagger);
  const double stop_tol =
      ap.stop_tol_scale > 0.0
          ? ap.stop_tol_scale * std::max(1.0, intensity.maxCoeff())
          : 0.0;

  Eigen::VectorXd final_w_phases = iter_phases;  // fallback if n_ap == 0
  for (int it = 0; it < ap.n_ap; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXcd b_cur(magnitude.size());
    for (Eigen::Index i = 0; i < magnitude.size(); ++i) {
      b_cur[i] = magnitude[i] * std::polar(1.0, iter_phases[i]);
    }
    Stage2Result s2;
    try {
      s2 = stage2_project(manifold_s2, b_cur, ap.k_hat, ap.lp_tol,
                          ap.lp_max_iter, ap.stage2_l1_weight);
    } catch (const std::exception& e) {
      throw std::runtime_error("outer iteration " + std::to_string(it) + ": " +
                               e.what());
    }
    const Eigen::VectorXcd b1 =
        phase_update(b_cur, manifold_s2, s2.s_proj, ap.phase_update);
    Stage3Result s3 = stage3_cg(b1, s2.s_proj, manifold_s2, ap);

    // |b| .* exp(-j angle(w_cg)), rebuilt from pristine magnitudes
    final_w_phases = phases_of(s3.w);
    iter_phases = -final_w_phases;

    ApIterRecord rec;
    rec.iter = it;
    rec.delta = s2.delta;
    rec.lp_delta = s2.lp_delta;
    rec.power = s3.power_trace.back();
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    est.trace.push_back(rec);
    est.iterations = it + 1;

    if (stop_tol > 0.0 && est.trace.size() > 1) {
      const double prev = est.trace[est.trace.size() - 2].delta;
      if (std::abs(rec.delta - prev) < stop_tol) {
        est.converged = true;
        break;
      }
    }
  }
  est.phases = -final_w_phases;
  return est;
}

}  // namespace sapr
