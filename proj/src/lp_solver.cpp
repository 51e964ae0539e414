#include "sapr/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sapr {

namespace {

double inf_norm_or_zero(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Largest alpha in [0, 1] keeping v + alpha dv >= 0 on the masked coords.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv,
                const std::vector<int>& idx) {
  double alpha = 1.0;
  for (int i : idx) {
    if (dv[i] < 0.0) {
      alpha = std::min(alpha, -v[i] / dv[i]);
    }
  }
  return alpha;
}

double max_step_all(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) {
      alpha = std::min(alpha, -v[i] / dv[i]);
    }
  }
  return alpha;
}

}  // namespace

bool LinearProgram::dimensions_consistent() const {
  if (lower.size() != c.size()) return false;
  if (G.size() == 0) return h.size() == 0;
  return G.rows() == h.size() && G.cols() == c.size();
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp, double tol, int max_iter) {
  if (!lp.dimensions_consistent()) {
    throw std::invalid_argument("lp dimensions inconsistent");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw std::invalid_argument("lp tolerance/iteration budget invalid");
  }
  for (Eigen::Index i = 0; i < lp.c.size(); ++i) {
    if (!std::isfinite(lp.c[i])) throw std::invalid_argument("lp cost not finite");
  }
  if (lp.G.size() && !lp.G.allFinite()) {
    throw std::invalid_argument("lp constraint matrix not finite");
  }

  const int n = lp.num_vars();
  const int m = lp.num_rows();

  std::vector<int> bounded;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(lp.lower[i])) bounded.push_back(i);
  }
  const int nb = static_cast<int>(bounded.size());

  // Shift bounded coords so their bound becomes x >= 0.
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  for (int i : bounded) shift[i] = lp.lower[i];
  Eigen::VectorXd h = lp.h;
  if (m) h -= lp.G * shift;
  const double obj_off = lp.c.dot(shift);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i : bounded) x[i] = 1.0;
  Eigen::VectorXd s(m), z(m);
  for (int r = 0; r < m; ++r) s[r] = std::max(1.0, std::abs(h[r]));
  z.setOnes();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (int i : bounded) w[i] = 1.0;

  const double gnorm = std::max(1.0, m ? lp.G.cwiseAbs().maxCoeff() : 1.0);
  const double rho_free = 1e-10 * gnorm;
  const double h_scale = 1.0 + inf_norm_or_zero(h);
  const double c_scale = 1.0 + inf_norm_or_zero(lp.c);
  const int denom = std::max(m + nb, 1);

  LpSolution out;
  out.x = x + shift;

  auto finish = [&](LpStatus status, int it, double pinf, double dinf,
                    double mu) {
    out.x = x + shift;
    out.objective = lp.c.dot(x) + obj_off;
    out.status = status;
    out.iterations = it;
    out.primal_residual = pinf;
    out.dual_residual = dinf;
    out.gap = mu;
    return out;
  };

  Eigen::VectorXd rp(m), rd(n), D(n), rdb(n);
  Eigen::VectorXd dx(n), dz(m), ds(m), dw(n);
  Eigen::MatrixXd Nmat;
  Eigen::LLT<Eigen::MatrixXd> llt;

  double pinf = 0.0, dinf = 0.0, mu = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    rp = m ? (h - lp.G * x - s).eval() : Eigen::VectorXd(0);
    rd = -(lp.c - w);
    if (m) rd -= lp.G.transpose() * z;

    double mu_terms = m ? z.dot(s) : 0.0;
    for (int i : bounded) mu_terms += x[i] * w[i];
    mu = mu_terms / denom;
    pinf = inf_norm_or_zero(rp);
    dinf = inf_norm_or_zero(rd);

    {
      LpIterRecord rec;
      rec.iter = it;
      rec.mu = mu;
      rec.primal_residual = pinf;
      rec.dual_residual = dinf;
      rec.primal_objective = lp.c.dot(x) + obj_off;
      // dual estimate: -h^T z + lower^T w on bounded coords (original frame)
      double dual = m ? -lp.h.dot(z) : 0.0;
      for (int i : bounded) dual += lp.lower[i] * w[i];
      rec.dual_objective = dual;
      out.trace.push_back(rec);
    }

    if (pinf <= tol * h_scale && dinf <= tol * c_scale && mu <= tol) {
      return finish(LpStatus::Optimal, it, pinf, dinf, mu);
    }

    // Farkas-style infeasibility certificate on the dual iterate.
    if (m && it > 3) {
      const double z1 = z.lpNorm<1>();
      if (z1 > 0) {
        Eigen::VectorXd v = lp.G.transpose() * (z / z1);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
          const bool is_bounded = std::isfinite(lp.lower[i]);
          if (is_bounded ? (v[i] < -1e-7 * gnorm)
                         : (std::abs(v[i]) > 1e-7 * gnorm)) {
            ok = false;
          }
        }
        if (ok && h.dot(z / z1) < -1e-7 * h_scale) {
          return finish(LpStatus::Infeasible, it, pinf, dinf, mu);
        }
      }
    }
    if (lp.c.dot(x) < -1e12 * (1.0 + std::abs(obj_off)) &&
        pinf <= 1e-6 * h_scale) {
      return finish(LpStatus::Unbounded, it, pinf, dinf, mu);
    }

    for (int i = 0; i < n; ++i) {
      D[i] = std::isfinite(lp.lower[i]) ? x[i] / std::max(w[i], 1e-300)
                                        : 1.0 / rho_free;
    }

    if (m) {
      Nmat.noalias() = lp.G * D.asDiagonal() * lp.G.transpose();
      Nmat.diagonal() += (s.array() / z.array()).matrix();
      double reg = 1e-10 * std::max(1.0, Nmat.cwiseAbs().maxCoeff());
      Nmat.diagonal().array() += reg;
      llt.compute(Nmat);
      if (llt.info() != Eigen::Success) {
        out.regularized = true;
        Nmat.diagonal().array() += 1e4 * reg;
        llt.compute(Nmat);
        if (llt.info() != Eigen::Success) {
          return finish(LpStatus::MaxIterations, it, pinf, dinf, mu);
        }
      }
    }

    auto newton = [&](const Eigen::VectorXd& rzs, const Eigen::VectorXd& rxw) {
      rdb = rd;
      for (int i : bounded) rdb[i] += rxw[i] / std::max(x[i], 1e-300);
      if (m) {
        Eigen::VectorXd rhs =
            lp.G * D.cwiseProduct(rdb) - rp + (rzs.array() / z.array()).matrix();
        dz = llt.solve(rhs);
        dx = D.cwiseProduct(rdb - lp.G.transpose() * dz);
        ds = (rzs - s.cwiseProduct(dz)).cwiseQuotient(z);
      } else {
        dz.resize(0);
        ds.resize(0);
        dx = D.cwiseProduct(rdb);
      }
      dw.setZero();
      for (int i : bounded) {
        dw[i] = (rxw[i] - w[i] * dx[i]) / std::max(x[i], 1e-300);
      }
    };

    // affine scaling step
    Eigen::VectorXd rzs = m ? (-z.cwiseProduct(s)).eval() : Eigen::VectorXd(0);
    Eigen::VectorXd rxw = Eigen::VectorXd::Zero(n);
    for (int i : bounded) rxw[i] = -x[i] * w[i];
    newton(rzs, rxw);

    double ap = std::min(m ? max_step_all(s, ds) : 1.0, max_step(x, dx, bounded));
    double ad = std::min(m ? max_step_all(z, dz) : 1.0, max_step(w, dw, bounded));
    double mu_aff = m ? (z + ad * dz).dot(s + ap * ds) : 0.0;
    for (int i : bounded) mu_aff += (x[i] + ap * dx[i]) * (w[i] + ad * dw[i]);
    mu_aff /= denom;
    double sigma = mu > 0 ? std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3) : 0.1;

    // corrector
    if (m) rzs = (sigma * mu - (z.array() * s.array()) - (dz.array() * ds.array())).matrix();
    for (int i : bounded) rxw[i] = sigma * mu - x[i] * w[i] - dx[i] * dw[i];
    newton(rzs, rxw);

    ap = std::min(m ? max_step_all(s, ds) : 1.0, max_step(x, dx, bounded));
    ad = std::min(m ? max_step_all(z, dz) : 1.0, max_step(w, dw, bounded));

    // unbounded-ray certificate on the search direction
    const double ndx = dx.norm();
    if (ndx > 1e-12) {
      Eigen::VectorXd ray = dx / ndx;
      bool feas = true;
      if (m && (lp.G * ray).maxCoeff() > 1e-9) feas = false;
      for (int i : bounded) {
        if (ray[i] < -1e-9) { feas = false; break; }
      }
      if (feas && lp.c.dot(ray) < -1e-9 * c_scale) {
        return finish(LpStatus::Unbounded, it, pinf, dinf, mu);
      }
    }

    const double eta = mu > 1e-10 ? 0.99 : 0.999;
    ap = std::min(1.0, eta * ap);
    ad = std::min(1.0, eta * ad);
    x += ap * dx;
    if (m) {
      s += ap * ds;
      z += ad * dz;
    }
    for (int i : bounded) w[i] += ad * dw[i];
  }
  return finish(LpStatus::MaxIterations, max_iter, pinf, dinf, mu);
}

L1Augmented l1_augment(const LinearProgram& lp, double weight,
                       const std::vector<int>& indices) {
  if (weight < 0.0) {
    throw std::invalid_argument("l1 weight must be >= 0");
  }
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  std::vector<int> split;
  std::vector<int> direct;
  std::vector<int> bound_rows;  // finite nonzero lower bounds become rows
  for (int i : indices) {
    if (i < 0 || i >= n) throw std::out_of_range("l1 index out of range");
    if (!std::isfinite(lp.lower[i])) {
      split.push_back(i);
    } else if (lp.lower[i] == 0.0) {
      direct.push_back(i);
    } else {
      split.push_back(i);
      bound_rows.push_back(i);
    }
  }

  L1Augmented aug;
  aug.original_vars = n;
  const int ns = static_cast<int>(split.size());
  const int mr = static_cast<int>(bound_rows.size());
  aug.lp.c.resize(n + ns);
  aug.lp.c.head(n) = lp.c;
  aug.lp.lower.resize(n + ns);
  aug.lp.lower.head(n) = lp.lower;
  aug.lp.G.resize(m + mr, n + ns);
  aug.lp.h.resize(m + mr);
  if (m) {
    aug.lp.G.topLeftCorner(m, n) = lp.G;
    aug.lp.h.head(m) = lp.h;
  }
  aug.lp.G.topRightCorner(m + mr, ns).setZero();
  if (mr) aug.lp.G.bottomLeftCorner(mr, n).setZero();

  for (int i : direct) aug.lp.c[i] += weight;
  for (int j = 0; j < ns; ++j) {
    const int i = split[j];
    const int q = n + j;
    aug.splits.emplace_back(i, q);
    aug.lp.c[i] = lp.c[i] + weight;   // p part
    aug.lp.c[q] = -lp.c[i] + weight;  // q part
    aug.lp.lower[i] = 0.0;
    aug.lp.lower[q] = 0.0;
    if (m) aug.lp.G.block(0, q, m, 1) = -lp.G.col(i);
  }
  for (int r = 0; r < mr; ++r) {
    // keep the original bound: -(p - q) <= -lower
    const int i = bound_rows[r];
    int q = -1;
    for (const auto& [oi, qc] : aug.splits) {
      if (oi == i) { q = qc; break; }
    }
    aug.lp.G(m + r, i) = -1.0;
    aug.lp.G(m + r, q) = 1.0;
    aug.lp.h[m + r] = -lp.lower[i];
  }
  return aug;
}

Eigen::VectorXd L1Augmented::recover(const Eigen::VectorXd& x_aug) const {
  Eigen::VectorXd x = x_aug.head(original_vars);
  for (const auto& [i, q] : splits) {
    x[i] = x_aug[i] - x_aug[q];
  }
  return x;
}

}  // namespace sapr
