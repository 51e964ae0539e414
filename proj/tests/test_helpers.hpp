#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "sapr/lp_solver.hpp"

namespace sapr::testing {

// Brute-force LP oracle for n <= 3: enumerate all vertices (intersections of
// n active constraints drawn from rows and finite bounds), keep feasible
// ones, return the best objective. Independent of the interior-point path.
inline std::optional<double> vertex_enumeration_optimum(
    const LinearProgram& lp, Eigen::VectorXd* argmin = nullptr) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  for (int r = 0; r < m; ++r) {
    normals.push_back(lp.G.row(r).transpose());
    offsets.push_back(lp.h[r]);
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(lp.lower[i])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = -1.0;
      normals.push_back(e);
      offsets.push_back(-lp.lower[i]);
    }
  }
  const int total = static_cast<int>(normals.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd A(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        A.row(i) = normals[pick[i]].transpose();
        b[i] = offsets[pick[i]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (int r = 0; r < total; ++r) {
        if (normals[r].dot(x) > offsets[r] + 1e-7) return;
      }
      const double obj = lp.c.dot(x);
      if (!best || obj < *best) {
        best = obj;
        if (argmin) *argmin = x;
      }
      return;
    }
    for (int i = start; i < total; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline Eigen::VectorXcd random_unit_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(g(rng), g(rng));
  v.normalize();
  return v;
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd B(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) B(i, j) = std::complex<double>(g(rng), g(rng));
  }
  return 0.5 * (B + B.adjoint()).eval();
}

}  // namespace sapr::testing
