#include "sapr/beamformer_eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sapr {

BeamImage beamform_image(const ManifoldMatrix& manifold,
                         const Eigen::VectorXcd& b) {
  if (b.size() != manifold.elements()) {
    throw std::invalid_argument("beamform length mismatch");
  }
  if (b.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("beamform of an all-zero field");
  }
  BeamImage img;
  img.grid = manifold.grid;
  img.linear = (manifold.A.adjoint() * b).cwiseAbs2();
  img.peak_linear = img.linear.maxCoeff(&img.peak_index);
  img.db.resize(img.linear.size());
  for (Eigen::Index i = 0; i < img.linear.size(); ++i) {
    const double ratio = img.linear[i] / img.peak_linear;
    img.db[i] = ratio > 0.0
                    ? std::max(kBeamFloorDb, 10.0 * std::log10(ratio))
                    : kBeamFloorDb;
  }
  return img;
}

PeakList find_peaks(const BeamImage& image, int count) {
  if (count < 1) {
    throw std::invalid_argument("peak count must be >= 1");
  }
  // index the (possibly hole-punched) grid by integer (col,row) coordinates
  std::map<std::pair<int, int>, int> cell;
  std::vector<std::pair<int, int>> coords(image.grid.size());
  const auto& g = image.grid;
  const double du = g.cols > 1 ? (g.u_max - g.u_min) / (g.cols - 1) : 1.0;
  const double dv = g.rows > 1 ? (g.v_max - g.v_min) / (g.rows - 1) : 1.0;
  for (int i = 0; i < g.size(); ++i) {
    const int cu = static_cast<int>(std::lround((g.angles[i].x() - g.u_min) / du));
    const int cv = static_cast<int>(std::lround((g.angles[i].y() - g.v_min) / dv));
    coords[i] = {cu, cv};
    cell[{cu, cv}] = i;
  }

  std::vector<Peak> found;
  for (int i = 0; i < g.size(); ++i) {
    bool is_max = true;
    for (int ddu = -1; ddu <= 1 && is_max; ++ddu) {
      for (int ddv = -1; ddv <= 1; ++ddv) {
        if (ddu == 0 && ddv == 0) continue;
        auto it = cell.find({coords[i].first + ddu, coords[i].second + ddv});
        if (it != cell.end() && image.linear[it->second] >= image.linear[i]) {
          is_max = false;
          break;
        }
      }
    }
    if (is_max) {
      found.push_back({g.angles[i].x(), g.angles[i].y(), image.db[i], i});
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Peak& a, const Peak& b) {
    if (a.level_db != b.level_db) return a.level_db > b.level_db;
    return a.grid_index < b.grid_index;
  });

  PeakList out;
  out.complete = static_cast<int>(found.size()) >= count;
  const int take = std::min<int>(count, static_cast<int>(found.size()));
  out.peaks.assign(found.begin(), found.begin() + take);
  return out;
}

BeamwidthResult beamwidth(const ApertureGeometry& geom) {
  // recover the rectangular lattice from the positions
  std::vector<double> xs, ys;
  for (const auto& p : geom.positions) {
    xs.push_back(p.x());
    ys.push_back(p.y());
  }
  auto unique_sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> u;
    for (double a : v) {
      if (u.empty() || std::abs(a - u.back()) > 1e-12) u.push_back(a);
    }
    return u;
  };
  const auto ux = unique_sorted(xs);
  const auto uy = unique_sorted(ys);
  const size_t nx = ux.size(), ny = uy.size();
  if (nx * ny != geom.positions.size()) {
    throw std::invalid_argument("beamwidth needs a rectangular-grid aperture");
  }
  auto spacing = [](const std::vector<double>& u) {
    if (u.size() < 2) return 0.0;
    const double d = u[1] - u[0];
    for (size_t i = 1; i + 1 < u.size(); ++i) {
      if (std::abs(u[i + 1] - u[i] - d) > 1e-9 * std::max(1.0, std::abs(d))) {
        throw std::invalid_argument("beamwidth needs uniform element spacing");
      }
    }
    return d;
  };
  const double dx = spacing(ux);
  const double dy = spacing(uy);

  BeamwidthResult r;
  // single-column/row axes have no aperture extent: width spans all sine space
  r.du_null_to_null = nx > 1 ? 2.0 * geom.wavelength / (nx * dx) : 2.0;
  r.dv_null_to_null = ny > 1 ? 2.0 * geom.wavelength / (ny * dy) : 2.0;
  r.du_first_null = 0.5 * r.du_null_to_null;
  r.dv_first_null = 0.5 * r.dv_null_to_null;
  return r;
}

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  a -= M_PI;
  // wrap to (-pi, pi]
  if (a == -M_PI) a = M_PI;
  return a;
}

Eigen::VectorXd unwrap_phases(const Eigen::VectorXd& phases) {
  Eigen::VectorXd out = phases;
  for (Eigen::Index i = 1; i < out.size(); ++i) {
    double d = out[i] - out[i - 1];
    while (d > M_PI) {
      out[i] -= 2.0 * M_PI;
      d = out[i] - out[i - 1];
    }
    while (d <= -M_PI) {
      out[i] += 2.0 * M_PI;
      d = out[i] - out[i - 1];
    }
  }
  return out;
}

namespace {

struct Branch {
  double phi = 0.0;
  Eigen::VectorXd errors;
  double rms = 0.0;
  double max_err = 0.0;
};

Branch align_one(const Eigen::VectorXcd& cand, const Eigen::VectorXcd& b_true) {
  Branch br;
  br.phi = std::arg(b_true.dot(cand));  // dot conjugates b_true
  br.errors.resize(cand.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < cand.size(); ++i) {
    const Complex rotated = cand[i] * std::polar(1.0, -br.phi);
    const double at = b_true[i] == Complex(0, 0) ? 0.0 : std::arg(b_true[i]);
    const double ae = rotated == Complex(0, 0) ? 0.0 : std::arg(rotated);
    br.errors[i] = wrap_angle(ae - at);
    acc += br.errors[i] * br.errors[i];
    br.max_err = std::max(br.max_err, std::abs(br.errors[i]));
  }
  br.rms = std::sqrt(acc / cand.size());
  return br;
}

}  // namespace

PhaseReport align_global_phase(const Eigen::VectorXcd& b_est,
                               const Eigen::VectorXcd& b_true) {
  if (b_est.size() != b_true.size()) {
    throw std::invalid_argument("alignment length mismatch");
  }
  if (b_true.cwiseAbs().maxCoeff() == 0.0 ||
      b_est.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("alignment of zero vectors");
  }
  const Branch direct = align_one(b_est, b_true);
  const Branch flipped = align_one(b_est.conjugate(), b_true);

  PhaseReport rep;
  const bool use_flip = flipped.rms < direct.rms;
  const Branch& sel = use_flip ? flipped : direct;
  rep.conjugated = use_flip;
  rep.phi_star = sel.phi;
  rep.errors = sel.errors;
  rep.rms_error = sel.rms;
  rep.max_error = sel.max_err;

  const Eigen::VectorXcd aligned =
      (use_flip ? b_est.conjugate() : b_est) * std::polar(1.0, -sel.phi);
  Eigen::VectorXd est_ph(aligned.size()), true_ph(aligned.size());
  for (Eigen::Index i = 0; i < aligned.size(); ++i) {
    est_ph[i] = aligned[i] == Complex(0, 0) ? 0.0 : std::arg(aligned[i]);
    true_ph[i] = b_true[i] == Complex(0, 0) ? 0.0 : std::arg(b_true[i]);
  }
  rep.est_unwrapped = unwrap_phases(est_ph);
  rep.true_unwrapped = unwrap_phases(true_ph);
  return rep;
}

}  // namespace sapr
