#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sapr/array_model.hpp"

namespace sapr {

/// Conventional beamformed image |a(u,v)^H b|^2 over a grid, in dB relative
/// to the peak with a floor at -80 dB.
struct BeamImage {
  AngleGrid grid;
  Eigen::VectorXd linear;  // |a^H b|^2
  Eigen::VectorXd db;      // normalized, <= 0, floored
  double peak_linear = 0.0;
  int peak_index = 0;
};

constexpr double kBeamFloorDb = -80.0;

BeamImage beamform_image(const ManifoldMatrix& manifold,
                         const Eigen::VectorXcd& b);

struct Peak {
  double u = 0.0;
  double v = 0.0;
  double level_db = 0.0;
  int grid_index = 0;
};

struct PeakList {
  std::vector<Peak> peaks;
  bool complete = true;  // false when fewer local maxima exist than requested
};

// Top `count` strict local maxima over the 8-neighborhood of the grid
// (missing neighbors from visible-region filtering are skipped).
PeakList find_peaks(const BeamImage& image, int count);

struct BeamwidthResult {
  double du_null_to_null = 0.0;
  double dv_null_to_null = 0.0;
  double du_first_null = 0.0;
  double dv_first_null = 0.0;
};

// Null-to-null beamwidth 2*lambda/(n*d) per axis for a rectangular-grid
// aperture; first-null values are half that. Throws for non-grid layouts.
BeamwidthResult beamwidth(const ApertureGeometry& geom);

struct PhaseReport {
  double phi_star = 0.0;
  bool conjugated = false;        // conjugate branch fit better
  Eigen::VectorXd errors;         // wrapped to (-pi, pi]
  double max_error = 0.0;
  double rms_error = 0.0;
  Eigen::VectorXd est_unwrapped;  // after alignment, for plotting
  Eigen::VectorXd true_unwrapped;
};

// Closed-form least-squares global phase alignment; the conjugate-flipped
// candidate is evaluated too and the lower-RMS branch reported, flagged.
PhaseReport align_global_phase(const Eigen::VectorXcd& b_est,
                               const Eigen::VectorXcd& b_true);

double wrap_angle(double a);
Eigen::VectorXd unwrap_phases(const Eigen::VectorXd& phases);

}  // namespace sapr
