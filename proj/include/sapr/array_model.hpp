#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace sapr {

using Complex = std::complex<double>;

constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Planar aperture: element positions (meters) plus the carrier that fixes
/// wavelength and wavenumber.
struct ApertureGeometry {
  std::vector<Eigen::Vector2d> positions;
  double frequency_hz = 0.0;
  double wavelength = 0.0;   // m
  double wavenumber = 0.0;   // rad/m, k = 2*pi/lambda
  bool has_duplicate_positions = false;

  int size() const { return static_cast<int>(positions.size()); }

  // Rectangular grid centered on the origin, row-major (y outer, x inner).
  static ApertureGeometry rectangular(int rows, int cols, double spacing_m,
                                      double frequency_hz);
  static ApertureGeometry from_positions(std::vector<Eigen::Vector2d> positions,
                                         double frequency_hz);
};

/// Sine-space search grid. Entries outside u^2 + v^2 <= 1 are dropped at
/// construction; ordering is row-major over (v, u) and deterministic.
struct AngleGrid {
  std::vector<Eigen::Vector2d> angles;  // (u, v)
  int rows = 0;
  int cols = 0;
  double u_min = 0.0, u_max = 0.0, v_min = 0.0, v_max = 0.0;

  int size() const { return static_cast<int>(angles.size()); }
};

AngleGrid build_grid(int rows, int cols, double u_min, double u_max,
                     double v_min, double v_max);

// Symmetric square grid over [-extent, extent]^2.
AngleGrid build_grid(int rows, int cols, double extent);

// a(u,v): entry n = exp(j k (x_n u + y_n v)). Rejects (u,v) outside the
// visible region.
Eigen::VectorXcd steering_vector(const ApertureGeometry& geom, double u,
                                 double v);

/// N x K manifold whose columns are steering vectors over the grid.
struct ManifoldMatrix {
  Eigen::MatrixXcd A;
  ApertureGeometry geometry;
  AngleGrid grid;

  int elements() const { return static_cast<int>(A.rows()); }
  int angles() const { return static_cast<int>(A.cols()); }
};

ManifoldMatrix build_manifold(const ApertureGeometry& geom,
                              const AngleGrid& grid);

// f_i: i-th row of A as a column vector (pure phases of element i over all
// grid angles).
Eigen::VectorXcd element_row(const ManifoldMatrix& manifold, int i);

// Field the source vector s produces at the aperture under the intensity
// measurement model: entry k = f_k^H s = [conj(A) s]_k.
Eigen::VectorXcd model_field(const ManifoldMatrix& manifold,
                             const Eigen::VectorXcd& s);

}  // namespace sapr
