#include "sapr/array_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sapr {

namespace {

void check_carrier(double frequency_hz) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw std::invalid_argument("carrier frequency must be positive and finite");
  }
}

}  // namespace

ApertureGeometry ApertureGeometry::rectangular(int rows, int cols,
                                               double spacing_m,
                                               double frequency_hz) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("aperture rows/cols must be >= 1");
  }
  if (!(spacing_m > 0.0)) {
    throw std::invalid_argument("element spacing must be positive");
  }
  std::vector<Eigen::Vector2d> pos;
  pos.reserve(static_cast<size_t>(rows) * cols);
  const double x0 = -0.5 * (cols - 1) * spacing_m;
  const double y0 = -0.5 * (rows - 1) * spacing_m;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      pos.emplace_back(x0 + c * spacing_m, y0 + r * spacing_m);
    }
  }
  return from_positions(std::move(pos), frequency_hz);
}

ApertureGeometry ApertureGeometry::from_positions(
    std::vector<Eigen::Vector2d> positions, double frequency_hz) {
  check_carrier(frequency_hz);
  if (positions.empty()) {
    throw std::invalid_argument("aperture needs at least one element");
  }
  for (const auto& p : positions) {
    if (!p.allFinite()) {
      throw std::invalid_argument("element positions must be finite");
    }
  }
  ApertureGeometry g;
  g.positions = std::move(positions);
  g.frequency_hz = frequency_hz;
  g.wavelength = kSpeedOfLight / frequency_hz;
  g.wavenumber = 2.0 * M_PI / g.wavelength;
  // duplicates are allowed but flagged
  for (size_t i = 0; i < g.positions.size() && !g.has_duplicate_positions; ++i) {
    for (size_t j = i + 1; j < g.positions.size(); ++j) {
      if (g.positions[i] == g.positions[j]) {
        g.has_duplicate_positions = true;
        break;
      }
    }
  }
  return g;
}

AngleGrid build_grid(int rows, int cols, double u_min, double u_max,
                     double v_min, double v_max) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("grid rows/cols must be >= 1");
  }
  if (u_min > u_max || v_min > v_max || std::abs(u_min) > 1.0 ||
      std::abs(u_max) > 1.0 || std::abs(v_min) > 1.0 || std::abs(v_max) > 1.0) {
    throw std::invalid_argument("grid extents must be ordered and within [-1, 1]");
  }
  AngleGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.u_min = u_min;
  grid.u_max = u_max;
  grid.v_min = v_min;
  grid.v_max = v_max;
  grid.angles.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const double v =
        rows == 1 ? v_min : v_min + (v_max - v_min) * r / (rows - 1);
    for (int c = 0; c < cols; ++c) {
      const double u =
          cols == 1 ? u_min : u_min + (u_max - u_min) * c / (cols - 1);
      if (u * u + v * v <= 1.0 + 1e-12) {
        grid.angles.emplace_back(u, v);
      }
    }
  }
  if (grid.angles.empty()) {
    throw std::invalid_argument("grid is empty after visible-region filtering");
  }
  return grid;
}

AngleGrid build_grid(int rows, int cols, double extent) {
  return build_grid(rows, cols, -extent, extent, -extent, extent);
}

Eigen::VectorXcd steering_vector(const ApertureGeometry& geom, double u,
                                 double v) {
  if (!std::isfinite(u) || !std::isfinite(v) || u * u + v * v > 1.0 + 1e-12) {
    throw std::invalid_argument("direction outside the visible region");
  }
  const int n = geom.size();
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    const double phase =
        geom.wavenumber * (geom.positions[i].x() * u + geom.positions[i].y() * v);
    a[i] = Complex(std::cos(phase), std::sin(phase));
  }
  return a;
}

ManifoldMatrix build_manifold(const ApertureGeometry& geom,
                              const AngleGrid& grid) {
  if (geom.size() < 1 || grid.size() < 1) {
    throw std::invalid_argument("manifold needs nonempty geometry and grid");
  }
  ManifoldMatrix m;
  m.geometry = geom;
  m.grid = grid;
  m.A.resize(geom.size(), grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    m.A.col(j) = steering_vector(geom, grid.angles[j].x(), grid.angles[j].y());
  }
  return m;
}

Eigen::VectorXcd element_row(const ManifoldMatrix& manifold, int i) {
  if (i < 0 || i >= manifold.elements()) {
    throw std::out_of_range("element index out of range");
  }
  return manifold.A.row(i).transpose();
}

Eigen::VectorXcd model_field(const ManifoldMatrix& manifold,
                             const Eigen::VectorXcd& s) {
  if (s.size() != manifold.angles()) {
    throw std::invalid_argument("source vector length mismatch");
  }
  return manifold.A.conjugate() * s;
}

}  // namespace sapr
