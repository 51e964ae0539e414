#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "sapr/array_model.hpp"

namespace sapr {

/// Point source in the 3-D scene frame.
struct Source {
  // converted from mm at ingestion; NaN marks "not provided"
  Eigen::Vector3d position_m =
      Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  double power_db = 0.0;

  double power_linear() const { return std::pow(10.0, power_db / 10.0); }
};

/// Maps aperture-plane coordinates into the scene frame. Defaults: the
/// aperture spans X-Z, boresight along +Y, u = X/r, v = Z/r.
struct PlaneEmbedding {
  int u_axis = 0;
  int v_axis = 2;
  int boresight_axis = 1;

  bool valid() const {
    auto in = [](int a) { return a >= 0 && a <= 2; };
    return in(u_axis) && in(v_axis) && in(boresight_axis) &&
           u_axis != v_axis && u_axis != boresight_axis &&
           v_axis != boresight_axis;
  }
};

/// Additive Gaussian intensity noise, clamped at zero. sigma == 0 disables.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

struct Scenario {
  std::vector<Source> sources;
  ApertureGeometry geometry;
  PlaneEmbedding embedding;
  NoiseSpec noise;
};

/// Simulated aperture data. b_true is retained for evaluation only; the
/// algorithm may touch nothing beyond intensity/magnitude.
struct Measurements {
  Eigen::VectorXcd b_true;
  Eigen::VectorXd intensity;
  Eigen::VectorXd magnitude;
};

// y_m = sum_k sqrt(P_k) exp(j (2 pi / lambda) d_km), d_km the scene-frame
// distance from source k to element m. No amplitude decay with range.
Measurements simulate_received(const Scenario& scenario);

// |E_RF| = delta_f / (dipole/h), the Autler-Townes splitting conversion.
double at_splitting_to_field(double delta_f_hz, double dipole_over_h);
double field_to_splitting(double field_v_per_m, double dipole_over_h);

Eigen::VectorXd intensity_from_field(const Eigen::VectorXcd& b);

// Scene-frame position of an aperture element under an embedding.
Eigen::Vector3d embed_element(const PlaneEmbedding& embedding,
                              const Eigen::Vector2d& aperture_xy);

}  // namespace sapr
