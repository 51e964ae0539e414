#include "sapr/scene_sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sapr {

Eigen::Vector3d embed_element(const PlaneEmbedding& embedding,
                              const Eigen::Vector2d& aperture_xy) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  p[embedding.u_axis] = aperture_xy.x();
  p[embedding.v_axis] = aperture_xy.y();
  return p;
}

Measurements simulate_received(const Scenario& scenario) {
  if (scenario.sources.empty()) {
    throw std::invalid_argument("scenario needs at least one source");
  }
  if (!scenario.embedding.valid()) {
    throw std::invalid_argument("aperture-plane embedding axes must be distinct");
  }
  if (scenario.noise.sigma < 0.0) {
    throw std::invalid_argument("noise sigma must be >= 0");
  }
  for (const auto& s : scenario.sources) {
    if (!s.position_m.allFinite()) {
      throw std::invalid_argument("source position must be finite");
    }
    if (!(s.power_linear() > 0.0)) {
      throw std::invalid_argument("source power must be positive in linear scale");
    }
  }

  const int n = scenario.geometry.size();
  const double k_wave = scenario.geometry.wavenumber;
  Measurements meas;
  meas.b_true.setZero(n);
  for (const auto& src : scenario.sources) {
    const double amp = std::sqrt(src.power_linear());
    for (int m = 0; m < n; ++m) {
      const Eigen::Vector3d el =
          embed_element(scenario.embedding, scenario.geometry.positions[m]);
      const double d = (src.position_m - el).norm();
      if (d == 0.0) {
        throw std::invalid_argument(
            "source coincides with an aperture element; phase undefined");
      }
      const double phase = k_wave * d;
      meas.b_true[m] += amp * Complex(std::cos(phase), std::sin(phase));
    }
  }

  meas.intensity = intensity_from_field(meas.b_true);
  if (scenario.noise.sigma > 0.0) {
    std::mt19937_64 rng(scenario.noise.seed);
    std::normal_distribution<double> gauss(0.0, scenario.noise.sigma);
    for (int m = 0; m < n; ++m) {
      meas.intensity[m] = std::max(0.0, meas.intensity[m] + gauss(rng));
    }
  }
  meas.magnitude = meas.intensity.cwiseSqrt();
  return meas;
}

double at_splitting_to_field(double delta_f_hz, double dipole_over_h) {
  if (delta_f_hz < 0.0) {
    throw std::invalid_argument("AT splitting must be >= 0");
  }
  if (!(dipole_over_h > 0.0)) {
    throw std::invalid_argument("dipole moment ratio must be positive");
  }
  return delta_f_hz / dipole_over_h;
}

double field_to_splitting(double field_v_per_m, double dipole_over_h) {
  if (field_v_per_m < 0.0) {
    throw std::invalid_argument("field strength must be >= 0");
  }
  if (!(dipole_over_h > 0.0)) {
    throw std::invalid_argument("dipole moment ratio must be positive");
  }
  return field_v_per_m * dipole_over_h;
}

Eigen::VectorXd intensity_from_field(const Eigen::VectorXcd& b) {
  return b.cwiseAbs2();
}

}  // namespace sapr
