// SPDX-License-Identifier: Apache-2.0
//
// 3D scene geometry: positions, path angles/delays and the Jacobians of the
// channel parameters (tau, theta_t, phi_t, theta_r, phi_r) with respect to
// the UE position. Elevation theta is measured from +z (arccos), azimuth phi
// is four-quadrant arctan2 with range (-pi, pi]. For LoS paths the peer
// terminal plays the role of the scattering point.
#pragma once

#include <optional>
#include <vector>

#include "pingloc/types.hpp"

namespace pingloc::geometry {

struct Position3D {
  double x = 0.0, y = 0.0, z = 0.0;
  Vec3 vec() const { return {x, y, z}; }
  static Position3D from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

struct ScenarioGeometry {
  Position3D bs;
  std::vector<Position3D> users;
  // scatterers[k] holds one entry per NLoS path of user k
  std::vector<std::vector<Position3D>> scatterers;
  double c = kSpeedOfLight;

  // Throws std::invalid_argument on coincident points or empty path lists.
  void validate() const;
};

struct PathGeometry {
  double tau = 0.0;      // seconds
  double theta_t = 0.0;  // radians, [0, pi]
  double phi_t = 0.0;    // radians, (-pi, pi]
  double theta_r = 0.0;
  double phi_r = 0.0;
  bool is_los = false;
};

// Rows ordered (tau, theta_t, phi_t, theta_r, phi_r), columns (x, y, z) of
// the UE position. For NLoS paths the transmit-angle rows are zero.
struct PositionJacobian {
  Mat53 d_eta_d_p = Mat53::Zero();
};

enum class LosModelKind { AlwaysLos, Exponential };

struct LosModel {
  LosModelKind kind = LosModelKind::Exponential;
  double d0 = 100.0;  // meters, e-folding distance of the exponential model
};

// Unit direction of a (theta, phi) pair: [sin t cos f, sin t sin f, cos t].
Vec3 direction_vector(double theta, double phi);

PathGeometry path_geometry(const Position3D& bs, const Position3D& ue,
                           const std::optional<Position3D>& scatterer, double c);

PositionJacobian position_jacobian(const Position3D& bs, const Position3D& ue,
                                   const std::optional<Position3D>& scatterer,
                                   const PathGeometry& geom);

double los_probability(double distance, const LosModel& model);

}  // namespace pingloc::geometry
