// SPDX-License-Identifier: Apache-2.0
#include "pingloc/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace pingloc::geometry {

namespace {

constexpr double kDegenerateDist = 1e-9;  // meters

struct Angles {
  double theta, phi;
};

// Elevation/azimuth of the vector from `from` towards `to`.
Angles angles_of(const Vec3& from, const Vec3& to) {
  const Vec3 w = to - from;
  const double r = w.norm();
  if (r < kDegenerateDist) throw std::invalid_argument("coincident points");
  double cos_t = w.z() / r;
  cos_t = std::clamp(cos_t, -1.0, 1.0);
  double phi = std::atan2(w.y(), w.x());
  if (phi <= -kPi) phi = kPi;  // atan2(-0, x<0) -> map -pi to +pi
  return {std::acos(cos_t), phi};
}

}  // namespace

void ScenarioGeometry::validate() const {
  if (users.empty()) throw std::invalid_argument("scenario has no users");
  if (scatterers.size() != users.size())
    throw std::invalid_argument("scatterer lists must match user count");
  const Vec3 pb = bs.vec();
  for (std::size_t k = 0; k < users.size(); ++k) {
    const Vec3 pu = users[k].vec();
    if ((pu - pb).norm() < kDegenerateDist) throw std::invalid_argument("coincident points");
    for (const auto& s : scatterers[k]) {
      const Vec3 ps = s.vec();
      if ((ps - pb).norm() < kDegenerateDist || (ps - pu).norm() < kDegenerateDist)
        throw std::invalid_argument("coincident points");
    }
  }
}

Vec3 direction_vector(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

PathGeometry path_geometry(const Position3D& bs, const Position3D& ue,
                           const std::optional<Position3D>& scatterer, double c) {
  if (c <= 0.0) throw std::invalid_argument("propagation speed must be positive");
  const Vec3 pt = bs.vec();
  const Vec3 pr = ue.vec();
  PathGeometry g;
  if (scatterer) {
    const Vec3 ps = scatterer->vec();
    const Angles at = angles_of(pt, ps);
    const Angles ar = angles_of(pr, ps);
    g.theta_t = at.theta;
    g.phi_t = at.phi;
    g.theta_r = ar.theta;
    g.phi_r = ar.phi;
    g.tau = ((ps - pt).norm() + (ps - pr).norm()) / c;
    g.is_los = false;
  } else {
    const Angles at = angles_of(pt, pr);
    const Angles ar = angles_of(pr, pt);
    g.theta_t = at.theta;
    g.phi_t = at.phi;
    g.theta_r = ar.theta;
    g.phi_r = ar.phi;
    g.tau = (pr - pt).norm() / c;
    g.is_los = true;
  }
  return g;
}

PositionJacobian position_jacobian(const Position3D& bs, const Position3D& ue,
                                   const std::optional<Position3D>& scatterer,
                                   const PathGeometry& geom) {
  const Vec3 pt = bs.vec();
  const Vec3 pr = ue.vec();
  // Distance from the UE to the point its receive angles refer to.
  const Vec3 ref = scatterer ? scatterer->vec() : pt;
  const double r_r = (pr - ref).norm();
  if (r_r < kDegenerateDist) throw std::invalid_argument("degenerate Jacobian");

  const double st_r = std::sin(geom.theta_r), ct_r = std::cos(geom.theta_r);
  const double sf_r = std::sin(geom.phi_r), cf_r = std::cos(geom.phi_r);

  PositionJacobian jac;
  auto& T = jac.d_eta_d_p;

  // tau row: the UE-side segment length grows along -f_r, where f_r is the
  // unit vector from the UE towards the reference point.
  const double c = geom.is_los ? (pr - pt).norm() / geom.tau
                               : ((ref - pt).norm() + r_r) / geom.tau;
  T.row(0) = (-direction_vector(geom.theta_r, geom.phi_r) / c).transpose();

  // Receive-angle rows (same form for LoS and NLoS, distance to reference).
  T.row(3) = (Vec3{-ct_r * cf_r, -ct_r * sf_r, st_r} / r_r).transpose();
  if (st_r < 1e-12) throw std::invalid_argument("degenerate Jacobian");
  T.row(4) = (Vec3{sf_r, -cf_r, 0.0} / (r_r * st_r)).transpose();

  if (geom.is_los) {
    const double r_t = (pr - pt).norm();
    if (r_t < kDegenerateDist) throw std::invalid_argument("degenerate Jacobian");
    const double st_t = std::sin(geom.theta_t), ct_t = std::cos(geom.theta_t);
    const double sf_t = std::sin(geom.phi_t), cf_t = std::cos(geom.phi_t);
    T.row(1) = (Vec3{ct_t * cf_t, ct_t * sf_t, -st_t} / r_t).transpose();
    if (st_t < 1e-12) throw std::invalid_argument("degenerate Jacobian");
    T.row(2) = (Vec3{-sf_t, cf_t, 0.0} / (r_t * st_t)).transpose();
  }
  // NLoS: transmit-angle rows stay zero (BS->scatterer leg does not move).
  return jac;
}

double los_probability(double distance, const LosModel& model) {
  if (distance <= 0.0) throw std::invalid_argument("distance must be positive");
  switch (model.kind) {
    case LosModelKind::AlwaysLos:
      return 1.0;
    case LosModelKind::Exponential:
      return std::exp(-distance / model.d0);
  }
  return 1.0;
}

}  // namespace pingloc::geometry
