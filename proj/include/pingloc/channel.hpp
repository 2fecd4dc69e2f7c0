// SPDX-License-Identifier: Apache-2.0
//
// Beam-squint-aware UPA steering vectors and per-subcarrier channel
// matrices. Array elements are flattened vertical-major: flat index
// i = ih * n_v + iv, with iv the fastest-running (vertical) index.
//
// The element-level channel sums transmit and receive phases with the same
// sign, so the rank-one synthesis uses a_r * a_t^T (plain transpose). The
// uplink channel is the transpose of the downlink one (reciprocity).
#pragma once

#include <vector>

#include "pingloc/geometry.hpp"
#include "pingloc/types.hpp"

namespace pingloc::channel {

struct ArrayConfig {
  int n_v = 1, n_h = 1;           // vertical x horizontal elements
  double spacing_d = 0.0;         // meters
  double wavelength_lambda_c = 0.0;  // meters

  int count() const { return n_v * n_h; }
  static ArrayConfig half_wavelength(int n_v, int n_h, double lambda_c) {
    return {n_v, n_h, lambda_c / 2.0, lambda_c};
  }
};

struct SystemConfig {
  double f_c = 0.0;      // carrier frequency, Hz
  double delta_f = 0.0;  // subcarrier spacing, Hz
  int n_subcarriers = 1;

  double bandwidth() const { return n_subcarriers * delta_f; }
  // f_n = (n-1) * delta_f for the 1-based subcarrier index n.
  double offset(int n) const { return (n - 1) * delta_f; }
  // Beam-squint factor 1 + f_n / f_c.
  double squint(int n) const { return 1.0 + offset(n) / f_c; }
};

struct PathParameters {
  cd alpha{1.0, 0.0};
  double tau = 0.0;
  double theta_t = 0.0, phi_t = 0.0;
  double theta_r = 0.0, phi_r = 0.0;

  static PathParameters from_geometry(const geometry::PathGeometry& g, cd alpha) {
    return {alpha, g.tau, g.theta_t, g.phi_t, g.theta_r, g.phi_r};
  }
};

// Normalized elevation/azimuth: d cos(theta)/lambda and d sin(theta)cos(phi)/lambda.
struct NormalizedAngles {
  double elev = 0.0, azim = 0.0;
};
NormalizedAngles normalized_angles(const ArrayConfig& cfg, double theta, double phi);

// Unit-norm steering vectors; entry magnitude 1/sqrt(N), phase
// -2*pi*(1+f_n/f_c)*(iv*elev + ih*azim) at zero-based element (iv, ih).
CVec steering_tx(const ArrayConfig& cfg, const SystemConfig& sys, int n,
                 const PathParameters& path);
CVec steering_rx(const ArrayConfig& cfg, const SystemConfig& sys, int n,
                 const PathParameters& path);

// Generic steering vector for one array side given (theta, phi).
CVec steering(const ArrayConfig& cfg, const SystemConfig& sys, int n, double theta, double phi);

// Steering vector with its analytic first (and optionally second)
// derivatives in theta and phi, differentiated elementwise through both
// normalized angles.
struct SteeringJet {
  CVec a, d_theta, d_phi;
  CVec d2_theta, d2_phi;  // empty unless second_order
};
SteeringJet steering_jet(const ArrayConfig& cfg, const SystemConfig& sys, int n, double theta,
                         double phi, bool second_order = false);

// H_k[n] = sqrt(Nr*Nt/L) * sum_l alpha_l e^{-j2pi(f_c+f_n)tau_l} a_r a_t^T.
CMat channel_matrix(const ArrayConfig& tx, const ArrayConfig& rx, const SystemConfig& sys,
                    const std::vector<PathParameters>& paths, int n);

struct ChannelRealization {
  std::vector<CMat> per_subcarrier;  // index n-1
  std::vector<PathParameters> paths;

  const CMat& at(int n) const { return per_subcarrier.at(n - 1); }
};

ChannelRealization synthesize(const ArrayConfig& tx, const ArrayConfig& rx,
                              const SystemConfig& sys,
                              const std::vector<PathParameters>& paths);

// Subcarrier correlation factor of the n-th subcarrier for delay tau; the
// scalar conjugate pair cancels, leaving e^{-j 2 pi f_n tau} with unit modulus.
cd subcarrier_correlation(const SystemConfig& sys, double tau, int n);

}  // namespace pingloc::channel
