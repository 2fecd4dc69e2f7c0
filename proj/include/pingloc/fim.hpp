// SPDX-License-Identifier: Apache-2.0
//
// Fisher information over the per-path channel parameters
// (tau, theta_t, phi_t, theta_r, phi_r), the chain rule to the 3x3 position
// FIM, and the multi-subcarrier positioning bound. Only the mean term of the
// Gaussian FIM is used; the covariance-derivative term is dropped.
#pragma once

#include <array>
#include <vector>

#include "pingloc/channel.hpp"
#include "pingloc/geometry.hpp"
#include "pingloc/signal.hpp"
#include "pingloc/types.hpp"

namespace pingloc::fim {

inline constexpr int kNumEta = 5;  // tau, theta_t, phi_t, theta_r, phi_r

// Rank-one factorization of one path's channel derivative on one subcarrier:
// dH/d eta_i = gain * coeff[i] * p[i] q[i]^T, where p lives on the receive
// array and q on the transmit array. Shared by the FIM assembly and the
// beamformer optimizer.
struct PathFactors {
  cd gain;                       // sqrt(NrNt/L) alpha e^{-j omega tau}
  double omega = 0.0;            // 2 pi (f_c + f_n)
  std::array<cd, kNumEta> coeff;
  std::array<CVec, kNumEta> p;   // receive-side vectors
  std::array<CVec, kNumEta> q;   // transmit-side vectors
  CVec a_r, a_t;                 // plain steering vectors

  // Single-path channel H_l[n] = gain * a_r a_t^T.
  CMat single_path_channel() const { return gain * a_r * a_t.transpose(); }
};

PathFactors path_factors(const channel::ArrayConfig& tx, const channel::ArrayConfig& rx,
                         const channel::SystemConfig& sys, const channel::PathParameters& path,
                         int total_paths, int n);

// The five derivatives of the combined signal mean mu = W^H H_l F_k s_k with
// respect to the path's parameters, on one subcarrier.
struct MeanDerivatives {
  std::array<CVec, kNumEta> d;
};

MeanDerivatives mean_derivatives(const PathFactors& pf, const CMat& w_eff, const CMat& f_user,
                                 const CVec& s_user);

// Single-path mean itself (useful for tests and estimation).
CVec path_mean(const PathFactors& pf, const CMat& w_eff, const CMat& f_user, const CVec& s_user);

// [J]_{ij} = 2 Re{ d_i^H C^{-1} d_j }. Throws "degenerate covariance" if C is
// singular beyond a tiny ridge.
Mat5 channel_fim(const MeanDerivatives& derivs, const CMat& cov);

struct PositionFim {
  Mat3 total = Mat3::Zero();            // subcarrier-weighted sum
  std::vector<Mat3> per_subcarrier;     // unweighted per-subcarrier contributions
};

// J(p) = sum_n w_n sum_paths T_l^T J_{n,l} T_l. `slices[l][n-1]` is the 5x5
// channel FIM of path l on subcarrier n; weights default to 1/Nc each.
PositionFim position_fim(const std::vector<std::vector<Mat5>>& slices,
                         const std::vector<geometry::PositionJacobian>& jacobians,
                         const std::vector<double>& subcarrier_weights = {});

// tr(J^{-1}) with the ridge regularization eps = 1e-10 tr(J)/3. Throws with
// the condition number if the ridge cannot make J invertible.
double trace_inverse(const Mat3& j, bool* regularized = nullptr);

struct UserFimSet {
  PositionFim all;   // every path
  PositionFim los;   // LoS subset (zero if the user has no LoS path)
  PositionFim nlos;  // NLoS subset
  bool has_los = false;
  bool has_nlos = false;
  double p_los = 1.0;
  int delta = 1;  // sampled LoS indicator
};

struct MscpebReport {
  std::vector<double> per_user_mscpeb;            // tr(J_all^{-1}), m^2
  std::vector<std::vector<double>> per_subcarrier_pelb;  // e_n(p) per user
  double aggregate = 0.0;                          // Eq.-(25)-style weighting
  bool regularized = false;
  bool lemma2_ok = true;  // e(p) <= mean_n e_n(p) + 1e-8 for every user
};

struct MscpebOptions {
  // false: literal exponent weighting p^delta, (1-p)^(1-delta);
  // true:  mixture weighting p * los + (1-p) * nlos.
  bool mixture = false;
};

MscpebReport mscpeb(const std::vector<UserFimSet>& users, const MscpebOptions& opts = {});

}  // namespace pingloc::fim
