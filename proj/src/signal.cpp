// SPDX-License-Identifier: Apache-2.0
#include "pingloc/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace pingloc::signal {

double HybridBeamformer::max_modulus_error() const {
  double worst = 0.0;
  for (int j = 0; j < analog.cols(); ++j)
    for (int i = 0; i < analog.rows(); ++i)
      worst = std::max(worst, std::abs(std::abs(analog(i, j)) - 1.0));
  return worst;
}

double HybridBeamformer::power(int n) const { return effective(n).squaredNorm(); }

HybridBeamformer omni_precoder(int n_ant, int n_rf, int n_users, int ns, int nc,
                               double power_per_subcarrier) {
  HybridBeamformer f;
  f.n_streams = ns;
  f.analog = CMat::Ones(n_ant, n_rf);
  const int cols = n_users * ns;
  CMat bb = CMat::Zero(n_rf, cols);
  for (int j = 0; j < cols; ++j) bb(j % n_rf, j) = 1.0;
  // Each effective column is the all-ones vector times the digital weight.
  const double col_power = double(n_ant) * double(cols);
  bb *= std::sqrt(power_per_subcarrier / col_power);
  f.digital.assign(nc, bb);
  return f;
}

HybridBeamformer uninformed_combiner(int n_ant, int n_rf, int ns, int nc) {
  HybridBeamformer w;
  w.n_streams = ns;
  w.analog = CMat(n_ant, n_rf);
  for (int j = 0; j < n_rf; ++j)
    for (int i = 0; i < n_ant; ++i)
      w.analog(i, j) = std::polar(1.0, 2.0 * kPi * double(i) * double(j) / double(n_ant));
  CMat bb = CMat::Zero(n_rf, ns);
  for (int j = 0; j < ns; ++j) bb(j % n_rf, j) = 1.0;
  CMat eff = w.analog * bb;
  bb *= std::sqrt(double(n_ant) / eff.squaredNorm());
  w.digital.assign(nc, bb);
  return w;
}

PilotBlock make_pilots(int nc, int n_users, int ns, double sigma_u2, Rng& rng) {
  PilotBlock p;
  p.sigma_u2 = sigma_u2;
  p.n_symbols = ns;
  p.s.resize(nc);
  for (int n = 0; n < nc; ++n) {
    p.s[n].reserve(n_users);
    for (int k = 0; k < n_users; ++k) {
      CVec v(ns);
      for (int m = 0; m < ns; ++m)
        v[m] = std::polar(1.0, kPi / 4.0 + kPi / 2.0 * rng.uniform_int(0, 3));
      p.s[n].push_back(std::move(v));
    }
  }
  return p;
}

CVec signal_mean(const CMat& h_n, const CMat& w_eff, const CMat& f_user, const CVec& s_user) {
  if (h_n.cols() != f_user.rows())
    throw std::invalid_argument("signal_mean: channel/precoder dimension mismatch");
  if (h_n.rows() != w_eff.rows())
    throw std::invalid_argument("signal_mean: channel/combiner dimension mismatch");
  if (f_user.cols() != s_user.size())
    throw std::invalid_argument("signal_mean: precoder/pilot dimension mismatch");
  return w_eff.adjoint() * (h_n * (f_user * s_user));
}

ReceivedSignal synthesize_rx(const channel::ChannelRealization& ch,
                             const HybridBeamformer& precoder,
                             const HybridBeamformer& combiner_k, const PilotBlock& pilots,
                             int user, Rng& rng) {
  const int nc = int(ch.per_subcarrier.size());
  const int n_users = precoder.users();
  ReceivedSignal rx;
  rx.per_subcarrier.reserve(nc);
  for (int n = 1; n <= nc; ++n) {
    const CMat& h = ch.at(n);
    const CMat w = combiner_k.effective(n);
    if (h.rows() != w.rows()) throw std::invalid_argument("synthesize_rx: combiner rows");
    CVec antenna_sig = CVec::Zero(h.rows());
    for (int i = 0; i < n_users; ++i)
      antenna_sig += h * (precoder.user_block(n, i) * pilots.of(n, i));
    for (int a = 0; a < antenna_sig.size(); ++a)
      antenna_sig[a] += rng.cnormal(pilots.sigma_u2);
    rx.per_subcarrier.push_back(w.adjoint() * antenna_sig);
  }
  return rx;
}

NoiseCovariance interference_covariance(const channel::ChannelRealization& ch,
                                        const HybridBeamformer& precoder,
                                        const HybridBeamformer& combiner_k, int user,
                                        double sigma_u2) {
  const int nc = int(ch.per_subcarrier.size());
  const int n_users = precoder.users();
  NoiseCovariance cov;
  cov.per_subcarrier.reserve(nc);
  for (int n = 1; n <= nc; ++n) {
    const CMat& h = ch.at(n);
    const CMat w = combiner_k.effective(n);
    CMat inter = CMat::Zero(h.cols(), h.cols());
    for (int i = 0; i < n_users; ++i) {
      if (i == user) continue;
      const CMat fi = precoder.user_block(n, i);
      inter.noalias() += fi * fi.adjoint();
    }
    CMat c = w.adjoint() * h * inter * h.adjoint() * w + sigma_u2 * (w.adjoint() * w);
    c = 0.5 * (c + c.adjoint().eval());  // kill 1e-16 asymmetry
    cov.per_subcarrier.push_back(std::move(c));
  }
  return cov;
}

CVec concatenate(const std::vector<CVec>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("concatenate: no subcarrier blocks");
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.size();
  CVec out(total);
  Eigen::Index at = 0;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    out.segment(at, it->size()) = *it;
    at += it->size();
  }
  return out;
}

CVec concatenate(const ReceivedSignal& rx) { return concatenate(rx.per_subcarrier); }

std::vector<CVec> split_concatenated(const CVec& stacked, int nc, int ns) {
  if (stacked.size() != Eigen::Index(nc) * ns)
    throw std::invalid_argument("split_concatenated: size mismatch");
  std::vector<CVec> blocks(nc);
  for (int n = 0; n < nc; ++n) blocks[n] = stacked.segment((nc - 1 - n) * ns, ns);
  return blocks;
}

}  // namespace pingloc::signal
