// SPDX-License-Identifier: Apache-2.0
//
// Hybrid beamformer containers, multi-user pilot synthesis, received-signal
// generation, interference-plus-noise covariance, and the multi-subcarrier
// stacking used by the bound and estimation code.
#pragma once

#include <vector>

#include "pingloc/channel.hpp"
#include "pingloc/rng.hpp"
#include "pingloc/types.hpp"

namespace pingloc::signal {

struct HybridBeamformer {
  CMat analog;                // (antennas x RF chains), unit-modulus entries
  std::vector<CMat> digital;  // per subcarrier: (RF chains x streams)
  int n_streams = 0;          // streams per user (Ns)

  // analog * digital[n-1]
  CMat effective(int n) const { return analog * digital.at(n - 1); }
  // Columns [k*Ns, (k+1)*Ns) of the effective matrix (0-based user k).
  CMat user_block(int n, int k) const {
    return analog * digital.at(n - 1).middleCols(k * n_streams, n_streams);
  }
  int users(int n = 1) const { return int(digital.at(n - 1).cols()) / n_streams; }

  double max_modulus_error() const;       // max | |analog_ij| - 1 |
  double power(int n) const;              // ||effective(n)||_F^2
};

// Round-1 transmit beamformer: all-ones-phase analog, scaled identity-column
// digital part, ||F_RF F_BB[n]||_F^2 = power_per_subcarrier.
HybridBeamformer omni_precoder(int n_ant, int n_rf, int n_users, int ns, int nc,
                               double power_per_subcarrier);

// Uninformed receive side: DFT-phase analog columns (all-ones analog would
// make every combined stream identical and the noise covariance singular),
// identity-column digital, normalized to ||W_RF W_BB[n]||_F^2 = n_ant.
HybridBeamformer uninformed_combiner(int n_ant, int n_rf, int ns, int nc);

struct PilotBlock {
  // s[n-1][k]: unit-modulus pilot vector (length Ns) of user k on subcarrier n.
  std::vector<std::vector<CVec>> s;
  double sigma_u2 = 0.0;  // receiver noise variance per antenna
  int n_symbols = 0;

  const CVec& of(int n, int k) const { return s.at(n - 1).at(k); }
};

PilotBlock make_pilots(int nc, int n_users, int ns, double sigma_u2, Rng& rng);

struct ReceivedSignal {
  std::vector<CVec> per_subcarrier;  // Y_k[n], length Ns each

  const CVec& at(int n) const { return per_subcarrier.at(n - 1); }
};

struct NoiseCovariance {
  std::vector<CMat> per_subcarrier;  // Hermitian PSD, Ns x Ns

  const CMat& at(int n) const { return per_subcarrier.at(n - 1); }
};

// W^H H_k F_k s_k for one subcarrier: the noiseless mean of user k's signal.
CVec signal_mean(const CMat& h_n, const CMat& w_eff, const CMat& f_user, const CVec& s_user);

// Full received signal of user k (mean + inter-user interference + combined
// noise) on every subcarrier.
ReceivedSignal synthesize_rx(const channel::ChannelRealization& ch,
                             const HybridBeamformer& precoder,
                             const HybridBeamformer& combiner_k, const PilotBlock& pilots,
                             int user, Rng& rng);

// C_k[n] = W^H H (sum_{i!=k} F_i F_i^H) H^H W + sigma_u^2 W^H W, symmetrized.
NoiseCovariance interference_covariance(const channel::ChannelRealization& ch,
                                        const HybridBeamformer& precoder,
                                        const HybridBeamformer& combiner_k, int user,
                                        double sigma_u2);

// Stack per-subcarrier blocks in descending subcarrier order Nc, Nc-1, ..., 1.
CVec concatenate(const ReceivedSignal& rx);
CVec concatenate(const std::vector<CVec>& blocks);
std::vector<CVec> split_concatenated(const CVec& stacked, int nc, int ns);

}  // namespace pingloc::signal
