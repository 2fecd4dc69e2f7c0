// SPDX-License-Identifier: Apache-2.0
#include "pingloc/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "pingloc/kernels.hpp"

namespace pingloc::channel {

NormalizedAngles normalized_angles(const ArrayConfig& cfg, double theta, double phi) {
  const double scale = cfg.spacing_d / cfg.wavelength_lambda_c;
  return {scale * std::cos(theta), scale * std::sin(theta) * std::cos(phi)};
}

CVec steering(const ArrayConfig& cfg, const SystemConfig& sys, int n, double theta, double phi) {
  if (n < 1 || n > sys.n_subcarriers) throw std::invalid_argument("subcarrier index out of range");
  const NormalizedAngles na = normalized_angles(cfg, theta, phi);
  const double beta = sys.squint(n);
  const double step_v = -2.0 * kPi * beta * na.elev;
  const double step_h = -2.0 * kPi * beta * na.azim;

  CVec ramp_v(cfg.n_v), ramp_h(cfg.n_h);
  kernels::cexp_ramp(0.0, step_v, {ramp_v.data(), size_t(cfg.n_v)});
  kernels::cexp_ramp(0.0, step_h, {ramp_h.data(), size_t(cfg.n_h)});

  CVec a(cfg.count());
  const double inv_sqrt_n = 1.0 / std::sqrt(double(cfg.count()));
  for (int ih = 0; ih < cfg.n_h; ++ih) {
    kernels::cscale(inv_sqrt_n * ramp_h[ih], {ramp_v.data(), size_t(cfg.n_v)},
                    {a.data() + ih * cfg.n_v, size_t(cfg.n_v)});
  }
  return a;
}

SteeringJet steering_jet(const ArrayConfig& cfg, const SystemConfig& sys, int n, double theta,
                         double phi, bool second_order) {
  SteeringJet jet;
  jet.a = steering(cfg, sys, n, theta, phi);
  const double scale = cfg.spacing_d / cfg.wavelength_lambda_c;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sf = std::sin(phi), cf = std::cos(phi);
  // First/second derivatives of the normalized angles.
  const double elev_t = -scale * st, elev_tt = -scale * ct;
  const double azim_t = scale * ct * cf, azim_tt = -scale * st * cf;
  const double azim_f = -scale * st * sf, azim_ff = -scale * st * cf;
  const cd jfac = -kJ * 2.0 * kPi * sys.squint(n);

  const int nv = cfg.n_v, nh = cfg.n_h, total = cfg.count();
  jet.d_theta.resize(total);
  jet.d_phi.resize(total);
  if (second_order) {
    jet.d2_theta.resize(total);
    jet.d2_phi.resize(total);
  }
  for (int ih = 0; ih < nh; ++ih) {
    for (int iv = 0; iv < nv; ++iv) {
      const int i = ih * nv + iv;
      const double wt = iv * elev_t + ih * azim_t;
      const double wf = ih * azim_f;
      jet.d_theta[i] = jet.a[i] * jfac * wt;
      jet.d_phi[i] = jet.a[i] * jfac * wf;
      if (second_order) {
        const double wtt = iv * elev_tt + ih * azim_tt;
        const double wff = ih * azim_ff;
        jet.d2_theta[i] = jet.a[i] * (jfac * jfac * wt * wt + jfac * wtt);
        jet.d2_phi[i] = jet.a[i] * (jfac * jfac * wf * wf + jfac * wff);
      }
    }
  }
  return jet;
}

CVec steering_tx(const ArrayConfig& cfg, const SystemConfig& sys, int n,
                 const PathParameters& path) {
  return steering(cfg, sys, n, path.theta_t, path.phi_t);
}

CVec steering_rx(const ArrayConfig& cfg, const SystemConfig& sys, int n,
                 const PathParameters& path) {
  return steering(cfg, sys, n, path.theta_r, path.phi_r);
}

CMat channel_matrix(const ArrayConfig& tx, const ArrayConfig& rx, const SystemConfig& sys,
                    const std::vector<PathParameters>& paths, int n) {
  if (paths.empty()) throw std::invalid_argument("channel needs at least one path");
  const double norm = std::sqrt(double(rx.count()) * double(tx.count()) / double(paths.size()));
  CMat h = CMat::Zero(rx.count(), tx.count());
  for (const auto& p : paths) {
    const cd gain =
        norm * p.alpha * std::polar(1.0, -2.0 * kPi * (sys.f_c + sys.offset(n)) * p.tau);
    const CVec ar = steering_rx(rx, sys, n, p);
    const CVec at = steering_tx(tx, sys, n, p);
    h.noalias() += gain * ar * at.transpose();
  }
  return h;
}

ChannelRealization synthesize(const ArrayConfig& tx, const ArrayConfig& rx,
                              const SystemConfig& sys,
                              const std::vector<PathParameters>& paths) {
  ChannelRealization r;
  r.paths = paths;
  r.per_subcarrier.reserve(sys.n_subcarriers);
  for (int n = 1; n <= sys.n_subcarriers; ++n)
    r.per_subcarrier.push_back(channel_matrix(tx, rx, sys, paths, n));
  return r;
}

cd subcarrier_correlation(const SystemConfig& sys, double tau, int n) {
  if (n < 1 || n > sys.n_subcarriers) throw std::invalid_argument("subcarrier index out of range");
  const double fn = sys.offset(n);
  const cd delay_term = std::polar(1.0, -2.0 * kPi * fn * tau);
  const cd squint_term = std::polar(1.0, -2.0 * kPi * fn / sys.f_c);
  return delay_term * squint_term * std::conj(squint_term);
}

}  // namespace pingloc::channel
