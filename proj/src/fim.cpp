// SPDX-License-Identifier: Apache-2.0
#include "pingloc/fim.hpp"

#include <cmath>
#include <stdexcept>

namespace pingloc::fim {

PathFactors path_factors(const channel::ArrayConfig& tx, const channel::ArrayConfig& rx,
                         const channel::SystemConfig& sys, const channel::PathParameters& path,
                         int total_paths, int n) {
  PathFactors pf;
  pf.omega = 2.0 * kPi * (sys.f_c + sys.offset(n));
  const double norm = std::sqrt(double(rx.count()) * double(tx.count()) / double(total_paths));
  pf.gain = norm * path.alpha * std::polar(1.0, -pf.omega * path.tau);

  const channel::SteeringJet jr = channel::steering_jet(rx, sys, n, path.theta_r, path.phi_r);
  const channel::SteeringJet jt = channel::steering_jet(tx, sys, n, path.theta_t, path.phi_t);
  pf.a_r = jr.a;
  pf.a_t = jt.a;

  pf.coeff = {-kJ * pf.omega, cd{1.0}, cd{1.0}, cd{1.0}, cd{1.0}};
  pf.p = {jr.a, jr.a, jr.a, jr.d_theta, jr.d_phi};
  pf.q = {jt.a, jt.d_theta, jt.d_phi, jt.a, jt.a};
  return pf;
}

MeanDerivatives mean_derivatives(const PathFactors& pf, const CMat& w_eff, const CMat& f_user,
                                 const CVec& s_user) {
  const CVec x = f_user * s_user;
  MeanDerivatives md;
  for (int i = 0; i < kNumEta; ++i) {
    const cd tx_scalar = pf.q[i].transpose() * x;
    md.d[i] = (pf.gain * pf.coeff[i] * tx_scalar) * (w_eff.adjoint() * pf.p[i]);
  }
  return md;
}

CVec path_mean(const PathFactors& pf, const CMat& w_eff, const CMat& f_user, const CVec& s_user) {
  const CVec x = f_user * s_user;
  const cd tx_scalar = pf.a_t.transpose() * x;
  return (pf.gain * tx_scalar) * (w_eff.adjoint() * pf.a_r);
}

Mat5 channel_fim(const MeanDerivatives& derivs, const CMat& cov) {
  const Eigen::Index ns = cov.rows();
  const double scale = std::real(cov.trace()) / double(ns);
  const double ridge = std::max(1e-300, 1e-12 * scale);
  CMat reg = cov + ridge * CMat::Identity(ns, ns);
  Eigen::LLT<CMat> llt(reg);
  if (llt.info() != Eigen::Success) throw std::runtime_error("degenerate covariance");

  CMat dmat(ns, kNumEta);
  for (int i = 0; i < kNumEta; ++i) dmat.col(i) = derivs.d[i];
  const CMat solved = llt.solve(dmat);
  const CMat gram = dmat.adjoint() * solved;
  // Solutions should be finite; a singular covariance shows up as a blow-up.
  if (!gram.allFinite()) throw std::runtime_error("degenerate covariance");

  Mat5 j;
  for (int i = 0; i < kNumEta; ++i)
    for (int k = 0; k < kNumEta; ++k) j(i, k) = 2.0 * std::real(gram(i, k));
  return 0.5 * (j + j.transpose().eval());
}

PositionFim position_fim(const std::vector<std::vector<Mat5>>& slices,
                         const std::vector<geometry::PositionJacobian>& jacobians,
                         const std::vector<double>& subcarrier_weights) {
  if (slices.size() != jacobians.size())
    throw std::invalid_argument("position_fim: one Jacobian per path required");
  if (slices.empty()) throw std::invalid_argument("position_fim: no paths");
  const std::size_t nc = slices.front().size();
  std::vector<double> w = subcarrier_weights;
  if (w.empty()) w.assign(nc, 1.0 / double(nc));
  if (w.size() != nc) throw std::invalid_argument("position_fim: weight count mismatch");

  PositionFim out;
  out.per_subcarrier.assign(nc, Mat3::Zero());
  for (std::size_t l = 0; l < slices.size(); ++l) {
    if (slices[l].size() != nc) throw std::invalid_argument("position_fim: ragged slices");
    const Mat53& t = jacobians[l].d_eta_d_p;
    for (std::size_t n = 0; n < nc; ++n)
      out.per_subcarrier[n] += t.transpose() * slices[l][n] * t;
  }
  for (std::size_t n = 0; n < nc; ++n) out.total += w[n] * out.per_subcarrier[n];
  return out;
}

double trace_inverse(const Mat3& j, bool* regularized) {
  if (!j.allFinite()) throw std::runtime_error("position FIM not finite");
  const double eps = 1e-10 * j.trace() / 3.0;
  if (!(eps > 0.0)) throw std::runtime_error("position FIM has non-positive trace");
  const Mat3 reg = j + eps * Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat3> es(reg);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmax / lmin > 1e15)
    throw std::runtime_error("position FIM singular beyond regularization, condition number " +
                             std::to_string(lmax / std::max(lmin, 1e-300)));
  if (regularized) {
    Eigen::SelfAdjointEigenSolver<Mat3> raw(j);
    *regularized = raw.eigenvalues().minCoeff() < 10.0 * eps;
  }
  return es.eigenvalues().cwiseInverse().sum();
}

MscpebReport mscpeb(const std::vector<UserFimSet>& users, const MscpebOptions& opts) {
  if (users.empty()) throw std::invalid_argument("mscpeb: no users");
  MscpebReport rep;
  double agg = 0.0;
  for (const auto& u : users) {
    bool reg = false;
    const double full = trace_inverse(u.all.total, &reg);
    rep.regularized = rep.regularized || reg;
    rep.per_user_mscpeb.push_back(full);

    std::vector<double> en;
    double mean_en = 0.0;
    for (const auto& jn : u.all.per_subcarrier) {
      en.push_back(trace_inverse(jn));
      mean_en += en.back();
    }
    mean_en /= double(en.size());
    if (full > mean_en + 1e-8) rep.lemma2_ok = false;
    rep.per_subcarrier_pelb.push_back(std::move(en));

    const double p = u.p_los;
    double los_term = 0.0, nlos_term = 0.0;
    if (u.has_los) los_term = trace_inverse(u.los.total);
    if (u.has_nlos) nlos_term = trace_inverse(u.nlos.total);
    if (opts.mixture) {
      agg += p * los_term + (1.0 - p) * nlos_term;
    } else {
      agg += std::pow(p, double(u.delta)) * los_term +
             std::pow(1.0 - p, 1.0 - double(u.delta)) * nlos_term;
    }
  }
  rep.aggregate = agg / double(users.size());
  return rep;
}

}  // namespace pingloc::fim
