// SPDX-License-Identifier: Apache-2.0
#include "pingloc/sdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pingloc::sdp {

namespace {

CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint().eval()); }

}  // namespace

int SdpProblem::add_vars(int count) {
  const int start = n_vars_;
  n_vars_ += count;
  return start;
}

int SdpProblem::add_symmetric_variable(int dim) {
  MatVar mv;
  mv.dim = dim;
  mv.hermitian = false;
  mv.start = add_vars(dim * (dim + 1) / 2);
  mat_vars_.push_back(mv);
  return int(mat_vars_.size()) - 1;
}

int SdpProblem::add_hermitian_variable(int dim) {
  MatVar mv;
  mv.dim = dim;
  mv.hermitian = true;
  mv.start = add_vars(dim * dim);
  mat_vars_.push_back(mv);
  return int(mat_vars_.size()) - 1;
}

void SdpProblem::add_affine_block(CMat f0, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= n_vars_) throw std::invalid_argument("affine term: bad variable");
    if (t.coeff.rows() != f0.rows() || t.coeff.cols() != f0.cols())
      throw std::invalid_argument("affine term: coefficient shape mismatch");
  }
  affine_blocks_.push_back({std::move(f0), std::move(terms)});
}

void SdpProblem::add_real_affine_block(RMat f0, std::vector<RealTerm> terms) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= n_vars_) throw std::invalid_argument("affine term: bad variable");
    if (t.coeff.rows() != f0.rows() || t.coeff.cols() != f0.cols())
      throw std::invalid_argument("affine term: coefficient shape mismatch");
  }
  real_affine_blocks_.push_back({std::move(f0), std::move(terms)});
}

void SdpProblem::add_inequality(std::vector<std::pair<int, double>> a, double b) {
  inequalities_.push_back({std::move(a), b});
}

void SdpProblem::add_objective_term(int var, double coeff) {
  objective_.emplace_back(var, coeff);
}

const RVec SdpProblem::objective() const {
  RVec c = RVec::Zero(n_vars_);
  for (const auto& [v, w] : objective_) c[v] += w;
  return c;
}

namespace {
// Offsets within a matrix variable: diag entries first, then strict upper
// triangle column-major; Hermitian variables interleave (Re, Im).
int upper_index(int dim, int p, int q) {
  // number of strict-upper entries in columns < q, plus p
  (void)dim;
  return q * (q - 1) / 2 + p;
}
}  // namespace

int SdpProblem::param_diag(int mv, int p) const { return mat_vars_.at(mv).start + p; }

int SdpProblem::param_re(int mv, int p, int q) const {
  const MatVar& m = mat_vars_.at(mv);
  const int off = upper_index(m.dim, p, q);
  return m.start + m.dim + (m.hermitian ? 2 * off : off);
}

int SdpProblem::param_im(int mv, int p, int q) const {
  const MatVar& m = mat_vars_.at(mv);
  if (!m.hermitian) throw std::invalid_argument("param_im on a real symmetric variable");
  return m.start + m.dim + 2 * upper_index(m.dim, p, q) + 1;
}

CMat SdpProblem::extract(int mv, const RVec& x) const {
  const MatVar& m = mat_vars_.at(mv);
  CMat out = CMat::Zero(m.dim, m.dim);
  for (int p = 0; p < m.dim; ++p) out(p, p) = x[param_diag(mv, p)];
  for (int q = 1; q < m.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      cd v;
      if (m.hermitian)
        v = cd{x[param_re(mv, p, q)], x[param_im(mv, p, q)]};
      else
        v = cd{x[param_re(mv, p, q)], 0.0};
      out(p, q) = v;
      out(q, p) = std::conj(v);
    }
  }
  return out;
}

void SdpProblem::pack(int mv, const CMat& value, RVec& x) const {
  const MatVar& m = mat_vars_.at(mv);
  for (int p = 0; p < m.dim; ++p) x[param_diag(mv, p)] = std::real(value(p, p));
  for (int q = 1; q < m.dim; ++q) {
    for (int p = 0; p < q; ++p) {
      x[param_re(mv, p, q)] = std::real(value(p, q));
      if (m.hermitian) x[param_im(mv, p, q)] = std::imag(value(p, q));
    }
  }
}

int SdpProblem::barrier_complexity() const {
  int m = 0;
  for (const auto& v : mat_vars_) m += v.dim;
  for (const auto& b : affine_blocks_) m += int(b.f0.rows());
  for (const auto& b : real_affine_blocks_) m += int(b.f0.rows());
  m += int(inequalities_.size());
  return m;
}

namespace {

struct Eval {
  bool feasible = false;
  double phi = 0.0;
  RVec grad;
  RMat hess;
};

// log det and inverse via Cholesky; returns false if not PD.
bool chol_inverse(const CMat& s, double& logdet, CMat& inv) {
  Eigen::LLT<CMat> llt(s);
  if (llt.info() != Eigen::Success) return false;
  const auto& l = llt.matrixL();
  logdet = 0.0;
  for (int i = 0; i < s.rows(); ++i) {
    const double d = std::real(l(i, i));
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    logdet += 2.0 * std::log(d);
  }
  inv = llt.solve(CMat::Identity(s.rows(), s.cols()));
  return true;
}

// Closed-form barrier derivatives of -logdet(X) for a packed matrix variable.
void matvar_derivatives(const SdpProblem& prob, int mv_idx, const CMat& inv, Eval& ev,
                        bool want_hess) {
  const auto& mv = prob.mat_vars()[mv_idx];
  const int d = mv.dim;
  // Gradient.
  for (int p = 0; p < d; ++p) ev.grad[prob.param_diag(mv_idx, p)] += -std::real(inv(p, p));
  for (int q = 1; q < d; ++q) {
    for (int p = 0; p < q; ++p) {
      ev.grad[prob.param_re(mv_idx, p, q)] += -2.0 * std::real(inv(p, q));
      if (mv.hermitian) ev.grad[prob.param_im(mv_idx, p, q)] += -2.0 * std::imag(inv(p, q));
    }
  }
  if (!want_hess) return;

  // Enumerate parameters as (kind, p, q): kind 0 = diag, 1 = Re, 2 = Im.
  struct P {
    int idx, kind, p, q;
  };
  std::vector<P> params;
  params.reserve(mv.param_count());
  for (int p = 0; p < d; ++p) params.push_back({prob.param_diag(mv_idx, p), 0, p, p});
  for (int q = 1; q < d; ++q)
    for (int p = 0; p < q; ++p) {
      params.push_back({prob.param_re(mv_idx, p, q), 1, p, q});
      if (mv.hermitian) params.push_back({prob.param_im(mv_idx, p, q), 2, p, q});
    }

  // tr(M E_i M E_j) in terms of entries of M = X^{-1}.
  auto pair_entry = [&](const P& a, const P& b) -> double {
    const auto M = [&](int r, int s) { return inv(r, s); };
    if (a.kind == 0 && b.kind == 0) return std::norm(M(a.p, b.p));
    if (a.kind == 0 || b.kind == 0) {
      const P& dg = (a.kind == 0) ? a : b;
      const P& od = (a.kind == 0) ? b : a;
      const cd z = M(dg.p, od.p) * std::conj(M(dg.p, od.q));
      if (od.kind == 1) return 2.0 * std::real(z);
      return -2.0 * std::imag(z);
    }
    const cd z1 = M(a.q, b.p) * M(b.q, a.p);
    const cd z3 = M(a.q, b.q) * M(b.p, a.p);
    if (a.kind == 1 && b.kind == 1) return 2.0 * std::real(z1) + 2.0 * std::real(z3);
    if (a.kind == 2 && b.kind == 2) return -2.0 * std::real(z1) + 2.0 * std::real(z3);
    if (a.kind == 1 && b.kind == 2) return -2.0 * std::imag(z1) + 2.0 * std::imag(z3);
    // a.kind == 2 && b.kind == 1: symmetric in (i,j), swap roles
    const cd w1 = M(b.q, a.p) * M(a.q, b.p);
    const cd w3 = M(b.q, a.q) * M(a.p, b.p);
    return -2.0 * std::imag(w1) + 2.0 * std::imag(w3);
  };

  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i; j < params.size(); ++j) {
      const double h = pair_entry(params[i], params[j]);
      ev.hess(params[i].idx, params[j].idx) += h;
      if (j != i) ev.hess(params[j].idx, params[i].idx) += h;
    }
}

Eval evaluate(const SdpProblem& prob, const RVec& x, bool want_hess) {
  const int n = prob.n_vars();
  Eval ev;
  ev.grad = RVec::Zero(n);
  if (want_hess) ev.hess = RMat::Zero(n, n);

  for (std::size_t mv = 0; mv < prob.mat_vars().size(); ++mv) {
    const CMat xm = prob.extract(int(mv), x);
    double logdet;
    CMat inv;
    if (!chol_inverse(xm, logdet, inv)) return ev;
    ev.phi -= logdet;
    matvar_derivatives(prob, int(mv), inv, ev, want_hess);
  }

  for (const auto& blk : prob.affine_blocks()) {
    CMat s = blk.f0;
    for (const auto& t : blk.terms) s += x[t.var] * t.coeff;
    s = hermitize(s);
    double logdet;
    CMat inv;
    if (!chol_inverse(s, logdet, inv)) return ev;
    ev.phi -= logdet;
    for (const auto& t : blk.terms)
      ev.grad[t.var] += -std::real((inv * t.coeff).trace());
    if (want_hess) {
      std::vector<CMat> w(blk.terms.size());
      for (std::size_t i = 0; i < blk.terms.size(); ++i) w[i] = inv * blk.terms[i].coeff;
      for (std::size_t i = 0; i < blk.terms.size(); ++i)
        for (std::size_t j = i; j < blk.terms.size(); ++j) {
          const double h = std::real((w[i] * w[j]).trace());
          ev.hess(blk.terms[i].var, blk.terms[j].var) += h;
          if (blk.terms[i].var != blk.terms[j].var)
            ev.hess(blk.terms[j].var, blk.terms[i].var) += h;
        }
    }
  }

  for (const auto& ineq : prob.inequalities()) {
    double r = ineq.b;
    for (const auto& [v, w] : ineq.a) r -= w * x[v];
    if (!(r > 0.0) || !std::isfinite(r)) return ev;
    ev.phi -= std::log(r);
    for (const auto& [v, w] : ineq.a) ev.grad[v] += w / r;
    if (want_hess)
      for (const auto& [vi, wi] : ineq.a)
        for (const auto& [vj, wj] : ineq.a) ev.hess(vi, vj) += wi * wj / (r * r);
  }

  ev.feasible = true;
  return ev;
}

bool strictly_feasible(const SdpProblem& prob, const RVec& x) {
  return evaluate(prob, x, false).feasible;
}

RVec default_start(const SdpProblem& prob) {
  RVec x = RVec::Zero(prob.n_vars());
  for (std::size_t mv = 0; mv < prob.mat_vars().size(); ++mv)
    prob.pack(int(mv), CMat::Identity(prob.mat_vars()[mv].dim, prob.mat_vars()[mv].dim), x);
  return x;
}

// Newton centering for f(x) = t c'x + phi(x). Returns Newton steps taken.
int center(const SdpProblem& prob, const RVec& c, double t, RVec& x, int max_steps) {
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    Eval ev = evaluate(prob, x, true);
    if (!ev.feasible) throw std::logic_error("centering left the feasible region");
    RVec g = t * c + ev.grad;
    Eigen::LLT<RMat> llt(ev.hess);
    RVec dx;
    if (llt.info() == Eigen::Success) {
      dx = -llt.solve(g);
    } else {
      RMat h = ev.hess;
      const double jitter = 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
      h.diagonal().array() += jitter;
      dx = -h.ldlt().solve(g);
    }
    const double decrement2 = -g.dot(dx);
    if (!(decrement2 > 2e-11)) break;

    const double f0 = t * c.dot(x) + ev.phi;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      RVec xn = x + alpha * dx;
      Eval en = evaluate(prob, xn, false);
      if (en.feasible) {
        const double fn = t * c.dot(xn) + en.phi;
        if (fn <= f0 + 0.25 * alpha * g.dot(dx) + 1e-12 * std::abs(f0)) {
          x = xn;
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  return steps + 1;
}

SdpSolution solve_from(const SdpProblem& prob, double tol, int max_iter, RVec x) {
  const RVec c = prob.objective();
  const int m = std::max(1, prob.barrier_complexity());

  SdpSolution sol;
  sol.x = x;
  double t = double(m) / std::max(1.0, std::abs(c.dot(x)));
  int total_steps = 0;
  for (int outer = 0; outer < 60; ++outer) {
    const int budget = max_iter - total_steps;
    if (budget <= 0) {
      sol.status = Status::MaxIter;
      break;
    }
    total_steps += center(prob, c, t, x, std::min(budget, 60));
    sol.x = x;
    sol.outer_objectives.push_back(c.dot(x));
    sol.duality_gap = double(m) / t;
    if (sol.duality_gap <= tol) {
      sol.status = Status::Optimal;
      break;
    }
    t *= 10.0;
  }
  if (sol.duality_gap > tol && sol.status != Status::MaxIter) sol.status = Status::MaxIter;
  sol.objective = c.dot(sol.x);
  sol.iterations = total_steps;
  return sol;
}

// Phase-1: minimize s such that every block plus s*I is PD. Matrix variables
// are re-expressed as affine blocks over their own parameters.
bool phase1(const SdpProblem& prob, RVec& x0) {
  SdpProblem aux;
  const int n = prob.n_vars();
  aux.add_vars(n);
  const int s_var = aux.add_vars(1);
  aux.add_objective_term(s_var, 1.0);

  auto basis_terms = [&](int mv_idx) {
    const auto& mv = prob.mat_vars()[mv_idx];
    std::vector<SdpProblem::Term> terms;
    for (int p = 0; p < mv.dim; ++p) {
      CMat e = CMat::Zero(mv.dim, mv.dim);
      e(p, p) = 1.0;
      terms.push_back({prob.param_diag(mv_idx, p), e});
    }
    for (int q = 1; q < mv.dim; ++q)
      for (int p = 0; p < q; ++p) {
        CMat e = CMat::Zero(mv.dim, mv.dim);
        e(p, q) = 1.0;
        e(q, p) = 1.0;
        terms.push_back({prob.param_re(mv_idx, p, q), e});
        if (mv.hermitian) {
          CMat ei = CMat::Zero(mv.dim, mv.dim);
          ei(p, q) = kJ;
          ei(q, p) = -kJ;
          terms.push_back({prob.param_im(mv_idx, p, q), ei});
        }
      }
    terms.push_back({s_var, CMat::Identity(mv.dim, mv.dim)});
    return terms;
  };

  for (std::size_t mv = 0; mv < prob.mat_vars().size(); ++mv) {
    const int dim = prob.mat_vars()[mv].dim;
    aux.add_affine_block(CMat::Zero(dim, dim), basis_terms(int(mv)));
  }
  for (const auto& blk : prob.affine_blocks()) {
    auto terms = blk.terms;
    terms.push_back({s_var, CMat::Identity(blk.f0.rows(), blk.f0.cols())});
    aux.add_affine_block(blk.f0, terms);
  }
  for (const auto& ineq : prob.inequalities()) {
    auto a = ineq.a;
    a.emplace_back(s_var, -1.0);
    aux.add_inequality(std::move(a), ineq.b);
  }
  // Keep the auxiliary objective bounded: s >= -1.
  aux.add_inequality({{s_var, -1.0}}, 1.0);

  // Strictly feasible start for the auxiliary problem: shift by the worst
  // eigenvalue found at x0.
  double shift = 0.0;
  for (std::size_t mv = 0; mv < prob.mat_vars().size(); ++mv) {
    Eigen::SelfAdjointEigenSolver<CMat> es(prob.extract(int(mv), x0));
    shift = std::max(shift, -es.eigenvalues().minCoeff());
  }
  for (const auto& blk : prob.affine_blocks()) {
    CMat s = blk.f0;
    for (const auto& t : blk.terms) s += x0[t.var] * t.coeff;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(s));
    shift = std::max(shift, -es.eigenvalues().minCoeff());
  }
  for (const auto& ineq : prob.inequalities()) {
    double r = ineq.b;
    for (const auto& [v, w] : ineq.a) r -= w * x0[v];
    shift = std::max(shift, -r);
  }

  RVec xs = RVec::Zero(n + 1);
  xs.head(n) = x0;
  xs[s_var] = shift + 1.0 + 0.1 * std::abs(shift);

  SdpSolution s1 = solve_from(aux, 1e-4, 300, xs);
  if (s1.x[s_var] < -1e-9) {
    x0 = s1.x.head(n);
    return true;
  }
  return false;
}

}  // namespace

SdpSolution solve(const SdpProblem& prob, double tol, int max_iter, const RVec* hint) {
  RVec x = hint ? *hint : default_start(prob);
  if (int(x.size()) != prob.n_vars()) throw std::invalid_argument("solve: hint size mismatch");
  if (!strictly_feasible(prob, x)) {
    if (!phase1(prob, x)) {
      SdpSolution sol;
      sol.x = x;
      sol.status = Status::Infeasible;
      sol.objective = prob.objective().dot(x);
      return sol;
    }
  }
  return solve_from(prob, tol, max_iter, std::move(x));
}

CheckReport check_solution(const SdpProblem& prob, const RVec& x) {
  CheckReport rep;
  double worst = std::numeric_limits<double>::infinity();
  auto account = [&](const CMat& s) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(s));
    worst = std::min(worst, es.eigenvalues().minCoeff() / (1.0 + s.norm()));
  };
  for (std::size_t mv = 0; mv < prob.mat_vars().size(); ++mv) account(prob.extract(int(mv), x));
  for (const auto& blk : prob.affine_blocks()) {
    CMat s = blk.f0;
    for (const auto& t : blk.terms) s += x[t.var] * t.coeff;
    account(s);
  }
  rep.worst_block_eig = std::isfinite(worst) ? worst : 0.0;
  double worst_ineq = 0.0;
  for (const auto& ineq : prob.inequalities()) {
    double lhs = -ineq.b;
    for (const auto& [v, w] : ineq.a) lhs += w * x[v];
    worst_ineq = std::max(worst_ineq, lhs);
  }
  rep.worst_inequality = worst_ineq;
  rep.ok = rep.worst_block_eig >= -1e-7 && rep.worst_inequality <= 1e-6;
  return rep;
}

std::string dump(const SdpProblem& prob) {
  std::ostringstream os;
  os << "sdp problem: " << prob.n_vars() << " vars, " << prob.mat_vars().size()
     << " matrix vars, " << prob.affine_blocks().size() << " affine blocks, "
     << prob.inequalities().size() << " inequalities\n";
  for (const auto& mv : prob.mat_vars())
    os << "  matvar dim=" << mv.dim << (mv.hermitian ? " hermitian" : " symmetric")
       << " start=" << mv.start << "\n";
  for (const auto& blk : prob.affine_blocks()) {
    os << "  block dim=" << blk.f0.rows() << " terms=" << blk.terms.size() << "\n";
    os << "    f0 =\n" << blk.f0 << "\n";
    for (const auto& t : blk.terms) os << "    + x[" << t.var << "] *\n" << t.coeff << "\n";
  }
  for (const auto& ineq : prob.inequalities()) {
    os << "  ineq:";
    for (const auto& [v, w] : ineq.a) os << " " << w << "*x[" << v << "]";
    os << " <= " << ineq.b << "\n";
  }
  const RVec c = prob.objective();
  os << "  min c'x, ||c||_1 = " << c.cwiseAbs().sum() << "\n";
  return os.str();
}

}  // namespace pingloc::sdp
