// SPDX-License-Identifier: Apache-2.0
//
// Small dense semidefinite programs: minimize c'x subject to PSD matrix
// variables, affine PSD constraint blocks and linear inequalities, solved by
// a log-det barrier interior-point method with Newton centering. Problems are
// tiny (block dims up to ~50); everything is dense and deterministic.
//
// Matrix variables are parametrized by real scalars. A real symmetric
// variable of dimension d contributes d diagonal parameters followed by the
// strict upper triangle (p<q, column-major). A complex Hermitian variable
// adds (Re, Im) pairs for each off-diagonal entry. Complex Hermitian
// constraint data is handled natively (no explicit 2n x 2n realification;
// the barrier works on the complex Cholesky factors directly, which is the
// same standard embedding done implicitly).
#pragma once

#include <string>
#include <vector>

#include "pingloc/types.hpp"

namespace pingloc::sdp {

enum class Status { Optimal, MaxIter, Infeasible };

class SdpProblem {
 public:
  struct Term {
    int var;
    CMat coeff;  // Hermitian (or real symmetric) coefficient matrix
  };

  struct MatVar {
    int start = 0;  // first parameter index
    int dim = 0;
    bool hermitian = false;  // complex Hermitian vs real symmetric
    int param_count() const { return hermitian ? dim * dim : dim * (dim + 1) / 2; }
  };

  struct AffineBlock {
    CMat f0;
    std::vector<Term> terms;
  };

  struct RealTerm {
    int var;
    RMat coeff;  // symmetric coefficient matrix
  };

  // Real symmetric affine constraint block; cheaper than the complex path.
  struct RealAffineBlock {
    RMat f0;
    std::vector<RealTerm> terms;
  };

  struct Inequality {
    std::vector<std::pair<int, double>> a;  // sum a_i x_i <= b
    double b = 0.0;
  };

  int add_vars(int count);
  int add_symmetric_variable(int dim);  // returns matrix-variable index
  int add_hermitian_variable(int dim);
  void add_affine_block(CMat f0, std::vector<Term> terms);
  void add_real_affine_block(RMat f0, std::vector<RealTerm> terms);
  void add_inequality(std::vector<std::pair<int, double>> a, double b);
  void add_objective_term(int var, double coeff);

  int n_vars() const { return n_vars_; }
  const std::vector<MatVar>& mat_vars() const { return mat_vars_; }
  const std::vector<AffineBlock>& affine_blocks() const { return affine_blocks_; }
  const std::vector<RealAffineBlock>& real_affine_blocks() const { return real_affine_blocks_; }
  const std::vector<Inequality>& inequalities() const { return inequalities_; }
  const RVec objective() const;

  // Parameter indices of matrix-variable entries.
  int param_diag(int mv, int p) const;
  int param_re(int mv, int p, int q) const;
  int param_im(int mv, int p, int q) const;

  CMat extract(int mv, const RVec& x) const;
  void pack(int mv, const CMat& value, RVec& x) const;

  // Barrier dimension: sum of block dims plus inequality count.
  int barrier_complexity() const;

 private:
  int n_vars_ = 0;
  std::vector<MatVar> mat_vars_;
  std::vector<AffineBlock> affine_blocks_;
  std::vector<RealAffineBlock> real_affine_blocks_;
  std::vector<Inequality> inequalities_;
  std::vector<std::pair<int, double>> objective_;
};

struct SdpSolution {
  RVec x;
  double objective = 0.0;
  Status status = Status::MaxIter;
  double duality_gap = 0.0;
  int iterations = 0;  // total Newton steps
  // Objective value at the end of each outer (centering) phase.
  std::vector<double> outer_objectives;
};

SdpSolution solve(const SdpProblem& prob, double tol = 1e-7, int max_iter = 400,
                  const RVec* hint = nullptr);

struct CheckReport {
  // min over blocks of lambda_min(S) / (1 + ||S||_F); negative means violation
  double worst_block_eig = 0.0;
  double worst_inequality = 0.0;  // max over a'x - b (positive means violation)
  bool ok = false;
};

CheckReport check_solution(const SdpProblem& prob, const RVec& x);

// Human-readable ASCII form for debugging.
std::string dump(const SdpProblem& prob);

}  // namespace pingloc::sdp
