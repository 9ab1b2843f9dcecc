// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

// Dense conic programs over K = R^p_+ x S^{n_1}_+ x ... x S^{n_k}_+.
//
//   primal:  minimize  <c, x>   s.t.  A x = b,          x in K
//   dual:    maximize  <b, y>   s.t.  c - A^T y = s,    s in K
//
// Symmetric matrices are stored with svec: lower triangle, column major,
// off-diagonal entries scaled by sqrt(2) so that <svec U, svec V> = tr(UV).

#ifndef OSPEP_CONIC_HPP
#define OSPEP_CONIC_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ospep {

struct SolverSettings {
  double feasibility_tol = 1e-9;
  double gap_tol = 1e-9;
  int max_iterations = 200;

  // Defaults, with both tolerances overridden by OSPEP_SOLVER_TOL if set.
  static SolverSettings FromEnvironment();
};

struct ConeDims {
  int nonneg = 0;
  std::vector<int> psd;

  int size() const;    // length of a vector in K
  int degree() const;  // barrier parameter nu
};

struct ConicProblem {
  ConeDims cone;
  Eigen::MatrixXd A;  // m x size
  Eigen::VectorXd b;  // m
  Eigen::VectorXd c;  // size
};

enum class ConicStatus {
  kOptimal,
  kPrimalInfeasible,  // certificate y: A^T y in -K, <b, y> > 0
  kDualInfeasible,    // certificate x: A x = 0, x in K, <c, x> < 0
  kReducedAccuracy,   // stalled, best iterate within 1e3 x tolerances
  kIterationLimit,
  kNumericalFailure,
};

std::string to_string(ConicStatus status);

struct ConicResult {
  ConicStatus status = ConicStatus::kNumericalFailure;
  Eigen::VectorXd x, y, s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // |A x - b| / (1 + |b|)
  double dual_residual = 0.0;    // |A^T y + s - c| / (1 + |c|)
  double relative_gap = 0.0;
  int iterations = 0;
};

// Homogeneous self-dual interior point method with Nesterov-Todd scaling
// and Mehrotra predictor-corrector steps. Deterministic.
ConicResult solve_conic(const ConicProblem& problem,
                        const SolverSettings& settings);

Eigen::VectorXd svec(const Eigen::MatrixXd& u);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int n);
inline int svec_size(int n) { return n * (n + 1) / 2; }

// Linear matrix inequality in dual form:
//   maximize <b, y>  s.t.  F0 - sum_k y_k F_k in K.
// Each F has a nonnegative part and one symmetric matrix per PSD block.
struct LmiTerm {
  Eigen::VectorXd nonneg;
  std::vector<Eigen::MatrixXd> blocks;
};

struct LmiProblem {
  ConeDims cone;
  LmiTerm constant;
  std::vector<LmiTerm> coefficients;
  Eigen::VectorXd b;

  LmiTerm zero_term() const;
  ConicProblem to_conic() const;
};

// Splits a vector of K into its nonnegative part and PSD blocks.
LmiTerm unpack(const ConeDims& cone, const Eigen::VectorXd& v);
Eigen::VectorXd pack(const ConeDims& cone, const LmiTerm& term);

}  // namespace ospep

#endif  // OSPEP_CONIC_HPP
