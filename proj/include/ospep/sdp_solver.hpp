// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef OSPEP_SDP_SOLVER_HPP
#define OSPEP_SDP_SOLVER_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ospep/conic.hpp"

namespace ospep {

struct NamedMatrix {
  std::string name;
  Eigen::MatrixXd matrix;
};

struct EqualityConstraint {
  std::string name;
  Eigen::MatrixXd matrix;
  double rhs = 0.0;
};

// maximize   tr(objective G)
// subject to tr(M_i G) >= 0      for each inequality
//            tr(E_j G)  = rhs_j  for each equality
//            G PSD
//
// Its dual, with multipliers lambda_i >= 0 and free nu_j, is
// minimize   sum_j rhs_j nu_j
// subject to S = sum_j nu_j E_j - objective - sum_i lambda_i M_i  PSD.
struct SdpProblem {
  Eigen::MatrixXd objective;
  std::vector<NamedMatrix> inequalities;
  std::vector<EqualityConstraint> equalities;

  int dimension() const { return static_cast<int>(objective.rows()); }
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string_view to_string(SolveStatus status);

struct SdpSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double value = 0.0;         // dual objective, an upper bound at optimality
  double primal_value = 0.0;  // tr(objective G)
  double dual_value = 0.0;
  Eigen::MatrixXd gram;
  Eigen::VectorXd inequality_multipliers;
  Eigen::VectorXd equality_multipliers;
  Eigen::MatrixXd slack;  // S rebuilt from the multipliers
  int iterations = 0;
  // Progress stalled (typically no strictly feasible point) with the best
  // iterate within 1e3 x the tolerances. Status is still kOptimal.
  bool reduced_accuracy = false;
  std::vector<std::string> warnings;
};

class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string_view name() const = 0;
  virtual SdpSolution solve(const SdpProblem& problem,
                            const SolverSettings& settings) const = 0;
};

// Dense primal-dual interior point method (see conic.hpp).
class InteriorPointBackend final : public SdpBackend {
 public:
  std::string_view name() const override { return "dense-ipm"; }
  SdpSolution solve(const SdpProblem& problem,
                    const SolverSettings& settings) const override;
};

const SdpBackend& default_backend();

// Symmetrizes every matrix (asymmetry above 1e-12 is reported as a warning),
// checks dimensions and finiteness, then calls the backend.
SdpSolution solve_sdp(const SdpProblem& problem,
                      const SolverSettings& settings =
                          SolverSettings::FromEnvironment(),
                      const SdpBackend& backend = default_backend());

struct CertificateReport {
  double primal_feasibility = 0.0;  // constraint violations and -lambda_min(G)
  double dual_feasibility = 0.0;    // negative multipliers, -lambda_min(S), |S - S(nu, lambda)|
  double gap = 0.0;                 // |dual value - primal value|
  double complementarity = 0.0;     // |tr(S G)| + sum_i |lambda_i tr(M_i G)|
  double min_eig_gram = 0.0;
  double min_eig_slack = 0.0;

  double max_residual() const;
  bool ok(double tol) const { return max_residual() <= tol; }
};

CertificateReport certify(const SdpProblem& problem,
                          const SdpSolution& solution);

}  // namespace ospep

#endif  // OSPEP_SDP_SOLVER_HPP
