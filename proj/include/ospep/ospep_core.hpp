// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef OSPEP_OSPEP_CORE_HPP
#define OSPEP_OSPEP_CORE_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ospep/operator_model.hpp"
#include "ospep/sdp_solver.hpp"

namespace ospep {

// T z = z - theta J_B z + theta J_A (2 J_B - I - alpha C J_B) z.
// DRS is the case C = 0 and FBS the case B = 0.
enum class Method { kFBS, kDRS, kDYS };

std::string_view to_string(Method method);

struct MethodSpec {
  Method method = Method::kDYS;
  double alpha = 1.0;
  double theta = 1.0;
};

struct ProblemClasses {
  OperatorClass a, b, c;

  const OperatorClass& operator[](Role role) const;
  int active_count() const;
};

struct BuildOptions {
  // Keep the 4x4 ordering even when a role is zero. Zero roles are then
  // encoded as Lipschitz-0 constraints. Only useful for cross-checks: the
  // resulting SDP has no strictly feasible point.
  bool full_ordering = false;
};

// Checks step sizes, class invariants and the role/method pattern. FBS
// needs B zero and A, C active; DRS needs C zero and A, B active; DYS
// accepts any pattern with at least two active roles.
void validate(const ProblemClasses& classes, const MethodSpec& method);

GramOrdering select_ordering(const ProblemClasses& classes,
                             const BuildOptions& opts = {});

struct OspepProblem {
  SdpProblem sdp;
  GramOrdering ordering = GramOrdering::kFull;
  std::vector<ConstraintMatrix> constraints;  // same order as sdp.inequalities
};

// maximize tr(M_O G) s.t. tr(M_i G) >= 0, tr(M_I G) = 1, G PSD.
OspepProblem build_primal(const ProblemClasses& classes,
                          const MethodSpec& method,
                          const BuildOptions& opts = {});

// Affine map (rho^2, lambda) -> S = rho^2 M_I - M_O - sum_i lambda_i M_i.
class DualMap {
 public:
  DualMap(GramOrdering ordering, Eigen::MatrixXd m_i, Eigen::MatrixXd m_o,
          std::vector<ConstraintMatrix> constraints);

  GramOrdering ordering() const { return ordering_; }
  int dimension() const { return static_cast<int>(m_i_.rows()); }
  const std::vector<ConstraintMatrix>& constraints() const {
    return constraints_;
  }
  std::vector<std::string> names() const;
  const Eigen::MatrixXd& initial_distance() const { return m_i_; }
  const Eigen::MatrixXd& objective() const { return m_o_; }

  Eigen::MatrixXd slack(double rho_sq, const Eigen::VectorXd& lambdas) const;
  // Missing names count as zero; unknown names throw InputError.
  Eigen::MatrixXd slack(
      double rho_sq,
      const std::vector<std::pair<std::string, double>>& lambdas) const;

 private:
  GramOrdering ordering_;
  Eigen::MatrixXd m_i_, m_o_;
  std::vector<ConstraintMatrix> constraints_;
};

DualMap build_dual(const ProblemClasses& classes, const MethodSpec& method,
                   const BuildOptions& opts = {});

struct DualCertificate {
  double rho_sq = 0.0;
  std::vector<std::pair<std::string, double>> multipliers;
  Eigen::MatrixXd S;

  std::optional<double> multiplier(std::string_view name) const;
};

struct EvaluationTriple {
  Role role;
  Eigen::VectorXd point;
  Eigen::VectorXd value;  // value in role(point); paired with 0 in role(0)
  bool in_class = false;
};

struct WorstCaseInstance {
  Eigen::VectorXd z, z_a, z_b, z_c;
  std::array<EvaluationTriple, 3> triples;
  double achieved_ratio = 0.0;  // |z - theta (z_b - z_a)|^2
  double initial_distance = 0.0;  // |z|^2
  int rank = 0;

  bool all_in_class() const;
};

// Factors G = L L^T by eigendecomposition, dropping eigenvalues below
// 1e-9 * lambda_max. The ordering is read from G's size (4 means full) and
// the zero roles. Throws InputError if G is indefinite beyond `tol`.
WorstCaseInstance extract_worst_case(const Eigen::MatrixXd& gram,
                                     const ProblemClasses& classes,
                                     const MethodSpec& method,
                                     double tol = 1e-8);

struct ContractionOptions {
  SolverSettings solver = SolverSettings::FromEnvironment();
  BuildOptions build;
  bool extract_worst_case = true;
  double predicate_tol = 1e-7;
};

inline constexpr std::string_view kApplicabilityNote =
    "tight for dim H >= 4; for dim H <= 3 the SDP is a relaxation and "
    "rho_sq is an upper bound";

struct ContractionResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double rho_sq = 0.0;  // dual optimum
  double rho = 0.0;
  double primal_value = 0.0;
  DualCertificate certificate;
  std::optional<WorstCaseInstance> worst_case;
  bool strong_duality = false;  // false: rho_sq is an upper bound only
  GramOrdering ordering = GramOrdering::kFull;
  std::string applicability_note{kApplicabilityNote};
  std::vector<std::string> warnings;
};

ContractionResult tight_contraction_factor(const ProblemClasses& classes,
                                           const MethodSpec& method,
                                           const ContractionOptions& opts = {});

// Same value as tight_contraction_factor: distances to a fixed point obey
// the same tight bound.
ContractionResult quasi_contraction_factor(const ProblemClasses& classes,
                                           const MethodSpec& method,
                                           const ContractionOptions& opts = {});

}  // namespace ospep

#endif  // OSPEP_OSPEP_CORE_HPP
