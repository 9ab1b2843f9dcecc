// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

// Closed-form tight contraction factors of
//   T = I - theta J_B + theta J_A (2 J_B - I)
// for two class families:
//   mu-coco: A strongly monotone (mu), B cocoercive (beta)
//   mu-lip:  A strongly monotone (mu), B monotone and L-Lipschitz
// together with their dual certificates and matching 2x2 lower-bound
// operators. Formulas are stated at alpha = 1; other step sizes go through
// mu -> alpha mu, beta -> beta / alpha, L -> alpha L.

#ifndef OSPEP_DRS_ANALYTIC_HPP
#define OSPEP_DRS_ANALYTIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ospep/ospep_core.hpp"

namespace ospep {

enum class Family { kMuCoco, kMuLipschitz };
enum class Branch { kA, kB, kC, kD, kE };

std::string_view to_string(Family family);
char to_char(Branch branch);  // 'a'..'e'

// mu-coco has branches a..e, mu-lip has a..c.
struct CaseLabel {
  Family family = Family::kMuCoco;
  Branch branch = Branch::kA;

  bool valid() const;
  std::string str() const;  // e.g. "mu-coco/e"
  friend bool operator==(const CaseLabel&, const CaseLabel&) = default;
};

// (mu, beta, theta) for mu-coco, (mu, L, theta) for mu-lip.
struct DrsParams {
  double mu = 1.0;
  double p = 1.0;
  double theta = 1.0;
};

struct ClosedFormRate {
  double rho = 0.0;
  double rho_sq = 0.0;
  CaseLabel label;
};

// Throws DomainError unless mu, p, alpha > 0 and theta in (0, 2).
void check_domain(const DrsParams& params, double alpha = 1.0);

// Regions are tried in order a, b, c, d and the first match wins; e (or c
// for mu-lip) is the complement. Guards on denominators are evaluated
// before the thresholds.
Branch classify(Family family, const DrsParams& params);
bool in_region(CaseLabel label, const DrsParams& params);

ClosedFormRate drs_rate_mu_coco(double mu, double beta, double theta,
                                double alpha = 1.0);
ClosedFormRate drs_rate_mu_lipschitz(double mu, double lip, double theta,
                                     double alpha = 1.0);
ClosedFormRate drs_rate(Family family, const DrsParams& params,
                        double alpha = 1.0);

// Value of a single branch formula, ignoring the region test.
double branch_rho(CaseLabel label, const DrsParams& params);

// theta = 1 simplifications.
ClosedFormRate drs_rate_mu_coco_unrelaxed(double mu, double beta);
ClosedFormRate drs_rate_mu_lipschitz_unrelaxed(double mu, double lip);

// ---------------------------------------------------------------------------
// Dual certificates.
//
// S is the 3x3 dual matrix in the ordering (z, z_A, z_B), and
//   S = K1 v v^T + K2 w w^T,  v = (m3, m1, m2),  w = (m5, 0, m4).

struct SosCertificate {
  CaseLabel label;
  DrsParams params;
  double rho_sq = 0.0;
  // mu-coco: lambda_mu_A, lambda_beta_B.
  // mu-lip:  lambda_mu_A, lambda_L_B, lambda_mu_B.
  std::vector<std::pair<std::string, double>> lambdas;
  double k1 = 0.0, k2 = 0.0;
  std::array<double, 5> m{};  // m1..m5
  Eigen::Matrix3d S = Eigen::Matrix3d::Zero();

  std::optional<double> lambda(std::string_view name) const;
  Eigen::Matrix3d sos_matrix() const;  // K1 v v^T + K2 w w^T
};

// S as an affine function of (rho^2, lambda) for the family.
Eigen::Matrix3d dual_matrix(Family family, const DrsParams& params,
                            double rho_sq,
                            const std::vector<std::pair<std::string, double>>&
                                lambdas);

// Throws DomainError if params are not in the branch's region.
SosCertificate dual_certificate(CaseLabel label, const DrsParams& params);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // pass iff value compared to threshold holds
};

struct VerificationReport {
  CheckResult sos;          // |S - (K1 vv^T + K2 ww^T)|_F <= 1e-9
  CheckResult nonnegative;  // min(lambda, K1, K2) >= -1e-12
  CheckResult psd;          // lambda_min(S) >= -1e-10
  CheckResult dual;         // S equals the dual matrix of (rho^2, lambda)

  bool ok() const;
  std::vector<CheckResult> checks() const;
};

VerificationReport verify_certificate(const SosCertificate& cert);

// ---------------------------------------------------------------------------
// Lower bounds in R^2.

enum class OperatorKind {
  kNormalConeOrigin,                 // N_{0}, J = 0
  kScaledIdentity,                   // c I
  kRotation2x2,                      // (c, -s; s, c)
  kScaledIdentityPlusNormalConeLine  // mu I + normal cone of a line
};

std::string_view to_string(OperatorKind kind);

struct LowerBoundInstance {
  CaseLabel label;
  DrsParams params;
  OperatorKind a_kind = OperatorKind::kScaledIdentity;
  std::optional<Eigen::Matrix2d> a_matrix;  // absent for normal-cone kinds
  std::optional<Eigen::Matrix2d> b_matrix;
  Eigen::Matrix2d j_a = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d j_b = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
  double achieved_rho = 0.0;  // sqrt(lambda_max(T^T T))
  std::optional<double> k;    // mixing parameter (mu-coco e, mu-lip c)
  std::optional<double> a;    // rotation parameter (mu-coco e)
};

// Throws ConsistencyError if the mixing parameter leaves its range.
LowerBoundInstance lower_bound_mu_coco(double mu, double beta, double theta);
LowerBoundInstance lower_bound_mu_lipschitz(double mu, double lip,
                                            double theta);
LowerBoundInstance lower_bound(Family family, const DrsParams& params);

// |T - (I - theta J_B + theta J_A (2 J_B - I))|_max.
double operator_identity_residual(const LowerBoundInstance& inst);

struct MembershipReport {
  bool a_in_class = false;
  bool b_in_class = false;
  bool matrix_checks = false;  // eigenvalue / norm tests on explicit matrices
  bool k_in_range = true;
  double worst_violation = 0.0;

  bool ok() const { return a_in_class && b_in_class && matrix_checks && k_in_range; }
};

// Samples u, sets x = J u and q = u - x, and runs the two-point predicates
// of the family's classes on every pair. Seeded, deterministic.
MembershipReport check_membership(const LowerBoundInstance& inst,
                                  int samples = 32, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Closed form vs SDP vs lower bound.

struct TightnessOptions {
  ContractionOptions contraction;
  // Swap the classes of A and B in the SDP. The closed form is unchanged and
  // no lower bound is built.
  bool swap_roles = false;
};

struct TightnessReport {
  CaseLabel label;
  DrsParams params;
  double closed_form_rho_sq = 0.0;
  double sdp_dual_rho_sq = 0.0;
  double sdp_primal_rho_sq = 0.0;
  std::optional<double> lower_bound_rho_sq;
  SolveStatus status = SolveStatus::kNumericalFailure;
  bool strong_duality = false;

  double closed_form_gap() const;  // |closed form - SDP dual|
  double duality_gap() const;      // |SDP primal - SDP dual|
  double max_discrepancy() const;  // over all available pairs
  bool ok(double tol = 1e-6) const;
};

// Throws SolverError if the SDP does not reach kOptimal.
TightnessReport verify_tightness(Family family, const DrsParams& params,
                                 const TightnessOptions& opts = {});

// The two-role class assignment used by the SDP for a family.
ProblemClasses drs_classes(Family family, const DrsParams& params,
                           bool swap_roles = false);

}  // namespace ospep

#endif  // OSPEP_DRS_ANALYTIC_HPP
