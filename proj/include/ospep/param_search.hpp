// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

// Step-size selection: rho*^2(alpha) = min over theta in (0, 2) of the tight
// contraction factor, and its minimization over alpha.
//
// For a fixed alpha the dual S = rho^2 M_I - M_O(theta) - sum lambda_i M_i
// is quadratic in theta through M_O = w w^T. The bordered matrix
//
//   S~ = [ rho^2 M_I - sum lambda_i M_i   w(theta) ]
//        [ w(theta)^T                     1        ]
//
// is affine in (rho^2, lambda, theta), and S~ PSD iff S PSD (Schur
// complement on the last entry), so theta joins the dual as a variable.

#ifndef OSPEP_PARAM_SEARCH_HPP
#define OSPEP_PARAM_SEARCH_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ospep/conic.hpp"
#include "ospep/ospep_core.hpp"

namespace ospep {

inline constexpr double kThetaMargin = 1e-6;

class ThetaEmbeddedDual {
 public:
  ThetaEmbeddedDual(const ProblemClasses& classes, double alpha);

  GramOrdering ordering() const { return ordering_; }
  int dimension() const { return static_cast<int>(m_i_.rows()); }
  double alpha() const { return alpha_; }
  std::vector<std::string> names() const;
  const std::vector<ConstraintMatrix>& constraints() const {
    return constraints_;
  }

  // (dimension + 1) square bordered matrix.
  Eigen::MatrixXd embedded_slack(double rho_sq, const Eigen::VectorXd& lambdas,
                                 double theta) const;
  // Plain dual slack: the Schur complement of embedded_slack.
  Eigen::MatrixXd slack(double rho_sq, const Eigen::VectorXd& lambdas,
                        double theta) const;

  // minimize rho^2 over (rho^2, lambda >= 0, theta in [0, 2]) with S~ PSD,
  // as a dual-form LMI with y = (rho^2, lambda..., theta). With
  // `fixed_theta`, theta is folded into the constant and y = (rho^2, lambda).
  LmiProblem lmi(std::optional<double> fixed_theta = std::nullopt) const;

 private:
  GramOrdering ordering_;
  double alpha_;
  Eigen::MatrixXd m_i_;
  Eigen::VectorXd w0_, w1_;  // w(theta) = w0 + theta w1
  std::vector<ConstraintMatrix> constraints_;
};

struct ThetaOptions {
  SolverSettings solver = SolverSettings::FromEnvironment();
  std::optional<double> fixed_theta;
};

struct ThetaOptimum {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double alpha = 0.0;
  double rho_sq = 0.0;
  double theta = 1.0;      // clamped to [kThetaMargin, 2 - kThetaMargin]
  double raw_theta = 1.0;  // as returned by the solver
  DualCertificate certificate;  // plain dual at the returned theta
  Eigen::MatrixXd embedded_slack;
  bool strong_duality = false;  // false for degenerate class intersections
  bool reduced_accuracy = false;
  std::vector<std::string> warnings;
};

// Throws on invalid classes or alpha; solver trouble is reported in status.
ThetaOptimum rho_star_given_alpha(const ProblemClasses& classes, double alpha,
                                  const ThetaOptions& opts = {});

struct SearchSettings {
  double alpha_lo = 1e-4;
  double alpha_hi = 1e4;
  double rel_tol = 1e-4;   // stop when alpha_hi / alpha_lo <= 1 + rel_tol
  // Log-spaced scan that picks the golden-section bracket. rho^2(alpha) is
  // often exactly 1 on long stretches, where comparisons say nothing about
  // the side of the minimum. Values < 3 search the whole range directly.
  int scan_points = 17;
  int fallback_grid = 61;  // log-spaced points when unimodality fails
  ThetaOptions theta;
};

struct AlphaEvaluation {
  double alpha = 0.0;
  double rho_sq = 0.0;
  double theta = 0.0;
  SolveStatus status = SolveStatus::kNumericalFailure;
};

enum class SearchStatus {
  kConverged,
  kNonUnimodal,  // golden-section record was inconsistent; grid fallback used
  kSolverFailure,
};

std::string_view to_string(SearchStatus status);

struct ParamOptResult {
  SearchStatus status = SearchStatus::kSolverFailure;
  double alpha_star = 0.0;
  double theta_star = 0.0;
  double rho_sq_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  std::vector<AlphaEvaluation> trace;  // in evaluation order
  std::vector<std::string> warnings;
};

// Bracketing scan, then golden-section search on log(alpha).
ParamOptResult optimize_alpha(const ProblemClasses& classes,
                              const SearchSettings& search = {});

struct CurvePoint {
  double alpha = 0.0;
  double rho_sq = 0.0;
  double theta_opt = 0.0;
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::string error;  // set when the evaluation threw
};

// Independent evaluations in input order. `workers` <= 1 runs inline.
std::vector<CurvePoint> rho_curve(const ProblemClasses& classes,
                                  const std::vector<double>& alphas,
                                  const ThetaOptions& opts = {},
                                  int workers = 1);

// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

}  // namespace ospep

#endif  // OSPEP_PARAM_SEARCH_HPP
