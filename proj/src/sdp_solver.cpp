// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ospep/sdp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "ospep/errors.hpp"

namespace ospep {

namespace {

double min_eig(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

Eigen::MatrixXd ingest(const Eigen::MatrixXd& m, int n, const std::string& name,
                       std::vector<std::string>& warnings) {
  if (m.rows() != n || m.cols() != n)
    throw InputError("matrix '" + name + "' is not " + std::to_string(n) +
                     "x" + std::to_string(n));
  if (!m.allFinite()) throw InputError("matrix '" + name + "' is not finite");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    warnings.push_back("matrix '" + name + "' symmetrized (asymmetry " +
                       std::to_string(asym) + ")");
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd rebuild_slack(const SdpProblem& p, const Eigen::VectorXd& lam,
                              const Eigen::VectorXd& nu) {
  Eigen::MatrixXd s = -p.objective;
  for (std::size_t i = 0; i < p.inequalities.size(); ++i)
    s -= lam(i) * p.inequalities[i].matrix;
  for (std::size_t j = 0; j < p.equalities.size(); ++j)
    s += nu(j) * p.equalities[j].matrix;
  return 0.5 * (s + s.transpose());
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

SdpSolution InteriorPointBackend::solve(const SdpProblem& p,
                                        const SolverSettings& settings) const {
  const int n = p.dimension();
  const int mi = static_cast<int>(p.inequalities.size());
  const int me = static_cast<int>(p.equalities.size());

  LmiProblem lmi;
  lmi.cone.nonneg = mi;
  lmi.cone.psd = {n};
  lmi.constant = lmi.zero_term();
  lmi.constant.blocks[0] = -p.objective;
  lmi.b = Eigen::VectorXd::Zero(mi + me);
  for (int i = 0; i < mi; ++i) {
    LmiTerm t = lmi.zero_term();
    t.nonneg(i) = -1.0;
    t.blocks[0] = p.inequalities[i].matrix;
    lmi.coefficients.push_back(std::move(t));
  }
  for (int j = 0; j < me; ++j) {
    LmiTerm t = lmi.zero_term();
    t.blocks[0] = -p.equalities[j].matrix;
    lmi.coefficients.push_back(std::move(t));
    lmi.b(mi + j) = -p.equalities[j].rhs;
  }

  const ConicResult r = solve_conic(lmi.to_conic(), settings);

  SdpSolution sol;
  sol.iterations = r.iterations;
  switch (r.status) {
    case ConicStatus::kOptimal:
      sol.status = SolveStatus::kOptimal;
      break;
    case ConicStatus::kPrimalInfeasible:
      sol.status = SolveStatus::kInfeasible;
      break;
    case ConicStatus::kDualInfeasible:
      sol.status = SolveStatus::kUnbounded;
      break;
    case ConicStatus::kReducedAccuracy:
      sol.status = SolveStatus::kOptimal;
      sol.reduced_accuracy = true;
      sol.warnings.push_back("converged to reduced accuracy (residual " +
                             std::to_string(std::max(
                                 {r.primal_residual, r.dual_residual,
                                  r.relative_gap})) +
                             ")");
      break;
    default:
      sol.status = SolveStatus::kNumericalFailure;
      sol.warnings.push_back("interior point method stopped: " +
                             to_string(r.status));
      break;
  }
  sol.gram = unpack(lmi.cone, r.x).blocks[0];
  sol.inequality_multipliers = r.y.head(mi);
  sol.equality_multipliers = r.y.tail(me);
  sol.slack = rebuild_slack(p, sol.inequality_multipliers,
                            sol.equality_multipliers);
  sol.primal_value = (p.objective.array() * sol.gram.array()).sum();
  sol.dual_value = 0.0;
  for (int j = 0; j < me; ++j)
    sol.dual_value += p.equalities[j].rhs * sol.equality_multipliers(j);
  sol.value = sol.dual_value;
  return sol;
}

const SdpBackend& default_backend() {
  static const InteriorPointBackend backend;
  return backend;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverSettings& settings,
                      const SdpBackend& backend) {
  const int n = problem.dimension();
  if (n <= 0 || problem.objective.cols() != n)
    throw InputError("objective must be a nonempty square matrix");
  std::vector<std::string> warnings;
  SdpProblem clean;
  clean.objective = ingest(problem.objective, n, "objective", warnings);
  for (const auto& c : problem.inequalities)
    clean.inequalities.push_back({c.name, ingest(c.matrix, n, c.name, warnings)});
  for (const auto& c : problem.equalities) {
    if (!std::isfinite(c.rhs))
      throw InputError("equality '" + c.name + "' has a non-finite rhs");
    clean.equalities.push_back(
        {c.name, ingest(c.matrix, n, c.name, warnings), c.rhs});
  }
  SdpSolution sol = backend.solve(clean, settings);
  sol.warnings.insert(sol.warnings.begin(), warnings.begin(), warnings.end());
  return sol;
}

double CertificateReport::max_residual() const {
  return std::max({primal_feasibility, dual_feasibility, gap, complementarity});
}

CertificateReport certify(const SdpProblem& p, const SdpSolution& s) {
  const int n = p.dimension();
  if (s.gram.rows() != n || s.slack.rows() != n ||
      s.inequality_multipliers.size() !=
          static_cast<Eigen::Index>(p.inequalities.size()) ||
      s.equality_multipliers.size() !=
          static_cast<Eigen::Index>(p.equalities.size()))
    throw InputError("solution does not match the problem dimensions");

  CertificateReport rep;
  const Eigen::MatrixXd g = 0.5 * (s.gram + s.gram.transpose());
  auto tr = [&](const Eigen::MatrixXd& m) { return (m.array() * g.array()).sum(); };

  rep.min_eig_gram = min_eig(g);
  double pf = std::max(0.0, -rep.min_eig_gram);
  double comp = 0.0;
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    const double v = tr(p.inequalities[i].matrix);
    pf = std::max(pf, -v);
    comp += std::abs(s.inequality_multipliers(i) * v);
  }
  double dual_value = 0.0;
  for (std::size_t j = 0; j < p.equalities.size(); ++j) {
    pf = std::max(pf, std::abs(tr(p.equalities[j].matrix) - p.equalities[j].rhs));
    dual_value += p.equalities[j].rhs * s.equality_multipliers(j);
  }
  rep.primal_feasibility = pf;

  const Eigen::MatrixXd rebuilt =
      rebuild_slack(p, s.inequality_multipliers, s.equality_multipliers);
  rep.min_eig_slack = min_eig(rebuilt);
  double df = std::max(0.0, -rep.min_eig_slack);
  if (s.inequality_multipliers.size() > 0)
    df = std::max(df, -s.inequality_multipliers.minCoeff());
  df = std::max(df, (rebuilt - s.slack).norm());
  rep.dual_feasibility = df;

  rep.gap = std::abs(dual_value - tr(p.objective));
  rep.complementarity = comp + std::abs(tr(rebuilt));
  return rep;
}

}  // namespace ospep
