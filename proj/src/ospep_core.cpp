// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ospep/ospep_core.hpp"

#include <algorithm>
#include <cmath>

#include "ospep/errors.hpp"

namespace ospep {

namespace {

constexpr std::array<Role, 3> kRoles = {Role::kA, Role::kB, Role::kC};

std::vector<ConstraintMatrix> collect_constraints(const ProblemClasses& classes,
                                                  double alpha,
                                                  GramOrdering ordering) {
  std::vector<ConstraintMatrix> out;
  for (Role role : kRoles) {
    const OperatorClass& cls = classes[role];
    if (cls.active()) {
      auto ms = constraint_matrices(role, cls, alpha, ordering);
      out.insert(out.end(), ms.begin(), ms.end());
    } else if (contains(ordering, role)) {
      // Zero operator kept in the ordering: |q|^2 <= 0.
      out.push_back({role, ConstraintKind::kLip,
                     constraint_matrix(role, ConstraintKind::kLip, 0.0, alpha,
                                       ordering)});
    }
  }
  return out;
}

bool any_degenerate(const ProblemClasses& classes) {
  for (Role role : kRoles)
    if (classes[role].active() && is_degenerate(classes[role])) return true;
  return false;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kFBS:
      return "FBS";
    case Method::kDRS:
      return "DRS";
    case Method::kDYS:
      return "DYS";
  }
  return "?";
}

const OperatorClass& ProblemClasses::operator[](Role role) const {
  switch (role) {
    case Role::kA:
      return a;
    case Role::kB:
      return b;
    case Role::kC:
      return c;
  }
  return a;
}

int ProblemClasses::active_count() const {
  return int(a.active()) + int(b.active()) + int(c.active());
}

void validate(const ProblemClasses& classes, const MethodSpec& method) {
  if (!(std::isfinite(method.alpha) && method.alpha > 0.0))
    throw InputError("alpha must be finite and > 0");
  if (!(std::isfinite(method.theta) && method.theta > 0.0))
    throw InputError("theta must be finite and > 0");
  for (Role role : kRoles) {
    try {
      validate(classes[role]);
    } catch (const ClassError& e) {
      throw ClassError("role " + std::string(to_string(role)) + ": " + e.what());
    }
  }
  if (classes.active_count() < 2)
    throw OrderingError("at least two operators must be active");
  switch (method.method) {
    case Method::kFBS:
      if (classes.b.active())
        throw OrderingError("FBS requires B to be the zero operator");
      break;
    case Method::kDRS:
      if (classes.c.active())
        throw OrderingError("DRS requires C to be the zero operator");
      break;
    case Method::kDYS:
      break;
  }
}

GramOrdering select_ordering(const ProblemClasses& classes,
                             const BuildOptions& opts) {
  if (opts.full_ordering) return GramOrdering::kFull;
  if (!classes.c.active()) return GramOrdering::kWithoutC;
  if (!classes.b.active()) return GramOrdering::kWithoutB;
  if (!classes.a.active()) return GramOrdering::kWithoutA;
  return GramOrdering::kFull;
}

OspepProblem build_primal(const ProblemClasses& classes,
                          const MethodSpec& method, const BuildOptions& opts) {
  validate(classes, method);
  OspepProblem p;
  p.ordering = select_ordering(classes, opts);
  p.constraints = collect_constraints(classes, method.alpha, p.ordering);
  p.sdp.objective = objective_matrix(method.theta, p.ordering);
  for (const auto& c : p.constraints)
    p.sdp.inequalities.push_back({c.name(), c.matrix});
  p.sdp.equalities.push_back(
      {"I", initial_distance_matrix(p.ordering), 1.0});
  return p;
}

DualMap::DualMap(GramOrdering ordering, Eigen::MatrixXd m_i,
                 Eigen::MatrixXd m_o, std::vector<ConstraintMatrix> constraints)
    : ordering_(ordering),
      m_i_(std::move(m_i)),
      m_o_(std::move(m_o)),
      constraints_(std::move(constraints)) {}

std::vector<std::string> DualMap::names() const {
  std::vector<std::string> out;
  for (const auto& c : constraints_) out.push_back(c.name());
  return out;
}

Eigen::MatrixXd DualMap::slack(double rho_sq,
                               const Eigen::VectorXd& lambdas) const {
  if (lambdas.size() != static_cast<Eigen::Index>(constraints_.size()))
    throw InputError("expected " + std::to_string(constraints_.size()) +
                     " multipliers");
  Eigen::MatrixXd s = rho_sq * m_i_ - m_o_;
  for (std::size_t i = 0; i < constraints_.size(); ++i)
    s -= lambdas(i) * constraints_[i].matrix;
  return s;
}

Eigen::MatrixXd DualMap::slack(
    double rho_sq,
    const std::vector<std::pair<std::string, double>>& lambdas) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(constraints_.size());
  const auto all = names();
  for (const auto& [name, value] : lambdas) {
    auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) throw InputError("unknown multiplier '" + name + "'");
    v(it - all.begin()) = value;
  }
  return slack(rho_sq, v);
}

DualMap build_dual(const ProblemClasses& classes, const MethodSpec& method,
                   const BuildOptions& opts) {
  validate(classes, method);
  const GramOrdering ord = select_ordering(classes, opts);
  return DualMap(ord, initial_distance_matrix(ord),
                 objective_matrix(method.theta, ord),
                 collect_constraints(classes, method.alpha, ord));
}

std::optional<double> DualCertificate::multiplier(std::string_view name) const {
  for (const auto& [n, v] : multipliers)
    if (n == name) return v;
  return std::nullopt;
}

bool WorstCaseInstance::all_in_class() const {
  return std::all_of(triples.begin(), triples.end(),
                     [](const EvaluationTriple& t) { return t.in_class; });
}

WorstCaseInstance extract_worst_case(const Eigen::MatrixXd& gram,
                                     const ProblemClasses& classes,
                                     const MethodSpec& method, double tol) {
  validate(classes, method);
  const int n = static_cast<int>(gram.rows());
  if (gram.cols() != n || (n != 3 && n != 4))
    throw InputError("Gram matrix must be 3x3 or 4x4");
  if (!gram.allFinite()) throw InputError("Gram matrix is not finite");
  const GramOrdering ord =
      n == 4 ? GramOrdering::kFull : select_ordering(classes);
  if (dimension(ord) != n)
    throw InputError("Gram matrix size does not match the active roles");

  const Eigen::MatrixXd g = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -tol * std::max(1.0, lmax))
    throw InputError("Gram matrix is indefinite beyond tolerance");

  const double cut = 1e-9 * lmax;
  std::vector<int> keep;
  for (int i = n - 1; i >= 0; --i)
    if (ev(i) > cut && ev(i) > 0.0) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Eigen::MatrixXd l(n, r);
  for (int k = 0; k < r; ++k)
    l.col(k) = es.eigenvectors().col(keep[k]) * std::sqrt(ev(keep[k]));
  const Eigen::MatrixXd full = embedding(ord) * l;  // rows: z, zA, zB, zC

  WorstCaseInstance w;
  w.rank = r;
  w.z = full.row(0).transpose();
  w.z_a = full.row(1).transpose();
  w.z_b = full.row(2).transpose();
  w.z_c = full.row(3).transpose();
  const double a = method.alpha;
  w.triples[0] = {Role::kA, w.z_a, (2.0 * w.z_b - w.z - w.z_c - w.z_a) / a};
  w.triples[1] = {Role::kB, w.z_b, (w.z - w.z_b) / a};
  w.triples[2] = {Role::kC, w.z_b, w.z_c / a};
  const double ptol = 1e-7 / std::pow(std::min(1.0, a), 2);
  for (auto& t : w.triples) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r);
    t.in_class = check_two_point(classes[t.role], {t.point, t.value, zero, zero},
                                 ptol * std::max(1.0, lmax));
  }
  w.initial_distance = w.z.squaredNorm();
  w.achieved_ratio = (w.z - method.theta * (w.z_b - w.z_a)).squaredNorm();
  return w;
}

ContractionResult tight_contraction_factor(const ProblemClasses& classes,
                                           const MethodSpec& method,
                                           const ContractionOptions& opts) {
  const OspepProblem p = build_primal(classes, method, opts.build);
  const SdpSolution sol = solve_sdp(p.sdp, opts.solver);

  ContractionResult res;
  res.status = sol.status;
  res.ordering = p.ordering;
  res.warnings = sol.warnings;
  res.rho_sq = sol.value;
  res.rho = std::sqrt(std::max(res.rho_sq, 0.0));
  res.primal_value = sol.primal_value;
  res.certificate.rho_sq = sol.value;
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    res.certificate.multipliers.emplace_back(p.constraints[i].name(),
                                             sol.inequality_multipliers(i));
  // Rebuilt from the reported multipliers so that S is exactly the affine
  // image of (rho^2, lambda) rather than the solver's slack iterate.
  res.certificate.S = build_dual(classes, method, opts.build)
                          .slack(res.rho_sq, res.certificate.multipliers);

  const bool degenerate =
      any_degenerate(classes) ||
      (opts.build.full_ordering && classes.active_count() < 3);
  res.strong_duality = sol.status == SolveStatus::kOptimal && !degenerate;
  if (degenerate)
    res.warnings.push_back(
        "degenerate class intersection: rho_sq is an upper bound only");
  if (res.strong_duality && opts.extract_worst_case) {
    res.worst_case = extract_worst_case(sol.gram, classes, method);
    if (!res.worst_case->all_in_class())
      res.warnings.push_back("worst-case evaluations violate a class predicate");
  }
  return res;
}

ContractionResult quasi_contraction_factor(const ProblemClasses& classes,
                                           const MethodSpec& method,
                                           const ContractionOptions& opts) {
  return tight_contraction_factor(classes, method, opts);
}

}  // namespace ospep
