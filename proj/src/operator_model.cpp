// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ospep/operator_model.hpp"

#include <cmath>
#include <sstream>

#include "ospep/errors.hpp"

namespace ospep {

namespace {

constexpr int kZ = 0, kZA = 1, kZB = 2, kZC = 3;

bool close_rel(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

Eigen::Vector4d unit(int i) {
  Eigen::Vector4d e = Eigen::Vector4d::Zero();
  e(i) = 1.0;
  return e;
}

// Point and (alpha * value) of the evaluation each role contributes, as
// coefficient vectors over (z, zA, zB, zC).
//   A : zA  with  alpha*q = 2 zB - z - zC - zA
//   B : zB  with  alpha*q = z - zB
//   C : zB  with  alpha*q = zC
void role_vectors(Role role, Eigen::Vector4d& p, Eigen::Vector4d& v) {
  switch (role) {
    case Role::kA:
      p = unit(kZA);
      v = 2.0 * unit(kZB) - unit(kZ) - unit(kZC) - unit(kZA);
      return;
    case Role::kB:
      p = unit(kZB);
      v = unit(kZ) - unit(kZB);
      return;
    case Role::kC:
      p = unit(kZB);
      v = unit(kZC);
      return;
  }
}

Eigen::Matrix4d sym_outer(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return 0.5 * (a * b.transpose() + b * a.transpose());
}

Eigen::Matrix4d full_constraint(Role role, ConstraintKind kind, double param,
                                double alpha) {
  Eigen::Vector4d p, v;
  role_vectors(role, p, v);
  switch (kind) {
    case ConstraintKind::kMu:
      return sym_outer(p, v) - alpha * param * p * p.transpose();
    case ConstraintKind::kBeta:
      return sym_outer(p, v) - (param / alpha) * v * v.transpose();
    case ConstraintKind::kLip:
      return alpha * alpha * param * param * p * p.transpose() -
             v * v.transpose();
  }
  return Eigen::Matrix4d::Zero();
}

Eigen::MatrixXd reduce(const Eigen::Matrix4d& full, GramOrdering ordering) {
  if (ordering == GramOrdering::kFull) return full;
  const Eigen::MatrixXd p = embedding(ordering);
  return p.transpose() * full * p;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kA:
      return "A";
    case Role::kB:
      return "B";
    case Role::kC:
      return "C";
  }
  return "?";
}

std::string OperatorClass::describe() const {
  if (zero) return "zero";
  std::ostringstream os;
  os.precision(17);
  const char* sep = "";
  if (mu) {
    os << "mu=" << *mu;
    sep = ", ";
  }
  if (beta) {
    os << sep << "beta=" << *beta;
    sep = ", ";
  }
  if (lip) os << sep << "lip=" << *lip;
  return os.str();
}

void validate(const OperatorClass& cls) {
  if (cls.zero) {
    if (cls.mu || cls.beta || cls.lip)
      throw ClassError("zero operator class cannot carry parameters");
    return;
  }
  if (!cls.mu && !cls.beta && !cls.lip)
    throw ClassError("operator class has no parameters");
  if (cls.mu && !(std::isfinite(*cls.mu) && *cls.mu >= 0.0))
    throw ClassError("mu must be finite and >= 0");
  if (cls.beta && !(std::isfinite(*cls.beta) && *cls.beta > 0.0))
    throw ClassError("beta must be finite and > 0");
  if (cls.lip && !(std::isfinite(*cls.lip) && *cls.lip > 0.0))
    throw ClassError("lip must be finite and > 0");
  if (!is_class_nonempty(cls))
    throw ClassError("operator class is empty: " + cls.describe());
}

bool is_class_nonempty(const OperatorClass& cls) {
  if (cls.zero || !cls.mu) return true;  // 0 belongs to C_beta and L_L
  const double mu = *cls.mu;
  if (cls.lip && mu > *cls.lip && !close_rel(mu, *cls.lip, 1e-12)) return false;
  if (cls.beta && mu * *cls.beta > 1.0 && !close_rel(mu * *cls.beta, 1.0, 1e-12))
    return false;
  return true;
}

bool is_degenerate(const OperatorClass& cls, double rel_tol) {
  if (cls.zero || !cls.mu || *cls.mu == 0.0) return false;
  const double mu = *cls.mu;
  if (cls.lip && close_rel(mu, *cls.lip, rel_tol)) return true;
  if (cls.beta && close_rel(mu * *cls.beta, 1.0, rel_tol)) return true;
  return false;
}

bool check_two_point(const OperatorClass& cls, const EvaluationPair& pair,
                     double tol) {
  const auto n = pair.x1.size();
  if (pair.q1.size() != n || pair.x2.size() != n || pair.q2.size() != n)
    throw InputError("evaluation pair has inconsistent dimensions");
  if (cls.zero)
    return -pair.q1.squaredNorm() >= -tol && -pair.q2.squaredNorm() >= -tol;
  const Eigen::VectorXd dx = pair.x1 - pair.x2;
  const Eigen::VectorXd dq = pair.q1 - pair.q2;
  const double inner = dx.dot(dq);
  if (cls.mu && inner - *cls.mu * dx.squaredNorm() < -tol) return false;
  if (cls.beta && inner - *cls.beta * dq.squaredNorm() < -tol) return false;
  if (cls.lip &&
      *cls.lip * *cls.lip * dx.squaredNorm() - dq.squaredNorm() < -tol)
    return false;
  return true;
}

bool check_two_point(const SubdifferentialClass& cls,
                     const EvaluationPair& pair, double tol) {
  if (!(cls.mu >= 0.0 && cls.lip > cls.mu))
    throw ClassError("subdifferential class needs 0 <= mu < lip");
  const Eigen::VectorXd dx = pair.x1 - pair.x2;
  const Eigen::VectorXd dq = pair.q1 - pair.q2;
  double rhs = cls.mu * dx.squaredNorm();
  if (std::isfinite(cls.lip))
    rhs += (dq - cls.mu * dx).squaredNorm() / (cls.lip - cls.mu);
  return dq.dot(dx) - rhs >= -tol;
}

std::string_view to_string(GramOrdering ordering) {
  switch (ordering) {
    case GramOrdering::kFull:
      return "z,zA,zB,zC";
    case GramOrdering::kWithoutC:
      return "z,zA,zB";
    case GramOrdering::kWithoutB:
      return "z,zA,zC";
    case GramOrdering::kWithoutA:
      return "z,zB,zC";
  }
  return "?";
}

int dimension(GramOrdering ordering) {
  return ordering == GramOrdering::kFull ? 4 : 3;
}

bool contains(GramOrdering ordering, Role role) {
  switch (ordering) {
    case GramOrdering::kFull:
      return true;
    case GramOrdering::kWithoutC:
      return role != Role::kC;
    case GramOrdering::kWithoutB:
      return role != Role::kB;
    case GramOrdering::kWithoutA:
      return role != Role::kA;
  }
  return false;
}

Eigen::MatrixXd embedding(GramOrdering ordering) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, dimension(ordering));
  switch (ordering) {
    case GramOrdering::kFull:
      p.setIdentity();
      break;
    case GramOrdering::kWithoutC:
      p(kZ, 0) = p(kZA, 1) = p(kZB, 2) = 1.0;
      break;
    case GramOrdering::kWithoutB:
      p(kZ, 0) = p(kZA, 1) = p(kZC, 2) = 1.0;
      p(kZB, 0) = 1.0;
      break;
    case GramOrdering::kWithoutA:
      p(kZ, 0) = p(kZB, 1) = p(kZC, 2) = 1.0;
      p(kZA, 0) = -1.0;
      p(kZA, 1) = 2.0;
      p(kZA, 2) = -1.0;
      break;
  }
  return p;
}

std::string ConstraintMatrix::name() const {
  std::string s;
  switch (kind) {
    case ConstraintKind::kMu:
      s = "mu_";
      break;
    case ConstraintKind::kBeta:
      s = "beta_";
      break;
    case ConstraintKind::kLip:
      s = "L_";
      break;
  }
  s += to_string(role);
  return s;
}

Eigen::MatrixXd constraint_matrix(Role role, ConstraintKind kind, double param,
                                  double alpha, GramOrdering ordering) {
  if (!(std::isfinite(alpha) && alpha > 0.0))
    throw InputError("step size alpha must be finite and > 0");
  if (!contains(ordering, role))
    throw OrderingError("role " + std::string(to_string(role)) +
                        " is eliminated in ordering (" +
                        std::string(to_string(ordering)) + ")");
  return reduce(full_constraint(role, kind, param, alpha), ordering);
}

std::vector<ConstraintMatrix> constraint_matrices(Role role,
                                                  const OperatorClass& cls,
                                                  double alpha,
                                                  GramOrdering ordering) {
  validate(cls);
  std::vector<ConstraintMatrix> out;
  if (cls.zero) return out;
  auto push = [&](ConstraintKind kind, double param) {
    out.push_back({role, kind,
                   constraint_matrix(role, kind, param, alpha, ordering)});
  };
  if (cls.mu) push(ConstraintKind::kMu, *cls.mu);
  if (cls.beta) push(ConstraintKind::kBeta, *cls.beta);
  if (cls.lip) push(ConstraintKind::kLip, *cls.lip);
  return out;
}

Eigen::MatrixXd initial_distance_matrix(GramOrdering ordering) {
  const Eigen::Vector4d e = unit(kZ);
  return reduce(e * e.transpose(), ordering);
}

Eigen::VectorXd objective_vector(double theta, GramOrdering ordering) {
  Eigen::Vector4d w = unit(kZ) + theta * (unit(kZA) - unit(kZB));
  return embedding(ordering).transpose() * w;
}

Eigen::MatrixXd objective_matrix(double theta, GramOrdering ordering) {
  const Eigen::VectorXd w = objective_vector(theta, ordering);
  return w * w.transpose();
}

}  // namespace ospep
