// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef OSPEP_OPERATOR_MODEL_HPP
#define OSPEP_OPERATOR_MODEL_HPP

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ospep {

enum class Role { kA, kB, kC };

std::string_view to_string(Role role);

// Intersection of operator classes attached to one role. Any subset of the
// three parameters may be present; an empty subset means plain membership
// in the class of all operators (not useful) so `validate` rejects it.
//   mu   : strongly monotone, <x1 - x2, q1 - q2> >= mu |x1 - x2|^2
//   beta : cocoercive,       <x1 - x2, q1 - q2> >= beta |q1 - q2|^2
//   lip  : Lipschitz,        |q1 - q2| <= lip |x1 - x2|
// `zero` marks the identically-zero operator and excludes everything else.
struct OperatorClass {
  std::optional<double> mu;
  std::optional<double> beta;
  std::optional<double> lip;
  bool zero = false;

  static OperatorClass Zero() {
    OperatorClass c;
    c.zero = true;
    return c;
  }
  static OperatorClass StronglyMonotone(double mu) {
    OperatorClass c;
    c.mu = mu;
    return c;
  }
  static OperatorClass Cocoercive(double beta) {
    OperatorClass c;
    c.beta = beta;
    return c;
  }
  static OperatorClass Lipschitz(double lip) {
    OperatorClass c;
    c.lip = lip;
    return c;
  }
  OperatorClass& with_mu(double v) {
    mu = v;
    return *this;
  }
  OperatorClass& with_beta(double v) {
    beta = v;
    return *this;
  }
  OperatorClass& with_lip(double v) {
    lip = v;
    return *this;
  }

  bool active() const { return !zero; }
  std::string describe() const;
};

// Throws ClassError when a parameter is out of range, when `zero` is mixed
// with parameters, when nothing is specified, or when the class is empty.
void validate(const OperatorClass& cls);

// Parameter-level emptiness test: mu <= lip and mu * beta <= 1.
bool is_class_nonempty(const OperatorClass& cls);

// True when the class is nonempty but every perturbation that tightens it
// empties it (mu == lip or mu * beta == 1, relative tolerance).
bool is_degenerate(const OperatorClass& cls, double rel_tol = 1e-12);

struct EvaluationPair {
  Eigen::VectorXd x1, q1;  // q1 in T(x1)
  Eigen::VectorXd x2, q2;  // q2 in T(x2)
};

// Two-point interpolation conditions for the class. Each inequality is
// accepted with absolute slack `tol`.
bool check_two_point(const OperatorClass& cls, const EvaluationPair& pair,
                     double tol = 1e-12);

// Subdifferentials of mu-strongly convex, L-smooth closed proper convex
// functions, 0 <= mu < lip <= inf. Kept apart from OperatorClass because its
// two-point condition does not extend to larger sets of points.
struct SubdifferentialClass {
  double mu = 0.0;
  double lip = std::numeric_limits<double>::infinity();
};

bool check_two_point(const SubdifferentialClass& cls,
                     const EvaluationPair& pair, double tol = 1e-12);

// Gram orderings. The full ordering is (z, zA, zB, zC). A zero role is
// removed by linear substitution; the reduced coordinates are
//   kWithoutC : (z, zA, zB)   zC = 0
//   kWithoutB : (z, zA, zC)   zB = z
//   kWithoutA : (z, zB, zC)   zA = 2 zB - z - zC
enum class GramOrdering { kFull, kWithoutC, kWithoutB, kWithoutA };

std::string_view to_string(GramOrdering ordering);
int dimension(GramOrdering ordering);
bool contains(GramOrdering ordering, Role role);

// 4 x k matrix P with full = P * reduced. Reduced matrices are P^T M P.
Eigen::MatrixXd embedding(GramOrdering ordering);

enum class ConstraintKind { kMu, kBeta, kLip };

struct ConstraintMatrix {
  Role role;
  ConstraintKind kind;
  Eigen::MatrixXd matrix;  // tr(matrix * G) >= 0

  std::string name() const;
};

// One matrix per parameter present in `cls`, in the order mu, beta, lip.
// An inactive (zero) class contributes nothing. Requesting an active role
// that the ordering eliminated throws OrderingError.
std::vector<ConstraintMatrix> constraint_matrices(Role role,
                                                  const OperatorClass& cls,
                                                  double alpha,
                                                  GramOrdering ordering);

// Single constraint matrix; `param` is mu, beta or lip. lip = 0 is allowed
// here and encodes the zero operator inside the full ordering.
Eigen::MatrixXd constraint_matrix(Role role, ConstraintKind kind, double param,
                                  double alpha, GramOrdering ordering);

// tr(M_I G) = |z|^2.
Eigen::MatrixXd initial_distance_matrix(GramOrdering ordering);

// tr(M_O G) = |z - theta (zB - zA)|^2 = |Tz|^2 with the fixed point at 0.
Eigen::MatrixXd objective_matrix(double theta, GramOrdering ordering);

// Coefficients of z - theta (zB - zA) in reduced coordinates.
Eigen::VectorXd objective_vector(double theta, GramOrdering ordering);

}  // namespace ospep

#endif  // OSPEP_OPERATOR_MODEL_HPP
