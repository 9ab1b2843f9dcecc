#include "ospep/sdp_solver.hpp"

#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "ospep/conic.hpp"
#include "ospep/errors.hpp"

namespace ospep {
namespace {

using Eigen::MatrixXd;

MatrixXd sym(int n, unsigned seed) {
  std::srand(seed);
  const MatrixXd r = MatrixXd::Random(n, n);
  return 0.5 * (r + r.transpose());
}

// max tr(C G) s.t. tr(G) = 1, G PSD has value lambda_max(C).
TEST(SdpSolverTest, MaxEigenvalue) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const MatrixXd c = sym(4, seed);
    SdpProblem p;
    p.objective = c;
    p.equalities.push_back({"trace", MatrixXd::Identity(4, 4), 1.0});
    const SdpSolution s = solve_sdp(p);
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    const double lmax = Eigen::SelfAdjointEigenSolver<MatrixXd>(c).eigenvalues()(3);
    EXPECT_NEAR(s.value, lmax, 1e-8);
    EXPECT_NEAR(s.primal_value, lmax, 1e-8);
    EXPECT_TRUE(certify(p, s).ok(1e-7)) << certify(p, s).max_residual();
  }
}

// Inequalities: max G11 s.t. G22 - 4 G11 >= 0, tr G = 1  ->  G11 = 1/5.
TEST(SdpSolverTest, InequalityMultipliers) {
  SdpProblem p;
  p.objective = MatrixXd::Zero(2, 2);
  p.objective(0, 0) = 1;
  MatrixXd m(2, 2);
  m << -4, 0, 0, 1;
  p.inequalities.push_back({"ratio", m});
  p.equalities.push_back({"trace", MatrixXd::Identity(2, 2), 1.0});
  const SdpSolution s = solve_sdp(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.value, 0.2, 1e-9);
  // Dual: S = nu I - E11 - lambda M PSD, min nu -> lambda = 1/5, nu = 1/5.
  EXPECT_NEAR(s.inequality_multipliers(0), 0.2, 1e-7);
  EXPECT_NEAR(s.equality_multipliers(0), 0.2, 1e-9);
  const CertificateReport r = certify(p, s);
  EXPECT_LE(r.gap, 1e-8);
  EXPECT_GE(r.min_eig_slack, -1e-8);
}

TEST(SdpSolverTest, DetectsInfeasibility) {
  // tr(G) = 1 and -tr(G) >= 0 cannot hold together.
  SdpProblem p;
  p.objective = MatrixXd::Identity(2, 2);
  p.inequalities.push_back({"neg", -MatrixXd::Identity(2, 2)});
  p.equalities.push_back({"trace", MatrixXd::Identity(2, 2), 1.0});
  EXPECT_EQ(solve_sdp(p).status, SolveStatus::kInfeasible);
}

TEST(SdpSolverTest, DetectsUnboundedness) {
  // max G12 with only G11 = 1: G22 free, so G12 is unbounded.
  SdpProblem p;
  p.objective = MatrixXd::Zero(2, 2);
  p.objective(0, 1) = p.objective(1, 0) = 0.5;
  MatrixXd e = MatrixXd::Zero(2, 2);
  e(0, 0) = 1;
  p.equalities.push_back({"g11", e, 1.0});
  EXPECT_EQ(solve_sdp(p).status, SolveStatus::kUnbounded);
}

TEST(SdpSolverTest, InputChecks) {
  SdpProblem p;
  p.objective = MatrixXd::Identity(2, 2);
  p.equalities.push_back({"trace", MatrixXd::Identity(3, 3), 1.0});
  EXPECT_THROW(solve_sdp(p), InputError);
  p.equalities[0].matrix = MatrixXd::Identity(2, 2);
  p.objective(0, 0) = NAN;
  EXPECT_THROW(solve_sdp(p), InputError);
  p.objective = MatrixXd();
  EXPECT_THROW(solve_sdp(p), InputError);
}

TEST(SdpSolverTest, AsymmetricInputIsWarned) {
  SdpProblem p;
  p.objective = MatrixXd::Zero(2, 2);
  p.objective(0, 1) = 1.0;  // symmetrized to 0.5 off-diagonal
  p.equalities.push_back({"trace", MatrixXd::Identity(2, 2), 1.0});
  const SdpSolution s = solve_sdp(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.value, 0.5, 1e-8);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(SdpSolverTest, Deterministic) {
  SdpProblem p;
  p.objective = sym(3, 11);
  p.equalities.push_back({"trace", MatrixXd::Identity(3, 3), 1.0});
  const SdpSolution a = solve_sdp(p), b = solve_sdp(p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.gram, b.gram);
}

TEST(SolverSettingsTest, EnvironmentOverride) {
  ::setenv("OSPEP_SOLVER_TOL", "1e-6", 1);
  const SolverSettings s = SolverSettings::FromEnvironment();
  ::unsetenv("OSPEP_SOLVER_TOL");
  EXPECT_DOUBLE_EQ(s.feasibility_tol, 1e-6);
  EXPECT_DOUBLE_EQ(s.gap_tol, 1e-6);
  EXPECT_DOUBLE_EQ(SolverSettings::FromEnvironment().gap_tol, 1e-9);
}

TEST(ConicTest, SvecRoundTrip) {
  const MatrixXd u = sym(4, 5), v = sym(4, 6);
  EXPECT_NEAR(svec(u).dot(svec(v)), (u * v).trace(), 1e-14);
  EXPECT_LE((smat(svec(u), 4) - u).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(svec_size(4), 10);
}

// LP in conic form: min x1 + 2 x2 s.t. x1 + x2 = 1, x >= 0.
TEST(ConicTest, LinearProgram) {
  ConicProblem p;
  p.cone.nonneg = 2;
  p.A = MatrixXd::Ones(1, 2);
  p.b = Eigen::VectorXd::Ones(1);
  p.c = (Eigen::VectorXd(2) << 1, 2).finished();
  const ConicResult r = solve_conic(p, SolverSettings{});
  ASSERT_EQ(r.status, ConicStatus::kOptimal);
  EXPECT_NEAR(r.primal_objective, 1.0, 1e-8);
  EXPECT_NEAR(r.x(0), 1.0, 1e-7);
  EXPECT_NEAR(r.y(0), 1.0, 1e-7);
}

}  // namespace
}  // namespace ospep
