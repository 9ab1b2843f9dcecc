#include "ospep/drs_analytic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "frozen_values.hpp"
#include "ospep/errors.hpp"

namespace ospep {
namespace {

Branch branch_of(char c) { return static_cast<Branch>(c - 'a'); }

TEST(ClosedFormTest, MuCocoMatchesHighPrecisionEvaluation) {
  for (const auto& pt : oracle::kMuCoco) {
    const ClosedFormRate r = drs_rate_mu_coco(pt.mu, pt.p, pt.theta);
    EXPECT_NEAR(r.rho, pt.rho, 1e-13) << pt.mu << " " << pt.p << " " << pt.theta;
    EXPECT_NEAR(r.rho_sq, pt.rho * pt.rho, 1e-13);
    EXPECT_EQ(r.label.branch, branch_of(pt.branch));
    EXPECT_EQ(r.label.family, Family::kMuCoco);
  }
}

TEST(ClosedFormTest, MuLipMatchesHighPrecisionEvaluation) {
  for (const auto& pt : oracle::kMuLip) {
    const ClosedFormRate r = drs_rate_mu_lipschitz(pt.mu, pt.p, pt.theta);
    EXPECT_NEAR(r.rho, pt.rho, 1e-13) << pt.mu << " " << pt.p << " " << pt.theta;
    EXPECT_EQ(r.label.branch, branch_of(pt.branch));
  }
}

TEST(ClosedFormTest, Labels) {
  EXPECT_EQ(drs_rate_mu_coco(1, 1, 1).label.str(), "mu-coco/e");
  EXPECT_EQ(drs_rate_mu_lipschitz(1, 1, 1).label.str(), "mu-lip/a");
  EXPECT_TRUE((CaseLabel{Family::kMuCoco, Branch::kE}).valid());
  EXPECT_FALSE((CaseLabel{Family::kMuLipschitz, Branch::kD}).valid());
  EXPECT_EQ(to_char(Branch::kC), 'c');
}

TEST(ClosedFormTest, DomainChecks) {
  EXPECT_THROW(drs_rate_mu_coco(1, 1, 2.0), DomainError);
  EXPECT_THROW(drs_rate_mu_coco(1, 1, 0.0), DomainError);
  EXPECT_THROW(drs_rate_mu_coco(0, 1, 1), DomainError);
  EXPECT_THROW(drs_rate_mu_lipschitz(1, -1, 1), DomainError);
  EXPECT_THROW(drs_rate_mu_lipschitz(1, 1, 1, 0.0), DomainError);
  EXPECT_THROW(drs_rate_mu_coco(NAN, 1, 1), DomainError);
}

// General alpha: the same formula with alpha mu, beta / alpha, alpha L.
TEST(ClosedFormTest, StepSize) {
  const double a = 0.37;
  EXPECT_NEAR(drs_rate_mu_coco(2, 3, 1.1, a).rho,
              drs_rate_mu_coco(2 * a, 3 / a, 1.1).rho, 1e-15);
  EXPECT_NEAR(drs_rate_mu_lipschitz(2, 3, 1.1, a).rho,
              drs_rate_mu_lipschitz(2 * a, 3 * a, 1.1).rho, 1e-15);
}

TEST(ClosedFormTest, UnrelaxedCorollaries) {
  for (double mu : {0.1, 0.5, 1.0, 3.0, 12.0})
    for (double p : {0.1, 0.4, 1.0, 2.5, 9.0}) {
      EXPECT_NEAR(drs_rate_mu_coco_unrelaxed(mu, p).rho,
                  drs_rate_mu_coco(mu, p, 1.0).rho, 1e-10);
      EXPECT_NEAR(drs_rate_mu_lipschitz_unrelaxed(mu, p).rho,
                  drs_rate_mu_lipschitz(mu, p, 1.0).rho, 1e-10);
    }
}

TEST(ClosedFormTest, SymmetricInMuAndBeta) {
  for (const auto& pt : oracle::kMuCoco)
    EXPECT_NEAR(drs_rate_mu_coco(pt.p, pt.mu, pt.theta).rho, pt.rho, 1e-12);
}

TEST(CertificateTest, VerifiesAtOraclePoints) {
  for (const auto& pt : oracle::kMuCoco) {
    const DrsParams p{pt.mu, pt.p, pt.theta};
    const SosCertificate c =
        dual_certificate({Family::kMuCoco, branch_of(pt.branch)}, p);
    EXPECT_NEAR(c.rho_sq, pt.rho * pt.rho, 1e-12);
    const VerificationReport r = verify_certificate(c);
    EXPECT_TRUE(r.ok()) << c.label.str() << " sos " << r.sos.value;
    EXPECT_EQ(r.checks().size(), 4u);
  }
  for (const auto& pt : oracle::kMuLip) {
    const DrsParams p{pt.mu, pt.p, pt.theta};
    const SosCertificate c =
        dual_certificate({Family::kMuLipschitz, branch_of(pt.branch)}, p);
    EXPECT_TRUE(verify_certificate(c).ok()) << c.label.str();
    EXPECT_TRUE(c.lambda("lambda_L_B").has_value());
  }
}

TEST(CertificateTest, OutOfRegionThrows) {
  // (1, 1, 1) lies in mu-coco case e only.
  EXPECT_THROW(dual_certificate({Family::kMuCoco, Branch::kA}, {1, 1, 1}),
               DomainError);
}

TEST(CertificateTest, CorruptedCertificateFails) {
  SosCertificate c = dual_certificate({Family::kMuCoco, Branch::kE}, {1, 1, 1});
  c.rho_sq -= 1e-3;  // S no longer matches (rho^2, lambda)
  EXPECT_FALSE(verify_certificate(c).ok());
  c = dual_certificate({Family::kMuCoco, Branch::kE}, {1, 1, 1});
  c.k1 = -1.0;
  EXPECT_FALSE(verify_certificate(c).ok());
}

TEST(LowerBoundTest, AttainsClosedForm) {
  for (const auto& pt : oracle::kMuCoco) {
    const LowerBoundInstance inst = lower_bound_mu_coco(pt.mu, pt.p, pt.theta);
    EXPECT_NEAR(inst.achieved_rho, pt.rho, 1e-9);
    EXPECT_LE(operator_identity_residual(inst), 1e-12);
    EXPECT_TRUE(check_membership(inst).ok()) << inst.label.str();
  }
  for (const auto& pt : oracle::kMuLip) {
    const LowerBoundInstance inst = lower_bound_mu_lipschitz(pt.mu, pt.p, pt.theta);
    EXPECT_NEAR(inst.achieved_rho, pt.rho, 1e-9);
    EXPECT_LE(operator_identity_residual(inst), 1e-12);
    EXPECT_TRUE(check_membership(inst).ok()) << inst.label.str();
  }
}

TEST(LowerBoundTest, NormalConeCase) {
  const LowerBoundInstance inst = lower_bound_mu_coco(1, 1, 1.9);
  EXPECT_EQ(inst.label.branch, Branch::kC);
  EXPECT_EQ(inst.a_kind, OperatorKind::kNormalConeOrigin);
  EXPECT_TRUE(inst.j_a.isZero(0.0));
  ASSERT_TRUE(inst.b_matrix.has_value());
  EXPECT_TRUE(inst.b_matrix->isZero(0.0));
  EXPECT_NEAR(inst.achieved_rho, 0.9, 1e-15);
}

TEST(LowerBoundTest, MixingParameterRange) {
  const LowerBoundInstance e = lower_bound_mu_coco(1, 1, 1);
  ASSERT_TRUE(e.k.has_value());
  EXPECT_GT(*e.k, 0.0);
  EXPECT_LT(*e.k, 1.0);  // 1 / beta^2
  const LowerBoundInstance c = lower_bound_mu_lipschitz(3, 0.5, 0.3);
  EXPECT_EQ(c.label.branch, Branch::kC);
  ASSERT_TRUE(c.k.has_value());
  EXPECT_GE(*c.k, 0.0);
  EXPECT_LE(*c.k, 1.0);
}

TEST(LowerBoundTest, MembershipDetectsWrongInstance) {
  LowerBoundInstance inst = lower_bound_mu_coco(1, 1, 1);
  inst.j_b = Eigen::Matrix2d::Identity() * 2.0;  // expansive resolvent
  EXPECT_FALSE(check_membership(inst).ok());
}

TEST(TightnessTest, MatchesIndependentSolver) {
  for (const auto& pt : oracle::kMuCoco) {
    const TightnessReport r = verify_tightness(Family::kMuCoco, {pt.mu, pt.p, pt.theta});
    EXPECT_TRUE(r.ok(1e-6));
    EXPECT_NEAR(r.sdp_dual_rho_sq, pt.sdp_rho_sq, 1e-7);
    EXPECT_LE(r.duality_gap(), 1e-7);
  }
  for (const auto& pt : oracle::kMuLip) {
    const TightnessReport r =
        verify_tightness(Family::kMuLipschitz, {pt.mu, pt.p, pt.theta});
    EXPECT_TRUE(r.ok(1e-6));
    EXPECT_NEAR(r.sdp_dual_rho_sq, pt.sdp_rho_sq, 1e-7);
  }
}

TEST(TightnessTest, SwappedRoles) {
  // A cocoercive, B strongly monotone: same factor by self-duality.
  TightnessOptions opts;
  opts.swap_roles = true;
  const TightnessReport r = verify_tightness(Family::kMuCoco, {0.3, 0.4, 1.2}, opts);
  EXPECT_NEAR(r.sdp_dual_rho_sq, r.closed_form_rho_sq, 1e-6);
  EXPECT_FALSE(r.lower_bound_rho_sq.has_value());
  const ProblemClasses cls = drs_classes(Family::kMuCoco, {0.3, 0.4, 1.2}, true);
  EXPECT_TRUE(cls.a.beta.has_value());
  EXPECT_TRUE(cls.b.mu.has_value());
}

}  // namespace
}  // namespace ospep
