#include "ospep/ospep_core.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "frozen_values.hpp"
#include "ospep/errors.hpp"

namespace ospep {
namespace {

using Eigen::MatrixXd;

OperatorClass to_class(const oracle::Cls& c) {
  OperatorClass o;
  o.mu = c.mu;
  o.beta = c.beta;
  o.lip = c.lip;
  return o;
}

OperatorClass to_class(const std::optional<oracle::Cls>& c) {
  return c ? to_class(*c) : OperatorClass::Zero();
}

TEST(TightContractionTest, ThreeOperatorMatchesIndependentSolver) {
  for (const auto& pt : oracle::kDys) {
    const ProblemClasses cls{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
    const ContractionResult r =
        tight_contraction_factor(cls, {Method::kDYS, pt.alpha, pt.theta});
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_EQ(r.ordering, GramOrdering::kFull);
    EXPECT_NEAR(r.rho_sq, pt.sdp_rho_sq, 1e-7);
    EXPECT_NEAR(r.primal_value, r.rho_sq, 1e-7);
    EXPECT_TRUE(r.strong_duality);
    EXPECT_NEAR(r.rho, std::sqrt(r.rho_sq), 1e-15);
  }
}

TEST(TightContractionTest, ReducedOrderingsMatchIndependentSolver) {
  for (const auto& pt : oracle::kReduced) {
    const ProblemClasses cls{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
    const ContractionResult r =
        tight_contraction_factor(cls, {Method::kDYS, pt.alpha, pt.theta});
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_EQ(dimension(r.ordering), 3);
    EXPECT_NEAR(r.rho_sq, pt.sdp_rho_sq, 1e-7);
  }
}

TEST(TightContractionTest, DrsMatchesIndependentSolver) {
  for (const auto& pt : oracle::kMuCoco) {
    const ProblemClasses cls{OperatorClass::StronglyMonotone(pt.mu),
                             OperatorClass::Cocoercive(pt.p), OperatorClass::Zero()};
    const ContractionResult r =
        tight_contraction_factor(cls, {Method::kDRS, 1.0, pt.theta});
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_EQ(r.ordering, GramOrdering::kWithoutC);
    EXPECT_NEAR(r.rho_sq, pt.sdp_rho_sq, 1e-7);
  }
}

TEST(TightContractionTest, CertificateIsConsistent) {
  const auto& pt = oracle::kDys[2];
  const ProblemClasses cls{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
  const MethodSpec m{Method::kDYS, pt.alpha, pt.theta};
  const ContractionResult r = tight_contraction_factor(cls, m);
  const DualMap dual = build_dual(cls, m);
  EXPECT_EQ(dual.names().size(), r.certificate.multipliers.size());
  EXPECT_EQ((dual.slack(r.rho_sq, r.certificate.multipliers) - r.certificate.S)
                .cwiseAbs()
                .maxCoeff(),
            0.0);
  for (const auto& [name, v] : r.certificate.multipliers) EXPECT_GE(v, -1e-9) << name;
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<MatrixXd>(r.certificate.S)
                .eigenvalues()
                .minCoeff(),
            -1e-8);
  EXPECT_TRUE(r.certificate.multiplier("mu_A").has_value());
  EXPECT_FALSE(r.certificate.multiplier("mu_C").has_value());
  EXPECT_THROW(dual.slack(1.0, {{"nope", 1.0}}), InputError);
}

TEST(TightContractionTest, WorstCaseAttainsBound) {
  for (const auto& pt : oracle::kDys) {
    const ProblemClasses cls{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
    const ContractionResult r =
        tight_contraction_factor(cls, {Method::kDYS, pt.alpha, pt.theta});
    ASSERT_TRUE(r.worst_case.has_value());
    const WorstCaseInstance& w = *r.worst_case;
    EXPECT_TRUE(w.all_in_class());
    EXPECT_NEAR(w.initial_distance, 1.0, 1e-6);
    EXPECT_NEAR(w.achieved_ratio / w.initial_distance, r.rho_sq, 1e-6);
    EXPECT_GE(w.rank, 1);
    EXPECT_LE(w.rank, 4);
  }
}

TEST(TightContractionTest, QuasiContractionCoincides) {
  const auto& pt = oracle::kDys[0];
  const ProblemClasses cls{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
  const MethodSpec m{Method::kDYS, pt.alpha, pt.theta};
  EXPECT_EQ(quasi_contraction_factor(cls, m).rho_sq,
            tight_contraction_factor(cls, m).rho_sq);
}

TEST(TightContractionTest, DegenerateIntersectionIsUpperBoundOnly) {
  const ProblemClasses cls{OperatorClass::StronglyMonotone(1),
                           OperatorClass::StronglyMonotone(2).with_lip(2),
                           OperatorClass::Zero()};
  const ContractionResult r = tight_contraction_factor(cls, {Method::kDRS, 1, 1});
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_FALSE(r.strong_duality);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(ExtractWorstCaseTest, RankOneGram) {
  // Only z is nonzero: every point is 0, the values follow from the
  // resolvent identities.
  const ProblemClasses cls{OperatorClass::StronglyMonotone(0),
                           OperatorClass::Cocoercive(1), OperatorClass::Zero()};
  MatrixXd g = MatrixXd::Zero(3, 3);
  g(0, 0) = 1;
  const WorstCaseInstance w = extract_worst_case(g, cls, {Method::kDRS, 2.0, 1.0});
  EXPECT_EQ(w.rank, 1);
  EXPECT_NEAR(w.z.norm(), 1.0, 1e-12);
  for (const auto& t : w.triples) EXPECT_LE(t.point.norm(), 1e-12);
  EXPECT_NEAR((w.triples[0].value + w.z / 2.0).norm(), 0.0, 1e-12);  // A
  EXPECT_NEAR((w.triples[1].value - w.z / 2.0).norm(), 0.0, 1e-12);  // B
  EXPECT_LE(w.triples[2].value.norm(), 1e-12);                       // C
  EXPECT_THROW(extract_worst_case(-g, cls, {Method::kDRS, 1, 1}), InputError);
  EXPECT_THROW(extract_worst_case(MatrixXd::Identity(4, 4).topLeftCorner(2, 2),
                                  cls, {Method::kDRS, 1, 1}),
               InputError);
}

TEST(ValidationTest, MethodPatterns) {
  const auto mu = OperatorClass::StronglyMonotone(1);
  const auto co = OperatorClass::Cocoercive(1);
  const auto z = OperatorClass::Zero();
  EXPECT_NO_THROW(validate({mu, co, z}, {Method::kDRS, 1, 1}));
  EXPECT_THROW(validate({mu, co, co}, {Method::kDRS, 1, 1}), OrderingError);
  EXPECT_NO_THROW(validate({mu, z, co}, {Method::kFBS, 1, 1}));
  EXPECT_THROW(validate({mu, co, co}, {Method::kFBS, 1, 1}), OrderingError);
  EXPECT_THROW(validate({mu, z, z}, {Method::kDYS, 1, 1}), OrderingError);
  EXPECT_THROW(validate({mu, co, z}, {Method::kDRS, 0, 1}), InputError);
  EXPECT_THROW(validate({mu, co, z}, {Method::kDRS, 1, -1}), InputError);
  EXPECT_THROW(validate({OperatorClass{}, co, z}, {Method::kDRS, 1, 1}), ClassError);
}

TEST(ValidationTest, OrderingSelection) {
  const auto mu = OperatorClass::StronglyMonotone(1);
  const auto z = OperatorClass::Zero();
  EXPECT_EQ(select_ordering({mu, mu, mu}), GramOrdering::kFull);
  EXPECT_EQ(select_ordering({mu, mu, z}), GramOrdering::kWithoutC);
  EXPECT_EQ(select_ordering({mu, z, mu}), GramOrdering::kWithoutB);
  EXPECT_EQ(select_ordering({z, mu, mu}), GramOrdering::kWithoutA);
  EXPECT_EQ(select_ordering({mu, mu, z}, {.full_ordering = true}), GramOrdering::kFull);
}

// With every class parameter rescaled (mu -> mu / s, beta -> s beta,
// L -> L / s), the method with step s alpha is the same operator.
TEST(StructureTest, StepSizeScaling) {
  const auto& pt = oracle::kDys[2];
  const ProblemClasses base{to_class(pt.a), to_class(pt.b), to_class(pt.c)};
  const double ref =
      tight_contraction_factor(base, {Method::kDYS, pt.alpha, pt.theta}).rho_sq;
  for (double s : {0.25, 3.0}) {
    auto scale = [s](OperatorClass c) {
      if (c.mu) *c.mu /= s;
      if (c.beta) *c.beta *= s;
      if (c.lip) *c.lip /= s;
      return c;
    };
    const ProblemClasses cls{scale(base.a), scale(base.b), scale(base.c)};
    EXPECT_NEAR(
        tight_contraction_factor(cls, {Method::kDYS, s * pt.alpha, pt.theta}).rho_sq,
        ref, 1e-8);
  }
}

TEST(StructureTest, FullOrderingCrossCheckIsFlagged) {
  const ProblemClasses cls{OperatorClass::StronglyMonotone(1),
                           OperatorClass::Cocoercive(1), OperatorClass::Zero()};
  ContractionOptions opts;
  opts.build.full_ordering = true;
  opts.extract_worst_case = false;
  const ContractionResult r = tight_contraction_factor(cls, {Method::kDRS, 1, 1}, opts);
  EXPECT_EQ(r.ordering, GramOrdering::kFull);
  EXPECT_FALSE(r.strong_duality);
  EXPECT_NEAR(r.rho_sq, 1.0 / 3.0, 1e-6);
}

}  // namespace
}  // namespace ospep
