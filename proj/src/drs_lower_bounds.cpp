// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "ospep/drs_analytic.hpp"
#include "ospep/errors.hpp"

namespace ospep {

namespace {

using Mat2 = Eigen::Matrix2d;

double sq(double x) { return x * x; }

Mat2 rotation(double c, double s) {
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

Mat2 resolvent(const Mat2& a) { return (Mat2::Identity() + a).inverse(); }

void finish(LowerBoundInstance& inst) {
  const double th = inst.params.theta;
  const Mat2 id = Mat2::Identity();
  inst.t = id - th * inst.j_b + th * inst.j_a * (2.0 * inst.j_b - id);
  const double top = Eigen::SelfAdjointEigenSolver<Mat2>(inst.t.transpose() * inst.t)
                         .eigenvalues()(1);
  inst.achieved_rho = std::sqrt(std::max(top, 0.0));
}

void set_a_identity(LowerBoundInstance& inst, double mu) {
  inst.a_kind = OperatorKind::kScaledIdentity;
  inst.a_matrix = mu * Mat2::Identity();
  inst.j_a = resolvent(*inst.a_matrix);
}

void set_a_cone_origin(LowerBoundInstance& inst) {
  inst.a_kind = OperatorKind::kNormalConeOrigin;
  inst.a_matrix.reset();
  inst.j_a.setZero();
}

void set_b(LowerBoundInstance& inst, const Mat2& b) {
  inst.b_matrix = b;
  inst.j_b = resolvent(b);
}

// Mixing parameter and rotation for the mu-coco interior branch.
void coco_rotation(LowerBoundInstance& inst) {
  const double mu = inst.params.mu, b = inst.params.p, th = inst.params.theta;
  const double num =
      ((2.0 - th) * mu * (mu + 1.0) +
       b * (mu - 1.0) * (2.0 - th + 2.0 * mu * (1.0 - th))) *
      ((2.0 - th) * mu + b * (2.0 * (1.0 - th) * mu - th + 2.0));
  const double e = 2.0 * b * (th - 1.0) + th - 2.0;
  const double den = b * b * (th - 2.0) * mu * (2.0 * b * (th - 2.0) - th - 2.0) +
                     b * b * (2.0 * b + 1.0) * sq(th - 2.0) +
                     (2.0 * b - 1.0) * mu * mu * mu * sq(e) -
                     (2.0 * b - 1.0) * mu * mu * (2.0 * b - th + 2.0) * e;
  const double k = num / den;
  inst.k = k;
  if (!(std::isfinite(k) && k > 0.0 && k < 1.0 / (b * b)))
    throw ConsistencyError("mixing parameter K = " + std::to_string(k) +
                           " outside (0, 1/beta^2) for " + inst.label.str());
  const double s = std::sqrt(k - k * k * b * b);
  const double root = std::sqrt(
      4.0 * sq(th - 2.0) * sq(mu + 1.0) * (k - b * b * k * k) +
      sq((th - 2.0) * (k - 1.0) - 2.0 * mu * (th - b * th * k + k - 1.0)));
  const double a = (2.0 * th * mu + th - 2.0 * b * th * k * mu - th * k +
                    2.0 * k * mu + 2.0 * k - 2.0 * mu - 2.0 + root) /
                   (2.0 * (th - 2.0) * s);
  inst.a = a;
  inst.a_kind = OperatorKind::kRotation2x2;
  inst.a_matrix = rotation(mu, a);
  inst.j_a = resolvent(*inst.a_matrix);
  set_b(inst, rotation(b * k, s));
}

double lip_mixing(double mu, double l, double th) {
  const double l2 = l * l;
  const double p = 2.0 * (th - 1.0) * mu + th - 2.0;
  const double q = th - 2.0 * (mu + 1.0);
  const double num =
      (mu - 1.0) * sq(l2 * q - p) - 4.0 * sq(th - 2.0) * (mu + 1.0) * l2;
  const double den =
      4.0 * mu * mu * (th + l2 - 1.0) * ((1.0 - th) * (l2 - mu) + l2 * mu - 1.0) +
      sq(th - 2.0) * (mu + 1.0) * sq(l2 + 1.0);
  return (l2 + 1.0) / (2.0 * l) * num / den;
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kNormalConeOrigin:
      return "NormalConeOrigin";
    case OperatorKind::kScaledIdentity:
      return "ScaledIdentity";
    case OperatorKind::kRotation2x2:
      return "Rotation2x2";
    case OperatorKind::kScaledIdentityPlusNormalConeLine:
      return "ScaledIdentityPlusNormalConeLine";
  }
  return "?";
}

LowerBoundInstance lower_bound_mu_coco(double mu, double beta, double theta) {
  LowerBoundInstance inst;
  inst.params = {mu, beta, theta};
  inst.label = {Family::kMuCoco, classify(Family::kMuCoco, inst.params)};
  const Mat2 id = Mat2::Identity();
  switch (inst.label.branch) {
    case Branch::kA:
      set_a_cone_origin(inst);
      set_b(inst, id / beta);
      break;
    case Branch::kB:
      set_a_identity(inst, mu);
      set_b(inst, id / beta);
      break;
    case Branch::kC:
      set_a_cone_origin(inst);
      set_b(inst, Mat2::Zero());
      break;
    case Branch::kD:
      set_a_identity(inst, mu);
      set_b(inst, Mat2::Zero());
      break;
    case Branch::kE:
      coco_rotation(inst);
      break;
  }
  finish(inst);
  return inst;
}

LowerBoundInstance lower_bound_mu_lipschitz(double mu, double lip,
                                            double theta) {
  LowerBoundInstance inst;
  inst.params = {mu, lip, theta};
  inst.label = {Family::kMuLipschitz, classify(Family::kMuLipschitz, inst.params)};
  switch (inst.label.branch) {
    case Branch::kA:
      // mu I + normal cone of {0} x R: J_A projects onto the second axis.
      inst.a_kind = OperatorKind::kScaledIdentityPlusNormalConeLine;
      inst.j_a << 0.0, 0.0, 0.0, 1.0 / (mu + 1.0);
      set_b(inst, rotation(0.0, -lip));
      break;
    case Branch::kB:
      set_a_identity(inst, mu);
      set_b(inst, lip * Mat2::Identity());
      break;
    default: {
      const double k = lip_mixing(mu, lip, theta);
      inst.k = k;
      if (!(std::isfinite(k) && k >= 0.0 && k <= 1.0))
        throw ConsistencyError("mixing parameter K = " + std::to_string(k) +
                               " outside [0, 1] for " + inst.label.str());
      // mu I + normal cone of R x {0}: J_A projects onto the first axis.
      inst.a_kind = OperatorKind::kScaledIdentityPlusNormalConeLine;
      inst.j_a << 1.0 / (mu + 1.0), 0.0, 0.0, 0.0;
      set_b(inst, lip * rotation(k, std::sqrt(1.0 - k * k)));
      break;
    }
  }
  finish(inst);
  return inst;
}

LowerBoundInstance lower_bound(Family family, const DrsParams& params) {
  return family == Family::kMuCoco
             ? lower_bound_mu_coco(params.mu, params.p, params.theta)
             : lower_bound_mu_lipschitz(params.mu, params.p, params.theta);
}

double operator_identity_residual(const LowerBoundInstance& inst) {
  const Mat2 id = Mat2::Identity();
  const double th = inst.params.theta;
  const Mat2 t = id - th * inst.j_b + th * inst.j_a * (2.0 * inst.j_b - id);
  return (inst.t - t).cwiseAbs().maxCoeff();
}

MembershipReport check_membership(const LowerBoundInstance& inst, int samples,
                                  std::uint64_t seed) {
  const double mu = inst.params.mu, p = inst.params.p;
  const OperatorClass a_cls = OperatorClass::StronglyMonotone(mu);
  const OperatorClass b_cls = inst.label.family == Family::kMuCoco
                                  ? OperatorClass::Cocoercive(p)
                                  : OperatorClass::StronglyMonotone(0.0).with_lip(p);

  MembershipReport r;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Eigen::Vector2d> us(std::max(samples, 2));
  for (auto& u : us) u = {nd(rng), nd(rng)};

  auto sample = [&](const Mat2& j, const OperatorClass& cls) {
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t k = i + 1; k < us.size(); ++k) {
        const Eigen::VectorXd x1 = j * us[i], x2 = j * us[k];
        const Eigen::VectorXd q1 = us[i] - x1, q2 = us[k] - x2;
        const double scale = std::max(1.0, (us[i] - us[k]).squaredNorm());
        if (!check_two_point(cls, {x1, q1, x2, q2}, 1e-9 * scale)) return false;
      }
    return true;
  };
  r.a_in_class = sample(inst.j_a, a_cls);
  r.b_in_class = sample(inst.j_b, b_cls);

  auto eig_min = [](const Mat2& m) {
    return Eigen::SelfAdjointEigenSolver<Mat2>(0.5 * (m + m.transpose()))
        .eigenvalues()(0);
  };
  double worst = 0.0;
  if (inst.a_matrix) worst = std::max(worst, mu - eig_min(*inst.a_matrix));
  if (inst.b_matrix) {
    const Mat2& b = *inst.b_matrix;
    if (inst.label.family == Family::kMuCoco) {
      if (std::abs(b.determinant()) > 0.0)
        worst = std::max(worst, p - eig_min(b.inverse()));
    } else {
      const double norm = Eigen::JacobiSVD<Mat2>(b).singularValues()(0);
      worst = std::max({worst, norm - p, -eig_min(b)});
    }
  }
  r.worst_violation = worst;
  r.matrix_checks = worst <= 1e-9;

  if (inst.k) {
    const double k = *inst.k;
    r.k_in_range = inst.label.family == Family::kMuCoco
                       ? (k > 0.0 && k < 1.0 / (p * p))
                       : (k >= 0.0 && k <= 1.0);
  }
  return r;
}

}  // namespace ospep
