// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "ospep/drs_analytic.hpp"
#include "ospep/errors.hpp"

namespace ospep {

namespace {

double sq(double x) { return x * x; }

using Lambdas = std::vector<std::pair<std::string, double>>;

double get(const Lambdas& ls, std::string_view name) {
  for (const auto& [n, v] : ls)
    if (n == name) return v;
  return 0.0;
}

void fill_mu_coco(SosCertificate& c) {
  const double mu = c.params.mu, b = c.params.p, th = c.params.theta;
  double la = 0.0, lb = 0.0;
  auto& m = c.m;
  switch (c.label.branch) {
    case Branch::kA: {
      const double r = 1.0 - th * b / (b + 1.0);
      const double d = (2.0 - th) * (b + 1.0) + 2.0 * mu * (1.0 + b - th * b);
      c.rho_sq = sq(r);
      la = 2.0 * th * (1.0 + b) / (1.0 - b) * r;
      lb = 2.0 * th * r;
      m = {-1.0, (2.0 - th) * (b + 1.0) / d, -(2.0 - th) * b / d,
           -(b + 1.0) / b, 1.0};
      c.k1 = th * d / (1.0 - b);
      c.k2 = 2.0 * b * b * th * (1.0 + b - th * b) / ((1.0 - b) * sq(b + 1.0)) *
             ((b - 1.0) * mu * (2.0 * b * (th - 1.0) + th - 2.0) -
              (2.0 - th) * b * (b + 1.0)) /
             d;
      break;
    }
    case Branch::kB: {
      const double r = 1.0 - th * (1.0 + mu * b) / ((mu + 1.0) * (b + 1.0));
      const double d = (2.0 - th) * (b + 1.0) + 2.0 * mu * (1.0 + b - th * b);
      c.rho_sq = sq(r);
      la = 2.0 * th * (b + 1.0) / (b - 1.0) * r;
      lb = 2.0 * th * (mu - 1.0) / (mu + 1.0) * r;
      m = {-1.0, 2.0 / (mu + 1.0) - (2.0 - th) * (b + 1.0) / d,
           -1.0 / (mu + 1.0) + (2.0 - th) * b / d, -(b + 1.0) / b, 1.0};
      c.k1 = th * d / (b - 1.0);
      c.k2 = 2.0 * th * b * b *
             ((b + 1.0) * (mu + 1.0) - th * (1.0 + mu * b)) /
             (sq(mu + 1.0) * (b - 1.0) * sq(b + 1.0)) *
             (mu * b * b * (-2.0 * th * mu + th + 2.0 * mu) + th * b * b +
              (th - 2.0) * mu * (mu + 1.0) +
              b * (th * mu * mu + th - 2.0 * mu - 2.0) - 2.0 * b * b) /
             d;
      break;
    }
    case Branch::kC: {
      const double e = 2.0 * (th - 1.0) * mu + th - 2.0;
      c.rho_sq = sq(th - 1.0);
      la = lb = 2.0 * th * (th - 1.0);
      m = {-1.0, -(2.0 - th) / e, (2.0 - th) / e, -1.0, 1.0};
      c.k1 = th * e;
      c.k2 = 2.0 * (th - 1.0) * th *
             (th * b + th * mu * (1.0 + 2.0 * b) - 2.0 * (mu + b + mu * b)) / e;
      break;
    }
    case Branch::kD: {
      const double r = 1.0 - th * mu / (mu + 1.0);
      const double e = 2.0 * (th - 1.0) * mu + th - 2.0;
      c.rho_sq = sq(r);
      la = 2.0 * th * r;
      lb = 2.0 * th * (1.0 - mu) / (1.0 + mu) * r;
      m = {-1.0, (2.0 - th) / e + 2.0 / (mu + 1.0),
           -th * mu / ((mu + 1.0) * e), -1.0, 1.0};
      c.k1 = -th * e;
      c.k2 = 2.0 * th * ((th - 1.0) * mu - 1.0) *
             (-th * (b - mu * mu * (1.0 + 2.0 * b) - mu * (1.0 - b)) -
              2.0 * (mu + 1.0) * (mu * b + mu - b)) /
             (sq(mu + 1.0) * e);
      break;
    }
    case Branch::kE: {
      const double f1 = (2.0 - th) * mu * (b + 1.0) + th * b * (1.0 - mu);
      const double f2 = (2.0 - th) * b * (mu + 1.0) + th * mu * (1.0 - b);
      const double d = 2.0 * mu * b * (1.0 - th) + (2.0 - th) * (mu + b + 1.0);
      const double g = (b + 1.0) * (th - 2.0) + b * th;
      c.rho_sq = (2.0 - th) / 4.0 * f1 * f2 / (mu * b * d);
      la = th * f1 / b;
      lb = th * (2.0 - th) / b * f1 / d;
      m = {-2.0 * mu *
               (2.0 * (th - 1.0) * mu * b + th * b + (th - 2.0) * (mu + 1.0) -
                2.0 * b) /
               b,
           2.0 * mu * g / b, (th - 2.0) - mu * g / b, 0.0, 0.0};
      c.k1 = b / (4.0 * mu) * th / d;
      c.k2 = 0.0;
      break;
    }
  }
  c.lambdas = {{"lambda_mu_A", la}, {"lambda_beta_B", lb}};
}

void fill_mu_lip(SosCertificate& c) {
  const double mu = c.params.mu, l = c.params.p, th = c.params.theta;
  const double l2 = l * l;
  double la = 0.0, ll = 0.0, lm = 0.0;
  auto& m = c.m;
  switch (c.label.branch) {
    case Branch::kA: {
      const double p = 2.0 * (th - 1.0) * mu + th - 2.0;
      const double q = th - 2.0 * (mu + 1.0);
      const double cc = std::sqrt((sq(p) + l2 * sq(q)) / (l2 + 1.0));
      c.rho_sq = sq((th + cc) / (2.0 * (mu + 1.0)));
      la = th * (th + cc) / (mu + 1.0);
      ll = (2.0 - th) * th * mu / ((mu + 1.0) * (l2 + 1.0)) * (th + cc) / cc;
      lm = th * (th + cc) / (sq(mu + 1.0) * cc) *
           (cc + mu * (p - l2 * q) / (l2 + 1.0));
      c.k1 = th * cc;
      c.k2 = 0.0;
      m = {-1.0, (cc - th * mu) / (cc * (1.0 + mu)),
           (2.0 * (mu + 1.0) - (cc + th)) / (2.0 * cc * (mu + 1.0)), 0.0, 0.0};
      break;
    }
    case Branch::kB: {
      const double r = 1.0 - th * (l + mu) / ((mu + 1.0) * (l + 1.0));
      const double d = 2.0 * (mu + 1.0) * (l + 1.0) - th * (2.0 * mu + l + 1.0);
      c.rho_sq = sq(r);
      la = 2.0 * th * (1.0 + l) / (1.0 - l) * r;
      ll = th / l * (mu - 1.0) / (mu + 1.0) * r;
      lm = 0.0;
      c.k1 = th * d / (1.0 - l);
      c.k2 = th * ((l + 1.0) * (mu + 1.0) - th * (l + mu)) /
             (sq(mu + 1.0) * (1.0 - l) * l * sq(l + 1.0)) *
             (2.0 * (mu + 1.0) * (l + 1.0) * (mu * sq(1.0 - l) - (l2 + 1.0)) +
              th * (mu * (1.0 + l + 3.0 * l2 - l2 * l) +
                    (1.0 + l + l2 + l2 * l) + 2.0 * mu * mu * (l - 1.0))) /
             d;
      m = {-1.0, 2.0 / (mu + 1.0) - (2.0 - th) * (l + 1.0) / d,
           1.0 / (1.0 + mu) * (th * (mu + l) - 2.0 * l * (mu + 1.0)) / d,
           -(1.0 + l), 1.0};
      break;
    }
    default: {
      const double f1 = th * (l2 + 1.0) - 2.0 * mu * (th + l2 - 1.0);
      const double f2 = th * (1.0 + 2.0 * mu + l2) - 2.0 * (mu + 1.0) * (l2 + 1.0);
      const double den = 2.0 * mu * (th + l2 - 1.0) - (2.0 - th) * (1.0 - l2);
      c.rho_sq = (2.0 - th) / (4.0 * mu * (l2 + 1.0)) * f1 * f2 / den;
      la = th * (th - 2.0 * mu * (th + l2 - 1.0) / (l2 + 1.0));
      ll = (2.0 - th) * th / (l2 + 1.0) * f1 / (-den);
      lm = 0.0;
      c.k1 = th / (4.0 * mu * (l2 + 1.0) * (-den));
      c.k2 = 0.0;
      m = {4.0 * mu * mu * (1.0 - l2 - th) + 2.0 * mu * (2.0 - th) * (1.0 - l2),
           4.0 * mu * (l2 + th - 1.0),
           2.0 * mu * (1.0 - l2 - th) - (2.0 - th) * (l2 + 1.0), 0.0, 0.0};
      break;
    }
  }
  c.lambdas = {{"lambda_mu_A", la}, {"lambda_L_B", ll}, {"lambda_mu_B", lm}};
}

}  // namespace

std::optional<double> SosCertificate::lambda(std::string_view name) const {
  for (const auto& [n, v] : lambdas)
    if (n == name) return v;
  return std::nullopt;
}

Eigen::Matrix3d SosCertificate::sos_matrix() const {
  const Eigen::Vector3d v(m[2], m[0], m[1]);
  const Eigen::Vector3d w(m[4], 0.0, m[3]);
  return k1 * v * v.transpose() + k2 * w * w.transpose();
}

Eigen::Matrix3d dual_matrix(Family family, const DrsParams& params,
                            double rho_sq, const Lambdas& lambdas) {
  const double mu = params.mu, p = params.p, th = params.theta;
  const double la = get(lambdas, "lambda_mu_A");
  Eigen::Matrix3d s;
  if (family == Family::kMuCoco) {
    const double lb = get(lambdas, "lambda_beta_B");
    s << rho_sq + p * lb - 1.0, -th + la / 2.0, th - (0.5 + p) * lb,  //
        -th + la / 2.0, -th * th + (1.0 + mu) * la, th * th - la,      //
        th - (0.5 + p) * lb, th * th - la, -th * th + (1.0 + p) * lb;
    return s;
  }
  const double ll = get(lambdas, "lambda_L_B");
  const double lm = get(lambdas, "lambda_mu_B");
  s << rho_sq + ll - 1.0, la / 2.0 - th, th - ll - lm / 2.0,  //
      la / 2.0 - th, -th * th + la + la * mu, th * th - la,   //
      th - ll - lm / 2.0, th * th - la, -ll * p * p - th * th + ll + lm;
  return s;
}

SosCertificate dual_certificate(CaseLabel label, const DrsParams& params) {
  if (!label.valid()) throw DomainError("invalid branch " + label.str());
  if (!in_region(label, params))
    throw DomainError("parameters are outside the region of " + label.str());
  SosCertificate c;
  c.label = label;
  c.params = params;
  if (label.family == Family::kMuCoco)
    fill_mu_coco(c);
  else
    fill_mu_lip(c);
  c.S = dual_matrix(label.family, params, c.rho_sq, c.lambdas);
  return c;
}

bool VerificationReport::ok() const {
  return sos.pass && nonnegative.pass && psd.pass && dual.pass;
}

std::vector<CheckResult> VerificationReport::checks() const {
  return {sos, nonnegative, psd, dual};
}

VerificationReport verify_certificate(const SosCertificate& cert) {
  VerificationReport r;
  const double res = (cert.S - cert.sos_matrix()).norm();
  r.sos = {"sos_identity", std::isfinite(res) && res <= 1e-9, res, 1e-9};

  double lo = std::min(cert.k1, cert.k2);
  for (const auto& [n, v] : cert.lambdas) lo = std::min(lo, v);
  r.nonnegative = {"nonnegative", lo >= -1e-12, lo, -1e-12};

  const Eigen::Matrix3d sym = 0.5 * (cert.S + cert.S.transpose());
  const double ev =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sym).eigenvalues()(0);
  r.psd = {"psd", ev >= -1e-10, ev, -1e-10};

  // rho^2 bounds the rate only if S is the dual slack of (rho^2, lambda).
  const double dres =
      (cert.S - dual_matrix(cert.label.family, cert.params, cert.rho_sq,
                            cert.lambdas))
          .norm();
  r.dual = {"dual_feasible",
            std::isfinite(dres) && dres <= 1e-9 && cert.rho_sq >= 0.0 &&
                r.nonnegative.pass && r.psd.pass,
            dres, 1e-9};
  return r;
}

}  // namespace ospep
