// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "ospep/drs_analytic.hpp"
#include "ospep/errors.hpp"

namespace ospep {

namespace {

double sq(double x) { return x * x; }

// Threshold on theta, guarded: returns false when the guard fails.
bool coco_in_a(double mu, double b, double th) {
  if (!(mu * b - mu + b < 0.0)) return false;
  const double den = mu + mu * b - b - b * b - 2.0 * mu * b * b;
  return th <= 2.0 * (b + 1.0) * (mu - b - mu * b) / den;
}

bool coco_in_b(double mu, double b, double th) {
  if (!(mu * b - mu - b > 0.0)) return false;
  const double num = mu * mu + b * b + mu * b + mu + b - mu * mu * b * b;
  const double den = mu * mu + b * b + mu * mu * b + mu * b * b + mu + b -
                     2.0 * mu * mu * b * b;
  return th <= 2.0 * num / den;
}

bool coco_in_c(double mu, double b, double th) {
  return th >= 2.0 * (mu * b + mu + b) / (2.0 * mu * b + mu + b);
}

bool coco_in_d(double mu, double b, double th) {
  if (!(mu * b + mu - b < 0.0)) return false;
  const double den = b + mu * b - mu - mu * mu - 2.0 * mu * mu * b;
  return th <= 2.0 * (mu + 1.0) * (b - mu - mu * b) / den;
}

// (2(theta-1)mu + theta - 2) and (theta - 2(mu+1)), shared by mu-lip.
struct LipTerms {
  double p, q, root;
};

LipTerms lip_terms(double mu, double l, double th) {
  const double p = 2.0 * (th - 1.0) * mu + th - 2.0;
  const double q = th - 2.0 * (mu + 1.0);
  return {p, q, std::sqrt(sq(p) + sq(l) * sq(q))};
}

bool lip_in_a(double mu, double l, double th) {
  const LipTerms t = lip_terms(mu, l, th);
  return mu * (-t.p + sq(l) * t.q) / t.root <= std::sqrt(sq(l) + 1.0);
}

bool lip_in_b(double mu, double l, double th) {
  if (!(l < 1.0 && mu > (sq(l) + 1.0) / sq(l - 1.0))) return false;
  const double l2 = l * l, l3 = l2 * l;
  const double num =
      2.0 * (mu + 1.0) * (l + 1.0) * (mu + mu * l2 - l2 - 2.0 * mu * l - 1.0);
  const double den = 2.0 * mu * mu - mu + mu * l3 - l3 - 3.0 * mu * l2 - l2 -
                     2.0 * mu * mu * l - mu * l - l - 1.0;
  return th <= num / den;
}

double coco_rho5(double mu, double b, double th) {
  const double f1 = (2.0 - th) * mu * (b + 1.0) + th * b * (1.0 - mu);
  const double f2 = (2.0 - th) * b * (mu + 1.0) + th * mu * (1.0 - b);
  const double den =
      mu * b * (2.0 * mu * b * (1.0 - th) + (2.0 - th) * (mu + b + 1.0));
  return std::sqrt(2.0 - th) / 2.0 * std::sqrt(f1 * f2 / den);
}

double lip_rho_c(double mu, double l, double th) {
  const double l2 = l * l;
  const double f1 = th * (l2 + 1.0) - 2.0 * mu * (th + l2 - 1.0);
  const double f2 = th * (1.0 + 2.0 * mu + l2) - 2.0 * (mu + 1.0) * (l2 + 1.0);
  const double den = 2.0 * mu * (th + l2 - 1.0) - (2.0 - th) * (1.0 - l2);
  return std::sqrt((2.0 - th) / (4.0 * mu * (l2 + 1.0)) * f1 * f2 / den);
}

DrsParams scaled(Family family, const DrsParams& p, double alpha) {
  DrsParams s = p;
  s.mu = alpha * p.mu;
  s.p = family == Family::kMuCoco ? p.p / alpha : alpha * p.p;
  return s;
}

}  // namespace

std::string_view to_string(Family family) {
  return family == Family::kMuCoco ? "mu-coco" : "mu-lip";
}

char to_char(Branch branch) { return static_cast<char>('a' + int(branch)); }

bool CaseLabel::valid() const {
  return family == Family::kMuCoco || int(branch) <= int(Branch::kC);
}

std::string CaseLabel::str() const {
  return std::string(to_string(family)) + "/" + to_char(branch);
}

void check_domain(const DrsParams& params, double alpha) {
  if (!(std::isfinite(params.mu) && params.mu > 0.0))
    throw DomainError("mu must be finite and > 0");
  if (!(std::isfinite(params.p) && params.p > 0.0))
    throw DomainError("beta / L must be finite and > 0");
  if (!(std::isfinite(params.theta) && params.theta > 0.0 && params.theta < 2.0))
    throw DomainError("theta must lie in the open interval (0, 2)");
  if (!(std::isfinite(alpha) && alpha > 0.0))
    throw DomainError("alpha must be finite and > 0");
}

Branch classify(Family family, const DrsParams& params) {
  check_domain(params);
  const double mu = params.mu, p = params.p, th = params.theta;
  if (family == Family::kMuCoco) {
    if (coco_in_a(mu, p, th)) return Branch::kA;
    if (coco_in_b(mu, p, th)) return Branch::kB;
    if (coco_in_c(mu, p, th)) return Branch::kC;
    if (coco_in_d(mu, p, th)) return Branch::kD;
    return Branch::kE;
  }
  if (lip_in_a(mu, p, th)) return Branch::kA;
  if (lip_in_b(mu, p, th)) return Branch::kB;
  return Branch::kC;
}

bool in_region(CaseLabel label, const DrsParams& params) {
  if (!label.valid()) return false;
  check_domain(params);
  const double mu = params.mu, p = params.p, th = params.theta;
  if (label.family == Family::kMuCoco) {
    switch (label.branch) {
      case Branch::kA:
        return coco_in_a(mu, p, th);
      case Branch::kB:
        return coco_in_b(mu, p, th);
      case Branch::kC:
        return coco_in_c(mu, p, th);
      case Branch::kD:
        return coco_in_d(mu, p, th);
      case Branch::kE:
        return classify(label.family, params) == Branch::kE;
    }
  }
  switch (label.branch) {
    case Branch::kA:
      return lip_in_a(mu, p, th);
    case Branch::kB:
      return lip_in_b(mu, p, th);
    default:
      return classify(label.family, params) == Branch::kC;
  }
}

double branch_rho(CaseLabel label, const DrsParams& params) {
  if (!label.valid()) throw DomainError("invalid branch " + label.str());
  check_domain(params);
  const double mu = params.mu, p = params.p, th = params.theta;
  if (label.family == Family::kMuCoco) {
    const double b = p;
    switch (label.branch) {
      case Branch::kA:
        return std::abs(1.0 - th * b / (b + 1.0));
      case Branch::kB:
        return std::abs(1.0 - th * (1.0 + mu * b) / ((mu + 1.0) * (b + 1.0)));
      case Branch::kC:
        return std::abs(1.0 - th);
      case Branch::kD:
        return std::abs(1.0 - th * mu / (mu + 1.0));
      case Branch::kE:
        return coco_rho5(mu, b, th);
    }
  }
  const double l = p;
  switch (label.branch) {
    case Branch::kA: {
      const LipTerms t = lip_terms(mu, l, th);
      return (th + t.root / std::sqrt(sq(l) + 1.0)) / (2.0 * (mu + 1.0));
    }
    case Branch::kB:
      return std::abs(1.0 - th * (l + mu) / ((mu + 1.0) * (l + 1.0)));
    default:
      return lip_rho_c(mu, l, th);
  }
}

ClosedFormRate drs_rate(Family family, const DrsParams& params, double alpha) {
  check_domain(params, alpha);
  const DrsParams s = scaled(family, params, alpha);
  ClosedFormRate r;
  r.label = {family, classify(family, s)};
  r.rho = branch_rho(r.label, s);
  r.rho_sq = r.rho * r.rho;
  return r;
}

ClosedFormRate drs_rate_mu_coco(double mu, double beta, double theta,
                                double alpha) {
  return drs_rate(Family::kMuCoco, {mu, beta, theta}, alpha);
}

ClosedFormRate drs_rate_mu_lipschitz(double mu, double lip, double theta,
                                     double alpha) {
  return drs_rate(Family::kMuLipschitz, {mu, lip, theta}, alpha);
}

ClosedFormRate drs_rate_mu_coco_unrelaxed(double mu, double beta) {
  check_domain({mu, beta, 1.0});
  const double b = beta;
  ClosedFormRate r;
  r.label.family = Family::kMuCoco;
  if (b * b + mu * b + b - mu <= 0.0) {
    r.label.branch = Branch::kA;
    r.rho = std::abs(1.0 - b / (b + 1.0));
  } else if (mu * b - mu - b >= 1.0) {
    r.label.branch = Branch::kB;
    r.rho = std::abs(1.0 - (1.0 + mu * b) / ((mu + 1.0) * (b + 1.0)));
  } else if (mu * mu + mu * b + mu - b <= 0.0) {
    r.label.branch = Branch::kD;
    r.rho = std::abs(1.0 - mu / (mu + 1.0));
  } else {
    r.label.branch = Branch::kE;
    r.rho = 0.5 * (b + mu) / std::sqrt(b * mu * (b + mu + 1.0));
  }
  r.rho_sq = r.rho * r.rho;
  return r;
}

ClosedFormRate drs_rate_mu_lipschitz_unrelaxed(double mu, double lip) {
  check_domain({mu, lip, 1.0});
  const double l = lip, l2 = lip * lip;
  ClosedFormRate r;
  r.label.family = Family::kMuLipschitz;
  const bool a = (mu - 1.0) * sq(2.0 * mu + 1.0) * l2 >=
                     2.0 * mu * mu - 2.0 * std::sqrt(2.0) * std::sqrt(mu + 1.0) * mu +
                         mu + 1.0 ||
                 mu <= 1.0;
  const bool b =
      l < 1.0 && l <= (2.0 * mu * mu * (l - 1.0) * l2 + mu * (1.0 - 2.0 * l) - 1.0) /
                          ((mu + 1.0) * (l2 + l + 1.0));
  if (a) {
    r.label.branch = Branch::kA;
    r.rho = (1.0 + std::sqrt((sq(1.0 - 2.0 * (mu + 1.0)) * l2 + 1.0) / (l2 + 1.0))) /
            (2.0 * (1.0 + mu));
  } else if (b) {
    r.label.branch = Branch::kB;
    r.rho = (1.0 + mu * l) / ((1.0 + mu) * (1.0 + l));
  } else {
    r.label.branch = Branch::kC;
    r.rho = std::sqrt((2.0 * mu * l2 + l2 + 1.0) * (2.0 * mu * l2 - l2 - 1.0) /
                      (4.0 * mu * (l2 + 1.0) * (2.0 * mu * l2 + l2 - 1.0)));
  }
  r.rho_sq = r.rho * r.rho;
  return r;
}

}  // namespace ospep
