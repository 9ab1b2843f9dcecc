// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "ospep/drs_analytic.hpp"
#include "ospep/errors.hpp"

namespace ospep {

ProblemClasses drs_classes(Family family, const DrsParams& params,
                           bool swap_roles) {
  OperatorClass a = OperatorClass::StronglyMonotone(params.mu);
  OperatorClass b = family == Family::kMuCoco
                        ? OperatorClass::Cocoercive(params.p)
                        : OperatorClass::StronglyMonotone(0.0).with_lip(params.p);
  if (swap_roles) std::swap(a, b);
  return {a, b, OperatorClass::Zero()};
}

double TightnessReport::closed_form_gap() const {
  return std::abs(closed_form_rho_sq - sdp_dual_rho_sq);
}

double TightnessReport::duality_gap() const {
  return std::abs(sdp_primal_rho_sq - sdp_dual_rho_sq);
}

double TightnessReport::max_discrepancy() const {
  double d = std::max(closed_form_gap(), duality_gap());
  if (lower_bound_rho_sq) {
    d = std::max(d, std::abs(*lower_bound_rho_sq - closed_form_rho_sq));
    d = std::max(d, std::abs(*lower_bound_rho_sq - sdp_dual_rho_sq));
  }
  return d;
}

bool TightnessReport::ok(double tol) const {
  return status == SolveStatus::kOptimal && max_discrepancy() <= tol;
}

TightnessReport verify_tightness(Family family, const DrsParams& params,
                                 const TightnessOptions& opts) {
  const ClosedFormRate cf = drs_rate(family, params);
  TightnessReport r;
  r.label = cf.label;
  r.params = params;
  r.closed_form_rho_sq = cf.rho_sq;

  ContractionOptions copts = opts.contraction;
  copts.extract_worst_case = false;
  const ContractionResult sdp =
      tight_contraction_factor(drs_classes(family, params, opts.swap_roles),
                               {Method::kDRS, 1.0, params.theta}, copts);
  r.status = sdp.status;
  r.strong_duality = sdp.strong_duality;
  if (sdp.status != SolveStatus::kOptimal)
    throw SolverError("SDP for " + cf.label.str() + " ended with status " +
                      std::string(to_string(sdp.status)));
  r.sdp_dual_rho_sq = sdp.rho_sq;
  r.sdp_primal_rho_sq = sdp.primal_value;

  if (!opts.swap_roles) {
    const double rho = lower_bound(family, params).achieved_rho;
    r.lower_bound_rho_sq = rho * rho;
  }
  return r;
}

}  // namespace ospep
