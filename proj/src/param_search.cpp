// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ospep/param_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ospep/errors.hpp"

namespace ospep {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

bool any_degenerate(const ProblemClasses& classes) {
  for (Role role : {Role::kA, Role::kB, Role::kC})
    if (classes[role].active() && is_degenerate(classes[role])) return true;
  return false;
}

SolveStatus map_status(ConicStatus s) {
  switch (s) {
    case ConicStatus::kOptimal:
    case ConicStatus::kReducedAccuracy:
      return SolveStatus::kOptimal;
    case ConicStatus::kPrimalInfeasible:
      return SolveStatus::kInfeasible;
    case ConicStatus::kDualInfeasible:
      return SolveStatus::kUnbounded;
    default:
      return SolveStatus::kNumericalFailure;
  }
}

}  // namespace

ThetaEmbeddedDual::ThetaEmbeddedDual(const ProblemClasses& classes,
                                     double alpha)
    : alpha_(alpha) {
  const DualMap dm = build_dual(classes, {Method::kDYS, alpha, 1.0});
  ordering_ = dm.ordering();
  m_i_ = dm.initial_distance();
  constraints_ = dm.constraints();
  w0_ = objective_vector(0.0, ordering_);
  w1_ = objective_vector(1.0, ordering_) - w0_;
}

std::vector<std::string> ThetaEmbeddedDual::names() const {
  std::vector<std::string> out;
  for (const auto& c : constraints_) out.push_back(c.name());
  return out;
}

Eigen::MatrixXd ThetaEmbeddedDual::embedded_slack(
    double rho_sq, const Eigen::VectorXd& lambdas, double theta) const {
  if (lambdas.size() != static_cast<Eigen::Index>(constraints_.size()))
    throw InputError("expected " + std::to_string(constraints_.size()) +
                     " multipliers");
  const int n = dimension();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd p = rho_sq * m_i_;
  for (std::size_t i = 0; i < constraints_.size(); ++i)
    p -= lambdas(i) * constraints_[i].matrix;
  const Eigen::VectorXd w = w0_ + theta * w1_;
  s.topLeftCorner(n, n) = p;
  s.topRightCorner(n, 1) = w;
  s.bottomLeftCorner(1, n) = w.transpose();
  s(n, n) = 1.0;
  return s;
}

Eigen::MatrixXd ThetaEmbeddedDual::slack(double rho_sq,
                                         const Eigen::VectorXd& lambdas,
                                         double theta) const {
  const int n = dimension();
  const Eigen::MatrixXd s = embedded_slack(rho_sq, lambdas, theta);
  return s.topLeftCorner(n, n) -
         s.topRightCorner(n, 1) * s.bottomLeftCorner(1, n) / s(n, n);
}

LmiProblem ThetaEmbeddedDual::lmi(std::optional<double> fixed_theta) const {
  const int n = dimension();
  const int m = static_cast<int>(constraints_.size());
  const bool free_theta = !fixed_theta.has_value();

  LmiProblem lmi;
  lmi.cone.nonneg = m + (free_theta ? 2 : 0);
  lmi.cone.psd = {n + 1};
  auto border = [n](const Eigen::VectorXd& v, double corner) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, n + 1);
    b.topRightCorner(n, 1) = v;
    b.bottomLeftCorner(1, n) = v.transpose();
    b(n, n) = corner;
    return b;
  };

  lmi.constant = lmi.zero_term();
  lmi.constant.blocks[0] =
      border(w0_ + fixed_theta.value_or(0.0) * w1_, 1.0);
  if (free_theta) lmi.constant.nonneg(m + 1) = 2.0;  // 2 - theta >= 0

  LmiTerm rho = lmi.zero_term();
  rho.blocks[0].topLeftCorner(n, n) = -m_i_;
  lmi.coefficients.push_back(std::move(rho));
  for (int i = 0; i < m; ++i) {
    LmiTerm t = lmi.zero_term();
    t.nonneg(i) = -1.0;
    t.blocks[0].topLeftCorner(n, n) = constraints_[i].matrix;
    lmi.coefficients.push_back(std::move(t));
  }
  if (free_theta) {
    LmiTerm t = lmi.zero_term();
    t.nonneg(m) = -1.0;     // theta >= 0
    t.nonneg(m + 1) = 1.0;  // 2 - theta >= 0
    t.blocks[0] = -border(w1_, 0.0);
    lmi.coefficients.push_back(std::move(t));
  }
  lmi.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lmi.coefficients.size()));
  lmi.b(0) = -1.0;
  return lmi;
}

ThetaOptimum rho_star_given_alpha(const ProblemClasses& classes, double alpha,
                                  const ThetaOptions& opts) {
  if (opts.fixed_theta && !(std::isfinite(*opts.fixed_theta) &&
                            *opts.fixed_theta > 0.0))
    throw InputError("fixed theta must be finite and > 0");
  const ThetaEmbeddedDual emb(classes, alpha);
  LmiProblem lmi = emb.lmi(opts.fixed_theta);
  const int m = static_cast<int>(emb.constraints().size());
  // Multipliers are solved for in units of 1 / |M_i|; at extreme alpha the
  // constraint matrices differ in scale by many orders of magnitude.
  Eigen::VectorXd unit = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    const double nrm = emb.constraints()[i].matrix.norm();
    if (nrm > 0.0) unit(i) = 1.0 / nrm;
    lmi.coefficients[i + 1].blocks[0] *= unit(i);
  }
  const ConicResult r = solve_conic(lmi.to_conic(), opts.solver);

  ThetaOptimum out;
  out.alpha = alpha;
  out.status = map_status(r.status);
  out.reduced_accuracy = r.status == ConicStatus::kReducedAccuracy;
  if (out.reduced_accuracy)
    out.warnings.push_back("converged to reduced accuracy");
  if (out.status != SolveStatus::kOptimal)
    out.warnings.push_back("interior point method stopped: " +
                           to_string(r.status));
  out.rho_sq = r.y(0);
  const Eigen::VectorXd lambdas = r.y.segment(1, m).cwiseProduct(unit);
  out.raw_theta = opts.fixed_theta ? *opts.fixed_theta : r.y(m + 1);
  out.theta = opts.fixed_theta
                  ? out.raw_theta
                  : std::clamp(out.raw_theta, kThetaMargin, 2.0 - kThetaMargin);

  out.embedded_slack = emb.embedded_slack(out.rho_sq, lambdas, out.theta);
  out.certificate.rho_sq = out.rho_sq;
  const auto names = emb.names();
  for (int i = 0; i < m; ++i)
    out.certificate.multipliers.emplace_back(names[i], lambdas(i));
  out.certificate.S = emb.slack(out.rho_sq, lambdas, out.theta);

  const bool degenerate = any_degenerate(classes);
  out.strong_duality = out.status == SolveStatus::kOptimal && !degenerate;
  if (degenerate)
    out.warnings.push_back(
        "degenerate class intersection: rho_sq is an upper bound only");
  return out;
}

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kConverged:
      return "converged";
    case SearchStatus::kNonUnimodal:
      return "non_unimodal";
    case SearchStatus::kSolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

namespace {

class Evaluator {
 public:
  Evaluator(const ProblemClasses& classes, const ThetaOptions& opts,
            ParamOptResult& res)
      : classes_(classes), opts_(opts), res_(res) {}

  // Failed evaluations count as +inf so the search moves away from them.
  double operator()(double log_alpha) {
    const double alpha = std::exp(log_alpha);
    const ThetaOptimum t = rho_star_given_alpha(classes_, alpha, opts_);
    res_.trace.push_back({alpha, t.rho_sq, t.theta, t.status});
    if (t.status != SolveStatus::kOptimal) {
      ++failures_;
      return std::numeric_limits<double>::infinity();
    }
    return t.rho_sq;
  }

  int failures() const { return failures_; }

 private:
  const ProblemClasses& classes_;
  const ThetaOptions& opts_;
  ParamOptResult& res_;
  int failures_ = 0;
};

struct Bracket {
  double lo, hi;
};

Bracket golden(Evaluator& f, double lo, double hi, double width) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return {lo, hi};
}

// A unimodal function sampled anywhere is nonincreasing then nondecreasing.
bool looks_unimodal(std::vector<AlphaEvaluation> trace) {
  std::sort(trace.begin(), trace.end(),
            [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
  const auto best = std::min_element(
      trace.begin(), trace.end(),
      [](const auto& a, const auto& b) { return a.rho_sq < b.rho_sq; });
  auto slack = [](double v) { return 1e-7 * std::max(1.0, std::abs(v)); };
  for (auto it = trace.begin(); it != best; ++it)
    if (std::next(it)->rho_sq > it->rho_sq + slack(it->rho_sq)) return false;
  for (auto it = best; std::next(it) != trace.end(); ++it)
    if (std::next(it)->rho_sq < it->rho_sq - slack(it->rho_sq)) return false;
  return true;
}

}  // namespace

ParamOptResult optimize_alpha(const ProblemClasses& classes,
                              const SearchSettings& search) {
  if (!(search.alpha_lo > 0.0 && search.alpha_hi > search.alpha_lo &&
        std::isfinite(search.alpha_hi)))
    throw InputError("alpha bracket must satisfy 0 < lo < hi < inf");
  if (!(search.rel_tol > 0.0)) throw InputError("rel_tol must be > 0");
  validate(classes, {Method::kDYS, 1.0, 1.0});

  ParamOptResult res;
  Evaluator f(classes, search.theta, res);
  const double width = std::log1p(search.rel_tol);
  auto around_best = [&](const std::vector<double>& grid) {
    const int n = static_cast<int>(grid.size());
    int best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double v = f(std::log(grid[i]));
      if (v < fbest) fbest = v, best = i;
    }
    return Bracket{std::log(grid[std::max(best - 1, 0)]),
                   std::log(grid[std::min(best + 1, n - 1)])};
  };

  Bracket br{std::log(search.alpha_lo), std::log(search.alpha_hi)};
  if (search.scan_points >= 3)
    br = around_best(
        log_space(search.alpha_lo, search.alpha_hi, search.scan_points));
  br = golden(f, br.lo, br.hi, width);
  res.status = SearchStatus::kConverged;

  std::vector<AlphaEvaluation> ok;
  for (const auto& e : res.trace)
    if (e.status == SolveStatus::kOptimal) ok.push_back(e);
  if (!looks_unimodal(ok)) {
    res.status = SearchStatus::kNonUnimodal;
    res.warnings.push_back(
        "rho^2(alpha) is not unimodal on the golden-section record; "
        "fell back to a log grid with local refinement");
    br = around_best(log_space(search.alpha_lo, search.alpha_hi,
                               std::max(search.fallback_grid, 3)));
    br = golden(f, br.lo, br.hi, width);
  }

  const auto best = std::min_element(
      res.trace.begin(), res.trace.end(), [](const auto& a, const auto& b) {
        const bool ao = a.status == SolveStatus::kOptimal;
        const bool bo = b.status == SolveStatus::kOptimal;
        if (ao != bo) return ao;
        return a.rho_sq < b.rho_sq;
      });
  if (best == res.trace.end() || best->status != SolveStatus::kOptimal) {
    res.status = SearchStatus::kSolverFailure;
    res.warnings.push_back("no alpha evaluation reached optimality");
    return res;
  }
  if (f.failures() > 0)
    res.warnings.push_back(std::to_string(f.failures()) +
                           " evaluation(s) failed and were skipped");
  res.alpha_star = best->alpha;
  res.theta_star = best->theta;
  res.rho_sq_star = best->rho_sq;
  res.bracket = {std::exp(br.lo), std::exp(br.hi)};
  return res;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo && n >= 1))
    throw InputError("log_space needs 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<CurvePoint> rho_curve(const ProblemClasses& classes,
                                  const std::vector<double>& alphas,
                                  const ThetaOptions& opts, int workers) {
  for (double a : alphas)
    if (!(std::isfinite(a) && a > 0.0))
      throw InputError("every alpha must be finite and > 0");
  std::vector<CurvePoint> out(alphas.size());
  auto eval = [&](std::size_t i) {
    CurvePoint& p = out[i];
    p.alpha = alphas[i];
    try {
      const ThetaOptimum t = rho_star_given_alpha(classes, alphas[i], opts);
      p.rho_sq = t.rho_sq;
      p.theta_opt = t.theta;
      p.status = t.status;
    } catch (const std::exception& e) {
      p.status = SolveStatus::kNumericalFailure;
      p.error = e.what();
      p.rho_sq = p.theta_opt = std::numeric_limits<double>::quiet_NaN();
    }
  };

  const int nw = std::min<int>(std::max(workers, 1),
                               static_cast<int>(alphas.size()));
  if (nw <= 1) {
    for (std::size_t i = 0; i < alphas.size(); ++i) eval(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) eval(i);
      });
  }  // joined here
  return out;
}

}  // namespace ospep
