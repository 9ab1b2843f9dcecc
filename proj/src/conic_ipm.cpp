// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "ospep/conic.hpp"
#include "ospep/errors.hpp"

namespace ospep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFraction = 0.99;
// A stalled run is still usable when its best iterate is within this factor
// of the requested tolerances.
constexpr double kReducedAccuracyFactor = 1e3;

// Nesterov-Todd scaling of one PSD block: R^T S R = R^{-1} X R^{-T} = diag(lam).
struct BlockScaling {
  Eigen::MatrixXd r, rinv, winv;  // winv = (R R^T)^{-1}
  Eigen::VectorXd lam;
};

struct Scaling {
  Eigen::VectorXd w;    // nonnegative part, x / w = w s = lam
  Eigen::VectorXd lam;  // nonnegative part
  std::vector<BlockScaling> blocks;
};

// Visits every PSD block of a vector in K.
template <typename F>
void for_blocks(const ConeDims& cone, F&& f) {
  int off = cone.nonneg;
  for (std::size_t k = 0; k < cone.psd.size(); ++k) {
    const int n = cone.psd[k];
    f(k, off, n);
    off += svec_size(n);
  }
}

bool compute_scaling(const ConeDims& cone, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& s, Scaling& sc) {
  const int p = cone.nonneg;
  sc.w = (x.head(p).array() / s.head(p).array()).sqrt();
  sc.lam = (x.head(p).array() * s.head(p).array()).sqrt();
  sc.blocks.resize(cone.psd.size());
  bool ok = true;
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    if (!ok) return;
    const Eigen::MatrixXd xm = smat(x.segment(off, svec_size(n)), n);
    const Eigen::MatrixXd sm = smat(s.segment(off, svec_size(n)), n);
    Eigen::LLT<Eigen::MatrixXd> lx(xm), ls(sm);
    if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) {
      ok = false;
      return;
    }
    const Eigen::MatrixXd l_x = lx.matrixL();
    const Eigen::MatrixXd l_s = ls.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(l_s.transpose() * l_x,
                                          Eigen::ComputeFullU |
                                              Eigen::ComputeFullV);
    const Eigen::VectorXd sig = svd.singularValues();
    if (sig.minCoeff() <= 0.0) {
      ok = false;
      return;
    }
    const Eigen::MatrixXd& v = svd.matrixV();
    BlockScaling& b = sc.blocks[k];
    b.lam = sig;
    b.r = l_x * v * sig.cwiseSqrt().cwiseInverse().asDiagonal();
    const Eigen::MatrixXd lxinv =
        l_x.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd::Identity(n, n));
    b.rinv = sig.cwiseSqrt().asDiagonal() * v.transpose() * lxinv;
    b.winv = b.rinv.transpose() * b.rinv;
  });
  return ok && sc.w.allFinite() && sc.lam.allFinite();
}

Eigen::VectorXd identity_element(const ConeDims& cone) {
  Eigen::VectorXd e(cone.size());
  e.head(cone.nonneg).setOnes();
  for_blocks(cone, [&](std::size_t, int off, int n) {
    e.segment(off, svec_size(n)) = svec(Eigen::MatrixXd::Identity(n, n));
  });
  return e;
}

// lambda o lambda for the scaled point lambda.
Eigen::VectorXd lam_square(const ConeDims& cone, const Scaling& sc) {
  Eigen::VectorXd out(cone.size());
  out.head(cone.nonneg) = sc.lam.array().square();
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    const Eigen::VectorXd l2 = sc.blocks[k].lam.array().square();
    out.segment(off, svec_size(n)) = svec(l2.asDiagonal().toDenseMatrix());
  });
  return out;
}

// Solves lambda o u = r.
Eigen::VectorXd lam_divide(const ConeDims& cone, const Scaling& sc,
                           const Eigen::VectorXd& r) {
  Eigen::VectorXd out(cone.size());
  out.head(cone.nonneg) = r.head(cone.nonneg).array() / sc.lam.array();
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    const Eigen::VectorXd& l = sc.blocks[k].lam;
    Eigen::MatrixXd u = smat(r.segment(off, svec_size(n)), n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) u(i, j) *= 2.0 / (l(i) + l(j));
    out.segment(off, svec_size(n)) = svec(u);
  });
  return out;
}

Eigen::VectorXd jordan_product(const ConeDims& cone, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  Eigen::VectorXd out(cone.size());
  out.head(cone.nonneg) =
      a.head(cone.nonneg).array() * b.head(cone.nonneg).array();
  for_blocks(cone, [&](std::size_t, int off, int n) {
    const Eigen::MatrixXd u = smat(a.segment(off, svec_size(n)), n);
    const Eigen::MatrixXd v = smat(b.segment(off, svec_size(n)), n);
    out.segment(off, svec_size(n)) = svec(0.5 * (u * v + v * u));
  });
  return out;
}

enum class Apply { kScalePrimal, kUnscalePrimal, kScaleDual, kUnscaleDual };

// kScalePrimal: W^{-T} x.  kUnscalePrimal: W^T v.  kScaleDual: W s.
// kUnscaleDual: W^{-1} v.
Eigen::VectorXd apply_scaling(const ConeDims& cone, const Scaling& sc,
                              const Eigen::VectorXd& v, Apply op) {
  Eigen::VectorXd out(cone.size());
  const int p = cone.nonneg;
  if (op == Apply::kScaleDual || op == Apply::kUnscalePrimal)
    out.head(p) = sc.w.array() * v.head(p).array();
  else
    out.head(p) = v.head(p).array() / sc.w.array();
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    const BlockScaling& b = sc.blocks[k];
    const Eigen::MatrixXd u = smat(v.segment(off, svec_size(n)), n);
    Eigen::MatrixXd r;
    switch (op) {
      case Apply::kScalePrimal:
        r = b.rinv * u * b.rinv.transpose();
        break;
      case Apply::kUnscalePrimal:
        r = b.r * u * b.r.transpose();
        break;
      case Apply::kScaleDual:
        r = b.r.transpose() * u * b.r;
        break;
      case Apply::kUnscaleDual:
        r = b.rinv.transpose() * u * b.rinv;
        break;
    }
    out.segment(off, svec_size(n)) = svec(r);
  });
  return out;
}

// Largest t with lam + t d in K, computed in scaled coordinates.
double max_step(const ConeDims& cone, const Scaling& sc,
                const Eigen::VectorXd& d) {
  double t = kInf;
  for (int i = 0; i < cone.nonneg; ++i)
    if (d(i) < 0.0) t = std::min(t, -sc.lam(i) / d(i));
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    const Eigen::VectorXd is = sc.blocks[k].lam.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd m =
        is.asDiagonal() * smat(d.segment(off, svec_size(n)), n) *
        is.asDiagonal();
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (lmin < 0.0) t = std::min(t, -1.0 / lmin);
  });
  return t;
}

}  // namespace

SolverSettings SolverSettings::FromEnvironment() {
  SolverSettings s;
  if (const char* env = std::getenv("OSPEP_SOLVER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && std::isfinite(v) && v > 0.0) {
      s.feasibility_tol = v;
      s.gap_tol = v;
    }
  }
  return s;
}

int ConeDims::size() const {
  int n = nonneg;
  for (int d : psd) n += svec_size(d);
  return n;
}

int ConeDims::degree() const {
  int n = nonneg;
  for (int d : psd) n += d;
  return n;
}

std::string to_string(ConicStatus status) {
  switch (status) {
    case ConicStatus::kOptimal:
      return "optimal";
    case ConicStatus::kPrimalInfeasible:
      return "primal_infeasible";
    case ConicStatus::kDualInfeasible:
      return "dual_infeasible";
    case ConicStatus::kReducedAccuracy:
      return "reduced_accuracy";
    case ConicStatus::kIterationLimit:
      return "iteration_limit";
    case ConicStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

Eigen::VectorXd svec(const Eigen::MatrixXd& u) {
  const int n = static_cast<int>(u.rows());
  Eigen::VectorXd v(svec_size(n));
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i)
      v(k++) = (i == j) ? u(i, j) : M_SQRT2 * 0.5 * (u(i, j) + u(j, i));
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int n) {
  Eigen::MatrixXd u(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) {
      if (i == j) {
        u(i, j) = v(k++);
      } else {
        u(i, j) = u(j, i) = v(k++) * M_SQRT1_2;
      }
    }
  return u;
}

LmiTerm LmiProblem::zero_term() const {
  LmiTerm t;
  t.nonneg = Eigen::VectorXd::Zero(cone.nonneg);
  for (int n : cone.psd) t.blocks.push_back(Eigen::MatrixXd::Zero(n, n));
  return t;
}

Eigen::VectorXd pack(const ConeDims& cone, const LmiTerm& term) {
  if (term.nonneg.size() != cone.nonneg ||
      term.blocks.size() != cone.psd.size())
    throw InputError("LMI term does not match the cone layout");
  Eigen::VectorXd v(cone.size());
  v.head(cone.nonneg) = term.nonneg;
  for_blocks(cone, [&](std::size_t k, int off, int n) {
    if (term.blocks[k].rows() != n || term.blocks[k].cols() != n)
      throw InputError("LMI block has the wrong dimension");
    v.segment(off, svec_size(n)) = svec(term.blocks[k]);
  });
  return v;
}

LmiTerm unpack(const ConeDims& cone, const Eigen::VectorXd& v) {
  LmiTerm t;
  t.nonneg = v.head(cone.nonneg);
  for_blocks(cone, [&](std::size_t, int off, int n) {
    t.blocks.push_back(smat(v.segment(off, svec_size(n)), n));
  });
  return t;
}

ConicProblem LmiProblem::to_conic() const {
  const int m = static_cast<int>(coefficients.size());
  if (b.size() != m) throw InputError("LMI objective has the wrong length");
  ConicProblem p;
  p.cone = cone;
  p.c = pack(cone, constant);
  p.b = b;
  p.A.resize(m, cone.size());
  for (int k = 0; k < m; ++k) p.A.row(k) = pack(cone, coefficients[k]);
  return p;
}

ConicResult solve_conic(const ConicProblem& pr, const SolverSettings& st) {
  const ConeDims& cone = pr.cone;
  const int N = cone.size();
  const int m = static_cast<int>(pr.A.rows());
  if (pr.A.cols() != N || pr.b.size() != m || pr.c.size() != N)
    throw InputError("conic problem dimensions are inconsistent");
  if (!pr.A.allFinite() || !pr.b.allFinite() || !pr.c.allFinite())
    throw InputError("conic problem data is not finite");

  const double nu = cone.degree();
  const double bnorm = 1.0 + pr.b.norm();
  const double cnorm = 1.0 + pr.c.norm();
  const Eigen::VectorXd e = identity_element(cone);

  Eigen::VectorXd x = e, s = e, y = Eigen::VectorXd::Zero(m);
  double tau = 1.0, kappa = 1.0;

  ConicResult res;
  auto finish = [&](ConicStatus status, int it) {
    res.status = status;
    res.iterations = it;
    const bool certificate = status == ConicStatus::kPrimalInfeasible ||
                             status == ConicStatus::kDualInfeasible;
    const double t = certificate ? 1.0 : tau;
    res.x = x / t;
    res.y = y / t;
    res.s = s / t;
    res.primal_objective = pr.c.dot(res.x);
    res.dual_objective = pr.b.dot(res.y);
    res.primal_residual = (pr.A * res.x - pr.b).norm() / bnorm;
    res.dual_residual = (pr.A.transpose() * res.y + res.s - pr.c).norm() / cnorm;
    res.relative_gap = std::abs(res.primal_objective - res.dual_objective) /
                       (1.0 + std::abs(res.primal_objective) +
                        std::abs(res.dual_objective));
    return res;
  };

  Scaling sc;
  const Eigen::MatrixXd at = pr.A.transpose();

  // Best iterate by scaled KKT merit; returned when progress stalls.
  struct Snapshot {
    Eigen::VectorXd x, y, s;
    double tau = 1.0, kappa = 1.0, merit = kInf, gap = kInf;
    int it = 0;
  } best;
  auto stalled = [&](ConicStatus fallback, int it) {
    x = best.x;
    y = best.y;
    s = best.s;
    tau = best.tau;
    kappa = best.kappa;
    return finish(best.merit <= kReducedAccuracyFactor
                      ? ConicStatus::kReducedAccuracy
                      : fallback,
                  it);
  };

  for (int it = 0; it <= st.max_iterations; ++it) {
    const Eigen::VectorXd rp = pr.A * x - pr.b * tau;
    const Eigen::VectorXd rd = at * y + s - pr.c * tau;
    const double rg = pr.c.dot(x) - pr.b.dot(y) + kappa;
    const double mu = (x.dot(s) + tau * kappa) / (nu + 1.0);

    const double pobj = pr.c.dot(x) / tau;
    const double dobj = pr.b.dot(y) / tau;
    const double pres = rp.norm() / tau / bnorm;
    const double dres = rd.norm() / tau / cnorm;
    const double gap = std::max(std::abs(pobj - dobj), x.dot(s) / (tau * tau)) /
                       (1.0 + std::abs(pobj) + std::abs(dobj));
    if (pres <= st.feasibility_tol && dres <= st.feasibility_tol &&
        gap <= st.gap_tol)
      return finish(ConicStatus::kOptimal, it);
    const double merit = std::max(
        {pres / st.feasibility_tol, dres / st.feasibility_tol, gap / st.gap_tol});
    // Among iterates within the reduced tolerance prefer the smallest gap.
    const bool usable = merit <= kReducedAccuracyFactor;
    const bool best_usable = best.merit <= kReducedAccuracyFactor;
    if ((usable && (!best_usable || gap < best.gap)) ||
        (!usable && !best_usable && merit < best.merit))
      best = {x, y, s, tau, kappa, merit, gap, it};

    const double by = pr.b.dot(y);
    if (by > 0.0 && (at * y + s).norm() <= st.feasibility_tol * by)
      return finish(ConicStatus::kPrimalInfeasible, it);
    const double cx = pr.c.dot(x);
    if (cx < 0.0 && (pr.A * x).norm() <= st.feasibility_tol * -cx)
      return finish(ConicStatus::kDualInfeasible, it);

    if (it == st.max_iterations)
      return stalled(ConicStatus::kIterationLimit, it);
    if (!compute_scaling(cone, x, s, sc))
      return stalled(ConicStatus::kNumericalFailure, it);

    // Everything below lives in the scaled space: a~_k = W a_k, c~ = W c.
    Eigen::MatrixXd as(N, m);
    for (int k = 0; k < m; ++k)
      as.col(k) = apply_scaling(cone, sc, at.col(k), Apply::kScaleDual);
    const Eigen::VectorXd cs = apply_scaling(cone, sc, pr.c, Apply::kScaleDual);
    const Eigen::VectorXd asc = as.transpose() * cs;
    Eigen::MatrixXd red(m + 1, m + 1);
    red.topLeftCorner(m, m) = as.transpose() * as;
    red.topRightCorner(m, 1) = -(asc + pr.b);
    red.bottomLeftCorner(1, m) = (asc - pr.b).transpose();
    red(m, m) = -(cs.squaredNorm() + kappa / tau);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(red);

    const Eigen::VectorXd lam2 = lam_square(cone, sc);

    struct Direction {
      Eigen::VectorXd dx, dy, ds, dxs, dss;  // dxs, dss: scaled dx, ds
      double dtau = 0.0, dkappa = 0.0;
    };
    // Solves
    //   A^T dy + ds - c dtau = r1,  A dx - b dtau = r2,
    //   c^T dx - b^T dy + dkappa = r3,  W^{-T} dx + W ds = r4,
    //   kappa dtau + tau dkappa = r5.
    auto solve_once = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                          double r3, const Eigen::VectorXd& r4, double r5) {
      const Eigen::VectorXd t =
          apply_scaling(cone, sc, r1, Apply::kScaleDual) - r4;
      Eigen::VectorXd rhs(m + 1);
      rhs.head(m) = r2 + as.transpose() * t;
      rhs(m) = r3 - r5 / tau + cs.dot(t);
      const Eigen::VectorXd sol = lu.solve(rhs);
      Direction d;
      d.dy = sol.head(m);
      d.dtau = sol(m);
      d.dxs = as * d.dy - cs * d.dtau - t;
      d.dss = r4 - d.dxs;
      d.dx = apply_scaling(cone, sc, d.dxs, Apply::kUnscalePrimal);
      d.ds = apply_scaling(cone, sc, d.dss, Apply::kUnscaleDual);
      d.dkappa = (r5 - kappa * d.dtau) / tau;
      return d;
    };
    // Newton direction for complementarity target rc (scaled) and rk
    // (tau-kappa), with residuals reduced by the factor eta.
    auto direction = [&](const Eigen::VectorXd& rc, double rk, double eta) {
      const Eigen::VectorXd r1 = -eta * rd, r2 = -eta * rp;
      const double r3 = -eta * rg;
      const Eigen::VectorXd r4 = lam_divide(cone, sc, rc);
      Direction d = solve_once(r1, r2, r3, r4, rk);
      for (int ref = 0; ref < 2; ++ref) {
        const Eigen::VectorXd e1 = r1 - (at * d.dy + d.ds - pr.c * d.dtau);
        const Eigen::VectorXd e2 = r2 - (pr.A * d.dx - pr.b * d.dtau);
        const double e3 = r3 - (pr.c.dot(d.dx) - pr.b.dot(d.dy) + d.dkappa);
        const Eigen::VectorXd e4 = r4 - (d.dxs + d.dss);
        const double e5 = rk - (kappa * d.dtau + tau * d.dkappa);
        const Direction c = solve_once(e1, e2, e3, e4, e5);
        d.dx += c.dx;
        d.dy += c.dy;
        d.ds += c.ds;
        d.dxs += c.dxs;
        d.dss += c.dss;
        d.dtau += c.dtau;
        d.dkappa += c.dkappa;
      }
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double t = std::min(max_step(cone, sc, d.dxs), max_step(cone, sc, d.dss));
      if (d.dtau < 0.0) t = std::min(t, -tau / d.dtau);
      if (d.dkappa < 0.0) t = std::min(t, -kappa / d.dkappa);
      return t;
    };

    const Direction aff = direction(-lam2, -tau * kappa, 1.0);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    const Eigen::VectorXd rc = sigma * mu * e - lam2 -
                               jordan_product(cone, aff.dxs, aff.dss);
    const double rk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const Direction d = direction(rc, rk, 1.0 - sigma);
    const double alpha = std::min(1.0, kStepFraction * step_length(d));
    if (!(alpha > 1e-14) || !d.dx.allFinite() || !d.dy.allFinite())
      return stalled(ConicStatus::kNumericalFailure, it);

    x += alpha * d.dx;
    s += alpha * d.ds;
    y += alpha * d.dy;
    tau += alpha * d.dtau;
    kappa += alpha * d.dkappa;
  }
  return stalled(ConicStatus::kIterationLimit, st.max_iterations);
}

}  // namespace ospep
