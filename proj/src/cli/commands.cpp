// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ospep/cli.hpp"
#include "ospep/errors.hpp"

namespace ospep::cli {

namespace {

using nlohmann::json;

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json to_json(const std::vector<std::pair<std::string, double>>& named) {
  json obj = json::object();
  for (const auto& [n, v] : named) obj[n] = v;
  return obj;
}

json to_json(const OperatorClass& c) {
  if (!c.active()) return json{{"zero", true}};
  json j = json::object();
  if (c.mu) j["mu"] = *c.mu;
  if (c.beta) j["beta"] = *c.beta;
  if (c.lip) j["lip"] = *c.lip;
  return j;
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int solver_failure(std::ostream& err, SolveStatus s) {
  err << "error: solver ended with status " << to_string(s) << "\n";
  return kExitSolver;
}

// Maps exceptions to exit codes. Everything a user can cause is a config
// error; solver and internal-consistency failures are computation errors.
template <typename F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int cmd_rho(const ProblemConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json j;
    if (cfg.theta) {
      ContractionOptions opts;
      opts.solver = cfg.solver;
      const MethodSpec spec{cfg.method, cfg.alpha, *cfg.theta};
      const ContractionResult r = tight_contraction_factor(cfg.classes, spec, opts);
      if (r.status != SolveStatus::kOptimal) return solver_failure(err, r.status);
      j = {{"rho_sq", r.rho_sq},
           {"rho", r.rho},
           {"theta", *cfg.theta},
           {"alpha", cfg.alpha},
           {"primal_value", r.primal_value},
           {"strong_duality", r.strong_duality},
           {"ordering", std::string(to_string(r.ordering))},
           {"certificate",
            {{"lambdas", to_json(r.certificate.multipliers)},
             {"S", to_json(r.certificate.S)}}},
           {"applicability_note", r.applicability_note},
           {"warnings", r.warnings}};
    } else {
      ThetaOptions opts;
      opts.solver = cfg.solver;
      const ThetaOptimum t = rho_star_given_alpha(cfg.classes, cfg.alpha, opts);
      if (t.status != SolveStatus::kOptimal) return solver_failure(err, t.status);
      j = {{"rho_sq", t.rho_sq},
           {"rho", std::sqrt(std::max(t.rho_sq, 0.0))},
           {"theta", t.theta},
           {"theta_optimized", true},
           {"alpha", cfg.alpha},
           {"strong_duality", t.strong_duality},
           {"certificate",
            {{"lambdas", to_json(t.certificate.multipliers)},
             {"S", to_json(t.certificate.S)}}},
           {"applicability_note", std::string(kApplicabilityNote)},
           {"warnings", t.warnings}};
    }
    if (cfg.format == OutputFormat::kCsv) {
      out << "rho_sq,rho,theta,strong_duality\r\n"
          << fmt17(j["rho_sq"].get<double>()) << ","
          << fmt17(j["rho"].get<double>()) << ","
          << fmt17(j["theta"].get<double>()) << ","
          << (j["strong_duality"].get<bool>() ? "true" : "false") << "\r\n";
    } else {
      print(out, j);
    }
    return int(kExitOk);
  });
}

int cmd_closed_form(Family family, const DrsParams& params, double alpha,
                    std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ClosedFormRate r = drs_rate(family, params, alpha);
    print(out, {{"family", std::string(to_string(family))},
                {"mu", params.mu},
                {family == Family::kMuCoco ? "beta" : "lip", params.p},
                {"theta", params.theta},
                {"alpha", alpha},
                {"rho", r.rho},
                {"rho_sq", r.rho_sq},
                {"case", std::string(1, to_char(r.label.branch))}});
    return int(kExitOk);
  });
}

namespace {

struct VerifyRow {
  DrsParams params;
  std::optional<TightnessReport> tight;
  bool certificate_ok = false;
  bool membership_ok = false;
  std::string error;
};

std::vector<DrsParams> verify_grid(const VerifyOptions& o) {
  if (o.n_mu < 1 || o.n_p < 1 || o.n_theta < 1)
    throw InputError("grid sizes must be >= 1");
  const auto mus = log_space(o.mu_lo, o.mu_hi, o.n_mu);
  const auto ps = log_space(o.p_lo, o.p_hi, o.n_p);
  std::vector<double> ths(o.n_theta);
  for (int k = 0; k < o.n_theta; ++k)
    ths[k] = o.n_theta == 1 ? o.theta_lo
                            : o.theta_lo + (o.theta_hi - o.theta_lo) * k /
                                               (o.n_theta - 1);

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto step = [](double lo, double hi, int n) {
    return n > 1 ? (hi - lo) / (n - 1) : 0.0;
  };
  const double hm = step(std::log(o.mu_lo), std::log(o.mu_hi), o.n_mu);
  const double hp = step(std::log(o.p_lo), std::log(o.p_hi), o.n_p);
  const double ht = step(o.theta_lo, o.theta_hi, o.n_theta);

  std::vector<DrsParams> pts;
  for (double mu : mus)
    for (double p : ps)
      for (double th : ths) {
        DrsParams d{mu, p, th};
        if (o.jitter) {
          d.mu *= std::exp(hm * u(rng));
          d.p *= std::exp(hp * u(rng));
          d.theta = std::clamp(th + ht * u(rng), 1e-3, 2.0 - 1e-3);
        }
        pts.push_back(d);
      }
  return pts;
}

}  // namespace

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.tol > 0.0 && o.gap_tol > 0.0))
      throw InputError("tolerances must be > 0");
    const std::vector<DrsParams> pts = verify_grid(o);
    for (const auto& p : pts) check_domain(p);
    std::vector<VerifyRow> rows(pts.size());

    TightnessOptions topts;
    topts.contraction.solver = o.solver;
    auto eval = [&](std::size_t i) {
      VerifyRow& row = rows[i];
      row.params = pts[i];
      try {
        row.tight = verify_tightness(o.family, pts[i], topts);
        row.certificate_ok =
            verify_certificate(dual_certificate(row.tight->label, pts[i])).ok();
        row.membership_ok =
            check_membership(lower_bound(o.family, pts[i]), 32, o.seed).ok();
      } catch (const Error& e) {
        row.error = e.what();
      }
    };
    const int nw = std::clamp(o.workers, 1, static_cast<int>(pts.size()));
    if (nw == 1) {
      for (std::size_t i = 0; i < pts.size(); ++i) eval(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (int w = 0; w < nw; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < pts.size(); i = next++) eval(i);
        });
    }
    if (o.inject_fault && !rows.empty() && rows[0].tight)
      rows[0].tight->closed_form_rho_sq += 1e-3;

    double max_cf = 0.0, max_gap = 0.0, max_lb = 0.0;
    int cert_fail = 0, mem_fail = 0, solver_fail = 0, mismatches = 0;
    json jrows = json::array();
    for (const VerifyRow& r : rows) {
      json jr = {{"mu", r.params.mu}, {"p", r.params.p}, {"theta", r.params.theta}};
      if (!r.tight) {
        ++solver_fail;
        jr["error"] = r.error;
        jr["pass"] = false;
        jrows.push_back(jr);
        continue;
      }
      const TightnessReport& t = *r.tight;
      const double lb_gap = t.lower_bound_rho_sq
                                ? std::abs(*t.lower_bound_rho_sq - t.closed_form_rho_sq)
                                : 0.0;
      max_cf = std::max(max_cf, t.closed_form_gap());
      max_gap = std::max(max_gap, t.duality_gap());
      max_lb = std::max(max_lb, lb_gap);
      cert_fail += !r.certificate_ok;
      mem_fail += !r.membership_ok;
      const bool pass = t.closed_form_gap() <= o.tol && lb_gap <= o.tol &&
                        t.duality_gap() <= o.gap_tol && r.certificate_ok &&
                        r.membership_ok;
      mismatches += !pass;
      jr["case"] = std::string(1, to_char(t.label.branch));
      jr["closed_form_rho_sq"] = t.closed_form_rho_sq;
      jr["sdp_dual_rho_sq"] = t.sdp_dual_rho_sq;
      jr["sdp_primal_rho_sq"] = t.sdp_primal_rho_sq;
      jr["lower_bound_rho_sq"] = t.lower_bound_rho_sq.value_or(NAN);
      jr["certificate_ok"] = r.certificate_ok;
      jr["membership_ok"] = r.membership_ok;
      jr["pass"] = pass;
      jrows.push_back(jr);
    }
    const bool all_pass = solver_fail == 0 && mismatches == 0;
    print(out, {{"family", std::string(to_string(o.family))},
                {"points", pts.size()},
                {"tol", o.tol},
                {"gap_tol", o.gap_tol},
                {"max_closed_form_gap", max_cf},
                {"max_duality_gap", max_gap},
                {"max_lower_bound_gap", max_lb},
                {"certificate_failures", cert_fail},
                {"membership_failures", mem_fail},
                {"solver_failures", solver_fail},
                {"mismatches", mismatches},
                {"pass", all_pass},
                {"rows", jrows}});
    if (solver_fail > 0) return int(kExitSolver);
    return all_pass ? int(kExitOk) : int(kExitMismatch);
  });
}

int cmd_worst_case_closed_form(Family family, const DrsParams& params,
                               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LowerBoundInstance inst = lower_bound(family, params);
    json j = {{"family", std::string(to_string(family))},
              {"case", std::string(1, to_char(inst.label.branch))},
              {"mu", params.mu},
              {family == Family::kMuCoco ? "beta" : "lip", params.p},
              {"theta", params.theta},
              {"A_kind", std::string(to_string(inst.a_kind))},
              {"J_A", to_json(Eigen::MatrixXd(inst.j_a))},
              {"J_B", to_json(Eigen::MatrixXd(inst.j_b))},
              {"T", to_json(Eigen::MatrixXd(inst.t))},
              {"achieved_rho", inst.achieved_rho},
              {"closed_form_rho", drs_rate(family, params).rho}};
    if (inst.a_matrix)
      j["A"] = to_json(Eigen::MatrixXd(*inst.a_matrix));
    else if (inst.a_kind == OperatorKind::kNormalConeOrigin)
      j["A"] = "N_{0}";
    else
      j["A"] = inst.j_a(0, 0) == 0.0 ? "mu I + N_{{0} x R}" : "mu I + N_{R x {0}}";
    if (inst.b_matrix) {
      j["B"] = inst.b_matrix->isZero(0.0)
                   ? json("0")
                   : to_json(Eigen::MatrixXd(*inst.b_matrix));
    }
    if (inst.k) j["K"] = *inst.k;
    if (inst.a) j["a"] = *inst.a;
    print(out, j);
    return int(kExitOk);
  });
}

int cmd_worst_case(const ProblemConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    if (!cfg.theta) throw InputError("worst-case needs 'theta' in the config");
    ContractionOptions opts;
    opts.solver = cfg.solver;
    const MethodSpec spec{cfg.method, cfg.alpha, *cfg.theta};
    const ContractionResult r = tight_contraction_factor(cfg.classes, spec, opts);
    if (r.status != SolveStatus::kOptimal) return solver_failure(err, r.status);
    json j = {{"rho_sq", r.rho_sq}, {"strong_duality", r.strong_duality},
              {"warnings", r.warnings}};
    if (r.worst_case) {
      const WorstCaseInstance& w = *r.worst_case;
      json triples = json::array();
      for (const auto& t : w.triples)
        triples.push_back({{"role", std::string(to_string(t.role))},
                           {"class", to_json(cfg.classes[t.role])},
                           {"point", to_json(t.point)},
                           {"value", to_json(t.value)},
                           {"in_class", t.in_class}});
      j["worst_case"] = {{"z", to_json(w.z)},
                         {"rank", w.rank},
                         {"achieved_ratio", w.achieved_ratio},
                         {"initial_distance", w.initial_distance},
                         {"triples", triples},
                         {"note", "each value is paired with 0 in role(0)"}};
    }
    print(out, j);
    return int(kExitOk);
  });
}

int cmd_optimize(const ProblemConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    SearchSettings s;
    s.alpha_lo = cfg.alpha_lo;
    s.alpha_hi = cfg.alpha_hi;
    s.rel_tol = cfg.rel_tol;
    s.theta.solver = cfg.solver;
    s.theta.fixed_theta = cfg.theta;
    const ParamOptResult r = optimize_alpha(cfg.classes, s);
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    if (r.status == SearchStatus::kSolverFailure)
      return solver_failure(err, SolveStatus::kNumericalFailure);
    if (cfg.format == OutputFormat::kCsv) {
      out << "alpha_star,theta_star,rho_sq_star\r\n"
          << fmt17(r.alpha_star) << "," << fmt17(r.theta_star) << ","
          << fmt17(r.rho_sq_star) << "\r\n";
      return int(kExitOk);
    }
    json evals = json::array();
    for (const auto& e : r.trace)
      evals.push_back({{"alpha", e.alpha},
                       {"rho_sq", e.rho_sq},
                       {"theta", e.theta},
                       {"status", std::string(to_string(e.status))}});
    print(out, {{"alpha_star", r.alpha_star},
                {"theta_star", r.theta_star},
                {"rho_sq_star", r.rho_sq_star},
                {"status", std::string(to_string(r.status))},
                {"bracket", {r.bracket.first, r.bracket.second}},
                {"warnings", r.warnings},
                {"evaluations", evals}});
    return int(kExitOk);
  });
}

std::string format_curve_csv(const std::vector<CurvePoint>& points) {
  std::string s = "alpha,rho_sq,theta_opt\r\n";
  for (const auto& p : points) {
    const bool ok = p.status == SolveStatus::kOptimal;
    s += fmt17(p.alpha) + "," + (ok ? fmt17(p.rho_sq) : "nan") + "," +
         (ok ? fmt17(p.theta_opt) : "nan") + "\r\n";
  }
  return s;
}

int cmd_curve(const ProblemConfig& cfg, const CurveOptions& o,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<double> alphas =
        o.alphas.empty() ? log_space(cfg.alpha_lo, cfg.alpha_hi, o.count)
                         : o.alphas;
    ThetaOptions t;
    t.solver = cfg.solver;
    t.fixed_theta = cfg.theta;
    const std::vector<CurvePoint> pts = rho_curve(cfg.classes, alphas, t, o.workers);
    out << format_curve_csv(pts);
    int failed = 0;
    for (const auto& p : pts)
      if (p.status != SolveStatus::kOptimal) {
        ++failed;
        err << "warning: alpha=" << fmt17(p.alpha) << ": "
            << (p.error.empty() ? std::string(to_string(p.status)) : p.error)
            << "\n";
      }
    return failed ? int(kExitSolver) : int(kExitOk);
  });
}

namespace {

Family parse_family(const std::string& s) {
  if (s == "mu-coco") return Family::kMuCoco;
  if (s == "mu-lip") return Family::kMuLipschitz;
  throw InputError("family must be mu-coco or mu-lip (got '" + s + "')");
}

// --beta for mu-coco, --lip for mu-lip.
DrsParams family_params(Family f, double mu, std::optional<double> beta,
                        std::optional<double> lip, double theta) {
  if (f == Family::kMuCoco) {
    if (!beta || lip) throw InputError("mu-coco needs --beta and no --lip");
    return {mu, *beta, theta};
  }
  if (!lip || beta) throw InputError("mu-lip needs --lip and no --beta");
  return {mu, *lip, theta};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Tight contraction factors of operator splitting methods", "ospep"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomness (default 0)")
      ->capture_default_str();

  std::string config_path;
  auto* rho = app.add_subcommand("rho", "Tight contraction factor from a config");
  rho->add_option("--config", config_path, "JSON config file")->required();

  std::string family_s;
  double mu = 0.0, theta = 0.0, alpha = 1.0;
  std::optional<double> beta, lip;
  auto* cf = app.add_subcommand("closed-form", "Closed-form DRS contraction factor");
  cf->add_option("--family", family_s, "mu-coco or mu-lip")->required();
  cf->add_option("--mu", mu)->required();
  cf->add_option("--beta", beta);
  cf->add_option("--lip", lip);
  cf->add_option("--theta", theta)->required();
  cf->add_option("--alpha", alpha)->capture_default_str();

  VerifyOptions vo;
  int grid = 0;
  auto* ver = app.add_subcommand("verify", "Closed form vs SDP vs lower bound on a grid");
  ver->add_option("--family", family_s, "mu-coco or mu-lip")->required();
  ver->add_option("--grid", grid, "Points per axis (overrides --n-*)");
  ver->add_option("--n-mu", vo.n_mu)->capture_default_str();
  ver->add_option("--n-p", vo.n_p, "Points along beta or L")->capture_default_str();
  ver->add_option("--n-theta", vo.n_theta)->capture_default_str();
  ver->add_option("--mu-lo", vo.mu_lo)->capture_default_str();
  ver->add_option("--mu-hi", vo.mu_hi)->capture_default_str();
  ver->add_option("--p-lo", vo.p_lo)->capture_default_str();
  ver->add_option("--p-hi", vo.p_hi)->capture_default_str();
  ver->add_option("--theta-lo", vo.theta_lo)->capture_default_str();
  ver->add_option("--theta-hi", vo.theta_hi)->capture_default_str();
  ver->add_option("--tol", vo.tol)->capture_default_str();
  ver->add_option("--gap-tol", vo.gap_tol)->capture_default_str();
  ver->add_flag("--jitter", vo.jitter, "Perturb points within grid cells");
  ver->add_flag("--inject-fault", vo.inject_fault,
                "Corrupt one closed-form value (tests the failure path)");
  ver->add_option("--workers", vo.workers)->capture_default_str();

  auto* wc = app.add_subcommand("worst-case", "Worst-case instance");
  wc->add_option("--config", config_path, "JSON config (SDP route)");
  wc->add_option("--family", family_s, "mu-coco or mu-lip (closed-form route)");
  wc->add_option("--mu", mu);
  wc->add_option("--beta", beta);
  wc->add_option("--lip", lip);
  wc->add_option("--theta", theta);

  auto* opt = app.add_subcommand("optimize", "Optimal alpha and theta");
  opt->add_option("--config", config_path, "JSON config file")->required();

  CurveOptions co;
  std::string output;
  std::optional<double> alpha_lo, alpha_hi;
  auto* cur = app.add_subcommand("curve", "rho*^2(alpha) as CSV");
  cur->add_option("--config", config_path, "JSON config file")->required();
  cur->add_option("--alpha-lo", alpha_lo);
  cur->add_option("--alpha-hi", alpha_hi);
  cur->add_option("--count", co.count)->capture_default_str();
  cur->add_option("--alphas", co.alphas, "Explicit alpha values")->delimiter(',');
  cur->add_option("--workers", co.workers)->capture_default_str();
  cur->add_option("--output", output, "Write CSV here instead of stdout");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int(kExitOk) : int(kExitConfig);
  }

  try {
    if (rho->parsed()) return cmd_rho(load_config(config_path), out, err);
    if (cf->parsed())
      return cmd_closed_form(parse_family(family_s),
                             family_params(parse_family(family_s), mu, beta, lip, theta),
                             alpha, out, err);
    if (ver->parsed()) {
      vo.family = parse_family(family_s);
      if (grid > 0) vo.n_mu = vo.n_p = vo.n_theta = grid;
      vo.seed = seed;
      return cmd_verify(vo, out, err);
    }
    if (wc->parsed()) {
      if (!config_path.empty() == !family_s.empty())
        throw InputError("worst-case needs exactly one of --config or --family");
      if (!config_path.empty()) return cmd_worst_case(load_config(config_path), out, err);
      const Family f = parse_family(family_s);
      return cmd_worst_case_closed_form(f, family_params(f, mu, beta, lip, theta),
                                        out, err);
    }
    if (opt->parsed()) return cmd_optimize(load_config(config_path), out, err);
    if (cur->parsed()) {
      ProblemConfig cfg = load_config(config_path);
      if (alpha_lo) cfg.alpha_lo = *alpha_lo;
      if (alpha_hi) cfg.alpha_hi = *alpha_hi;
      if (co.count < 1) throw InputError("--count must be >= 1");
      if (output.empty()) return cmd_curve(cfg, co, out, err);
      std::ofstream file(output, std::ios::binary);
      if (!file) throw InputError("cannot write '" + output + "'");
      return cmd_curve(cfg, co, file, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace ospep::cli
