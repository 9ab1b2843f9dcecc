// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ospep/cli.hpp"
#include "ospep/errors.hpp"

namespace ospep::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw InputError("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const std::string& key,
              const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number())
    throw InputError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

OperatorClass parse_role(const json& j, const std::string& role) {
  const std::string where = "role " + role;
  if (j.is_null()) return OperatorClass::Zero();
  if (!j.is_object()) throw InputError(where + " must be an object or null");
  reject_unknown(j, {"mu", "beta", "lip", "zero"}, where);
  OperatorClass c;
  if (j.contains("zero")) {
    if (!j["zero"].is_boolean())
      throw InputError("'zero' in " + where + " must be a boolean");
    c.zero = j["zero"].get<bool>();
  }
  if (j.contains("mu")) c.mu = number(j, "mu", where);
  if (j.contains("beta")) c.beta = number(j, "beta", where);
  if (j.contains("lip")) c.lip = number(j, "lip", where);
  if (!c.mu && !c.beta && !c.lip) c.zero = true;  // {} means zero
  return c;
}

Method parse_method(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  if (s == "FBS") return Method::kFBS;
  if (s == "DRS") return Method::kDRS;
  if (s == "DYS") return Method::kDYS;
  throw InputError("method must be one of FBS, DRS, DYS (got '" + s + "')");
}

}  // namespace

ProblemConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  reject_unknown(j,
                 {"method", "alpha", "theta", "A", "B", "C", "solver",
                  "format", "search"},
                 "config");

  ProblemConfig cfg;
  try {
    if (j.contains("method")) {
      if (!j["method"].is_string())
        throw InputError("'method' must be a string");
      cfg.method = parse_method(j["method"].get<std::string>());
    }
    if (j.contains("alpha")) cfg.alpha = number(j, "alpha", "config");
    if (j.contains("theta") && !j["theta"].is_null())
      cfg.theta = number(j, "theta", "config");
    cfg.classes.a = parse_role(j.value("A", json()), "A");
    cfg.classes.b = parse_role(j.value("B", json()), "B");
    cfg.classes.c = parse_role(j.value("C", json()), "C");

    if (j.contains("solver")) {
      const json& s = j["solver"];
      if (!s.is_object()) throw InputError("'solver' must be an object");
      reject_unknown(s, {"tol", "feasibility_tol", "gap_tol", "max_iterations"},
                     "solver");
      if (s.contains("tol"))
        cfg.solver.feasibility_tol = cfg.solver.gap_tol = number(s, "tol", "solver");
      if (s.contains("feasibility_tol"))
        cfg.solver.feasibility_tol = number(s, "feasibility_tol", "solver");
      if (s.contains("gap_tol")) cfg.solver.gap_tol = number(s, "gap_tol", "solver");
      if (s.contains("max_iterations")) {
        if (!s["max_iterations"].is_number_integer())
          throw InputError("'max_iterations' must be an integer");
        cfg.solver.max_iterations = s["max_iterations"].get<int>();
      }
      if (!(cfg.solver.feasibility_tol > 0.0 && cfg.solver.gap_tol > 0.0 &&
            cfg.solver.max_iterations > 0))
        throw InputError("solver tolerances and max_iterations must be > 0");
    }
    if (j.contains("format")) {
      const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
      if (f == "json")
        cfg.format = OutputFormat::kJson;
      else if (f == "csv")
        cfg.format = OutputFormat::kCsv;
      else
        throw InputError("'format' must be \"json\" or \"csv\"");
    }
    if (j.contains("search")) {
      const json& s = j["search"];
      if (!s.is_object()) throw InputError("'search' must be an object");
      reject_unknown(s, {"alpha_lo", "alpha_hi", "rel_tol"}, "search");
      if (s.contains("alpha_lo")) cfg.alpha_lo = number(s, "alpha_lo", "search");
      if (s.contains("alpha_hi")) cfg.alpha_hi = number(s, "alpha_hi", "search");
      if (s.contains("rel_tol")) cfg.rel_tol = number(s, "rel_tol", "search");
      if (!(cfg.alpha_lo > 0.0 && cfg.alpha_hi > cfg.alpha_lo &&
            cfg.rel_tol > 0.0))
        throw InputError("search needs 0 < alpha_lo < alpha_hi and rel_tol > 0");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid config: ") + e.what());
  }

  validate(cfg.classes, {cfg.method, cfg.alpha, cfg.theta.value_or(1.0)});
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ospep::cli
