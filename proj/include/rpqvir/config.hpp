#pragma once

// Run configuration (JSON in), run report (JSON out).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rpqvir/brackets.hpp"
#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"
#include "rpqvir/report.hpp"
#include "rpqvir/suites.hpp"

namespace rpqvir {

inline constexpr const char* kToolName = "rpqvir";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::json;

struct RunConfig {
  std::optional<std::string> preset;
  json custom;  // null unless a custom deformation is given
  std::vector<std::string> suites;
  SuiteWindow window;
  SuperPrefactor prefactor_variant = SuperPrefactor::Rnb2;
  json phi_override;  // null when absent
  Truncation dictionary_truncation{8, 3};
  std::string output;
};

namespace detail {

inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) throw ConfigError("bad rational coefficient '" + text + "'");
  if (r.get_den() == 0) throw ConfigError("zero denominator in coefficient '" + text + "'");
  r.canonicalize();
  return r;
}

inline Rational json_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ConfigError("coefficient must be a string \"a/b\" or an integer");
}

/// A list of {coeff, exponents} records over the variables of ctx.
inline LaurentPoly parse_poly(const json& j, const VarSetPtr& ctx, const std::vector<std::string>& order,
                              const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list of terms");
  std::vector<Term> terms;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("coeff") || !t.contains("exponents")) {
      throw ConfigError(what + ": each term needs 'coeff' and 'exponents'");
    }
    const json& e = t.at("exponents");
    if (!e.is_array() || e.size() != order.size()) {
      throw ConfigError(what + ": exponents must have " + std::to_string(order.size()) + " entries");
    }
    Term term{Exponents{}, json_rational(t.at("coeff"))};
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!e[i].is_number_integer()) throw ConfigError(what + ": exponents must be integers");
      term.exps[ctx->require(order[i])] = e[i].get<int>();
    }
    terms.push_back(std::move(term));
  }
  return LaurentPoly::from_terms(ctx, std::move(terms));
}

inline Scalar parse_fraction(const json& num, const json& den, const VarSetPtr& ctx, const std::vector<std::string>& order,
                             const std::string& what) {
  Scalar d(parse_poly(den, ctx, order, what + "_den"));
  if (d.is_zero()) throw ConfigError(what + ": zero denominator");
  return Scalar(parse_poly(num, ctx, order, what + "_num")) / d;
}

/// phi_override: a term list, or {num, den}.
inline Scalar parse_phi(const json& j) {
  const std::vector<std::string> pq = {"p", "q"};
  if (j.is_array()) return Scalar(parse_poly(j, param_vars(), pq, "phi_override"));
  if (j.is_object() && j.contains("num")) {
    json den = j.contains("den") ? j.at("den") : json::array({{{"coeff", "1"}, {"exponents", {0, 0}}}});
    return parse_fraction(j.at("num"), den, param_vars(), pq, "phi_override");
  }
  throw ConfigError("phi_override must be a term list or {num, den}");
}

template <class T>
void read_int(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_number_integer()) throw ConfigError(std::string("window.") + key + " must be an integer");
  out = obj.at(key).get<T>();
}

}  // namespace detail

/// Builds the deformation described by a custom block.
inline DeformationPtr custom_deformation(const json& c, const std::optional<Scalar>& phi_override) {
  const std::vector<std::string> xypq = {"x", "y", "p", "q"};
  const std::vector<std::string> pq = {"p", "q"};
  for (const char* k : {"R_num", "R_den", "phi_num", "phi_den"}) {
    if (!c.contains(k)) throw ConfigError(std::string("custom deformation needs '") + k + "'");
  }
  Scalar R = detail::parse_fraction(c.at("R_num"), c.at("R_den"), formal_vars(), xypq, "R");
  Scalar phi = phi_override ? *phi_override : detail::parse_fraction(c.at("phi_num"), c.at("phi_den"), param_vars(), pq, "phi");
  std::optional<TauPair> tau;
  if (c.contains("tau1") != c.contains("tau2")) throw ConfigError("custom deformation needs both tau1 and tau2 or neither");
  if (c.contains("tau1")) {
    tau = TauPair{Scalar(detail::parse_poly(c.at("tau1"), param_vars(), pq, "tau1")),
                  Scalar(detail::parse_poly(c.at("tau2"), param_vars(), pq, "tau2"))};
  }
  std::string name = c.contains("name") && c.at("name").is_string() ? c.at("name").get<std::string>() : "custom";
  return std::make_shared<const Deformation>(name, std::move(R), std::move(phi), std::move(tau));
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  if (j.contains("preset") == j.contains("custom")) throw ConfigError("config needs exactly one of 'preset' or 'custom'");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ConfigError("'preset' must be a string");
    cfg.preset = j.at("preset").get<std::string>();
  } else {
    if (!j.at("custom").is_object()) throw ConfigError("'custom' must be an object");
    cfg.custom = j.at("custom");
  }
  if (j.contains("suites")) {
    if (!j.at("suites").is_array()) throw ConfigError("'suites' must be a list");
    for (const auto& s : j.at("suites")) {
      if (!s.is_string()) throw ConfigError("suite ids must be strings");
      std::string id = s.get<std::string>();
      if (!is_suite_id(id)) throw ConfigError("unknown suite id '" + id + "'");
      cfg.suites.push_back(id);
    }
  } else {
    cfg.suites = suite_ids();
  }
  if (j.contains("window")) {
    const json& w = j.at("window");
    if (!w.is_object()) throw ConfigError("'window' must be an object");
    detail::read_int(w, "index_min", cfg.window.index_min);
    detail::read_int(w, "index_max", cfg.window.index_max);
    detail::read_int(w, "wide_index_min", cfg.window.wide_index_min);
    detail::read_int(w, "wide_index_max", cfg.window.wide_index_max);
    detail::read_int(w, "nary_index_min", cfg.window.nary_index_min);
    detail::read_int(w, "nary_index_max", cfg.window.nary_index_max);
    detail::read_int(w, "W", cfg.window.W);
    detail::read_int(w, "nary_W", cfg.window.nary_W);
  }
  const auto& w = cfg.window;
  if (w.index_min > w.index_max || w.wide_index_min > w.wide_index_max || w.nary_index_min > w.nary_index_max) {
    throw ConfigError("index windows must be nonempty");
  }
  if (w.W < 1 || w.nary_W < 1) throw ConfigError("basis windows must be >= 1");
  if (j.contains("flags")) {
    const json& f = j.at("flags");
    if (!f.is_object()) throw ConfigError("'flags' must be an object");
    if (f.contains("rnb2_prefactor_variant")) {
      std::string v = f.at("rnb2_prefactor_variant").is_string() ? f.at("rnb2_prefactor_variant").get<std::string>() : "";
      if (v == "rnb2") {
        cfg.prefactor_variant = SuperPrefactor::Rnb2;
      } else if (v == "rcom2") {
        cfg.prefactor_variant = SuperPrefactor::Rcom2;
      } else {
        throw ConfigError("rnb2_prefactor_variant must be \"rnb2\" or \"rcom2\"");
      }
    }
    if (f.contains("phi_override") && !f.at("phi_override").is_null()) cfg.phi_override = f.at("phi_override");
  }
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    detail::read_int(t, "N", cfg.dictionary_truncation.N);
    detail::read_int(t, "D", cfg.dictionary_truncation.D);
    if (cfg.dictionary_truncation.N < 1 || cfg.dictionary_truncation.D < 1) throw ConfigError("truncation N and D must be >= 1");
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("'output' must be a string");
    cfg.output = j.at("output").get<std::string>();
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline DeformationPtr build_deformation(const RunConfig& cfg) {
  std::optional<Scalar> phi;
  if (!cfg.phi_override.is_null()) phi = detail::parse_phi(cfg.phi_override);
  if (cfg.preset) return preset(*cfg.preset, phi);
  return custom_deformation(cfg.custom, phi);
}

inline SuiteSettings build_settings(const RunConfig& cfg) {
  SuiteSettings s;
  s.deformation = build_deformation(cfg);
  s.window = cfg.window;
  s.prefactor_variant = cfg.prefactor_variant;
  s.dictionary_truncation = cfg.dictionary_truncation;
  return s;
}

inline json config_to_json(const RunConfig& cfg) {
  json j;
  if (cfg.preset) j["preset"] = *cfg.preset;
  else j["custom"] = cfg.custom;
  j["suites"] = cfg.suites;
  const auto& w = cfg.window;
  j["window"] = {{"index_min", w.index_min},           {"index_max", w.index_max},
                 {"wide_index_min", w.wide_index_min}, {"wide_index_max", w.wide_index_max},
                 {"nary_index_min", w.nary_index_min}, {"nary_index_max", w.nary_index_max},
                 {"W", w.W},                           {"nary_W", w.nary_W}};
  j["flags"] = {{"rnb2_prefactor_variant", prefactor_name(cfg.prefactor_variant)}, {"phi_override", cfg.phi_override}};
  j["truncation"] = {{"N", cfg.dictionary_truncation.N}, {"D", cfg.dictionary_truncation.D}};
  j["output"] = cfg.output;
  return j;
}

inline json report_to_json(const IdentityReport& r) {
  json j;
  j["identity_id"] = r.identity_id;
  j["deformation"] = r.deformation;
  j["indices"] = r.indices;
  j["key"] = r.key;
  j["window"] = r.window;
  j["verdict"] = verdict_name(r.verdict);
  j["must_pass"] = is_must_pass(r);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.counterexample) {
    j["counterexample"] = {{"location", r.counterexample->location},
                           {"lhs", r.counterexample->lhs},
                           {"rhs", r.counterexample->rhs},
                           {"difference", r.counterexample->difference}};
  }
  j["conventions"] = r.conventions;
  return j;
}

inline json deformation_to_json(const Deformation& d) {
  json j;
  j["name"] = d.name();
  j["R"] = d.R().to_string();
  j["phi"] = d.phi().to_string();
  j["phi_defaulted"] = d.phi_defaulted();
  if (d.has_tau()) j["tau"] = {d.tau().tau1.to_string(), d.tau().tau2.to_string()};
  else j["tau"] = nullptr;
  json checks = json::array();
  for (const auto& c : d.checks()) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["construction_checks"] = checks;
  return j;
}

inline json run_report_json(const RunConfig& cfg, const Deformation& d, const std::vector<IdentityReport>& reports,
                            double wall_seconds) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = config_to_json(cfg);
  j["deformation"] = deformation_to_json(d);
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  j["reports"] = std::move(arr);
  Summary s = summarize(reports);
  int must_fail = 0;
  for (const auto& r : reports) must_fail += r.failed() && is_must_pass(r);
  j["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}, {"must_pass_failures", must_fail}};
  j["wall_time_seconds"] = wall_seconds;
  return j;
}

}  // namespace rpqvir
