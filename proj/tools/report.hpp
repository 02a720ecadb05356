// Copyright 2026 The thc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON views of library results and pipeline configs for the CLI.

#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "thc/audit.hpp"
#include "thc/connect.hpp"
#include "thc/pipeline.hpp"

namespace thc::report {

using Json = nlohmann::ordered_json;

inline Json pairs_json(const std::vector<Pair>& ps) {
  Json a = Json::array();
  for (const auto& [u, v] : ps) a.push_back({u, v});
  return a;
}

inline Json witness_json(const audit::Witness& w, audit::Notion notion) {
  Json j = Json::object();
  switch (notion) {
    case audit::Notion::kPoints:
      j["x"] = w.x;
      j["y"] = w.y;
      j["z"] = w.z;
      break;
    case audit::Notion::kEdge:
      j["p"] = pairs_json(w.p);
      j["x"] = w.x;
      break;
    case audit::Notion::kCherry:
      j["g1"] = pairs_json(w.g1);
      j["g2"] = pairs_json(w.g2);
      break;
    case audit::Notion::kSet:
      j["x"] = w.x;
      break;
  }
  return j;
}

inline Json bounds_json(const connect::CascadeBounds& b) {
  return Json{{"n1", b.n1},
              {"n2", b.n2},
              {"n3", b.n3},
              {"e_g2", b.e_g2},
              {"e_g3", b.e_g3},
              {"min_g3_degree_on_n2", b.min_g3_degree_on_n2},
              {"n1_ok", b.n1_ok},
              {"n2_ok", b.n2_ok},
              {"g2_ok", b.g2_ok},
              {"g3_degree_ok", b.g3_degree_ok},
              {"g3_ok", b.g3_ok}};
}

inline Json constants_json(const pipeline::FaithfulConstants& k) {
  return Json{{"c", k.c},
              {"gamma_prob", k.gamma_prob},
              {"f_frac", k.f_frac},
              {"a_frac", k.a_frac},
              {"kappa", k.kappa},
              {"m_frac", k.m_frac},
              {"nu", k.nu},
              {"beta", k.beta},
              {"rho_connect", k.rho_connect},
              {"rho_count", k.rho_count},
              {"rho_absorb", k.rho_absorb},
              {"zeta_cover", k.zeta_cover},
              {"rho_prime", k.cover.rho_prime},
              {"t_reg", k.cover.t_reg},
              {"d_prime", k.cover.d_prime},
              {"eps_reg", k.cover.eps_reg},
              {"rho_cover", k.cover.rho},
              {"gamma_cover_per_T", k.cover.gamma_per_T},
              {"rho_final", k.rho_final},
              {"rho_connect_nonpositive", k.rho_connect_nonpositive},
              {"rho_final_nonpositive", k.rho_final_nonpositive}};
}

inline Json config_json(const pipeline::PipelineConfig& c) {
  return Json{{"d", c.d},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"kappa", c.kappa},
              {"m_frac", c.m_frac},
              {"nu", c.nu},
              {"f_frac", c.f_frac},
              {"a_frac", c.a_frac},
              {"zeta", c.zeta},
              {"gamma_budget", c.gamma_budget},
              {"rho_faithful", c.rho_faithful},
              {"epsilon", c.epsilon},
              {"t0", c.t0},
              {"T_cap", c.T_cap},
              {"omega", c.omega},
              {"t_deg", c.t_deg},
              {"link_budget", c.link_budget},
              {"backend", cover::backend_name(c.backend)},
              {"attempts", c.attempts},
              {"family_retries", c.family_retries},
              {"reservoir_retries", c.reservoir_retries},
              {"cover_restarts", c.cover_restarts},
              {"junction_budget", c.junction_budget},
              {"exact_small", c.exact_small},
              {"direct_insert", c.direct_insert},
              {"exact_budget", c.exact_budget},
              {"mode", pipeline::mode_name(c.mode)}};
}

/// Config from JSON. A "mode":"faithful" object starts from the derived
/// faithful constants for its d and alpha; anything else starts from the
/// practical defaults. Present keys override; unknown keys are an error.
inline pipeline::PipelineConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  static const std::set<std::string> known = {
      "d",           "alpha",          "beta",           "kappa",         "m_frac",          "nu",
      "f_frac",      "a_frac",         "zeta",           "gamma_budget",  "rho_faithful",    "epsilon",
      "t0",          "T_cap",          "omega",          "t_deg",         "link_budget",     "backend",
      "attempts",    "family_retries", "reservoir_retries", "cover_restarts", "junction_budget", "exact_small",
      "direct_insert", "exact_budget", "mode"};
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw Error("unknown config key '" + k + "'");
  pipeline::PipelineConfig c;
  const pipeline::Mode mode = j.contains("mode") ? pipeline::parse_mode(j["mode"].get<std::string>())
                                                 : pipeline::Mode::kPractical;
  if (mode == pipeline::Mode::kFaithful) {
    std::optional<double> beta;
    if (j.contains("beta")) beta = j["beta"].get<double>();
    c = pipeline::derive_constants(j.value("d", 0.5), j.value("alpha", 0.5), mode, beta);
  }
  auto num = [&](const char* k, auto& field) {
    if (j.contains(k)) field = j[k].get<std::remove_reference_t<decltype(field)>>();
  };
  num("d", c.d);
  num("alpha", c.alpha);
  num("beta", c.beta);
  num("kappa", c.kappa);
  num("m_frac", c.m_frac);
  num("nu", c.nu);
  num("f_frac", c.f_frac);
  num("a_frac", c.a_frac);
  num("zeta", c.zeta);
  num("gamma_budget", c.gamma_budget);
  num("rho_faithful", c.rho_faithful);
  num("epsilon", c.epsilon);
  num("t0", c.t0);
  num("T_cap", c.T_cap);
  num("omega", c.omega);
  num("t_deg", c.t_deg);
  num("link_budget", c.link_budget);
  num("attempts", c.attempts);
  num("family_retries", c.family_retries);
  num("reservoir_retries", c.reservoir_retries);
  num("cover_restarts", c.cover_restarts);
  num("junction_budget", c.junction_budget);
  num("exact_small", c.exact_small);
  num("direct_insert", c.direct_insert);
  num("exact_budget", c.exact_budget);
  if (j.contains("backend")) c.backend = cover::parse_backend(j["backend"].get<std::string>());
  c.mode = mode;
  pipeline::validate_config(c);
  return c;
}

inline Json trace_json(const pipeline::StageTrace& t, bool mask_elapsed) {
  Json attempts = Json::array();
  for (const auto& a : t.attempts) {
    Json stages = Json::array();
    for (const auto& s : a.stages) {
      Json m = Json::object();
      for (const auto& [k, v] : s.metrics) m[k] = v;
      stages.push_back({{"stage", s.stage},
                        {"ok", s.ok},
                        {"elapsed_ms", mask_elapsed ? 0.0 : s.elapsed_ms},
                        {"retries", s.retries},
                        {"metrics", m},
                        {"message", s.message}});
    }
    attempts.push_back({{"attempt", a.attempt},
                        {"seed", a.seed},
                        {"failed_stage", a.failed_stage ? Json(*a.failed_stage) : Json(nullptr)},
                        {"stages", stages}});
  }
  return Json{{"n", t.n},
              {"seed", t.seed},
              {"success", t.success},
              {"failed_stage", t.failed_stage ? Json(*t.failed_stage) : Json(nullptr)},
              {"attempts", attempts}};
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

/// One CSV cell. Strings are quoted when needed; arrays and objects are
/// written as compact JSON inside quotes.
inline std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

/// Header and rows for an array of flat objects (or a single object).
inline std::string to_csv(const Json& j) {
  const Json rows = j.is_array() ? j : Json::array({j});
  std::ostringstream os;
  if (rows.empty()) return "";
  bool first = true;
  for (const auto& [k, _] : rows[0].items()) {
    os << (first ? "" : ",") << csv_cell(Json(k));
    first = false;
  }
  os << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& [k, _] : rows[0].items()) {
      os << (first ? "" : ",") << csv_cell(r.contains(k) ? r[k] : Json(""));
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace thc::report
