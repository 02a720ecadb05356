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

// thc: command-line front end. Exit codes: 0 success, 1 usage or input
// error, 2 a stage or check failed.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "thc/absorb.hpp"
#include "thc/audit.hpp"
#include "thc/connect.hpp"
#include "thc/cover.hpp"
#include "thc/gen.hpp"
#include "thc/io.hpp"
#include "thc/parallel.hpp"
#include "thc/pipeline.hpp"
#include "thc/reservoir.hpp"

namespace {

using thc::report::Json;
using Clock = std::chrono::steady_clock;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct Global {
  std::string format = "json";
  bool mask_elapsed = false;
};

double elapsed_ms(Clock::time_point t0, const Global& g) {
  if (g.mask_elapsed) return 0.0;
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const Json& j, const Global& g) {
  if (g.format == "csv")
    std::cout << thc::report::to_csv(j);
  else
    std::cout << j.dump(2) << '\n';
}

thc::VertexSet load_set(const std::string& path, std::size_t n) {
  thc::VertexSet s(n);
  if (path.empty()) return s;
  for (thc::Vertex v : thc::io::load_vertices(path)) {
    if (v >= n) throw thc::Error(path + ": vertex " + std::to_string(v) + " out of range");
    s.insert(v);
  }
  return s;
}

/// Git blob id of `content`: SHA-1 over "blob <len>\0" + content.
std::string git_blob_hash(const std::string& content) {
  const std::string data = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr)) throw thc::Error("SHA-1 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

thc::pipeline::PipelineConfig load_config(const std::string& path) {
  if (path.empty() || path == "defaults") return {};
  return thc::report::config_from_json(thc::report::load_json(path));
}

// --- gen --------------------------------------------------------------------

struct GenArgs {
  std::string kind = "random";
  std::size_t n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const thc::gen::Kind kind = thc::gen::parse_kind(a.kind);
  Json side{{"kind", thc::gen::kind_name(kind)}, {"n", a.n}, {"p", a.p}, {"seed", a.seed}};
  thc::Hypergraph3 h;
  switch (kind) {
    case thc::gen::Kind::kRandom:
      h = thc::gen::random(a.n, a.p, a.seed);
      break;
    case thc::gen::Kind::kComplete:
      h = thc::gen::complete(a.n);
      side["p"] = 1.0;
      break;
    case thc::gen::Kind::kPlanted: {
      auto pl = thc::gen::planted(a.n, a.p, a.seed);
      h = std::move(pl.h);
      side["parts"] = Json{{"order", pl.order}};
      break;
    }
    case thc::gen::Kind::kCounterexample: {
      auto ce = thc::gen::counterexample(a.n, a.seed);
      h = std::move(ce.h);
      side["p"] = ce.p;
      side["parts"] = Json{{"x", ce.x}, {"y", ce.y}};
      break;
    }
  }
  if (a.out.empty()) {
    thc::io::write_h3(std::cout, h);
    return kOk;
  }
  thc::io::save_h3(a.out, h);
  std::ofstream sc(a.out + ".json");
  if (!sc) throw thc::Error("cannot write " + a.out + ".json");
  sc << side.dump(2) << '\n';
  return kOk;
}

// --- audit ------------------------------------------------------------------

struct AuditArgs {
  std::string input;
  std::string notion = "set";
  double d = 0.5;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

int run_audit(const AuditArgs& a, const Global& g) {
  const auto h = thc::io::load_h3(a.input);
  const auto notion = thc::audit::parse_notion(a.notion);
  const auto t0 = Clock::now();
  const thc::audit::Strategy st{a.exhaustive, a.samples, a.seed};
  const auto r = thc::audit::density_audit(h, a.d, notion, st, {}, thc::default_threads());
  Json strategy = a.exhaustive ? Json{{"kind", "exhaustive"}}
                               : Json{{"kind", "sampled"}, {"samples", a.samples}, {"seed", a.seed}};
  emit(Json{{"notion", thc::audit::notion_name(notion)},
            {"d", r.d},
            {"rho_hat", r.rho_hat},
            {"strategy", strategy},
            {"worst_witness", thc::report::witness_json(r.worst_witness, notion)},
            {"elapsed_ms", elapsed_ms(t0, g)},
            {"global_density", r.global_density},
            {"witnesses_tested", r.witnesses_tested}},
       g);
  return kOk;
}

// --- connect ----------------------------------------------------------------

struct ConnectArgs {
  std::string input;
  std::string pairs;
  double beta = 0.2;
  std::string forbidden;
  std::size_t omega = 1;
  std::size_t t_deg = 1;
  std::size_t link_budget = 0;
};

int run_connect(const ConnectArgs& a, const Global& g) {
  const auto h = thc::io::load_h3(a.input);
  std::vector<thc::Vertex> q;
  std::stringstream ss(a.pairs);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      q.push_back(static_cast<thc::Vertex>(std::stoul(tok)));
    } catch (const std::exception&) {
      throw thc::Error("--pairs expects four comma-separated vertices");
    }
  }
  if (q.size() != 4) throw thc::Error("--pairs expects four comma-separated vertices");
  for (thc::Vertex v : q)
    if (v >= h.n()) throw thc::Error("vertex " + std::to_string(v) + " out of range");
  const thc::VertexSet forbidden = load_set(a.forbidden, h.n());
  const thc::connect::CascadeParams cp{a.omega, a.t_deg, a.link_budget};
  const auto r = thc::connect::connect_detailed(h, a.beta, {q[0], q[1]}, {q[2], q[3]}, forbidden, cp);
  if (r.path)
    thc::io::write_vertices(std::cout, r.path->vertices);
  else
    std::cout << "ABSENT\n";
  emit(Json{{"found", r.path.has_value()},
            {"path", r.path ? Json(r.path->vertices) : Json(nullptr)},
            {"links_tried", r.links_tried},
            {"failure", r.failure},
            {"first", r.first ? thc::report::bounds_json(*r.first) : Json(nullptr)},
            {"second", r.second ? thc::report::bounds_json(*r.second) : Json(nullptr)}},
       g);
  return r.path ? kOk : kFailed;
}

// --- absorbers --------------------------------------------------------------

struct AbsorberArgs {
  std::string input;
  double beta = 0.2;
  std::optional<std::size_t> v;
  bool all = false;
  bool count = false;
  bool sample = false;
  double gamma = 10.0;
  std::uint64_t seed = 0;
  std::size_t retries = 3;
  std::size_t coverage = 1;
};

int run_absorbers(const AbsorberArgs& a, const Global& g) {
  const auto h = thc::io::load_h3(a.input);
  if (a.count == a.sample) throw thc::Error("give exactly one of --count and --sample");
  if (a.count) {
    if (a.all == a.v.has_value()) throw thc::Error("--count needs exactly one of --v and --all");
    std::vector<thc::Vertex> vs;
    if (a.all)
      for (thc::Vertex v = 0; v < h.n(); ++v) vs.push_back(v);
    else
      vs.push_back(static_cast<thc::Vertex>(*a.v));
    std::vector<std::uint64_t> counts(vs.size());
    thc::parallel_for(vs.size(), thc::default_threads(),
                      [&](std::size_t i) { counts[i] = thc::absorb::count_absorbers(h, a.beta, vs[i]).count; });
    Json rows = Json::array();
    for (std::size_t i = 0; i < vs.size(); ++i) rows.push_back({{"v", vs[i]}, {"count", counts[i]}});
    emit(rows, g);
    return kOk;
  }
  thc::absorb::SampleOptions so;
  so.max_retries = a.retries;
  so.required_coverage = a.coverage;
  thc::absorb::AbsorberFamily fam;
  try {
    fam = thc::absorb::sample_family(h, a.beta, a.gamma, a.seed, so);
  } catch (const thc::RetriesExhausted& e) {
    std::cerr << e.what() << '\n';
    std::cout << "FAILURE family\n";
    return kFailed;
  }
  Json members = Json::array();
  for (const auto& m : fam.members) members.push_back({{"quad", m.quad()}, {"served", m.served.to_vector()}});
  if (g.format == "csv") {
    emit(members, g);
  } else {
    emit(Json{{"sampled", fam.sampled},
              {"size", fam.size()},
              {"min_coverage", fam.min_coverage},
              {"retries_used", fam.retries_used},
              {"members", members}},
         g);
  }
  return kOk;
}

// --- cover ------------------------------------------------------------------

struct CoverArgs {
  std::string input;
  double d = 0.5;
  double zeta = 0.1;
  std::string backend = "greedy";
  double epsilon = 0.1;
  std::size_t t0 = 4;
  std::size_t tcap = 16;
  std::uint64_t seed = 0;
  std::size_t restarts = 8;
};

int run_cover(const CoverArgs& a, const Global& g) {
  const auto h = thc::io::load_h3(a.input);
  thc::cover::CoverParams cp;
  cp.backend = thc::cover::parse_backend(a.backend);
  cp.partition.epsilon = a.epsilon;
  cp.partition.t0 = a.t0;
  cp.partition.t_cap = a.tcap;
  cp.partition.threads = thc::default_threads();
  cp.restarts = a.restarts;
  cp.seed = a.seed;
  const auto t0 = Clock::now();
  const auto r = thc::cover::cover_with_paths(h, a.d, a.zeta, cp);
  Json paths = Json::array();
  for (const auto& p : r.paths) paths.push_back(p.vertices);
  emit(Json{{"paths", paths},
            {"coverage", r.coverage()},
            {"count", r.count()},
            {"backend", thc::cover::backend_name(r.backend)},
            {"certified", r.certified ? Json(*r.certified) : Json(nullptr)},
            {"covered", r.covered},
            {"shortfall", r.shortfall},
            {"elapsed_ms", elapsed_ms(t0, g)}},
       g);
  return kOk;
}

// --- reservoir --------------------------------------------------------------

struct ReservoirArgs {
  std::string input;
  double beta = 0.2;
  double nu = 0.25;
  std::string exclude;
  std::uint64_t seed = 0;
  std::size_t retries = 20;
};

int run_reservoir(const ReservoirArgs& a, const Global& g) {
  const auto h = thc::io::load_h3(a.input);
  const thc::VertexSet ex = load_set(a.exclude, h.n());
  thc::reservoir::Reservoir r;
  try {
    r = thc::reservoir::sample_reservoir(h, a.beta, a.nu, ex, a.seed, a.retries, thc::default_threads());
  } catch (const thc::RetriesExhausted& e) {
    std::cerr << e.what() << '\n';
    std::cout << "FAILURE reservoir\n";
    return kFailed;
  }
  emit(Json{{"members", r.members.to_vector()},
            {"certified_min", r.certified_min ? Json(*r.certified_min) : Json(nullptr)},
            {"retries_used", r.retries_used},
            {"threshold", r.threshold},
            {"worst_pair", {r.worst_pair.first, r.worst_pair.second}}},
       g);
  return kOk;
}

// --- find -------------------------------------------------------------------

struct FindArgs {
  std::string input;
  std::string config = "defaults";
  std::uint64_t seed = 0;
  std::string trace;
  bool dump_config = false;
};

int run_find(const FindArgs& a, const Global& g) {
  const auto cfg = load_config(a.config);
  if (a.dump_config) {
    std::cout << thc::report::config_json(cfg).dump(2) << '\n';
    return kOk;
  }
  const auto h = thc::io::load_h3(a.input);
  const auto res = thc::pipeline::find_tight_hamilton(h, cfg, a.seed);
  if (!a.trace.empty()) {
    std::ofstream out(a.trace);
    if (!out) throw thc::Error("cannot write " + a.trace);
    out << thc::report::trace_json(res.trace, g.mask_elapsed).dump(2) << '\n';
  }
  if (res.cycle) {
    thc::io::write_vertices(std::cout, res.cycle->vertices);
    return kOk;
  }
  std::cout << "FAILURE " << res.trace.failed_stage.value_or("unknown") << '\n';
  return kFailed;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string cycle;
};

int run_verify(const VerifyArgs& a) {
  const auto h = thc::io::load_h3(a.input);
  const thc::TightCycle c{thc::io::load_vertices(a.cycle)};
  const auto v = thc::validate_hamilton(h, c);
  if (v) {
    std::cout << "OK\n";
    return kOk;
  }
  // Coverage failures have no triple index; the first missing position is
  // the end of the given sequence.
  std::cout << "INVALID " << v.violation.value_or(c.vertices.size()) << ' ' << v.reason << '\n';
  return kFailed;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string suite = "random-sweep";
  std::string n = "60:180:60";
  double p = 0.5;
  std::size_t reps = 20;
  std::uint64_t seed = 7;
  std::string config = "defaults";
  std::string records;
};

std::vector<std::size_t> parse_range(const std::string& s) {
  std::vector<std::size_t> parts;
  std::stringstream ss(s);
  try {
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(std::stoul(tok));
  } catch (const std::exception&) {
    throw thc::Error("--n expects N or START:STOP:STEP");
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1])
    throw thc::Error("--n expects N or START:STOP:STEP");
  std::vector<std::size_t> out;
  for (std::size_t v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(v);
  return out;
}

int run_bench(const BenchArgs& a, const Global& g) {
  if (a.suite != "random-sweep" && a.suite != "planted-sweep")
    throw thc::Error("unknown suite '" + a.suite + "' (random-sweep, planted-sweep)");
  const auto ns = parse_range(a.n);
  const auto cfg = load_config(a.config);
  const Json cfg_json = thc::report::config_json(cfg);
  const std::size_t threads = thc::default_threads();

  // Records already on disk, keyed by run id; reused when the input hash
  // matches, so an interrupted sweep resumes where it stopped.
  std::map<std::string, Json> done;
  if (!a.records.empty() && std::filesystem::exists(a.records)) {
    std::ifstream in(a.records);
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      try {
        Json r = Json::parse(line);
        const std::string id = r.at("run_id").get<std::string>();
        done[id] = std::move(r);
      } catch (const nlohmann::json::exception&) {
        // A torn last line from an interrupted run; that repetition reruns.
      }
    }
  }
  std::ofstream log;
  if (!a.records.empty()) {
    // Terminate a torn last line so new records start on their own line.
    bool torn = false;
    if (std::ifstream tail(a.records, std::ios::binary | std::ios::ate); tail && tail.tellg() > 0) {
      tail.seekg(-1, std::ios::end);
      torn = tail.get() != '\n';
    }
    log.open(a.records, std::ios::app);
    if (!log) throw thc::Error("cannot write " + a.records);
    if (torn) log << '\n';
  }

  Json rows = Json::array();
  for (std::size_t n : ns) {
    std::vector<Json> recs(a.reps);
    std::vector<bool> fresh(a.reps, false);
    thc::parallel_for(a.reps, threads, [&](std::size_t rep) {
      const std::uint64_t inst_seed =
          thc::substream_seed(a.seed, thc::streams::kBench + (static_cast<std::uint64_t>(n) << 20) + rep);
      const std::uint64_t find_seed = thc::substream_seed(inst_seed, 1);
      const thc::Hypergraph3 h =
          a.suite == "random-sweep" ? thc::gen::random(n, a.p, inst_seed) : thc::gen::planted(n, a.p, inst_seed).h;
      const Json args{{"suite", a.suite}, {"n", n}, {"p", a.p}, {"rep", rep}, {"config", cfg_json}};
      const std::string hash =
          git_blob_hash(thc::io::to_h3_string(h) + args.dump() + "\n" + std::to_string(find_seed) + "\n");
      const std::string id = a.suite + "/n=" + std::to_string(n) + "/p=" + Json(a.p).dump() + "/rep=" +
                             std::to_string(rep) + "/seed=" + std::to_string(a.seed);
      if (auto it = done.find(id); it != done.end() && it->second.value("input_hash", "") == hash) {
        recs[rep] = it->second;
        return;
      }
      const auto t0 = Clock::now();
      const auto res = thc::pipeline::find_tight_hamilton(h, cfg, find_seed);
      const double ms = elapsed_ms(t0, g);
      recs[rep] = Json{{"run_id", id},
                       {"command", "find"},
                       {"args", args},
                       {"seed", find_seed},
                       {"instance_seed", inst_seed},
                       {"outcome", res.cycle ? std::string("success")
                                             : "FAILURE " + res.trace.failed_stage.value_or("unknown")},
                       {"metrics", {{"attempts", res.trace.attempts.size()}, {"elapsed_ms", ms}}},
                       {"input_hash", hash}};
      fresh[rep] = true;
    });
    std::size_t ok = 0;
    double total_ms = 0, max_ms = 0, attempts = 0;
    for (std::size_t rep = 0; rep < a.reps; ++rep) {
      const Json& r = recs[rep];
      if (fresh[rep] && log) log << r.dump() << '\n' << std::flush;
      ok += r["outcome"] == "success";
      const double ms = r["metrics"]["elapsed_ms"].get<double>();
      total_ms += ms;
      max_ms = std::max(max_ms, ms);
      attempts += r["metrics"]["attempts"].get<double>();
    }
    const double reps = static_cast<double>(std::max<std::size_t>(1, a.reps));
    rows.push_back({{"suite", a.suite},
                    {"n", n},
                    {"p", a.p},
                    {"reps", a.reps},
                    {"successes", ok},
                    {"success_rate", static_cast<double>(ok) / reps},
                    {"mean_attempts", attempts / reps},
                    {"mean_ms", total_ms / reps},
                    {"max_ms", max_ms}});
  }
  emit(rows, g);
  return kOk;
}

// --- constants --------------------------------------------------------------

struct ConstantsArgs {
  double d = 0.5;
  double alpha = 0.5;
  std::optional<double> beta;
  double zeta = 0.1;
  std::string mode = "faithful";
};

int run_constants(const ConstantsArgs& a, const Global& g) {
  const auto mode = thc::pipeline::parse_mode(a.mode);
  const auto cfg = thc::pipeline::derive_constants(a.d, a.alpha, mode, a.beta);
  const auto pc = thc::pipeline::path_cover_constants(a.d, a.zeta);
  Json out{{"mode", thc::pipeline::mode_name(mode)},
           {"absorber_density", thc::pipeline::absorber_density(a.d, a.alpha)},
           {"path_cover",
            {{"zeta", a.zeta},
             {"rho_prime", pc.rho_prime},
             {"t_reg", pc.t_reg},
             {"d_prime", pc.d_prime},
             {"eps_reg", pc.eps_reg},
             {"rho", pc.rho},
             {"gamma_per_T", pc.gamma_per_T}}},
           {"config", thc::report::config_json(cfg)}};
  if (mode == thc::pipeline::Mode::kFaithful) out["faithful"] = thc::report::constants_json(cfg.faithful);
  emit(out, g);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thc: tight Hamilton cycles in dense 3-graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--mask-elapsed", g.mask_elapsed, "Report every elapsed_ms as 0");

  int rc = kOk;
  auto input = [](CLI::App* s, std::string& dst) {
    s->add_option("input", dst, "Hypergraph in H3 format")->required()->check(CLI::ExistingFile);
  };

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a 3-graph");
  gen->add_option("--kind", ga.kind, "random, planted, complete or counterexample")->required();
  gen->add_option("--n", ga.n, "Order")->required();
  gen->add_option("--p", ga.p, "Edge probability (noise probability for planted)");
  gen->add_option("--seed", ga.seed);
  gen->add_option("--out", ga.out, "H3 output; a JSON sidecar goes to <out>.json");
  gen->callback([&] { rc = run_gen(ga); });

  AuditArgs aa;
  auto* audit = app.add_subcommand("audit", "Estimate the density constant rho");
  input(audit, aa.input);
  audit->add_option("--notion", aa.notion)->check(CLI::IsMember({"points", "edge", "cherry", "set"}));
  audit->add_option("--d", aa.d);
  audit->add_option("--samples", aa.samples);
  audit->add_option("--seed", aa.seed);
  audit->add_flag("--exhaustive", aa.exhaustive);
  audit->callback([&] { rc = run_audit(aa, g); });

  ConnectArgs ca;
  auto* conn = app.add_subcommand("connect", "Find a tight 10-path between two pairs");
  input(conn, ca.input);
  conn->add_option("--pairs", ca.pairs, "a,b,c,d: connect (a,b) to (c,d)")->required();
  conn->add_option("--beta", ca.beta);
  conn->add_option("--forbidden", ca.forbidden, "Vertex list file")->check(CLI::ExistingFile);
  conn->add_option("--omega", ca.omega, "Minimum G2-degree; 0 means ceil(log2 m)");
  conn->add_option("--t-deg", ca.t_deg, "Minimum B_w-degree for G3 edges");
  conn->add_option("--link-budget", ca.link_budget, "0 means unlimited");
  conn->callback([&] { rc = run_connect(ca, g); });

  AbsorberArgs ba;
  auto* abs = app.add_subcommand("absorbers", "Count or sample absorbers");
  input(abs, ba.input);
  abs->add_option("--beta", ba.beta);
  abs->add_option("--v", ba.v);
  abs->add_flag("--all", ba.all);
  abs->add_flag("--count", ba.count);
  abs->add_flag("--sample", ba.sample);
  abs->add_option("--gamma", ba.gamma, "Expected raw sample size over n");
  abs->add_option("--seed", ba.seed);
  abs->add_option("--retries", ba.retries);
  abs->add_option("--min-coverage", ba.coverage);
  abs->callback([&] { rc = run_absorbers(ba, g); });

  CoverArgs cva;
  auto* cov = app.add_subcommand("cover", "Cover with vertex-disjoint tight paths");
  input(cov, cva.input);
  cov->add_option("--d", cva.d);
  cov->add_option("--zeta", cva.zeta);
  cov->add_option("--backend", cva.backend)->check(CLI::IsMember({"greedy", "regularity"}));
  cov->add_option("--epsilon", cva.epsilon);
  cov->add_option("--t0", cva.t0);
  cov->add_option("--tcap", cva.tcap);
  cov->add_option("--seed", cva.seed);
  cov->add_option("--restarts", cva.restarts);
  cov->callback([&] { rc = run_cover(cva, g); });

  ReservoirArgs ra;
  auto* res = app.add_subcommand("reservoir", "Sample a certified reservoir");
  input(res, ra.input);
  res->add_option("--beta", ra.beta);
  res->add_option("--nu", ra.nu);
  res->add_option("--exclude", ra.exclude, "Vertex list file")->check(CLI::ExistingFile);
  res->add_option("--seed", ra.seed);
  res->add_option("--retries", ra.retries);
  res->callback([&] { rc = run_reservoir(ra, g); });

  FindArgs fa;
  auto* find = app.add_subcommand("find", "Find a tight Hamilton cycle");
  find->add_option("input", fa.input, "Hypergraph in H3 format")->check(CLI::ExistingFile);
  find->add_option("--config", fa.config, "PipelineConfig JSON file, or 'defaults'");
  find->add_option("--seed", fa.seed);
  find->add_option("--trace", fa.trace, "Write the stage trace as JSON");
  find->add_flag("--dump-config", fa.dump_config, "Print the effective config and exit");
  find->callback([&] {
    if (fa.input.empty() && !fa.dump_config) throw CLI::RequiredError("input");
    rc = run_find(fa, g);
  });

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check a tight Hamilton cycle");
  input(ver, va.input);
  ver->add_option("--cycle", va.cycle, "Vertex list file")->required()->check(CLI::ExistingFile);
  ver->callback([&] { rc = run_verify(va); });

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Success-rate sweep of find");
  bench->add_option("--suite", be.suite, "random-sweep or planted-sweep");
  bench->add_option("--n", be.n, "N or START:STOP:STEP");
  bench->add_option("--p", be.p);
  bench->add_option("--reps", be.reps);
  bench->add_option("--seed", be.seed);
  bench->add_option("--config", be.config);
  bench->add_option("--records", be.records, "RunRecord log (JSON lines); resumed when present");
  bench->callback([&] {
    if (app.count("--format") == 0) g.format = "csv";
    rc = run_bench(be, g);
  });

  ConstantsArgs ka;
  auto* kons = app.add_subcommand("constants", "Print derived constants");
  kons->add_option("--d", ka.d);
  kons->add_option("--alpha", ka.alpha);
  kons->add_option("--beta", ka.beta);
  kons->add_option("--zeta", ka.zeta);
  kons->add_option("--mode", ka.mode)->check(CLI::IsMember({"practical", "faithful"}));
  kons->callback([&] { rc = run_constants(ka, g); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const thc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return rc;
}
