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

// End-to-end search for a tight Hamilton cycle by the absorbing method:
//
//   1. absorbing path A threaded through a random absorber family
//   2. reservoir R outside V(A)
//   3. path cover of H - V(A) - R
//   4. A and the cover paths joined in a chain by 10-paths inside R
//   5. one more 10-path closing the chain into a cycle
//   6. leftover vertices absorbed into A's segment
//   7. Hamilton validation
//
// Each junction consumes six reservoir vertices. Cover paths are split so
// that the junction count is floor(|R|/6), which uses the reservoir up
// almost exactly; at desk scale the absorbing path holds only one or two
// absorbers, so the leftover has to be (nearly) empty.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thc/absorb.hpp"
#include "thc/connect.hpp"
#include "thc/cover.hpp"
#include "thc/exact.hpp"
#include "thc/hypergraph.hpp"
#include "thc/reservoir.hpp"
#include "thc/rng.hpp"
#include "thc/tight.hpp"

namespace thc::pipeline {

enum class Mode { kPractical, kFaithful };

inline Mode parse_mode(const std::string& s) {
  if (s == "practical") return Mode::kPractical;
  if (s == "faithful") return Mode::kFaithful;
  throw Error("unknown mode '" + s + "'");
}
inline std::string mode_name(Mode m) { return m == Mode::kPractical ? "practical" : "faithful"; }

// ---------------------------------------------------------------------------
// Constants.

/// c = d^2 alpha^9 / 2^48.
inline double absorber_density(double d, double alpha) { return d * d * std::pow(alpha, 9) / std::ldexp(1.0, 48); }

/// min{d beta^6 / 2^15, d / (12 (1 - 1/(d - beta)))}. The second term is
/// negative whenever d - beta < 1; callers flag non-positive results.
inline double rho_connect(double d, double beta) {
  return std::min(d * std::pow(beta, 6) / std::ldexp(1.0, 15), d / (12.0 * (1.0 - 1.0 / (d - beta))));
}

/// min{d alpha^6 / 2^30, alpha (d - beta) / 8}.
inline double rho_count(double d, double alpha, double beta) {
  return std::min(d * std::pow(alpha, 6) / std::ldexp(1.0, 30), alpha * (d - beta) / 8.0);
}

/// d zeta^3 / 27.
inline double rho_matching(double d, double zeta) { return d * zeta * zeta * zeta / 27.0; }

struct PathCoverConstants {
  double rho_prime = 0;      ///< rho_matching(d/2, zeta/12)
  double t_reg = 0;          ///< max{8/rho', 8/zeta}
  double d_prime = 0;        ///< rho'/4
  double eps_reg = 0;        ///< min{d'/2, zeta/24}
  double rho = 0;            ///< rho'/4
  double gamma_per_T = 0;    ///< 1/(eps (d' - eps)); the path budget is T(eps, t_reg) times this
};

inline PathCoverConstants path_cover_constants(double d, double zeta) {
  PathCoverConstants k;
  k.rho_prime = rho_matching(d / 2, zeta / 12);
  k.t_reg = std::max(8.0 / k.rho_prime, 8.0 / zeta);
  k.d_prime = k.rho_prime / 4;
  k.eps_reg = std::min(k.d_prime / 2, zeta / 24);
  k.rho = k.rho_prime / 4;
  k.gamma_per_T = 1.0 / (k.eps_reg * (k.d_prime - k.eps_reg));
  return k;
}

/// Every constant of the absorbing method for given (d, alpha, beta).
struct FaithfulConstants {
  double c = 0;            ///< d^2 alpha^9 / 2^48
  double gamma_prob = 0;   ///< c / 68
  double f_frac = 0;       ///< 2 gamma
  double a_frac = 0;       ///< c gamma / 4
  double kappa = 0;        ///< 10 f
  double m_frac = 0;       ///< a
  double nu = 0;           ///< m / 2
  double beta = 0;
  double rho_connect = 0;  ///< rho_connect(d, beta)
  double rho_count = 0;
  double rho_absorb = 0;   ///< min{rho_connect(d, beta - kappa)(1 - kappa)^3, rho_count}
  double zeta_cover = 0;   ///< m / 2
  PathCoverConstants cover;
  double rho_final = 0;
  bool rho_connect_nonpositive = false;
  bool rho_final_nonpositive = false;
};

inline FaithfulConstants faithful_constants(double d, double alpha, double beta) {
  FaithfulConstants k;
  k.c = absorber_density(d, alpha);
  k.gamma_prob = k.c / 68.0;
  k.f_frac = 2 * k.gamma_prob;
  k.a_frac = k.c * k.gamma_prob / 4;
  k.kappa = 10 * k.f_frac;
  k.m_frac = k.a_frac;
  k.nu = k.m_frac / 2;
  k.beta = beta;
  k.rho_connect = rho_connect(d, beta);
  k.rho_count = rho_count(d, alpha, beta);
  const double r1 = rho_connect(d, beta - k.kappa);
  k.rho_absorb = std::min(r1 * std::pow(1 - k.kappa, 3), k.rho_count);
  k.zeta_cover = k.m_frac / 2;
  k.cover = path_cover_constants(d, k.zeta_cover);
  k.rho_final = std::min({k.rho_absorb, 0.5 * k.cover.rho * (d - beta) * std::pow(1 - k.kappa - k.nu, 3),
                          rho_connect(d, beta * k.nu / 8) * std::pow(k.nu / 2, 3)});
  k.rho_connect_nonpositive = !(k.rho_connect > 0);
  k.rho_final_nonpositive = !(k.rho_final > 0);
  return k;
}

struct PipelineConfig {
  double d = 0.5;
  double alpha = 0.5;
  double beta = 0.15;
  double kappa = 0.1;
  double m_frac = 0.4;
  double nu = 0.2;
  /// Expected raw absorber sample size as a fraction of n.
  double f_frac = 10.0;
  /// Required min coverage of the absorber family as a fraction of n.
  double a_frac = 0.0;
  double zeta = 0.05;
  std::size_t gamma_budget = 20;
  double rho_faithful = 0.0;
  double epsilon = 0.1;
  std::size_t t0 = 4;
  std::size_t T_cap = 16;
  std::size_t omega = 1;
  std::size_t t_deg = 1;
  /// Links examined per connect call; 0 means no limit.
  std::size_t link_budget = 500;
  cover::Backend backend = cover::Backend::kGreedy;
  std::size_t attempts = 10;
  std::size_t family_retries = 3;
  std::size_t reservoir_retries = 20;
  std::size_t cover_restarts = 8;
  /// Connect calls plus candidate paths examined per attempt in the
  /// junction search before giving up.
  std::size_t junction_budget = 400;
  /// Orders too small for one absorber and two junctions are searched
  /// exhaustively.
  bool exact_small = true;
  /// Leftover vertices no unused absorber serves are inserted directly
  /// where the cycle has room for them.
  bool direct_insert = true;
  std::uint64_t exact_budget = 2'000'000;
  Mode mode = Mode::kPractical;
  FaithfulConstants faithful{};
};

inline void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& m) { throw Error("config: " + m); };
  if (!(c.d > 0 && c.d <= 1)) fail("d must lie in (0,1]");
  if (!(c.alpha > 0 && c.alpha <= 1)) fail("alpha must lie in (0,1]");
  if (!(c.beta > 0 && c.beta < c.d)) fail("need 0 < beta < d");
  if (!(c.kappa >= 0 && c.kappa < c.beta)) fail("need 0 <= kappa < beta");
  if (!(c.nu > 0 && c.nu <= 0.5)) fail("need 0 < nu <= 1/2");
  if (!(c.zeta > 0 && c.zeta < 1)) fail("need 0 < zeta < 1");
  if (!(c.m_frac >= 0)) fail("m_frac must be non-negative");
  if (!(c.f_frac >= 0)) fail("f_frac must be non-negative");
  if (c.mode == Mode::kFaithful) {
    if (c.kappa > c.beta / 4) fail("faithful mode needs kappa <= beta/4");
    const double lo = c.d * c.d * std::pow(c.alpha, 9);
    if (c.beta < lo) fail("faithful mode needs beta >= d^2 alpha^9");
  }
}

/// Configuration for (d, alpha). Faithful mode sets every working constant
/// to its formula; practical mode keeps the practical defaults. Both carry
/// the faithful values in `faithful`. beta defaults to the midpoint of
/// [d^2 alpha^9, d) in faithful mode.
inline PipelineConfig derive_constants(double d, double alpha, Mode mode, std::optional<double> beta = std::nullopt) {
  if (!(d > 0 && d <= 1) || !(alpha > 0 && alpha <= 1)) throw Error("need 0 < d, alpha <= 1");
  PipelineConfig cfg;
  cfg.d = d;
  cfg.alpha = alpha;
  cfg.mode = mode;
  const double lo = d * d * std::pow(alpha, 9);
  const double fb = beta.value_or(mode == Mode::kFaithful ? (lo + d) / 2 : cfg.beta);
  if (mode == Mode::kFaithful && !(fb >= lo && fb < d)) throw Error("beta must lie in [d^2 alpha^9, d)");
  cfg.faithful = faithful_constants(d, alpha, fb);
  cfg.rho_faithful = cfg.faithful.rho_final;
  if (mode == Mode::kFaithful) {
    const FaithfulConstants& k = cfg.faithful;
    cfg.beta = fb;
    cfg.kappa = k.kappa;
    cfg.m_frac = k.m_frac;
    cfg.nu = k.nu;
    cfg.f_frac = k.gamma_prob;
    cfg.a_frac = k.a_frac;
    cfg.zeta = k.zeta_cover;
    cfg.epsilon = k.cover.eps_reg;
    cfg.omega = 0;
    cfg.t_deg = 20;
    cfg.direct_insert = false;
  } else if (beta) {
    cfg.beta = *beta;
  }
  validate_config(cfg);
  return cfg;
}

// ---------------------------------------------------------------------------
// Traces.

struct StageRecord {
  std::string stage;
  bool ok = false;
  double elapsed_ms = 0;
  std::size_t retries = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::string message;
};

struct AttemptTrace {
  std::size_t attempt = 0;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
  std::optional<std::string> failed_stage;
};

struct StageTrace {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<std::string> failed_stage;
  std::vector<AttemptTrace> attempts;
};

struct FindResult {
  std::optional<TightCycle> cycle;
  StageTrace trace;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

/// Largest number of absorbers whose absorbing path fits in kappa n vertices.
inline std::size_t max_absorbers(double kappa, std::size_t n) {
  const double r = (kappa * static_cast<double>(n) + 6.0) / 10.0;
  return r < 1 ? 0 : static_cast<std::size_t>(std::floor(r + 1e-9));
}

inline std::size_t codegree_into(const Hypergraph3& h, Vertex a, Vertex b, const VertexSet& r) {
  return bits::count_and(h.neighbors(a, b), r.bits());
}

/// Splits the longest piece near its middle, preferring a cut whose two new
/// end pairs keep the most co-neighbours in R. Pieces must keep >= 3
/// vertices; returns false if none can be split.
inline bool split_longest(const Hypergraph3& h, std::vector<std::vector<Vertex>>& pieces, const VertexSet& r) {
  std::size_t best = pieces.size();
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].size() >= 6 && (best == pieces.size() || pieces[i].size() > pieces[best].size())) best = i;
  if (best == pieces.size()) return false;
  const auto& p = pieces[best];
  const std::size_t k = p.size(), mid = k / 2;
  std::size_t cut = mid, cut_score = 0;
  bool have = false;
  for (std::size_t off = 0; off <= k; ++off) {
    for (int sgn : {1, -1}) {
      const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(mid) + sgn * static_cast<std::ptrdiff_t>(off);
      if (m < 3 || m > static_cast<std::ptrdiff_t>(k) - 3) continue;
      const auto mm = static_cast<std::size_t>(m);
      const std::size_t score =
          std::min(codegree_into(h, p[mm - 2], p[mm - 1], r), codegree_into(h, p[mm], p[mm + 1], r));
      if (!have || score > cut_score) {
        cut = mm;
        cut_score = score;
        have = true;
      }
    }
    if (have && cut_score >= 3) break;
  }
  std::vector<Vertex> left(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<Vertex> right(p.begin() + static_cast<std::ptrdiff_t>(cut), p.end());
  pieces[best] = std::move(left);
  pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(best) + 1, std::move(right));
  return true;
}

/// Depth-first chaining of pieces behind A by 10-paths inside the shrinking
/// reservoir, then closure back to A's front pair.
class ChainSearch {
 public:
  ChainSearch(const Hypergraph3& h, const PipelineConfig& cfg, std::vector<Vertex> a,
              std::vector<std::vector<Vertex>> pieces, VertexSet reservoir)
      : h_(h),
        cfg_(cfg),
        beta_j_(cfg.beta * cfg.nu / 8.0),
        floor_(cfg.beta * cfg.nu * static_cast<double>(h.n()) / 8.0),
        pieces_(std::move(pieces)),
        placed_(pieces_.size(), false),
        chain_(std::move(a)),
        r_(std::move(reservoir)),
        hb_(h, VertexSet::full(h.n()), cfg.beta) {}

  bool run() { return step(); }

  const std::vector<Vertex>& chain() const { return chain_; }
  const VertexSet& reservoir_left() const { return r_; }
  bool closure_attempted() const { return closure_attempted_; }
  bool exhausted() const { return calls_ > cfg_.junction_budget; }
  std::size_t calls() const { return calls_; }
  std::size_t junctions_below_floor() const { return below_floor_; }
  std::size_t min_anchor_codegree() const { return min_anchor_; }

 private:
  struct Undo {
    std::size_t chain_size;
    std::vector<Vertex> internal;
  };

  VertexSet forbidden_for(Pair from, Pair to) const {
    VertexSet allowed = r_;
    for (Vertex v : {from.first, from.second, to.first, to.second}) allowed.insert(v);
    return allowed.complement();
  }

  void note_floor(Pair from, Pair to) {
    for (const Pair& p : {from, to}) {
      VertexSet nb = hb_.neighbors(p.first, p.second);
      nb &= r_;
      const std::size_t c = nb.size();
      min_anchor_ = std::min(min_anchor_, c);
      if (below_threshold(static_cast<double>(c), 1.0, floor_)) ++below_floor_;
    }
  }

  Pair back() const { return {chain_[chain_.size() - 2], chain_.back()}; }

  bool step() {
    const bool all_placed = std::all_of(placed_.begin(), placed_.end(), [](bool b) { return b; });
    if (all_placed) return close();
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (placed_[i]) continue;
      for (int orient = 0; orient < 2; ++orient) {
        std::vector<Vertex> p = pieces_[i];
        if (orient) std::reverse(p.begin(), p.end());
        const Pair from = back(), to{p[0], p[1]};
        note_floor(from, to);
        if (++calls_ > cfg_.junction_budget) return false;
        bool found = false;
        connect::for_each_connection(
            h_, beta_j_, from, to, forbidden_for(from, to), params(), [&](const TightPath& c) {
              if (++calls_ > cfg_.junction_budget) return true;
              const Undo u = apply(c, p);
              placed_[i] = true;
              if (step()) {
                found = true;
                return true;
              }
              placed_[i] = false;
              revert(u);
              return exhausted();
            });
        if (found) return true;
        if (exhausted()) return false;
      }
    }
    return false;
  }

  bool close() {
    closure_attempted_ = true;
    const Pair from = back(), to{chain_[0], chain_[1]};
    note_floor(from, to);
    if (++calls_ > cfg_.junction_budget) return false;
    bool found = false;
    connect::for_each_connection(h_, beta_j_, from, to, forbidden_for(from, to), params(),
                                 [&](const TightPath& c) {
                                   if (++calls_ > cfg_.junction_budget) return true;
                                   for (std::size_t k = 2; k < 8; ++k) {
                                     chain_.push_back(c.vertices[k]);
                                     r_.erase(c.vertices[k]);
                                   }
                                   found = true;
                                   return true;
                                 });
    return found;
  }

  Undo apply(const TightPath& c, const std::vector<Vertex>& piece) {
    Undo u{chain_.size(), {}};
    for (std::size_t k = 2; k < 8; ++k) {
      chain_.push_back(c.vertices[k]);
      r_.erase(c.vertices[k]);
      u.internal.push_back(c.vertices[k]);
    }
    chain_.insert(chain_.end(), piece.begin(), piece.end());
    return u;
  }

  void revert(const Undo& u) {
    chain_.resize(u.chain_size);
    for (Vertex v : u.internal) r_.insert(v);
  }

  connect::CascadeParams params() const { return {cfg_.omega, cfg_.t_deg, cfg_.link_budget}; }

  const Hypergraph3& h_;
  const PipelineConfig& cfg_;
  double beta_j_;
  double floor_;
  std::vector<std::vector<Vertex>> pieces_;
  std::vector<bool> placed_;
  std::vector<Vertex> chain_;
  VertexSet r_;
  MaskedView hb_;
  std::size_t calls_ = 0;
  bool closure_attempted_ = false;
  std::size_t below_floor_ = 0;
  std::size_t min_anchor_ = std::numeric_limits<std::size_t>::max();
};

/// Inserts v between the first consecutive cycle positions c[i], c[i+1]
/// for which the three new triples are edges.
inline bool insert_into_cycle(const Hypergraph3& h, std::vector<Vertex>& c, Vertex v) {
  const std::size_t k = c.size();
  if (k < 3) return false;
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex a = c[(i + k - 1) % k], b = c[i], x = c[(i + 1) % k], y = c[(i + 2) % k];
    if (h.has_edge(a, b, v) && h.has_edge(b, v, x) && h.has_edge(v, x, y)) {
      c.insert(c.begin() + static_cast<std::ptrdiff_t>(i + 1), v);
      return true;
    }
  }
  return false;
}

struct Stage {
  StageRecord rec;
  Clock::time_point start = Clock::now();
  explicit Stage(std::string name) { rec.stage = std::move(name); }
  void metric(const std::string& k, double v) { rec.metrics.emplace_back(k, v); }
  StageRecord done(bool ok, std::string msg = "") {
    rec.ok = ok;
    rec.message = std::move(msg);
    rec.elapsed_ms = ms_since(start);
    return rec;
  }
};

/// One attempt of stages 1-7. Returns the cycle on success.
inline std::optional<TightCycle> attempt(const Hypergraph3& h, const PipelineConfig& cfg, std::uint64_t seed,
                                         AttemptTrace& tr) {
  const std::size_t n = h.n();
  const double nd = static_cast<double>(n);
  auto fail = [&](StageRecord rec) -> std::optional<TightCycle> {
    tr.failed_stage = rec.stage;
    tr.stages.push_back(std::move(rec));
    return std::nullopt;
  };
  const connect::CascadeParams cp{cfg.omega, cfg.t_deg, cfg.link_budget};

  // (1) absorber family and absorbing path.
  Stage s1("absorbing_path");
  absorb::AbsorberFamily fam;
  try {
    absorb::SampleOptions so;
    so.max_retries = cfg.family_retries;
    so.required_coverage = static_cast<std::size_t>(std::ceil(cfg.a_frac * nd - 1e-9));
    fam = absorb::sample_family(h, cfg.beta, cfg.f_frac, substream_seed(seed, 1), so);
  } catch (const Error& e) {
    return fail(s1.done(false, e.what()));
  }
  s1.rec.retries = fam.retries_used;
  s1.metric("sampled", static_cast<double>(fam.sampled));
  s1.metric("members", static_cast<double>(fam.size()));
  const std::size_t r_max = max_absorbers(cfg.kappa, n);
  if (fam.size() > r_max) {
    std::vector<std::size_t> idx(fam.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return fam.members[a].served.size() > fam.members[b].served.size();
    });
    idx.resize(r_max);
    std::sort(idx.begin(), idx.end());
    std::vector<absorb::Absorber> keep;
    for (std::size_t i : idx) keep.push_back(fam.members[i]);
    fam.members = std::move(keep);
    fam.reindex();
  }
  s1.metric("kept", static_cast<double>(fam.size()));
  if (fam.members.empty()) return fail(s1.done(false, "no absorber fits the absorbing path"));
  const absorb::AbsorbingPath ap = absorb::build_absorbing_path(h, fam, cfg.beta, cfg.kappa, cp);
  if (!ap.path)
    return fail(s1.done(false, "junction " + std::to_string(*ap.failed_junction) + " failed"));
  const std::vector<Vertex>& a = ap.path->vertices;
  s1.metric("path_vertices", static_cast<double>(a.size()));
  tr.stages.push_back(s1.done(true));

  // (2) reservoir.
  Stage s2("reservoir");
  const VertexSet va = VertexSet::of(n, a);
  reservoir::Reservoir res;
  try {
    res = reservoir::sample_reservoir(h, cfg.beta, cfg.nu, va, substream_seed(seed, 2), cfg.reservoir_retries);
  } catch (const Error& e) {
    return fail(s2.done(false, e.what()));
  }
  s2.rec.retries = res.retries_used;
  s2.metric("size", static_cast<double>(res.members.size()));
  s2.metric("certified_min", static_cast<double>(res.certified_min.value_or(0)));
  s2.metric("threshold", res.threshold);
  tr.stages.push_back(s2.done(true));

  // (3) cover of H - V(A) - R.
  Stage s3("cover");
  VertexSet rest = (va | res.members).complement();
  cover::CoverParams cvp;
  cvp.backend = cfg.backend;
  cvp.partition.epsilon = cfg.epsilon;
  cvp.partition.t0 = cfg.t0;
  cvp.partition.t_cap = cfg.T_cap;
  cvp.restarts = cfg.cover_restarts;
  cvp.seed = substream_seed(seed, 3);
  const cover::CoverResult cov = cover::cover_with_paths(h, rest, cfg.d, cfg.zeta, cvp);
  const std::size_t uncovered = cov.order - cov.covered;
  s3.metric("order", static_cast<double>(cov.order));
  s3.metric("covered", static_cast<double>(cov.covered));
  s3.metric("paths", static_cast<double>(cov.count()));
  if (static_cast<double>(uncovered) > cfg.m_frac * nd / 2 + 1e-9)
    return fail(s3.done(false, std::to_string(uncovered) + " vertices uncovered, more than m n / 2"));
  if (cov.count() > cfg.gamma_budget) return fail(s3.done(false, "more paths than gamma_budget"));
  tr.stages.push_back(s3.done(true));

  // (4) + (5) junctions and closure.
  Stage s4("junctions");
  const std::size_t junctions = res.members.size() / 6;
  std::vector<std::vector<Vertex>> pieces;
  for (const auto& p : cov.paths) pieces.push_back(p.vertices);
  if (junctions == 0 || pieces.size() + 1 > junctions)
    return fail(s4.done(false, "reservoir holds " + std::to_string(junctions) + " junctions for " +
                                   std::to_string(pieces.size() + 1) + " pieces"));
  std::size_t splits = 0;
  while (pieces.size() + 1 < junctions) {
    if (!split_longest(h, pieces, res.members))
      return fail(s4.done(false, "too few vertices to split into " + std::to_string(junctions) + " pieces"));
    ++splits;
  }
  s4.metric("junctions", static_cast<double>(junctions));
  s4.metric("splits", static_cast<double>(splits));
  s4.metric("half_reservoir_ok", 12.0 * static_cast<double>(junctions) <= static_cast<double>(res.members.size()));
  ChainSearch chain(h, cfg, a, std::move(pieces), res.members);
  const bool chained = chain.run();
  s4.metric("search_steps", static_cast<double>(chain.calls()));
  s4.metric("anchors_below_floor", static_cast<double>(chain.junctions_below_floor()));
  if (!chained) {
    const std::string why = chain.exhausted() ? " (budget exhausted)" : "";
    if (chain.closure_attempted()) {
      tr.stages.push_back(s4.done(true));
      Stage s5("closure");
      return fail(s5.done(false, "no closing 10-path" + why));
    }
    return fail(s4.done(false, "no chain through all pieces" + why));
  }
  tr.stages.push_back(s4.done(true));
  Stage s5("closure");
  tr.stages.push_back(s5.done(true));

  // (6) absorption.
  Stage s6("absorption");
  std::vector<Vertex> cyc = chain.chain();
  VertexSet left = VertexSet::of(n, cyc).complement();
  s6.metric("leftover", static_cast<double>(left.size()));
  s6.metric("capacity", static_cast<double>(fam.size()));
  if (static_cast<double>(left.size()) > cfg.m_frac * nd + 1e-9)
    return fail(s6.done(false, "leftover exceeds m n"));
  VertexSet served(n);
  std::vector<Vertex> direct;
  {
    std::vector<bool> taken = fam.used;
    left.for_each([&](Vertex v) {
      const auto& cands = fam.per_vertex[v];
      const auto it = std::find_if(cands.begin(), cands.end(), [&](std::size_t i) { return !taken[i]; });
      if (it == cands.end()) {
        direct.push_back(v);
      } else {
        taken[*it] = true;
        served.insert(v);
      }
    });
  }
  if (!direct.empty() && !cfg.direct_insert)
    return fail(s6.done(false, "vertex " + std::to_string(direct[0]) + " has no unused absorber"));
  absorb::absorb_into(cyc, fam, served, true);
  s6.metric("absorbed", static_cast<double>(served.size()));
  s6.metric("inserted_directly", static_cast<double>(direct.size()));
  for (Vertex v : direct)
    if (!insert_into_cycle(h, cyc, v)) return fail(s6.done(false, "vertex " + std::to_string(v) + " fits nowhere"));
  tr.stages.push_back(s6.done(true));

  // (7) validation.
  Stage s7("validation");
  TightCycle out{std::move(cyc)};
  const TightVerdict v = validate_hamilton(h, out);
  if (!v) return fail(s7.done(false, v.reason));
  tr.stages.push_back(s7.done(true));
  return out;
}

}  // namespace detail

/// Runs up to cfg.attempts independent attempts, each from its own
/// substream of `seed`, and returns the first validated cycle. Orders too
/// small to hold one absorber and two junctions go to the exhaustive search
/// instead when cfg.exact_small is set.
inline FindResult find_tight_hamilton(const Hypergraph3& h, const PipelineConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  FindResult out;
  out.trace.n = h.n();
  out.trace.seed = seed;
  // A cycle through A and at least one cover path needs two junctions of
  // six reservoir vertices each.
  const bool too_small = detail::max_absorbers(cfg.kappa, h.n()) == 0 ||
                         reservoir::reservoir_size(cfg.nu, h.n()) < 12;
  if (too_small && cfg.exact_small) {
    AttemptTrace tr;
    tr.seed = seed;
    detail::Stage st("exact");
    const exact::SearchResult sr = exact::tight_hamilton_cycle(h, cfg.exact_budget);
    st.metric("nodes", static_cast<double>(sr.nodes));
    st.metric("proven_absent", sr.proven_absent ? 1.0 : 0.0);
    if (sr.cycle && validate_hamilton(h, *sr.cycle)) {
      tr.stages.push_back(st.done(true));
      out.cycle = sr.cycle;
    } else {
      tr.stages.push_back(st.done(false, sr.proven_absent ? "no tight Hamilton cycle" : "search budget exhausted"));
      tr.failed_stage = "exact";
    }
    out.trace.attempts.push_back(std::move(tr));
  } else {
    for (std::size_t k = 0; k < std::max<std::size_t>(1, cfg.attempts) && !out.cycle; ++k) {
      AttemptTrace tr;
      tr.attempt = k;
      tr.seed = substream_seed(seed, streams::kPipeline + (k << 8));
      out.cycle = detail::attempt(h, cfg, tr.seed, tr);
      out.trace.attempts.push_back(std::move(tr));
    }
  }
  out.trace.success = out.cycle.has_value();
  if (!out.trace.success) out.trace.failed_stage = out.trace.attempts.back().failed_stage;
  return out;
}

}  // namespace thc::pipeline
