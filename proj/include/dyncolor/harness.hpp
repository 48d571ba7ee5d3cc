#pragma once

#include <algorithm>
#include <future>
#include <iomanip>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "det_vertex_coloring.hpp"
#include "edge_coloring.hpp"
#include "graph.hpp"
#include "greedy_coloring.hpp"
#include "rand_vertex_coloring.hpp"
#include "trace.hpp"
#include "verify.hpp"

namespace dyncolor {

inline constexpr const char* kEngineNames[] = {"rand-vc", "det-vc", "edge-c", "greedy-baseline"};

struct EngineOptions {
  double beta = 21.0;
  std::uint64_t seed = 1;
  bool adaptive = false;  // rand-vc: restrict palettes to {1..D_v+1}
};

/// det-vc below the minimum degree bound runs the greedy engine instead.
inline std::unique_ptr<ColoringEngine> make_engine(std::string_view name, const DynamicGraph& g,
                                                   const EngineOptions& opt = {}) {
  if (name == "rand-vc") return std::make_unique<RandomVertexColoring>(g, RandomColoringOptions{opt.beta, opt.seed, opt.adaptive});
  if (name == "det-vc") {
    if (g.bound().is_adaptive())
      throw Error(ErrorCode::InvalidSpec, "det-vc needs a fixed degree bound");
    if (g.bound().delta() < DetParams::kMinDelta) return std::make_unique<GreedyColoring>(g, "det-vc-fallback");
    return std::make_unique<DeterministicVertexColoring>(g);
  }
  if (name == "edge-c") return std::make_unique<EdgeColoring>(g);
  if (name == "greedy-baseline") return std::make_unique<GreedyColoring>(g);
  throw Error(ErrorCode::InvalidSpec, "unknown engine '" + std::string(name) + "'");
}

/// Current vertex colors, or edge colors indexed by edge id for edge-c.
inline std::vector<Color> current_colors(const DynamicGraph& g, const ColoringEngine& eng) {
  if (auto* r = dynamic_cast<const RandomVertexColoring*>(&eng)) return r->colors();
  if (auto* d = dynamic_cast<const DeterministicVertexColoring*>(&eng)) return d->colors();
  if (auto* gr = dynamic_cast<const GreedyColoring*>(&eng)) return gr->colors();
  std::vector<Color> out(g.edge_capacity(), 0);
  if (auto* e = dynamic_cast<const EdgeColoring*>(&eng))
    g.for_each_edge([&](const EdgeHandle& h) { out[h.id] = e->edge_color(h.id); });
  return out;
}

/// Every oracle that applies to the engine, plus the engine's own
/// instrumentation counters, which must all be zero.
inline verify::AuditReport audit(const DynamicGraph& g, const ColoringEngine& eng) {
  verify::AuditReport r;
  if (!g.check_adjacency()) r.add("adjacency", "graph", 0, 1);
  auto counter = [&](const char* name, std::uint64_t value) {
    if (value != 0) r.add(name, std::string(eng.name()), static_cast<double>(value), 0);
  };
  const bool adaptive = g.bound().is_adaptive();
  if (auto* rv = dynamic_cast<const RandomVertexColoring*>(&eng)) {
    r.merge(verify::check_proper_vertex(g, rv->colors()));
    r.merge(verify::check_vertex_palette(g, rv->colors(), rv->palette_size(), rv->adaptive()));
    r.merge(verify::check_hierarchy(g, rv->hierarchy()));
    r.merge(verify::check_rand_tables(g, *rv));
    if (!rv->scratch_clear()) r.add("scratch_clear", "rand-vc", 1, 0);
    if (!rv->hierarchy().queues_empty()) r.add("queues_empty", "rand-vc", 1, 0);
    counter("blank_unique_bound", rv->claim_failures());
    counter("chain_length_bound", rv->chain_limit_failures());
    counter("level_move_postcondition", rv->hierarchy().post_condition_failures());
  } else if (auto* dv = dynamic_cast<const DeterministicVertexColoring*>(&eng)) {
    r.merge(verify::check_proper_vertex(g, dv->colors()));
    r.merge(verify::check_vertex_palette(g, dv->colors(), dv->palette_size()));
    r.merge(verify::check_tuple_state(g, *dv));
    if (!dv->scratch_clear()) r.add("scratch_clear", "det-vc", 1, 0);
    counter("fix_removed_bound", dv->removed_bound_failures());
    counter("fix_added_bound", dv->added_bound_failures());
    counter("fix_potential_drop", dv->drop_bound_failures());
    counter("fix_split_bound", dv->split_bound_failures());
    counter("fix_exit", dv->exit_failures());
    const std::uint64_t edge_phi_cap = 2 * (static_cast<std::uint64_t>(dv->L()) + 1);
    if (dv->max_edge_phi_change() > edge_phi_cap)
      r.add("edge_potential_change", "det-vc", static_cast<double>(dv->max_edge_phi_change()),
            static_cast<double>(edge_phi_cap));
  } else if (auto* gv = dynamic_cast<const GreedyColoring*>(&eng)) {
    r.merge(verify::check_proper_vertex(g, gv->colors()));
    r.merge(verify::check_vertex_palette(g, gv->colors(), gv->palette_size(), adaptive));
  } else if (auto* ec = dynamic_cast<const EdgeColoring*>(&eng)) {
    auto color_of = [&](EdgeId e) { return ec->edge_color(e); };
    r.merge(verify::check_proper_edge(g, color_of));
    r.merge(verify::check_edge_palette(g, color_of, ec->palette_size(), adaptive));
    if (!ec->consistent()) r.add("tree_consistency", "edge-c", 1, 0);
    counter("search_loop_invariant", ec->loop_invariant_failures());
  }
  return r;
}

inline nlohmann::json to_json(const verify::AuditReport& r, std::size_t max_listed = 50) {
  nlohmann::json out;
  out["passed"] = r.passed();
  out["violation_count"] = r.violations.size();
  auto& list = out["violations"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < max_listed; ++i) {
    const auto& v = r.violations[i];
    list.push_back({{"check", v.check}, {"subject", v.subject}, {"observed", v.observed}, {"bound", v.bound}});
  }
  return out;
}

struct RunOptions {
  std::string engine = "rand-vc";
  EngineOptions engine_options;
  std::uint64_t audit_every = 1000;  // 0: audit only at the end
};

struct RunSummary {
  std::string engine;
  std::uint64_t updates = 0;
  std::uint64_t recolorings = 0;  // vertex recolorings, or recolored edges
  std::uint64_t cells_touched = 0;
  std::uint64_t max_chain = 0;
  std::uint64_t max_tree_visits = 0;
  std::uint64_t fix_iterations = 0;
  Color palette = 0;       // palette the engine promises
  Color palette_used = 0;  // largest color in use at the end
  std::uint64_t audits = 0;  // periodic ones plus the final one
  std::uint64_t failed_audits = 0;
  verify::AuditReport final_audit;

  bool passed() const { return failed_audits == 0; }
};

inline constexpr const char* kCsvHeader =
    "seq,engine,op,u,v,edges,recolor_calls,chain_len_max,pool_size_min,level_moves,fix_iterations,"
    "coords_rewritten,phi_before,phi_after,tree_visits,recolored_edges,color_assigned,cells_touched,"
    "cum_cells_touched,audit";

/// Replays the trace through one engine. Writes one CSV row per update and
/// one JSON line per audit when the streams are given.
inline RunSummary run(const Trace& trace, const RunOptions& opt, std::ostream* csv = nullptr,
                      std::ostream* audit_log = nullptr) {
  DynamicGraph g(trace.n, trace.bound());
  auto engine = make_engine(opt.engine, g, opt.engine_options);
  g.attach(engine.get());

  RunSummary s;
  s.engine = opt.engine;
  s.palette = engine->palette_size();
  if (csv) *csv << kCsvHeader << '\n';

  auto do_audit = [&](std::uint64_t seq) {
    verify::AuditReport report = audit(g, *engine);
    ++s.audits;
    if (!report.passed()) ++s.failed_audits;
    if (audit_log) {
      nlohmann::json line = to_json(report);
      line["seq"] = seq;
      line["engine"] = opt.engine;
      *audit_log << line.dump() << '\n';
    }
    return report;
  };

  for (const auto& event : trace.events) {
    const UpdateReceipt r = g.apply(event);
    ++s.updates;
    s.recolorings += r.recolor_calls + r.recolored_edges;
    s.cells_touched += r.cells_touched;
    s.max_chain = std::max(s.max_chain, r.chain_len_max);
    s.max_tree_visits = std::max(s.max_tree_visits, r.tree_visits);
    s.fix_iterations += r.fix_iterations;

    const bool audited = opt.audit_every != 0 && r.sequence % opt.audit_every == 0;
    std::string status;
    if (audited) status = do_audit(r.sequence).passed() ? "pass" : "fail";
    if (csv) {
      *csv << r.sequence << ',' << opt.engine << ',' << (r.kind == UpdateKind::Insert ? '+' : '-') << ',' << r.u
           << ',' << r.v << ',' << r.edges << ',' << r.recolor_calls << ',' << r.chain_len_max << ','
           << r.pool_size_min << ',' << r.level_moves << ',' << r.fix_iterations << ',' << r.coords_rewritten << ','
           << r.phi_before << ',' << r.phi_after << ',' << r.tree_visits << ',' << r.recolored_edges << ','
           << r.color_assigned << ',' << r.cells_touched << ',' << s.cells_touched << ',' << status << '\n';
    }
  }
  s.final_audit = do_audit(g.sequence());
  for (Color c : current_colors(g, *engine)) s.palette_used = std::max(s.palette_used, c);
  return s;
}

/// Replays the trace through each engine on its own thread.
inline std::vector<RunSummary> compare(const Trace& trace, const std::vector<std::string>& engines,
                                       const RunOptions& base) {
  std::vector<std::future<RunSummary>> jobs;
  for (const auto& name : engines) {
    RunOptions opt = base;
    opt.engine = name;
    jobs.push_back(std::async(std::launch::async, [&trace, opt] { return run(trace, opt); }));
  }
  std::vector<RunSummary> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

inline void print_summary_table(std::ostream& out, const std::vector<RunSummary>& rows) {
  out << std::left << std::setw(18) << "engine" << std::right << std::setw(10) << "updates" << std::setw(13)
      << "recolorings" << std::setw(15) << "cells_touched" << std::setw(10) << "max_chain" << std::setw(14)
      << "palette" << std::setw(14) << "palette_used" << std::setw(8) << "audit" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(18) << r.engine << std::right << std::setw(10) << r.updates << std::setw(13)
        << r.recolorings << std::setw(15) << r.cells_touched << std::setw(10) << r.max_chain << std::setw(14)
        << r.palette << std::setw(14) << r.palette_used << std::setw(8) << (r.passed() ? "pass" : "FAIL") << '\n';
  }
}

}  // namespace dyncolor
