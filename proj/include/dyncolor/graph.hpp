#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "index_list.hpp"

namespace dyncolor {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Color = std::uint64_t;  // 0 means "uncolored"

enum class ErrorCode {
  DuplicateEdge,
  MissingEdge,
  DegreeBoundExceeded,
  SelfLoop,
  UnknownVertex,
  InvalidBase,
  DeltaTooSmall,
  RangeOutOfBounds,
  TraceParseError,
  InvalidSpec,
  InternalInvariant,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::InvalidBase: return "InvalidBase";
    case ErrorCode::DeltaTooSmall: return "DeltaTooSmall";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::TraceParseError: return "TraceParseError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Degree bound of a graph: either a fixed Δ known up front, or adaptive,
/// where palettes follow the live degrees and the only hard cap is n-1.
class DegreeBound {
 public:
  static DegreeBound bounded(std::uint32_t delta) { return DegreeBound(delta, false); }
  static DegreeBound adaptive() { return DegreeBound(0, true); }

  bool is_adaptive() const { return adaptive_; }
  std::uint32_t delta() const { return delta_; }

 private:
  DegreeBound(std::uint32_t d, bool a) : delta_(d), adaptive_(a) {}
  std::uint32_t delta_;
  bool adaptive_;
};

enum class UpdateKind : std::uint8_t { Insert, Delete };

struct UpdateEvent {
  UpdateKind kind = UpdateKind::Insert;
  VertexId u = 0;
  VertexId v = 0;
  std::uint64_t sequence = 0;

  static UpdateEvent insert(VertexId a, VertexId b) { return {UpdateKind::Insert, a, b, 0}; }
  static UpdateEvent erase(VertexId a, VertexId b) { return {UpdateKind::Delete, a, b, 0}; }
  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

/// Live edge. Endpoints are stored as (min, max). The two position cookies
/// are node ids in the adjacency link table: cookie(0) is the cell for `v`
/// in `u`'s list and cookie(1) the cell for `u` in `v`'s list. Engines that
/// keep their own neighbourhood lists reuse the same 2*id+side numbering.
struct EdgeHandle {
  EdgeId id = kNil;
  VertexId u = 0;
  VertexId v = 0;

  std::uint32_t cookie(int side) const { return 2 * id + static_cast<std::uint32_t>(side); }
  VertexId endpoint(int side) const { return side == 0 ? u : v; }
  VertexId other(VertexId x) const { return x == u ? v : u; }
  int side_of(VertexId x) const { return x == u ? 0 : 1; }
};

/// Work done while applying one update. The union of what every engine
/// reports; fields an engine does not use stay zero.
struct UpdateReceipt {
  std::uint64_t sequence = 0;
  UpdateKind kind = UpdateKind::Insert;
  VertexId u = 0;
  VertexId v = 0;
  std::uint64_t edges = 0;  // edge count after the update
  std::uint64_t conflicts = 0;
  // randomized vertex engine
  std::uint64_t recolor_calls = 0;
  std::uint64_t chain_len_max = 0;
  std::uint64_t pool_size_min = 0;
  std::uint64_t level_moves = 0;
  // deterministic vertex engine
  std::uint64_t fix_iterations = 0;
  std::uint64_t coords_rewritten = 0;
  std::uint64_t phi_before = 0;
  std::uint64_t phi_after = 0;
  // edge engine
  std::uint64_t tree_visits = 0;
  std::uint64_t recolored_edges = 0;
  std::uint64_t color_assigned = 0;
  // all engines
  std::uint64_t cells_touched = 0;
};

class DynamicGraph;

enum class EngineKind { RandomVertex, DeterministicVertex, Edge, Greedy };

/// Coloring engine driven by a DynamicGraph. The graph is already mutated
/// when a hook runs; on delete the handle is still readable but the edge is
/// gone from the adjacency.
class ColoringEngine {
 public:
  virtual ~ColoringEngine() = default;
  virtual std::string_view name() const = 0;
  virtual EngineKind kind() const = 0;
  virtual void on_insert(const EdgeHandle& e, UpdateReceipt& receipt) = 0;
  virtual void on_delete(const EdgeHandle& e, UpdateReceipt& receipt) = 0;
  /// Size of the palette the engine promises to stay within (fixed mode).
  virtual Color palette_size() const = 0;
};

/// Undirected simple graph over a fixed vertex set with dynamic edges.
class DynamicGraph {
 public:
  DynamicGraph(std::size_t n, DegreeBound bound)
      : n_(n), bound_(bound), degree_(n, 0), adjacency_(n) {}

  DynamicGraph(const DynamicGraph&) = delete;
  DynamicGraph& operator=(const DynamicGraph&) = delete;

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return index_.size(); }
  const DegreeBound& bound() const { return bound_; }
  std::uint64_t sequence() const { return sequence_; }

  /// Δ in fixed mode; n-1 (at least 1) in adaptive mode.
  std::uint32_t max_degree_cap() const {
    if (!bound_.is_adaptive()) return bound_.delta();
    return static_cast<std::uint32_t>(std::max<std::size_t>(1, n_ == 0 ? 0 : n_ - 1));
  }

  std::uint32_t degree(VertexId v) const {
    check_vertex(v);
    return degree_[v];
  }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const {
    if (a >= n_ || b >= n_ || a == b) return std::nullopt;
    auto it = index_.find(key(a, b));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool has_edge(VertexId a, VertexId b) const { return find_edge(a, b).has_value(); }

  const EdgeHandle& edge(EdgeId id) const { return edges_[id]; }
  bool is_live(EdgeId id) const { return id < live_.size() && live_[id]; }
  /// One past the largest edge id ever handed out.
  std::size_t edge_capacity() const { return edges_.size(); }

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    links_.for_each(adjacency_[v], [&](std::uint32_t node) {
      const EdgeHandle& e = edges_[node / 2];
      f(e.endpoint(1 - static_cast<int>(node % 2)), e.id);
    });
  }

  template <class F>
  void for_each_edge(F&& f) const {
    for (std::size_t id = 0; id < edges_.size(); ++id)
      if (live_[id]) f(edges_[id]);
  }

  void attach(ColoringEngine* engine) { engine_ = engine; }
  ColoringEngine* engine() const { return engine_; }

  UpdateReceipt apply(const UpdateEvent& event) {
    check_vertex(event.u);
    check_vertex(event.v);
    if (event.u == event.v)
      throw Error(ErrorCode::SelfLoop, "vertex " + std::to_string(event.u));
    return event.kind == UpdateKind::Insert ? insert(event.u, event.v) : erase(event.u, event.v);
  }

  UpdateReceipt insert(VertexId a, VertexId b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw Error(ErrorCode::SelfLoop, "vertex " + std::to_string(a));
    if (has_edge(a, b)) throw Error(ErrorCode::DuplicateEdge, pair_name(a, b));
    const std::uint32_t cap = max_degree_cap();
    if (degree_[a] + 1 > cap || degree_[b] + 1 > cap)
      throw Error(ErrorCode::DegreeBoundExceeded, pair_name(a, b));

    EdgeId id;
    if (!free_ids_.empty()) {
      id = free_ids_.back();
      free_ids_.pop_back();
    } else {
      id = static_cast<EdgeId>(edges_.size());
      edges_.emplace_back();
      live_.push_back(false);
      links_.ensure(2 * edges_.size());
    }
    EdgeHandle& e = edges_[id];
    e.id = id;
    e.u = std::min(a, b);
    e.v = std::max(a, b);
    live_[id] = true;
    index_.emplace(key(a, b), id);
    links_.push_back(adjacency_[e.u], e.cookie(0));
    links_.push_back(adjacency_[e.v], e.cookie(1));
    ++degree_[e.u];
    ++degree_[e.v];

    UpdateReceipt receipt = start_receipt(UpdateKind::Insert, e);
    if (engine_) engine_->on_insert(e, receipt);
    return receipt;
  }

  UpdateReceipt erase(VertexId a, VertexId b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw Error(ErrorCode::SelfLoop, "vertex " + std::to_string(a));
    auto it = index_.find(key(a, b));
    if (it == index_.end()) throw Error(ErrorCode::MissingEdge, pair_name(a, b));
    const EdgeId id = it->second;
    index_.erase(it);
    const EdgeHandle handle = edges_[id];
    links_.erase(adjacency_[handle.u], handle.cookie(0));
    links_.erase(adjacency_[handle.v], handle.cookie(1));
    --degree_[handle.u];
    --degree_[handle.v];
    live_[id] = false;

    UpdateReceipt receipt = start_receipt(UpdateKind::Delete, handle);
    if (engine_) engine_->on_delete(handle, receipt);
    free_ids_.push_back(id);
    return receipt;
  }

  /// Full-scan structural check: every live edge has exactly one cell at
  /// each endpoint, cookies resolve, and degrees sum to 2|E|.
  bool check_adjacency() const {
    std::uint64_t degree_sum = 0;
    std::vector<std::uint32_t> seen(edges_.size() * 2, 0);
    for (VertexId v = 0; v < n_; ++v) {
      std::uint32_t count = 0;
      bool ok = true;
      links_.for_each(adjacency_[v], [&](std::uint32_t node) {
        ++count;
        const EdgeHandle& e = edges_[node / 2];
        if (!live_[node / 2] || e.endpoint(static_cast<int>(node % 2)) != v) ok = false;
        ++seen[node];
      });
      if (!ok || count != degree_[v] || adjacency_[v].size != count) return false;
      degree_sum += degree_[v];
    }
    for (std::size_t id = 0; id < edges_.size(); ++id) {
      const std::uint32_t expect = live_[id] ? 1 : 0;
      if (seen[2 * id] != expect || seen[2 * id + 1] != expect) return false;
      if (live_[id]) {
        auto it = index_.find(key(edges_[id].u, edges_[id].v));
        if (it == index_.end() || it->second != id) return false;
      }
    }
    return degree_sum == 2 * index_.size();
  }

 private:
  static std::uint64_t key(VertexId a, VertexId b) {
    const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    return (hi << 32) | lo;
  }
  static std::string pair_name(VertexId a, VertexId b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  void check_vertex(VertexId v) const {
    if (v >= n_) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
  }
  UpdateReceipt start_receipt(UpdateKind kind, const EdgeHandle& e) {
    UpdateReceipt r;
    r.sequence = ++sequence_;
    r.kind = kind;
    r.u = e.u;
    r.v = e.v;
    r.edges = index_.size();
    return r;
  }

  std::size_t n_;
  DegreeBound bound_;
  std::vector<std::uint32_t> degree_;
  std::vector<ListHead> adjacency_;
  LinkTable links_;
  std::vector<EdgeHandle> edges_;
  std::vector<bool> live_;
  std::vector<EdgeId> free_ids_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
  ColoringEngine* engine_ = nullptr;
  std::uint64_t sequence_ = 0;
};

}  // namespace dyncolor
