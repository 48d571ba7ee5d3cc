#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace dyncolor {

/// Shape of the counting tree over colors [1, 2Δ): the node for [l, r)
/// splits at z = ⌈(l+r)/2⌉, which is exactly the split the coloring search
/// uses, so every search step reads one stored counter per endpoint.
class SplitTree {
 public:
  struct Node {
    std::uint32_t lo, hi;  // [lo, hi)
    std::uint32_t left = kNil, right = kNil, parent = kNil;
  };

  SplitTree() = default;
  SplitTree(std::uint32_t lo, std::uint32_t hi) : leaf_(hi, kNil) {
    nodes_.reserve(2 * static_cast<std::size_t>(hi - lo));
    build(lo, hi, kNil);
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::uint32_t leaf(std::uint32_t c) const { return leaf_[c]; }
  std::uint32_t height() const { return height_; }

 private:
  std::uint32_t build(std::uint32_t lo, std::uint32_t hi, std::uint32_t parent, std::uint32_t depth = 0) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({lo, hi, kNil, kNil, parent});
    height_ = std::max(height_, depth);
    if (hi - lo == 1) {
      leaf_[lo] = id;
      return id;
    }
    const std::uint32_t z = (lo + hi + 1) / 2;
    const std::uint32_t l = build(lo, z, id, depth + 1);
    const std::uint32_t r = build(z, hi, id, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> leaf_;
  std::uint32_t height_ = 0;
};

/// Fenwick tree over colors 1..capacity that doubles on demand.
class GrowableFenwick {
 public:
  std::uint32_t capacity() const { return static_cast<std::uint32_t>(tree_.size()) - 1; }

  void ensure(std::uint32_t c, const std::vector<EdgeId>& slots) {
    if (c <= capacity()) return;
    std::uint32_t cap = std::max<std::uint32_t>(4, capacity());
    while (cap < c) cap *= 2;
    tree_.assign(cap + 1, 0);
    for (std::uint32_t i = 1; i < slots.size() && i <= cap; ++i)
      if (slots[i] != kNil) add(i, 1, nullptr);
  }

  void add(std::uint32_t c, int delta, std::uint64_t* visits) {
    for (; c < tree_.size(); c += c & (~c + 1)) {
      tree_[c] = static_cast<std::uint32_t>(static_cast<int>(tree_[c]) + delta);
      if (visits) ++*visits;
    }
  }

  /// Σ bits over colors 1..c.
  std::uint32_t prefix(std::uint32_t c, std::uint64_t* visits) const {
    c = std::min(c, capacity());
    std::uint32_t s = 0;
    for (; c > 0; c &= c - 1) {
      s += tree_[c];
      if (visits) ++*visits;
    }
    return s;
  }

 private:
  std::vector<std::uint32_t> tree_ = std::vector<std::uint32_t>(1, 0);
};

/// Proper edge coloring with colors in [1, 2Δ-1], one binary search per
/// insertion. Each vertex keeps, per color, the incident edge holding it,
/// plus a counting tree over the occupancy bits. Searching [l, r) keeps
/// A_u[l:r] + A_v[l:r] < r - l, so the interval always holds a color free
/// at both ends; it stops at a single color.
///
/// In adaptive mode the search range is [1, deg(u) + deg(v)) and trees are
/// growable Fenwick trees. A deletion can push up to two edges per endpoint
/// over their palette 2·max(deg) - 1; those are recolored.
class EdgeColoring final : public ColoringEngine {
 public:
  explicit EdgeColoring(const DynamicGraph& graph)
      : graph_(graph),
        adaptive_(graph.bound().is_adaptive()),
        delta_(graph.max_degree_cap()),
        slots_(graph.vertex_count()) {
    if (!adaptive_) {
      tree_ = SplitTree(1, 2 * delta_);
      counts_.assign(graph.vertex_count() * tree_.size(), 0);
      for (auto& s : slots_) s.assign(2 * static_cast<std::size_t>(delta_), kNil);
    } else {
      fenwick_.resize(graph.vertex_count());
    }
  }

  std::string_view name() const override { return "edge-c"; }
  EngineKind kind() const override { return EngineKind::Edge; }
  Color palette_size() const override { return 2 * Color{delta_} - 1; }

  bool adaptive() const { return adaptive_; }
  Color edge_color(EdgeId e) const { return e < color_.size() ? color_[e] : 0; }
  /// Edge holding color c at v, or kNil.
  EdgeId edge_at(VertexId v, Color c) const {
    return c < slots_[v].size() ? slots_[v][c] : kNil;
  }
  /// A_v[c].
  bool occupied(VertexId v, Color c) const { return edge_at(v, c) != kNil; }

  std::uint64_t max_visits() const { return max_visits_; }
  std::uint64_t loop_invariant_failures() const { return loop_failures_; }
  std::uint64_t cells_touched() const { return cells_; }
  std::uint32_t tree_height() const { return tree_.height(); }

  /// A_v[a:b], the number of occupied colors c with a <= c < b.
  std::uint64_t range_count(VertexId v, Color a, Color b, std::uint64_t* visits = nullptr) const {
    const Color top = adaptive_ ? Color{fenwick_[v].capacity()} + 1 : 2 * Color{delta_};
    if (a < 1 || a > b || (!adaptive_ && b > top))
      throw Error(ErrorCode::RangeOutOfBounds,
                  "[" + std::to_string(a) + "," + std::to_string(b) + ") at vertex " + std::to_string(v));
    if (a == b) return 0;
    if (adaptive_) {
      const auto hi = static_cast<std::uint32_t>(std::min<Color>(b - 1, top));
      const auto lo = static_cast<std::uint32_t>(std::min<Color>(a - 1, top));
      return fenwick_[v].prefix(hi, visits) - fenwick_[v].prefix(lo, visits);
    }
    return count_in(v, 0, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), visits);
  }

  void on_insert(const EdgeHandle& e, UpdateReceipt& receipt) override {
    if (color_.size() < graph_.edge_capacity()) color_.resize(graph_.edge_capacity(), 0);
    std::uint64_t visits = 0;
    const Color c = color_edge(e, visits);
    receipt.color_assigned = c;
    finish(receipt, visits);
  }

  void on_delete(const EdgeHandle& e, UpdateReceipt& receipt) override {
    std::uint64_t visits = 0;
    uncolor(e, visits);
    if (adaptive_) {
      std::vector<std::pair<VertexId, Color>> over;
      for (VertexId x : {e.u, e.v}) {
        const Color d = graph_.degree(x);
        for (Color c : {2 * d, 2 * d + 1}) {
          const EdgeId f = edge_at(x, c);
          if (f == kNil) continue;
          const EdgeHandle& h = graph_.edge(f);
          const Color bound = 2 * Color{std::max(graph_.degree(h.u), graph_.degree(h.v))} - 1;
          if (c > bound) over.emplace_back(x, c);
        }
      }
      std::sort(over.begin(), over.end());
      for (const auto& [x, c] : over) {
        const EdgeId f = edge_at(x, c);
        if (f == kNil) continue;  // already recolored from the other endpoint
        const EdgeHandle h = graph_.edge(f);
        if (c <= 2 * Color{std::max(graph_.degree(h.u), graph_.degree(h.v))} - 1) continue;
        uncolor(h, visits);
        color_edge(h, visits);
        ++receipt.recolored_edges;
      }
    }
    finish(receipt, visits);
  }

  /// Trees, occupancy and the color array agree; roots equal degrees.
  bool consistent() const {
    for (VertexId v = 0; v < slots_.size(); ++v) {
      std::uint64_t occupied_count = 0;
      for (Color c = 1; c < slots_[v].size(); ++c) {
        const EdgeId f = slots_[v][c];
        if (f == kNil) continue;
        ++occupied_count;
        if (!graph_.is_live(f) || color_[f] != c) return false;
        const EdgeHandle& h = graph_.edge(f);
        if (h.u != v && h.v != v) return false;
      }
      if (occupied_count != graph_.degree(v)) return false;
      if (adaptive_) {
        const GrowableFenwick& fw = fenwick_[v];
        for (std::uint32_t c = 1; c <= fw.capacity(); ++c) {
          const std::uint32_t bit = fw.prefix(c, nullptr) - fw.prefix(c - 1, nullptr);
          if (bit != (occupied(v, c) ? 1u : 0u)) return false;
        }
      } else {
        for (std::uint32_t id = 0; id < tree_.size(); ++id) {
          const auto& n = tree_.node(id);
          const std::uint32_t expect = n.left == kNil ? (occupied(v, n.lo) ? 1u : 0u)
                                                      : count(v, n.left) + count(v, n.right);
          if (count(v, id) != expect) return false;
        }
        if (count(v, 0) != graph_.degree(v)) return false;
      }
    }
    bool ok = true;
    graph_.for_each_edge([&](const EdgeHandle& h) {
      const Color c = color_[h.id];
      if (c == 0 || edge_at(h.u, c) != h.id || edge_at(h.v, c) != h.id) ok = false;
    });
    return ok;
  }

 private:
  std::uint32_t count(VertexId v, std::uint32_t node) const { return counts_[v * tree_.size() + node]; }
  std::uint32_t& count_ref(VertexId v, std::uint32_t node) { return counts_[v * tree_.size() + node]; }

  std::uint64_t count_in(VertexId v, std::uint32_t id, std::uint32_t a, std::uint32_t b, std::uint64_t* visits) const {
    const auto& n = tree_.node(id);
    if (b <= n.lo || n.hi <= a) return 0;
    if (visits) ++*visits;
    if (a <= n.lo && n.hi <= b) return count(v, id);
    return count_in(v, n.left, a, b, visits) + count_in(v, n.right, a, b, visits);
  }

  void finish(UpdateReceipt& receipt, std::uint64_t visits) {
    receipt.tree_visits += visits;
    receipt.cells_touched += visits;
    cells_ += visits;
    max_visits_ = std::max(max_visits_, receipt.tree_visits);
  }

  void fail_invariant(const EdgeHandle& e) {
    ++loop_failures_;
    throw Error(ErrorCode::InternalInvariant, "no free color for edge (" + std::to_string(e.u) + "," +
                                                  std::to_string(e.v) + ")");
  }

  Color color_edge(const EdgeHandle& e, std::uint64_t& visits) {
    const Color c = adaptive_ ? search_adaptive(e, visits) : search_fixed(e, visits);
    set(e, c, visits);
    return c;
  }

  Color search_fixed(const EdgeHandle& e, std::uint64_t& visits) {
    std::uint32_t id = 0;
    std::uint64_t total = count(e.u, 0) + count(e.v, 0);
    visits += 2;
    for (;;) {
      const auto& n = tree_.node(id);
      if (total >= n.hi - n.lo) fail_invariant(e);
      if (n.left == kNil) return n.lo;
      const std::uint64_t left = count(e.u, n.left) + count(e.v, n.left);
      visits += 2;
      const auto& ln = tree_.node(n.left);
      if (left < ln.hi - ln.lo) {
        id = n.left;
        total = left;
      } else {
        id = n.right;
        total -= left;
      }
    }
  }

  Color search_adaptive(const EdgeHandle& e, std::uint64_t& visits) {
    Color lo = 1;
    Color hi = Color{graph_.degree(e.u)} + graph_.degree(e.v);
    std::uint64_t total = range_count(e.u, lo, hi, &visits) + range_count(e.v, lo, hi, &visits);
    for (;;) {
      if (total >= hi - lo) fail_invariant(e);
      if (hi - lo == 1) return lo;
      const Color z = (lo + hi + 1) / 2;
      const std::uint64_t left = range_count(e.u, lo, z, &visits) + range_count(e.v, lo, z, &visits);
      if (left < z - lo) {
        hi = z;
        total = left;
      } else {
        lo = z;
        total -= left;
      }
    }
  }

  void set(const EdgeHandle& e, Color c, std::uint64_t& visits) {
    color_[e.id] = c;
    for (VertexId x : {e.u, e.v}) {
      bump(x, c, +1, visits);  // before place(): a Fenwick regrow rebuilds from the slots
      place(x, c, e.id);
    }
  }

  void uncolor(const EdgeHandle& e, std::uint64_t& visits) {
    const Color c = color_[e.id];
    if (c == 0) return;
    for (VertexId x : {e.u, e.v}) {
      slots_[x][c] = kNil;
      bump(x, c, -1, visits);
    }
    color_[e.id] = 0;
  }

  void place(VertexId x, Color c, EdgeId e) {
    if (slots_[x].size() <= c) slots_[x].resize(std::max<std::size_t>(c + 1, 2 * slots_[x].size()), kNil);
    slots_[x][c] = e;
  }

  void bump(VertexId x, Color c, int delta, std::uint64_t& visits) {
    if (adaptive_) {
      fenwick_[x].ensure(static_cast<std::uint32_t>(c), slots_[x]);
      fenwick_[x].add(static_cast<std::uint32_t>(c), delta, &visits);
      return;
    }
    for (std::uint32_t id = tree_.leaf(static_cast<std::uint32_t>(c)); id != kNil; id = tree_.node(id).parent) {
      count_ref(x, id) = static_cast<std::uint32_t>(static_cast<int>(count(x, id)) + delta);
      ++visits;
    }
  }

  const DynamicGraph& graph_;
  bool adaptive_;
  std::uint32_t delta_;
  SplitTree tree_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::vector<EdgeId>> slots_;
  std::vector<GrowableFenwick> fenwick_;
  std::vector<Color> color_;
  std::uint64_t max_visits_ = 0;
  std::uint64_t loop_failures_ = 0;
  std::uint64_t cells_ = 0;
};

}  // namespace dyncolor
