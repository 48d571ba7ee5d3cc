#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "graph.hpp"
#include "hierarchy.hpp"
#include "index_list.hpp"

namespace dyncolor {

struct RandomColoringOptions {
  double beta = 21.0;
  std::uint64_t seed = 1;
  /// Palette {1..D_v+1} per vertex. Always on when the graph itself is adaptive.
  bool adaptive = false;
};

/// Classification of the colors free for v (not used at or above ℓ(v)) by
/// how many below-neighbours use them: blank (none), unique (one), taken (2+).
struct BlankUniqueView {
  std::vector<Color> blank;
  std::vector<Color> unique;
  std::vector<Color> taken;
};

struct RecolorStep {
  VertexId vertex;
  Color color;
  int level;
  std::uint64_t pool;  // |B ∪ U| at the time of the draw
};

/// (Δ+1)-vertex coloring maintained over a level partition.
///
/// A vertex v tracks, for every color c, how many neighbours at level
/// >= ℓ(v) use c (μ⁺). Colors with a nonzero count sit in v's "plus" list,
/// all others in v's "free" list; both lists are O(1) to edit through the
/// per-(vertex, color) node. An insertion joining two equal colors recolors
/// the endpoint that was recolored more recently: it draws uniformly among
/// free colors used by at most one below-neighbour. Picking a color used by
/// exactly one below-neighbour hands the conflict down to that neighbour,
/// which sits on a strictly lower level, so chains have at most L-3 links.
class RandomVertexColoring final : public ColoringEngine {
 public:
  explicit RandomVertexColoring(const DynamicGraph& graph, RandomColoringOptions options = {})
      : graph_(graph),
        hierarchy_(graph, graph.max_degree_cap(), options.beta),
        palette_(graph.bound().is_adaptive()
                     ? std::max<Color>(1, graph.vertex_count())
                     : static_cast<Color>(graph.bound().delta()) + 1),
        adaptive_(options.adaptive || graph.bound().is_adaptive()),
        seed_(options.seed),
        rng_(options.seed),
        color_(graph.vertex_count(), 1),
        tau_(graph.vertex_count(), 0),
        plus_count_(graph.vertex_count() * palette_, 0),
        plus_heads_(graph.vertex_count()),
        free_heads_(graph.vertex_count()),
        color_links_(graph.vertex_count() * palette_),
        scratch_(palette_ + 1, 0) {
    const std::size_t n = graph.vertex_count();
    for (VertexId v = 0; v < n; ++v)
      for (Color c = 1; c <= palette_; ++c) color_links_.push_back(free_heads_[v], node(v, c));
    if (!adaptive_) {
      std::uniform_int_distribution<Color> pick(1, palette_);
      for (VertexId v = 0; v < n; ++v) color_[v] = pick(rng_);
    }
  }

  std::string_view name() const override { return "rand-vc"; }
  EngineKind kind() const override { return EngineKind::RandomVertex; }
  Color palette_size() const override { return palette_; }

  std::uint64_t seed() const { return seed_; }
  bool adaptive() const { return adaptive_; }
  const LevelPartition& hierarchy() const { return hierarchy_; }
  Color color(VertexId v) const { return color_[v]; }
  const std::vector<Color>& colors() const { return color_; }
  std::uint64_t last_recolored(VertexId v) const { return tau_[v]; }

  std::uint32_t plus_count(VertexId v, Color c) const { return plus_count_[node(v, c)]; }
  std::vector<Color> plus_colors(VertexId v) const { return list_colors(v, plus_heads_[v]); }
  std::vector<Color> free_colors(VertexId v) const { return list_colors(v, free_heads_[v]); }

  std::uint64_t claim_failures() const { return claim_failures_; }
  std::uint64_t chain_limit_failures() const { return chain_limit_failures_; }
  std::uint64_t recolor_calls() const { return recolor_calls_; }
  std::uint64_t longest_chain() const { return longest_chain_; }
  std::uint64_t smallest_pool() const { return smallest_pool_; }
  std::uint64_t cells_touched() const { return cells_ + hierarchy_.cells_touched(); }
  bool scratch_clear() const {
    return std::all_of(scratch_.begin(), scratch_.end(), [](std::uint32_t x) { return x == 0; });
  }

  void on_insert(const EdgeHandle& e, UpdateReceipt& receipt) override {
    const std::uint64_t before = cells_touched();
    hierarchy_.add_edge(e);
    account_edge(e, true);
    receipt.level_moves += maintain_levels();
    if (color_[e.u] == color_[e.v]) {
      receipt.conflicts = 1;
      // The endpoint recolored last goes; on a tie the smaller id does.
      const VertexId x = tau_[e.v] > tau_[e.u] ? e.v : e.u;
      run_recolor(x, receipt);
    }
    receipt.cells_touched += cells_touched() - before;
  }

  void on_delete(const EdgeHandle& e, UpdateReceipt& receipt) override {
    const std::uint64_t before = cells_touched();
    account_edge(e, false);
    hierarchy_.remove_edge(e);
    receipt.level_moves += maintain_levels();
    if (adaptive_) {
      for (VertexId x : {e.u, e.v})
        if (color_[x] > static_cast<Color>(graph_.degree(x)) + 1) run_recolor(x, receipt);
    }
    receipt.cells_touched += cells_touched() - before;
  }

  /// Turning the adaptive palette on recolors every vertex whose color
  /// exceeds D_v + 1.
  void set_adaptive(bool flag) {
    adaptive_ = flag || graph_.bound().is_adaptive();
    if (!adaptive_) return;
    UpdateReceipt scratch_receipt;
    for (VertexId v = 0; v < color_.size(); ++v)
      if (color_[v] > static_cast<Color>(graph_.degree(v)) + 1) run_recolor(v, scratch_receipt);
  }

  BlankUniqueView blank_unique(VertexId v) {
    BlankUniqueView view;
    hierarchy_.for_each_below(v, [&](VertexId u, EdgeId) { ++scratch_[color_[u]]; });
    for_each_free_color(v, [&](Color c) {
      const std::uint32_t hits = scratch_[c];
      (hits == 0 ? view.blank : hits == 1 ? view.unique : view.taken).push_back(c);
      return true;
    });
    hierarchy_.for_each_below(v, [&](VertexId u, EdgeId) { scratch_[color_[u]] = 0; });
    return view;
  }

  /// Recolors v and follows the chain of handed-down conflicts.
  std::vector<RecolorStep> recolor(VertexId start) {
    std::vector<RecolorStep> chain;
    VertexId v = start;
    for (;;) {
      const int level = hierarchy_.level(v);
      const std::uint64_t below = hierarchy_.below_size(v);

      std::uint64_t taken = 0;
      hierarchy_.for_each_below(v, [&](VertexId u, EdgeId) {
        const Color c = color_[u];
        if (++scratch_[c] == 2 && is_free_for(v, c)) ++taken;
      });
      cells_ += below;
      const std::uint64_t pool = free_color_count(v) - taken;
      if (2 * pool < 2 + below) ++claim_failures_;
      const std::uint64_t limit = std::min(pool, pool_cap(level));
      if (limit == 0) {
        hierarchy_.for_each_below(v, [&](VertexId u, EdgeId) { scratch_[color_[u]] = 0; });
        throw Error(ErrorCode::InternalInvariant, "empty recolor pool at vertex " + std::to_string(v));
      }

      const std::uint64_t target = std::uniform_int_distribution<std::uint64_t>(0, limit - 1)(rng_);
      std::uint64_t index = 0;
      Color chosen = 0;
      for_each_free_color(v, [&](Color c) {
        ++cells_;
        if (scratch_[c] > 1) return true;
        if (index++ == target) {
          chosen = c;
          return false;
        }
        return true;
      });
      const bool unique = scratch_[chosen] == 1;

      VertexId next = kNil;
      hierarchy_.for_each_below(v, [&](VertexId u, EdgeId) {
        if (unique && color_[u] == chosen) next = u;
        scratch_[color_[u]] = 0;
      });
      cells_ += below;

      assign(v, chosen);
      chain.push_back({v, chosen, level, pool});
      if (!unique) break;
      v = next;
    }
    ++chains_;
    recolor_calls_ += chain.size();
    longest_chain_ = std::max<std::uint64_t>(longest_chain_, chain.size());
    if (chain.size() > static_cast<std::size_t>(hierarchy_.top_level() - 3)) ++chain_limit_failures_;
    return chain;
  }

 private:
  std::uint32_t node(VertexId v, Color c) const {
    return static_cast<std::uint32_t>(v * palette_ + (c - 1));
  }

  std::vector<Color> list_colors(VertexId v, const ListHead& head) const {
    std::vector<Color> out;
    color_links_.for_each(head, [&](std::uint32_t n) { out.push_back(n - v * palette_ + 1); });
    return out;
  }

  bool is_free_for(VertexId v, Color c) const {
    return plus_count_[node(v, c)] == 0 && (!adaptive_ || c <= static_cast<Color>(graph_.degree(v)) + 1);
  }

  // Visits free colors of v in list order (ascending in adaptive mode) until f returns false.
  template <class F>
  void for_each_free_color(VertexId v, F&& f) {
    if (adaptive_) {
      const Color top = std::min<Color>(palette_, static_cast<Color>(graph_.degree(v)) + 1);
      for (Color c = 1; c <= top; ++c) {
        if (plus_count_[node(v, c)] != 0) continue;
        if (!f(c)) return;
      }
      return;
    }
    for (std::uint32_t n = free_heads_[v].first; n != kNil; n = color_links_.next(n))
      if (!f(static_cast<Color>(n - v * palette_ + 1))) return;
  }

  std::uint64_t free_color_count(VertexId v) {
    if (!adaptive_) return palette_ - plus_heads_[v].size;
    const Color top = std::min<Color>(palette_, static_cast<Color>(graph_.degree(v)) + 1);
    std::uint64_t count = 0;
    for (Color c = 1; c <= top; ++c)
      if (plus_count_[node(v, c)] == 0) ++count;
    cells_ += top;
    return count;
  }

  std::uint64_t pool_cap(int level) const {
    const long double p = std::ceil(hierarchy_.power(level));
    if (p >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
      return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(p);
  }

  void raise(VertexId v, Color c) {
    const std::uint32_t n = node(v, c);
    if (plus_count_[n]++ == 0) {
      color_links_.erase(free_heads_[v], n);
      color_links_.push_back(plus_heads_[v], n);
    }
    ++cells_;
  }
  void lower(VertexId v, Color c) {
    const std::uint32_t n = node(v, c);
    if (--plus_count_[n] == 0) {
      color_links_.erase(plus_heads_[v], n);
      color_links_.push_back(free_heads_[v], n);
    }
    ++cells_;
  }

  // The new edge's endpoints count each other iff the other is at or above.
  void account_edge(const EdgeHandle& e, bool inserted) {
    const int lu = hierarchy_.level(e.u), lv = hierarchy_.level(e.v);
    if (lv >= lu) inserted ? raise(e.u, color_[e.v]) : lower(e.u, color_[e.v]);
    if (lu >= lv) inserted ? raise(e.v, color_[e.u]) : lower(e.v, color_[e.u]);
  }

  std::uint64_t maintain_levels() {
    return hierarchy_.maintain([this](VertexId x, int from, int to) { on_level_move(x, from, to); }).size();
  }

  void on_level_move(VertexId x, int from, int to) {
    const Color cx = color_[x];
    if (to > from) {
      auto visit = [&](VertexId y, EdgeId) {
        const int ly = hierarchy_.level(y);
        if (ly > from && ly <= to) raise(y, cx);
        if (ly >= from && ly < to) lower(x, color_[y]);
      };
      hierarchy_.for_each_below(x, visit);
      hierarchy_.for_each_at_level(x, to, visit);
    } else {
      auto visit = [&](VertexId y, EdgeId) {
        const int ly = hierarchy_.level(y);
        if (ly > to && ly <= from) lower(y, cx);
        if (ly >= to && ly < from) raise(x, color_[y]);
      };
      for (int j = to; j <= from; ++j) hierarchy_.for_each_at_level(x, j, visit);
    }
  }

  void assign(VertexId v, Color c) {
    const Color old = color_[v];
    const int level = hierarchy_.level(v);
    auto update = [&](VertexId w, EdgeId) {
      lower(w, old);
      raise(w, c);
    };
    hierarchy_.for_each_below(v, update);
    hierarchy_.for_each_at_level(v, level, update);
    color_[v] = c;
    tau_[v] = graph_.sequence();
  }

  void run_recolor(VertexId x, UpdateReceipt& receipt) {
    const auto chain = recolor(x);
    receipt.recolor_calls += chain.size();
    receipt.chain_len_max = std::max<std::uint64_t>(receipt.chain_len_max, chain.size());
    for (const auto& step : chain) {
      if (receipt.pool_size_min == 0 || step.pool < receipt.pool_size_min) receipt.pool_size_min = step.pool;
      if (smallest_pool_ == 0 || step.pool < smallest_pool_) smallest_pool_ = step.pool;
    }
  }

  const DynamicGraph& graph_;
  LevelPartition hierarchy_;
  Color palette_;
  bool adaptive_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::vector<Color> color_;
  std::vector<std::uint64_t> tau_;
  std::vector<std::uint32_t> plus_count_;
  std::vector<ListHead> plus_heads_;
  std::vector<ListHead> free_heads_;
  LinkTable color_links_;
  std::vector<std::uint32_t> scratch_;
  std::uint64_t cells_ = 0;
  std::uint64_t claim_failures_ = 0;
  std::uint64_t chain_limit_failures_ = 0;
  std::uint64_t recolor_calls_ = 0;
  std::uint64_t chains_ = 0;
  std::uint64_t longest_chain_ = 0;
  std::uint64_t smallest_pool_ = 0;
};

}  // namespace dyncolor
