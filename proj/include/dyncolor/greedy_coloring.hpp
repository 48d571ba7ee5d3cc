#pragma once

#include <string>
#include <vector>

#include "graph.hpp"

namespace dyncolor {

/// Baseline: on a conflicting insert, scan the neighbours of the
/// lower-degree endpoint and give it the smallest free color in {1..Δ+1}
/// ({1..D_v+1} in adaptive mode). Θ(Δ) per recoloring.
class GreedyColoring final : public ColoringEngine {
 public:
  explicit GreedyColoring(const DynamicGraph& graph, std::string name = "greedy-baseline")
      : graph_(graph),
        name_(std::move(name)),
        adaptive_(graph.bound().is_adaptive()),
        palette_(adaptive_ ? std::max<Color>(1, graph.vertex_count()) : Color{graph.bound().delta()} + 1),
        color_(graph.vertex_count(), 1),
        mark_(static_cast<std::size_t>(graph.max_degree_cap()) + 2, 0) {}

  std::string_view name() const override { return name_; }
  EngineKind kind() const override { return EngineKind::Greedy; }
  Color palette_size() const override { return palette_; }

  Color color(VertexId v) const { return color_[v]; }
  const std::vector<Color>& colors() const { return color_; }
  std::uint64_t cells_touched() const { return cells_; }

  void on_insert(const EdgeHandle& e, UpdateReceipt& receipt) override {
    if (color_[e.u] != color_[e.v]) return;
    receipt.conflicts = 1;
    const VertexId x = graph_.degree(e.v) < graph_.degree(e.u) ? e.v : e.u;
    recolor(x, receipt);
  }

  void on_delete(const EdgeHandle& e, UpdateReceipt& receipt) override {
    if (!adaptive_) return;
    for (VertexId x : {e.u, e.v})
      if (color_[x] > Color{graph_.degree(x)} + 1) recolor(x, receipt);
  }

 private:
  void recolor(VertexId x, UpdateReceipt& receipt) {
    const std::uint32_t limit = graph_.degree(x) + 1;
    graph_.for_each_neighbor(x, [&](VertexId w, EdgeId) {
      if (color_[w] <= limit) mark_[color_[w]] = 1;
    });
    Color c = 1;
    while (mark_[c]) ++c;
    graph_.for_each_neighbor(x, [&](VertexId w, EdgeId) {
      if (color_[w] <= limit) mark_[color_[w]] = 0;
    });
    color_[x] = c;
    const std::uint64_t work = 2ull * graph_.degree(x) + c;
    cells_ += work;
    receipt.cells_touched += work;
    ++receipt.recolor_calls;
    receipt.chain_len_max = std::max<std::uint64_t>(receipt.chain_len_max, 1);
  }

  const DynamicGraph& graph_;
  std::string name_;
  bool adaptive_;
  Color palette_;
  std::vector<Color> color_;
  std::vector<std::uint8_t> mark_;
  std::uint64_t cells_ = 0;
};

}  // namespace dyncolor
