#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "edge_coloring.hpp"
#include "verify.hpp"

using namespace dyncolor;

namespace {

Color color_of(const DynamicGraph& g, const EdgeColoring& eng, VertexId a, VertexId b) {
  return eng.edge_color(*g.find_edge(a, b));
}

std::uint64_t visit_budget(std::uint32_t delta) {
  return 8 * static_cast<std::uint64_t>(std::ceil(std::log2(2.0 * delta)));
}

}  // namespace

TEST(SplitTree, CeilingSplits) {
  const SplitTree t(1, 4);  // Δ = 2
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.node(0).lo, 1u);
  EXPECT_EQ(t.node(0).hi, 4u);
  const auto& left = t.node(t.node(0).left);
  EXPECT_EQ(left.lo, 1u);
  EXPECT_EQ(left.hi, 3u);  // z = ⌈(1+4)/2⌉ = 3
  EXPECT_EQ(t.node(t.leaf(3)).lo, 3u);
}

TEST(EdgeColoring, FirstEdgeGetsColorOne) {
  DynamicGraph g(2, DegreeBound::bounded(5));
  EdgeColoring eng(g);
  g.attach(&eng);
  const UpdateReceipt r = g.insert(0, 1);
  EXPECT_EQ(r.color_assigned, 1u);
  EXPECT_EQ(eng.palette_size(), 9u);
}

TEST(EdgeColoring, TriangleWithDeltaTwo) {
  DynamicGraph g(3, DegreeBound::bounded(2));
  EdgeColoring eng(g);
  g.attach(&eng);
  g.insert(0, 1);
  g.insert(1, 2);
  g.insert(0, 2);
  EXPECT_EQ(color_of(g, eng, 0, 1), 1u);
  EXPECT_EQ(color_of(g, eng, 1, 2), 2u);
  EXPECT_EQ(color_of(g, eng, 0, 2), 3u);
}

TEST(EdgeColoring, StarLeavesGetOneThroughDelta) {
  const std::uint32_t delta = 13;
  DynamicGraph g(delta + 1, DegreeBound::bounded(delta));
  EdgeColoring eng(g);
  g.attach(&eng);
  for (VertexId v = 1; v <= delta; ++v) EXPECT_EQ(g.insert(0, v).color_assigned, v);
}

TEST(EdgeColoring, DeleteRoundTripRestoresEmptyState) {
  DynamicGraph g(2, DegreeBound::bounded(4));
  EdgeColoring eng(g);
  g.attach(&eng);
  g.insert(0, 1);
  EXPECT_EQ(eng.range_count(0, 1, 8), 1u);
  g.erase(0, 1);
  for (VertexId v : {0u, 1u}) {
    EXPECT_EQ(eng.range_count(v, 1, 8), 0u);
    for (Color c = 1; c < 8; ++c) EXPECT_FALSE(eng.occupied(v, c));
  }
  EXPECT_TRUE(eng.consistent());
  EXPECT_EQ(g.insert(0, 1).color_assigned, 1u);
}

TEST(EdgeColoring, DeletingMiddleOfPathKeepsOthers) {
  DynamicGraph g(4, DegreeBound::bounded(2));
  EdgeColoring eng(g);
  g.attach(&eng);
  g.insert(0, 1);
  g.insert(1, 2);
  g.insert(2, 3);
  const Color a = color_of(g, eng, 0, 1), c = color_of(g, eng, 2, 3);
  const std::uint64_t root_before = eng.range_count(1, 1, 4);
  g.erase(1, 2);
  EXPECT_EQ(color_of(g, eng, 0, 1), a);
  EXPECT_EQ(color_of(g, eng, 2, 3), c);
  EXPECT_EQ(eng.range_count(1, 1, 4), root_before - 1);
  EXPECT_TRUE(verify::check_proper_edge(g, [&](EdgeId e) { return eng.edge_color(e); }).passed());
}

TEST(EdgeColoring, RangeCountBounds) {
  DynamicGraph g(3, DegreeBound::bounded(4));
  EdgeColoring eng(g);
  g.attach(&eng);
  g.insert(0, 1);
  g.insert(0, 2);
  EXPECT_EQ(eng.range_count(0, 3, 3), 0u);
  EXPECT_EQ(eng.range_count(0, 1, 8), g.degree(0));
  for (auto [a, b] : {std::pair<Color, Color>{0, 3}, {4, 3}, {1, 9}}) {
    try {
      eng.range_count(0, a, b);
      ADD_FAILURE() << a << "," << b;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RangeOutOfBounds);
    }
  }
}

// Every (a, b) on every vertex of random graphs, against a naive sum.
TEST(EdgeColoring, RangeCountExhaustiveSmallDelta) {
  for (std::uint32_t delta = 1; delta <= 16; ++delta) {
    const std::size_t n = 24;
    DynamicGraph g(n, DegreeBound::bounded(delta));
    EdgeColoring eng(g);
    g.attach(&eng);
    std::mt19937_64 rng(delta);
    std::uniform_int_distribution<VertexId> pick(0, n - 1);
    for (int step = 0; step < 400; ++step) {
      const VertexId a = pick(rng), b = pick(rng);
      if (a == b) continue;
      if (g.has_edge(a, b)) {
        if (step % 3 == 0) g.erase(a, b);
      } else if (g.degree(a) < delta && g.degree(b) < delta) {
        g.insert(a, b);
      }
    }
    const Color top = 2 * Color{delta};
    for (VertexId v = 0; v < n; ++v) {
      for (Color a = 1; a <= top; ++a) {
        std::uint64_t naive = 0;
        for (Color b = a; b <= top; ++b) {
          std::uint64_t visits = 0;
          ASSERT_EQ(eng.range_count(v, a, b, &visits), naive) << "delta " << delta << " v " << v;
          ASSERT_LE(visits, visit_budget(std::max(delta, 2u)));
          if (b < top && eng.occupied(v, b)) ++naive;
        }
      }
    }
    EXPECT_TRUE(eng.consistent());
  }
}

TEST(EdgeColoring, ChurnStaysProperWithinVisitBudget) {
  const std::uint32_t delta = 64;
  const std::size_t n = 200;
  DynamicGraph g(n, DegreeBound::bounded(delta));
  EdgeColoring eng(g);
  g.attach(&eng);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  for (int step = 0; step < 20000; ++step) {
    const VertexId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    UpdateReceipt r;
    if (g.has_edge(a, b)) {
      r = g.erase(a, b);
    } else if (g.degree(a) < delta && g.degree(b) < delta) {
      r = g.insert(a, b);
      ASSERT_GE(r.color_assigned, 1u);
      ASSERT_LE(r.color_assigned, 2 * Color{delta} - 1);
    } else {
      continue;
    }
    ASSERT_LE(r.tree_visits, visit_budget(delta));
  }
  auto colors = [&](EdgeId e) { return eng.edge_color(e); };
  EXPECT_TRUE(verify::check_proper_edge(g, colors).passed());
  EXPECT_TRUE(verify::check_edge_palette(g, colors, eng.palette_size()).passed());
  EXPECT_TRUE(eng.consistent());
  EXPECT_EQ(eng.loop_invariant_failures(), 0u);
}

TEST(EdgeColoring, AdaptiveSingleEdgeAndPath) {
  DynamicGraph g(3, DegreeBound::adaptive());
  EdgeColoring eng(g);
  g.attach(&eng);
  EXPECT_EQ(g.insert(0, 1).color_assigned, 1u);
  g.insert(1, 2);
  EXPECT_LE(color_of(g, eng, 1, 2), 3u);
  EXPECT_NE(color_of(g, eng, 1, 2), color_of(g, eng, 0, 1));
}

TEST(EdgeColoring, AdaptiveChurnKeepsPerEdgePalette) {
  const std::size_t n = 40;
  DynamicGraph g(n, DegreeBound::adaptive());
  EdgeColoring eng(g);
  g.attach(&eng);
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  auto colors = [&](EdgeId e) { return eng.edge_color(e); };
  std::uint64_t recolored = 0;
  for (int step = 0; step < 6000; ++step) {
    const VertexId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (g.has_edge(a, b)) {
      recolored += g.erase(a, b).recolored_edges;
    } else if (step % 2 == 0) {
      g.insert(a, b);
    } else {
      continue;
    }
    ASSERT_TRUE(verify::check_edge_palette(g, colors, 0, true).passed());
    ASSERT_TRUE(verify::check_proper_edge(g, colors).passed());
  }
  EXPECT_TRUE(eng.consistent());
  EXPECT_GT(recolored, 0u);
}

// Edge (0,4) lands on color 5 while both endpoints are busy. Once vertex 0
// drops to degree 2 and vertex 4 sits at degree 2, the edge's bound is 3.
TEST(EdgeColoring, AdaptiveDeletionMovesColorFive) {
  DynamicGraph g(5, DegreeBound::adaptive());
  EdgeColoring eng(g);
  g.attach(&eng);
  for (VertexId v : {1u, 2u, 3u}) g.insert(0, v);
  for (VertexId v : {1u, 2u, 3u}) g.insert(4, v);
  g.insert(0, 4);
  ASSERT_EQ(color_of(g, eng, 0, 4), 5u);
  g.erase(4, 1);
  g.erase(4, 2);
  g.erase(0, 1);
  EXPECT_EQ(color_of(g, eng, 0, 4), 5u);  // deg 3 still allows 5
  const UpdateReceipt r = g.erase(0, 2);
  EXPECT_GE(r.recolored_edges, 1u);
  EXPECT_LE(color_of(g, eng, 0, 4), 3u);
  auto colors = [&](EdgeId e) { return eng.edge_color(e); };
  EXPECT_TRUE(verify::check_edge_palette(g, colors, 0, true).passed());
  EXPECT_TRUE(verify::check_proper_edge(g, colors).passed());
  EXPECT_TRUE(eng.consistent());
}
