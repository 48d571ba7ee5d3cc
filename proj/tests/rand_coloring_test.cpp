#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rand_vertex_coloring.hpp"
#include "verify.hpp"

using namespace dyncolor;

namespace {

std::vector<Color> sorted(std::vector<Color> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Random insert/delete churn; calls `after` with each receipt.
template <class After>
void churn(DynamicGraph& g, std::uint64_t seed, int steps, After&& after, int delete_every = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
  const std::uint32_t cap = g.max_degree_cap();
  for (int step = 0; step < steps; ++step) {
    const VertexId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (g.has_edge(a, b)) {
      if (step % delete_every == 0) after(g.erase(a, b));
    } else if (g.degree(a) < cap && g.degree(b) < cap) {
      after(g.insert(a, b));
    }
  }
}

}  // namespace

TEST(RandomColoring, InitialColorsInPalette) {
  DynamicGraph g(50, DegreeBound::bounded(6));
  RandomVertexColoring eng(g, {21.0, 3});
  EXPECT_EQ(eng.palette_size(), 7u);
  for (VertexId v = 0; v < 50; ++v) {
    EXPECT_GE(eng.color(v), 1u);
    EXPECT_LE(eng.color(v), 7u);
    EXPECT_EQ(eng.free_colors(v).size(), 7u);
  }
}

TEST(RandomColoring, DeleteNeverRecolors) {
  DynamicGraph g(40, DegreeBound::bounded(8));
  RandomVertexColoring eng(g, {2.0, 9});
  g.attach(&eng);
  churn(g, 4, 4000, [](const UpdateReceipt& r) {
    if (r.kind == UpdateKind::Delete) {
      EXPECT_EQ(r.recolor_calls, 0u);
    }
    if (r.kind == UpdateKind::Insert && r.conflicts == 0) {
      EXPECT_EQ(r.recolor_calls, 0u);
    }
  });
}

TEST(RandomColoring, ConflictRecolorsMostRecentlyRecoloredEndpoint) {
  DynamicGraph g(60, DegreeBound::bounded(10));
  RandomVertexColoring eng(g, {2.0, 17});
  g.attach(&eng);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<VertexId> pick(0, 59);
  int conflicts = 0;
  for (int step = 0; step < 3000; ++step) {
    const VertexId a = pick(rng), b = pick(rng);
    if (a == b || g.has_edge(a, b) || g.degree(a) >= 10 || g.degree(b) >= 10) continue;
    const VertexId lo = std::min(a, b), hi = std::max(a, b);
    const bool same = eng.color(a) == eng.color(b);
    const VertexId expected = eng.last_recolored(hi) > eng.last_recolored(lo) ? hi : lo;
    const UpdateReceipt r = g.insert(a, b);
    if (same) {
      ++conflicts;
      EXPECT_EQ(r.conflicts, 1u);
      EXPECT_EQ(eng.last_recolored(expected), r.sequence);
    }
    ASSERT_NE(eng.color(a), eng.color(b));
  }
  EXPECT_GT(conflicts, 0);
}

TEST(RandomColoring, IsolatedVertexRecolorTakesAnyColorWithoutRecursion) {
  DynamicGraph g(3, DegreeBound::bounded(4));
  RandomVertexColoring eng(g, {21.0, 1});
  const auto chain = eng.recolor(0);
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0].level, 4);
  EXPECT_EQ(chain[0].pool, 5u);
  EXPECT_TRUE(eng.scratch_clear());
}

// A level-5 vertex v (β = 2) keeping one below-neighbour u. Whenever the draw
// hits χ(u), the conflict is handed to u, which sits at level 4 with nothing
// below, so the chain stops there.
TEST(RandomColoring, UniqueDrawRecursesExactlyOneLevelDown) {
  bool seen_recursion = false;
  for (std::uint64_t seed = 1; seed <= 200 && !seen_recursion; ++seed) {
    DynamicGraph g(20, DegreeBound::bounded(32));
    RandomVertexColoring eng(g, {2.0, seed});
    g.attach(&eng);
    for (VertexId v = 1; v <= 17; ++v) g.insert(0, v);
    ASSERT_EQ(eng.hierarchy().level(0), 5);
    for (VertexId v = 2; v <= 17; ++v) g.erase(0, v);
    ASSERT_EQ(eng.hierarchy().level(0), 5);
    ASSERT_EQ(eng.hierarchy().below_size(0), 1u);

    const Color cu = eng.color(1);
    const auto view = eng.blank_unique(0);
    ASSERT_EQ(view.unique, std::vector<Color>{cu});
    const auto chain = eng.recolor(0);
    if (chain[0].color != cu) {
      EXPECT_EQ(chain.size(), 1u);
      continue;
    }
    seen_recursion = true;
    ASSERT_EQ(chain.size(), 2u);
    EXPECT_EQ(chain[0].level, 5);
    EXPECT_EQ(chain[1].vertex, 1u);
    EXPECT_EQ(chain[1].level, 4);
    EXPECT_NE(eng.color(0), eng.color(1));
    EXPECT_TRUE(verify::check_rand_tables(g, eng).passed());
  }
  EXPECT_TRUE(seen_recursion);
}

TEST(RandomColoring, BlankUniqueMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DynamicGraph g(40, DegreeBound::bounded(20));
    RandomVertexColoring eng(g, {2.0, seed});
    g.attach(&eng);
    churn(g, seed + 100, 1500, [](const UpdateReceipt&) {});
    for (VertexId v = 0; v < 40; ++v) {
      const auto view = eng.blank_unique(v);
      const auto brute = verify::brute_blank_unique(g, eng.colors(), eng.hierarchy().levels(), v, eng.palette_size());
      EXPECT_EQ(sorted(view.blank), brute.blank);
      EXPECT_EQ(sorted(view.unique), brute.unique);
      EXPECT_EQ(sorted(view.taken), brute.taken);
      EXPECT_EQ(view.blank.size() + view.unique.size() + view.taken.size(), eng.free_colors(v).size());
      const std::uint64_t pool = view.blank.size() + view.unique.size();
      EXPECT_GE(2 * pool, 2 + eng.hierarchy().below_size(v));
    }
    EXPECT_TRUE(eng.scratch_clear());
  }
}

TEST(RandomColoring, NoBelowNeighboursMeansAllBlank) {
  DynamicGraph g(4, DegreeBound::bounded(3));
  RandomVertexColoring eng(g, {21.0, 2});
  g.attach(&eng);
  g.insert(0, 1);
  const auto view = eng.blank_unique(0);
  EXPECT_TRUE(view.unique.empty());
  EXPECT_TRUE(view.taken.empty());
  EXPECT_EQ(sorted(view.blank), sorted(eng.free_colors(0)));
}

class RandomChurn : public ::testing::TestWithParam<double> {};

TEST_P(RandomChurn, TablesMatchRebuildAfterEveryUpdate) {
  DynamicGraph g(50, DegreeBound::bounded(24));
  RandomVertexColoring eng(g, {GetParam(), 77});
  g.attach(&eng);
  std::uint64_t moves = 0;
  churn(g, 31, 2500, [&](const UpdateReceipt& r) {
    moves += r.level_moves;
    ASSERT_TRUE(verify::check_rand_tables(g, eng).passed());
    ASSERT_TRUE(verify::check_proper_vertex(g, eng.colors()).passed());
    ASSERT_TRUE(verify::check_hierarchy(g, eng.hierarchy()).passed());
    ASSERT_LE(r.chain_len_max, static_cast<std::uint64_t>(eng.hierarchy().top_level() - 3));
  });
  EXPECT_EQ(eng.claim_failures(), 0u);
  EXPECT_EQ(eng.chain_limit_failures(), 0u);
  if (GetParam() == 2.0) {
    EXPECT_GT(moves, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Bases, RandomChurn, ::testing::Values(2.0, 4.0, 21.0));

TEST(RandomColoring, SameSeedSameColoring) {
  auto final_colors = [](std::uint64_t seed) {
    DynamicGraph g(30, DegreeBound::bounded(8));
    RandomVertexColoring eng(g, {2.0, seed});
    g.attach(&eng);
    churn(g, 12, 2000, [](const UpdateReceipt&) {});
    return eng.colors();
  };
  EXPECT_EQ(final_colors(5), final_colors(5));
  EXPECT_NE(final_colors(5), final_colors(6));
}

TEST(RandomColoring, AdaptiveIsolatedVertexGetsColorOne) {
  DynamicGraph g(5, DegreeBound::bounded(4));
  RandomVertexColoring eng(g, {21.0, 4});
  eng.set_adaptive(true);
  for (VertexId v = 0; v < 5; ++v) EXPECT_EQ(eng.color(v), 1u);
}

TEST(RandomColoring, AdaptivePoolWithinDegreePlusOne) {
  DynamicGraph g(12, DegreeBound::adaptive());
  RandomVertexColoring eng(g, {2.0, 6});
  g.attach(&eng);
  for (VertexId v = 1; v <= 3; ++v) g.insert(0, v);
  for (int i = 0; i < 20; ++i) {
    eng.recolor(0);
    EXPECT_LE(eng.color(0), 4u);
  }
  const auto view = eng.blank_unique(0);
  for (Color c : view.blank) EXPECT_LE(c, 4u);
  for (Color c : view.unique) EXPECT_LE(c, 4u);
}

// K5 forces colors {1..5}; dropping an edge at the vertex holding 5 leaves it
// with D = 3, so it must move into {1..4}.
TEST(RandomColoring, AdaptiveDeletionRecolorsOverflow) {
  DynamicGraph g(5, DegreeBound::adaptive());
  RandomVertexColoring eng(g, {21.0, 10});
  g.attach(&eng);
  for (VertexId a = 0; a < 5; ++a)
    for (VertexId b = a + 1; b < 5; ++b) g.insert(a, b);
  EXPECT_EQ(sorted(eng.colors()), (std::vector<Color>{1, 2, 3, 4, 5}));
  const auto top = static_cast<VertexId>(std::find(eng.colors().begin(), eng.colors().end(), 5u) - eng.colors().begin());
  const VertexId other = top == 0 ? 1 : 0;
  const UpdateReceipt r = g.erase(top, other);
  EXPECT_GE(r.recolor_calls, 1u);
  EXPECT_LE(eng.color(top), 4u);
  EXPECT_TRUE(verify::check_vertex_palette(g, eng.colors(), eng.palette_size(), true).passed());
  EXPECT_TRUE(verify::check_proper_vertex(g, eng.colors()).passed());
}

TEST(RandomColoring, AdaptiveChurnKeepsDegreePalette) {
  DynamicGraph g(40, DegreeBound::adaptive());
  RandomVertexColoring eng(g, {2.0, 21});
  g.attach(&eng);
  std::uint64_t delete_recolors = 0;
  churn(
      g, 9, 4000,
      [&](const UpdateReceipt& r) {
        if (r.kind == UpdateKind::Delete) delete_recolors += r.recolor_calls;
        ASSERT_TRUE(verify::check_vertex_palette(g, eng.colors(), eng.palette_size(), true).passed());
        ASSERT_TRUE(verify::check_proper_vertex(g, eng.colors()).passed());
      },
      2);
  EXPECT_TRUE(verify::check_rand_tables(g, eng).passed());
  EXPECT_GT(delete_recolors, 0u);
}
