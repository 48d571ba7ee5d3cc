#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "det_vertex_coloring.hpp"
#include "graph.hpp"
#include "hierarchy.hpp"
#include "rand_vertex_coloring.hpp"

// Oracles recount everything from the adjacency and the colors. They never
// read an engine's counters except to compare against them.

namespace dyncolor::verify {

struct Violation {
  std::string check;
  std::string subject;
  double observed = 0;
  double bound = 0;
};

struct AuditReport {
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  void add(std::string check, std::string subject, double observed, double bound) {
    violations.push_back({std::move(check), std::move(subject), observed, bound});
  }
  void merge(const AuditReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

inline std::string vertex_name(VertexId v) { return "v" + std::to_string(v); }
inline std::string edge_name(VertexId u, VertexId v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

inline AuditReport check_proper_vertex(const DynamicGraph& g, const std::vector<Color>& chi) {
  AuditReport r;
  g.for_each_edge([&](const EdgeHandle& e) {
    if (chi[e.u] == chi[e.v]) r.add("proper_vertex", edge_name(e.u, e.v), static_cast<double>(chi[e.u]), 0);
  });
  return r;
}

/// Every color in [1, max_color]; with `adaptive`, also χ(v) <= D_v + 1.
inline AuditReport check_vertex_palette(const DynamicGraph& g, const std::vector<Color>& chi, Color max_color,
                                        bool adaptive = false) {
  AuditReport r;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (chi[v] < 1 || chi[v] > max_color)
      r.add("vertex_palette", vertex_name(v), static_cast<double>(chi[v]), static_cast<double>(max_color));
    if (adaptive && chi[v] > Color{g.degree(v)} + 1)
      r.add("adaptive_vertex_palette", vertex_name(v), static_cast<double>(chi[v]), g.degree(v) + 1.0);
  }
  return r;
}

/// `color_of(edge_id)` gives the edge's color; 0 counts as uncolored.
template <class ColorOf>
AuditReport check_proper_edge(const DynamicGraph& g, ColorOf&& color_of) {
  AuditReport r;
  std::vector<Color> seen;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    seen.clear();
    g.for_each_neighbor(v, [&](VertexId w, EdgeId e) {
      const Color c = color_of(e);
      if (c == 0 && v < w) r.add("edge_colored", edge_name(v, w), 0, 1);
      if (c != 0) seen.push_back(c);
    });
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
      if (seen[i] == seen[i - 1]) r.add("proper_edge", vertex_name(v), static_cast<double>(seen[i]), 0);
  }
  return r;
}

/// Fixed mode: every color <= max_color. Adaptive: <= 2·max(deg(u), deg(v)) - 1.
template <class ColorOf>
AuditReport check_edge_palette(const DynamicGraph& g, ColorOf&& color_of, Color max_color, bool adaptive = false) {
  AuditReport r;
  g.for_each_edge([&](const EdgeHandle& e) {
    const Color c = color_of(e.id);
    const Color bound = adaptive ? 2 * Color{std::max(g.degree(e.u), g.degree(e.v))} - 1 : max_color;
    if (c > bound) r.add(adaptive ? "adaptive_edge_palette" : "edge_palette", edge_name(e.u, e.v),
                         static_cast<double>(c), static_cast<double>(bound));
  });
  return r;
}

/// What the partition claims: levels and list sizes.
struct HierarchySnapshot {
  int top = 0;
  double beta = 0;
  std::vector<int> level;
  std::vector<std::uint32_t> below;     // claimed |below(v)|
  std::vector<std::uint32_t> at_level;  // claimed |level ℓ(v) list|
};

inline HierarchySnapshot snapshot(const LevelPartition& p) {
  HierarchySnapshot s{p.top_level(), p.beta(), p.levels(), {}, {}};
  for (VertexId v = 0; v < s.level.size(); ++v) {
    s.below.push_back(p.below_size(v));
    s.at_level.push_back(p.level_size(v, s.level[v]));
  }
  return s;
}

inline AuditReport check_hierarchy(const DynamicGraph& g, const HierarchySnapshot& s) {
  AuditReport r;
  auto pow_beta = [&](int j) {
    long double p = 1;
    for (int i = 0; i < j; ++i) p *= s.beta;
    return p;
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const int l = s.level[v];
    if (l < LevelPartition::kBaseLevel || l > s.top) {
      r.add("level_range", vertex_name(v), l, s.top);
      continue;
    }
    std::uint32_t below = 0, same = 0;
    g.for_each_neighbor(v, [&](VertexId w, EdgeId) {
      if (s.level[w] < l) ++below;
      if (s.level[w] == l) ++same;
    });
    if (below != s.below[v]) r.add("below_count", vertex_name(v), s.below[v], below);
    if (same != s.at_level[v]) r.add("level_count", vertex_name(v), s.at_level[v], same);
    if (l > LevelPartition::kBaseLevel && static_cast<long double>(below) < pow_beta(l - 5))
      r.add("invariant_lower", vertex_name(v), below, static_cast<double>(pow_beta(l - 5)));
    if (static_cast<long double>(below + same) > pow_beta(l))
      r.add("invariant_upper", vertex_name(v), below + same, static_cast<double>(pow_beta(l)));
  }
  return r;
}

inline AuditReport check_hierarchy(const DynamicGraph& g, const LevelPartition& p) {
  return check_hierarchy(g, snapshot(p));
}

struct BlankUniqueSets {
  std::vector<Color> blank, unique, taken;  // ascending
};

/// C_v is {1..palette} minus colors of neighbours at level >= ℓ(v), cut to
/// {1..D_v+1} when `adaptive`; each color is classified by how many
/// neighbours strictly below ℓ(v) use it.
inline BlankUniqueSets brute_blank_unique(const DynamicGraph& g, const std::vector<Color>& chi,
                                          const std::vector<int>& level, VertexId v, Color palette,
                                          bool adaptive = false) {
  std::set<Color> above;
  std::vector<Color> below_colors;
  g.for_each_neighbor(v, [&](VertexId w, EdgeId) {
    if (level[w] >= level[v])
      above.insert(chi[w]);
    else
      below_colors.push_back(chi[w]);
  });
  const Color top = adaptive ? std::min<Color>(palette, Color{g.degree(v)} + 1) : palette;
  BlankUniqueSets out;
  for (Color c = 1; c <= top; ++c) {
    if (above.count(c)) continue;
    const auto uses = std::count(below_colors.begin(), below_colors.end(), c);
    (uses == 0 ? out.blank : uses == 1 ? out.unique : out.taken).push_back(c);
  }
  return out;
}

/// μ⁺ recount: for every (v, c), the number of neighbours at level >= ℓ(v)
/// colored c, compared with the engine's counters and list membership.
inline AuditReport check_rand_tables(const DynamicGraph& g, const RandomVertexColoring& eng) {
  AuditReport r;
  const Color P = eng.palette_size();
  const auto& level = eng.hierarchy().levels();
  std::vector<std::uint32_t> expect(P + 1);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::fill(expect.begin(), expect.end(), 0);
    g.for_each_neighbor(v, [&](VertexId w, EdgeId) {
      if (level[w] >= level[v]) ++expect[eng.color(w)];
    });
    for (Color c = 1; c <= P; ++c)
      if (eng.plus_count(v, c) != expect[c])
        r.add("mu_plus", vertex_name(v) + ":c" + std::to_string(c), eng.plus_count(v, c), expect[c]);
    auto plus = eng.plus_colors(v);
    auto free = eng.free_colors(v);
    if (plus.size() + free.size() != P) r.add("color_lists_size", vertex_name(v), plus.size() + free.size(), P);
    for (Color c : plus)
      if (expect[c] == 0) r.add("plus_list", vertex_name(v) + ":c" + std::to_string(c), 0, 1);
    for (Color c : free)
      if (expect[c] != 0) r.add("free_list", vertex_name(v) + ":c" + std::to_string(c), expect[c], 0);
  }
  return r;
}

/// What the tuple engine claims: coordinates and the N*_i lists.
struct TupleSnapshot {
  int L = 0;
  std::vector<std::vector<std::uint16_t>> coords;
  std::vector<std::vector<std::vector<VertexId>>> star;  // star[v][i], sorted
  std::vector<std::vector<std::uint32_t>> d_star;        // claimed counters
};

inline TupleSnapshot snapshot(const DeterministicVertexColoring& eng, std::size_t n) {
  TupleSnapshot s;
  s.L = eng.L();
  for (VertexId v = 0; v < n; ++v) {
    s.coords.push_back(eng.tuple(v));
    s.star.emplace_back(static_cast<std::size_t>(s.L) + 1);
    s.d_star.emplace_back();
    for (int i = 0; i <= s.L; ++i) {
      auto& list = s.star[v][static_cast<std::size_t>(i)];
      eng.for_each_star(v, i, [&](VertexId w) { list.push_back(w); });
      std::sort(list.begin(), list.end());
      s.d_star[v].push_back(eng.d_star(v, i));
    }
  }
  return s;
}

/// Rebuilds every N*_i from the coordinates, compares, then checks
/// D*_i(v) <= θ_i for all v and i.
inline AuditReport check_tuple_state(const DynamicGraph& g, const DetParams& params, const TupleSnapshot& s) {
  AuditReport r;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (int i = 0; i <= s.L; ++i) {
      std::vector<VertexId> expect;
      g.for_each_neighbor(v, [&](VertexId w, EdgeId) {
        if (std::equal(s.coords[v].begin(), s.coords[v].begin() + i, s.coords[w].begin())) expect.push_back(w);
      });
      std::sort(expect.begin(), expect.end());
      const std::string subject = vertex_name(v) + ":i" + std::to_string(i);
      const auto& list = s.star[v][static_cast<std::size_t>(i)];
      if (list != expect) r.add("star_list", subject, list.size(), expect.size());
      const std::uint32_t claimed = s.d_star[v][static_cast<std::size_t>(i)];
      if (claimed != expect.size()) r.add("star_count", subject, claimed, expect.size());
      if (i > 0 && params.exceeds(expect.size(), i))
        r.add("invariant_tuple", subject, expect.size(), static_cast<double>(params.theta(i)));
    }
  }
  return r;
}

inline AuditReport check_tuple_state(const DynamicGraph& g, const DeterministicVertexColoring& eng) {
  return check_tuple_state(g, eng.params(), snapshot(eng, g.vertex_count()));
}

/// Static greedy in vertex-id order: smallest color unused by earlier neighbours.
inline std::vector<Color> greedy_static_vertex(const DynamicGraph& g) {
  std::vector<Color> chi(g.vertex_count(), 0);
  std::vector<Color> used;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    used.clear();
    g.for_each_neighbor(v, [&](VertexId w, EdgeId) {
      if (chi[w] != 0) used.push_back(chi[w]);
    });
    std::sort(used.begin(), used.end());
    Color c = 1;
    for (Color u : used) {
      if (u == c) ++c;
      else if (u > c) break;
    }
    chi[v] = c;
  }
  return chi;
}

}  // namespace dyncolor::verify
