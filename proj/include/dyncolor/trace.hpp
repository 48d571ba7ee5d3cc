#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graph.hpp"
#include "greedy_coloring.hpp"

namespace dyncolor {

enum class TraceMode { UniformRandom, InsertHeavy, SlidingWindow, ConflictHeavy };

inline std::string_view to_string(TraceMode m) {
  switch (m) {
    case TraceMode::UniformRandom: return "uniform-random";
    case TraceMode::InsertHeavy: return "insert-heavy";
    case TraceMode::SlidingWindow: return "sliding-window";
    case TraceMode::ConflictHeavy: return "conflict-heavy";
  }
  return "?";
}

inline TraceMode parse_mode(std::string_view s) {
  for (auto m : {TraceMode::UniformRandom, TraceMode::InsertHeavy, TraceMode::SlidingWindow, TraceMode::ConflictHeavy})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::InvalidSpec, "unknown mode '" + std::string(s) + "'");
}

struct TraceSpec {
  std::size_t n = 0;
  std::optional<std::uint32_t> delta;  // nullopt: adaptive
  std::uint64_t ops = 0;
  std::uint64_t seed = 0;
  TraceMode mode = TraceMode::UniformRandom;

  DegreeBound bound() const { return delta ? DegreeBound::bounded(*delta) : DegreeBound::adaptive(); }
};

struct Trace {
  std::size_t n = 0;
  std::optional<std::uint32_t> delta;
  TraceMode mode = TraceMode::UniformRandom;
  std::uint64_t seed = 0;
  std::vector<UpdateEvent> events;

  DegreeBound bound() const { return delta ? DegreeBound::bounded(*delta) : DegreeBound::adaptive(); }
  friend bool operator==(const Trace&, const Trace&) = default;
};

namespace detail {

// Live edge set with O(1) uniform sampling and removal.
class EdgePool {
 public:
  void add(VertexId u, VertexId v) {
    index_.emplace(key(u, v), edges_.size());
    edges_.emplace_back(u, v);
  }
  void remove(VertexId u, VertexId v) {
    auto it = index_.find(key(u, v));
    const std::size_t i = it->second;
    index_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      index_[key(edges_[i].first, edges_[i].second)] = i;
    }
    edges_.pop_back();
  }
  std::size_t size() const { return edges_.size(); }
  const std::pair<VertexId, VertexId>& at(std::size_t i) const { return edges_[i]; }

 private:
  static std::uint64_t key(VertexId u, VertexId v) {
    return (std::uint64_t{std::max(u, v)} << 32) | std::min(u, v);
  }
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace detail

/// Legal update sequence, a pure function of the spec.
///
///   uniform-random  insert with probability 1 - m / (2·target), target = n·cap/4
///   insert-heavy    insert with probability 0.9
///   sliding-window  insert until min(n·cap/4, ops/4) edges are live, then
///                   alternate deleting the oldest edge and inserting
///   conflict-heavy  like uniform-random, but inserts prefer endpoints the
///                   greedy baseline currently colors alike
///
/// cap is Δ, or n-1 for adaptive specs. An insert that finds no legal pair
/// after a bounded number of draws becomes a delete.
inline Trace generate(const TraceSpec& spec) {
  if (spec.delta && *spec.delta == 0) throw Error(ErrorCode::InvalidSpec, "delta must be >= 1");
  if (spec.ops > 0 && spec.n < 2) throw Error(ErrorCode::InvalidSpec, "need at least two vertices");
  Trace t{spec.n, spec.delta, spec.mode, spec.seed, {}};
  if (spec.ops == 0) return t;

  DynamicGraph g(spec.n, spec.bound());
  GreedyColoring greedy(g);
  if (spec.mode == TraceMode::ConflictHeavy) g.attach(&greedy);
  const std::uint64_t cap = g.max_degree_cap();
  detail::EdgePool pool;
  std::deque<std::pair<VertexId, VertexId>> fifo;

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(spec.n - 1));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double target = std::max(1.0, static_cast<double>(spec.n) * static_cast<double>(cap) / 4.0);
  const std::uint64_t window =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(static_cast<std::uint64_t>(target), spec.ops / 4));

  auto legal = [&](VertexId a, VertexId b) {
    return a != b && g.degree(a) < cap && g.degree(b) < cap && !g.has_edge(a, b);
  };
  auto pick_pair = [&](bool prefer_conflict) -> std::optional<std::pair<VertexId, VertexId>> {
    if (prefer_conflict) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        const VertexId a = vertex(rng);
        for (int probe = 0; probe < 64; ++probe) {
          const VertexId b = vertex(rng);
          if (greedy.color(a) == greedy.color(b) && legal(a, b)) return std::pair{a, b};
        }
      }
    }
    for (int attempt = 0; attempt < 256; ++attempt) {
      const VertexId a = vertex(rng), b = vertex(rng);
      if (legal(a, b)) return std::pair{a, b};
    }
    return std::nullopt;
  };
  auto do_insert = [&](VertexId a, VertexId b) {
    g.insert(a, b);
    pool.add(a, b);
    if (spec.mode == TraceMode::SlidingWindow) fifo.emplace_back(a, b);
    t.events.push_back(UpdateEvent::insert(a, b));
  };
  auto do_delete = [&](VertexId a, VertexId b) {
    g.erase(a, b);
    pool.remove(a, b);
    t.events.push_back(UpdateEvent::erase(a, b));
  };
  auto delete_random = [&] {
    const auto [a, b] = pool.at(std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng));
    do_delete(a, b);
  };

  for (std::uint64_t step = 0; step < spec.ops; ++step) {
    const double m = static_cast<double>(pool.size());
    bool insert = true;
    switch (spec.mode) {
      case TraceMode::UniformRandom:
      case TraceMode::ConflictHeavy: insert = coin(rng) < 1.0 - m / (2.0 * target); break;
      case TraceMode::InsertHeavy: insert = coin(rng) < 0.9; break;
      case TraceMode::SlidingWindow: insert = pool.size() < window; break;
    }
    if (pool.size() == 0) insert = true;

    if (insert) {
      if (auto pair = pick_pair(spec.mode == TraceMode::ConflictHeavy)) {
        do_insert(pair->first, pair->second);
        continue;
      }
      if (pool.size() == 0) throw Error(ErrorCode::InvalidSpec, "no legal insertion on an empty graph");
    }
    if (spec.mode == TraceMode::SlidingWindow) {
      const auto [a, b] = fifo.front();
      fifo.pop_front();
      do_delete(a, b);
    } else {
      delete_random();
    }
  }
  for (std::size_t i = 0; i < t.events.size(); ++i) t.events[i].sequence = i + 1;
  return t;
}

/// Text form: `#` header lines carrying n, delta, mode and seed, then one
/// `+ u v` or `- u v` line per update.
inline void print_trace(std::ostream& out, const Trace& t) {
  out << "# colorbench trace\n";
  out << "# n=" << t.n << " delta=" << (t.delta ? std::to_string(*t.delta) : "adaptive")
      << " mode=" << to_string(t.mode) << " seed=" << t.seed << " ops=" << t.events.size() << '\n';
  for (const auto& e : t.events) out << (e.kind == UpdateKind::Insert ? '+' : '-') << ' ' << e.u << ' ' << e.v << '\n';
}

inline std::string print_trace(const Trace& t) {
  std::ostringstream s;
  print_trace(s, t);
  return s.str();
}

inline Trace parse_trace(std::istream& in) {
  Trace t;
  bool have_n = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::TraceParseError, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        try {
          if (key == "n") {
            t.n = std::stoull(value);
            have_n = true;
          } else if (key == "delta") {
            t.delta = value == "adaptive" ? std::nullopt : std::optional<std::uint32_t>(std::stoul(value));
          } else if (key == "mode") {
            t.mode = parse_mode(value);
          } else if (key == "seed") {
            t.seed = std::stoull(value);
          }
        } catch (const Error&) {
          fail("bad header value '" + field + "'");
        } catch (const std::exception&) {
          fail("bad header value '" + field + "'");
        }
      }
      continue;
    }
    std::istringstream fields(line);
    char op = 0;
    long long u = -1, v = -1;
    std::string rest;
    if (!(fields >> op >> u >> v) || (op != '+' && op != '-') || u < 0 || v < 0 || (fields >> rest))
      fail("expected '+ u v' or '- u v', got '" + line + "'");
    if (!have_n) fail("update before the header");
    if (static_cast<std::size_t>(u) >= t.n || static_cast<std::size_t>(v) >= t.n) fail("vertex out of range");
    UpdateEvent e = op == '+' ? UpdateEvent::insert(static_cast<VertexId>(u), static_cast<VertexId>(v))
                              : UpdateEvent::erase(static_cast<VertexId>(u), static_cast<VertexId>(v));
    e.sequence = t.events.size() + 1;
    t.events.push_back(e);
  }
  if (!have_n) fail("missing header with n=");
  return t;
}

inline Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

}  // namespace dyncolor
