#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "graph.hpp"
#include "index_list.hpp"

namespace dyncolor {

struct LevelMove {
  VertexId vertex;
  int from;
  int to;
  friend bool operator==(const LevelMove&, const LevelMove&) = default;
};

struct TokenSnapshot {
  std::vector<double> vertex_tokens;
  double vertex_total = 0;
  double edge_total = 0;
  double total = 0;
  double change = 0;  // total minus the previous snapshot's total
};

/// Number of the top level for degree bound `delta` and growth base `beta`:
/// max(5, ceil(log_beta(delta))).
inline int top_level_for(std::uint32_t delta, double beta) {
  if (!(beta >= 2.0)) throw Error(ErrorCode::InvalidBase, "beta must be >= 2");
  if (delta < 1) throw Error(ErrorCode::InvalidSpec, "degree bound must be >= 1");
  int levels = 0;
  long double power = 1;
  while (power < static_cast<long double>(delta)) {
    power *= beta;
    ++levels;
  }
  return std::max(5, levels);
}

/// Level partition of the vertex set into levels 4..L.
///
/// Each vertex v keeps its neighbours in L-2 lists: slot 0 holds the
/// neighbours strictly below ℓ(v), slot j (ℓ(v) <= j <= L) holds the
/// neighbours at level exactly j. Slots 1..ℓ(v)-1 are always empty. The
/// two invariants kept between updates are
///
///   lower:  ℓ(v) > 4  =>  |below(v)| >= beta^(ℓ(v)-5)
///   upper:  |below(v)| + |level ℓ(v) list| <= beta^ℓ(v)
///
/// Repairs move one dirty vertex at a time, upper-invariant violators
/// first, FIFO within each queue.
class LevelPartition {
 public:
  static constexpr int kBaseLevel = 4;

  LevelPartition(const DynamicGraph& graph, std::uint32_t delta, double beta)
      : graph_(graph), beta_(beta), top_(top_level_for(delta, beta)),
        slots_(static_cast<std::size_t>(top_) + 1),
        level_(graph.vertex_count(), kBaseLevel),
        heads_(graph.vertex_count() * slots_),
        in_upper_queue_(graph.vertex_count(), false),
        in_lower_queue_(graph.vertex_count(), false),
        level_count_(slots_, 0) {
    power_.resize(slots_ + 1);
    long double p = 1;
    for (std::size_t j = 0; j < power_.size(); ++j, p *= beta_) power_[j] = p;
  }

  explicit LevelPartition(const DynamicGraph& graph, double beta = 21.0)
      : LevelPartition(graph, graph.max_degree_cap(), beta) {}

  int top_level() const { return top_; }
  double beta() const { return beta_; }
  int level(VertexId v) const { return level_[v]; }
  const std::vector<int>& levels() const { return level_; }

  std::uint32_t below_size(VertexId v) const { return head(v, 0).size; }
  std::uint32_t level_size(VertexId v, int j) const {
    return j >= level_[v] ? head(v, j).size : 0;
  }
  /// |N_v(4, j)| for j >= ℓ(v) - 1.
  std::uint64_t size_through(VertexId v, int j) const {
    std::uint64_t s = below_size(v);
    for (int i = level_[v]; i <= j && i <= top_; ++i) s += head(v, i).size;
    return s;
  }
  /// beta^j
  long double power(int j) const { return power_[static_cast<std::size_t>(j)]; }

  bool violates_upper(VertexId v) const {
    const int l = level_[v];
    return static_cast<long double>(below_size(v) + head(v, l).size) > power(l);
  }
  bool violates_lower(VertexId v) const {
    const int l = level_[v];
    return l > kBaseLevel && static_cast<long double>(below_size(v)) < power(l - 5);
  }

  template <class F>
  void for_each_below(VertexId v, F&& f) const {
    for_each_in_slot(v, 0, f);
  }
  template <class F>
  void for_each_at_level(VertexId v, int j, F&& f) const {
    if (j >= level_[v]) for_each_in_slot(v, j, f);
  }

  std::uint64_t cells_touched() const { return cells_touched_; }
  std::uint64_t post_condition_failures() const { return post_failures_; }

  void add_edge(const EdgeHandle& e) {
    links_.ensure(2 * graph_.edge_capacity());
    slot_of_.resize(2 * graph_.edge_capacity(), 0);
    attach_cell(e.cookie(0), e.u, e.v);
    attach_cell(e.cookie(1), e.v, e.u);
    cells_touched_ += 2;
    check_dirty(e.u);
    check_dirty(e.v);
  }

  void remove_edge(const EdgeHandle& e) {
    detach_cell(e.cookie(0), e.u);
    detach_cell(e.cookie(1), e.v);
    cells_touched_ += 2;
    check_dirty(e.u);
    check_dirty(e.v);
  }

  /// Drains both dirty queues. `on_move(x, from, to)` runs after each move,
  /// with the lists already rearranged.
  template <class Listener>
  std::vector<LevelMove> maintain(Listener&& on_move) {
    std::vector<LevelMove> moves;
    for (;;) {
      if (!upper_queue_.empty()) {
        const VertexId x = upper_queue_.front();
        upper_queue_.pop_front();
        in_upper_queue_[x] = false;
        if (!violates_upper(x)) continue;
        const int from = level_[x];
        const int to = promote(x);
        moves.push_back({x, from, to});
        on_move(x, from, to);
      } else if (!lower_queue_.empty()) {
        const VertexId x = lower_queue_.front();
        lower_queue_.pop_front();
        in_lower_queue_[x] = false;
        if (violates_upper(x)) {
          enqueue_upper(x);
          continue;
        }
        if (!violates_lower(x)) continue;
        const int from = level_[x];
        const int to = demote(x);
        moves.push_back({x, from, to});
        on_move(x, from, to);
      } else {
        break;
      }
    }
    return moves;
  }

  std::vector<LevelMove> maintain() {
    return maintain([](VertexId, int, int) {});
  }

  bool queues_empty() const { return upper_queue_.empty() && lower_queue_.empty(); }

  /// Moves x up to the smallest k > ℓ(x) with |N_x(4,k)| <= beta^k.
  int promote(VertexId x) {
    const int from = level_[x];
    std::uint64_t through = below_size(x) + head(x, from).size;
    int k = from + 1;
    for (; k <= top_; ++k) {
      through += head(x, k).size;
      ++cells_touched_;
      if (static_cast<long double>(through) <= power(k)) break;
    }
    if (k > top_)
      throw Error(ErrorCode::InternalInvariant,
                  "no level can hold vertex " + std::to_string(x) + " (degree above beta^L)");

    // Neighbours at levels <= k now see x at level k.
    std::vector<VertexId> touched;
    auto relocate_partner = [&](std::uint32_t node) {
      const std::uint32_t partner = node ^ 1u;
      const VertexId w = neighbor_of(node);
      move_cell(partner, w, k);
      touched.push_back(w);
      ++cells_touched_;
    };
    links_.for_each(head(x, 0), relocate_partner);
    for (int j = from; j <= k; ++j) {
      links_.for_each(head(x, j), [&](std::uint32_t node) {
        relocate_partner(node);
        if (j < k) move_cell(node, x, 0);
      });
    }
    level_[x] = k;
    check_post_conditions(x);
    for (VertexId w : touched) check_dirty(w);
    return k;
  }

  /// Moves x down to the largest k in (4, ℓ(x)) with |N_x(4,k-1)| >= beta^(k-1),
  /// or to level 4 if there is none.
  int demote(VertexId x) {
    const int from = level_[x];
    std::fill(level_count_.begin(), level_count_.end(), 0);
    links_.for_each(head(x, 0), [&](std::uint32_t node) {
      ++level_count_[static_cast<std::size_t>(level_[neighbor_of(node)])];
      ++cells_touched_;
    });
    // prefix[j] = |N_x(4, j)|
    int k = kBaseLevel;
    std::uint64_t prefix = 0;
    std::vector<std::uint64_t> through(slots_, 0);
    for (int j = kBaseLevel; j < from; ++j) {
      prefix += level_count_[static_cast<std::size_t>(j)];
      through[static_cast<std::size_t>(j)] = prefix;
    }
    for (int cand = from - 1; cand > kBaseLevel; --cand) {
      if (static_cast<long double>(through[static_cast<std::size_t>(cand - 1)]) >= power(cand - 1)) {
        k = cand;
        break;
      }
    }
    cells_touched_ += static_cast<std::uint64_t>(from);

    std::vector<VertexId> touched;
    links_.for_each(head(x, 0), [&](std::uint32_t node) {
      const VertexId w = neighbor_of(node);
      const int lw = level_[w];
      if (lw >= k) move_cell(node, x, lw);
      move_cell(node ^ 1u, w, k < lw ? 0 : k);
      touched.push_back(w);
      ++cells_touched_;
    });
    links_.for_each(head(x, from), [&](std::uint32_t node) {
      const VertexId w = neighbor_of(node);
      move_cell(node ^ 1u, w, 0);
      touched.push_back(w);
      ++cells_touched_;
    });
    level_[x] = k;
    check_post_conditions(x);
    for (VertexId w : touched) check_dirty(w);
    return k;
  }

  /// Token accounting used in the amortized analysis: every edge carries
  /// L - max(ℓ(u), ℓ(v)) tokens and every vertex above level 4 carries
  /// max(0, beta^(ℓ-1) - |below|) / (2 beta). Never read by the algorithm.
  TokenSnapshot audit_tokens() {
    TokenSnapshot snap;
    snap.vertex_tokens.assign(level_.size(), 0.0);
    for (VertexId v = 0; v < level_.size(); ++v) {
      const int l = level_[v];
      if (l > kBaseLevel) {
        const long double deficit = power(l - 1) - static_cast<long double>(below_size(v));
        snap.vertex_tokens[v] = static_cast<double>(std::max<long double>(0, deficit) / (2 * beta_));
      }
      snap.vertex_total += snap.vertex_tokens[v];
    }
    graph_.for_each_edge([&](const EdgeHandle& e) {
      snap.edge_total += top_ - std::max(level_[e.u], level_[e.v]);
    });
    snap.total = snap.vertex_total + snap.edge_total;
    snap.change = snap.total - last_token_total_;
    last_token_total_ = snap.total;
    return snap;
  }

  /// One `v level below_size` line per vertex.
  void dump(std::ostream& out) const {
    for (VertexId v = 0; v < level_.size(); ++v)
      out << v << ' ' << level_[v] << ' ' << below_size(v) << '\n';
  }

  /// Counters match list lengths and every neighbour sits in the slot its
  /// level dictates.
  bool lists_consistent() const {
    for (VertexId v = 0; v < level_.size(); ++v) {
      for (int s = 0; s <= top_; ++s) {
        const ListHead& h = head(v, s);
        if (s > 0 && s < level_[v] && h.size != 0) return false;
        std::uint32_t count = 0;
        bool ok = true;
        links_.for_each(h, [&](std::uint32_t node) {
          ++count;
          const int lw = level_[neighbor_of(node)];
          const int expect = lw < level_[v] ? 0 : lw;
          if (expect != s || slot_of_[node] != s) ok = false;
        });
        if (!ok || count != h.size) return false;
      }
    }
    return true;
  }

 private:
  ListHead& head(VertexId v, int slot) { return heads_[v * slots_ + static_cast<std::size_t>(slot)]; }
  const ListHead& head(VertexId v, int slot) const {
    return heads_[v * slots_ + static_cast<std::size_t>(slot)];
  }

  VertexId neighbor_of(std::uint32_t node) const {
    const EdgeHandle& e = graph_.edge(node / 2);
    return node % 2 == 0 ? e.v : e.u;
  }

  template <class F>
  void for_each_in_slot(VertexId v, int slot, F& f) const {
    links_.for_each(head(v, slot), [&](std::uint32_t node) {
      f(neighbor_of(node), static_cast<EdgeId>(node / 2));
    });
  }

  int slot_for(VertexId owner, VertexId neighbor) const {
    return level_[neighbor] < level_[owner] ? 0 : level_[neighbor];
  }

  void attach_cell(std::uint32_t node, VertexId owner, VertexId neighbor) {
    const int s = slot_for(owner, neighbor);
    slot_of_[node] = static_cast<std::uint8_t>(s);
    links_.push_back(head(owner, s), node);
  }
  void detach_cell(std::uint32_t node, VertexId owner) {
    links_.erase(head(owner, slot_of_[node]), node);
  }
  void move_cell(std::uint32_t node, VertexId owner, int slot) {
    if (slot_of_[node] == slot) return;
    links_.erase(head(owner, slot_of_[node]), node);
    slot_of_[node] = static_cast<std::uint8_t>(slot);
    links_.push_back(head(owner, slot), node);
  }

  void enqueue_upper(VertexId v) {
    if (!in_upper_queue_[v]) {
      in_upper_queue_[v] = true;
      upper_queue_.push_back(v);
    }
  }
  void check_dirty(VertexId v) {
    if (violates_upper(v)) enqueue_upper(v);
    if (violates_lower(v) && !in_lower_queue_[v]) {
      in_lower_queue_[v] = true;
      lower_queue_.push_back(v);
    }
  }

  // After a move to k: |N(4,k)| <= beta^k and, for k > 4, |N(4,k-1)| >= beta^(k-1).
  void check_post_conditions(VertexId x) {
    const int k = level_[x];
    const auto below = static_cast<long double>(below_size(x));
    const auto through = below + static_cast<long double>(head(x, k).size);
    if (through > power(k) || (k > kBaseLevel && below < power(k - 1))) ++post_failures_;
  }

  const DynamicGraph& graph_;
  double beta_;
  int top_;
  std::size_t slots_;
  std::vector<int> level_;
  std::vector<ListHead> heads_;
  LinkTable links_;
  std::vector<std::uint8_t> slot_of_;
  std::vector<long double> power_;
  std::deque<VertexId> upper_queue_;
  std::deque<VertexId> lower_queue_;
  std::vector<bool> in_upper_queue_;
  std::vector<bool> in_lower_queue_;
  std::vector<std::uint64_t> level_count_;
  std::uint64_t cells_touched_ = 0;
  std::uint64_t post_failures_ = 0;
  double last_token_total_ = 0;
};

}  // namespace dyncolor
