#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "graph.hpp"
#include "index_list.hpp"

namespace dyncolor {

using u128 = unsigned __int128;

/// Parameters of the tuple coloring for a fixed degree bound Δ.
///
/// η = e^(16 / lg lg Δ), L = ⌊lg(ηΔ) / lg lg Δ⌋, λ = ⌊(ηΔ)^(1/L)⌋ and
/// θ_i = (Δ/λ^i) · ((λ+1)/(λ-1))^i. Threshold comparisons are done on
/// integers: D > θ_i  <=>  D · λ^i (λ-1)^i > Δ (λ+1)^i.
struct DetParams {
  static constexpr std::uint32_t kMinDelta = 16;

  std::uint32_t delta = 0;
  long double eta = 0;
  int L = 0;
  std::uint32_t lambda = 0;
  std::vector<long double> f;      // f(i), i in [0, L]
  std::vector<u128> denominator;   // λ^i (λ-1)^i
  std::vector<u128> numerator;     // Δ (λ+1)^i

  static DetParams compute(std::uint32_t delta) {
    if (delta < kMinDelta)
      throw Error(ErrorCode::DeltaTooSmall, "deterministic engine needs delta >= 16, got " + std::to_string(delta));
    DetParams p;
    p.delta = delta;
    const long double lg = std::log2(static_cast<long double>(delta));
    const long double lglg = std::log2(lg);
    p.eta = std::exp(16.0L / lglg);
    const long double target = p.eta * delta;  // ηΔ
    p.L = static_cast<int>(std::floor(std::log2(target) / lglg));

    // Largest λ with λ^L <= ηΔ; the pow estimate is corrected in exact steps.
    auto power = [&](std::uint64_t base) {
      long double r = 1;
      for (int i = 0; i < p.L; ++i) r *= static_cast<long double>(base);
      return r;
    };
    auto lam = static_cast<std::uint64_t>(std::floor(std::pow(target, 1.0L / p.L)));
    while (lam > 1 && power(lam) > target) --lam;
    while (power(lam + 1) <= target) ++lam;
    if (lam < 2 || lam > 0xFFFF) throw Error(ErrorCode::InvalidSpec, "radix out of range for delta " + std::to_string(delta));
    p.lambda = static_cast<std::uint32_t>(lam);

    const long double ratio = static_cast<long double>(lam + 1) / static_cast<long double>(lam - 1);
    u128 den = 1, num = delta;
    long double fi = 1;
    for (int i = 0; i <= p.L; ++i) {
      p.f.push_back(fi);
      p.denominator.push_back(den);
      p.numerator.push_back(num);
      if (i == p.L) break;
      fi *= ratio;
      const u128 step = static_cast<u128>(lam) * (lam - 1);
      if (den > std::numeric_limits<u128>::max() / step / (static_cast<u128>(1) << 32))
        throw Error(ErrorCode::InvalidSpec, "threshold arithmetic overflows for delta " + std::to_string(delta));
      den *= step;
      num *= (lam + 1);
    }
    return p;
  }

  long double theta(int i) const {
    return static_cast<long double>(delta) / std::pow(static_cast<long double>(lambda), i) * f[static_cast<std::size_t>(i)];
  }

  /// D > θ_i, exactly.
  bool exceeds(std::uint64_t d, int i) const {
    return static_cast<u128>(d) * denominator[static_cast<std::size_t>(i)] > numerator[static_cast<std::size_t>(i)];
  }

  /// λ^L; the palette size.
  std::uint64_t palette() const {
    std::uint64_t r = 1;
    for (int i = 0; i < L; ++i) r *= lambda;
    return r;
  }
};

/// argmin over counts[1..lambda], ties to the smallest index.
inline std::uint16_t least_used(const std::uint32_t* counts, std::uint32_t lambda) {
  std::uint32_t best = 1;
  for (std::uint32_t a = 2; a <= lambda; ++a)
    if (counts[a] < counts[best]) best = a;
  return static_cast<std::uint16_t>(best);
}

/// One pass of the fix loop: `vertex` had its smallest violated index at `k`.
struct FixRecord {
  VertexId vertex;
  int k;
  std::vector<std::uint16_t> old_tuple;
  std::vector<std::uint16_t> new_tuple;
  std::uint64_t removed;  // neighbour-side cells cut at levels >= k
  std::uint64_t added;    // neighbour-side cells rebuilt at levels >= k
  std::uint64_t phi_drop;
  std::uint64_t work;
};

/// Deterministic vertex coloring with colors in [λ]^L.
///
/// For every vertex and every prefix length i in [0, L], N*_i(v) lists the
/// neighbours whose first i coordinates agree with v's. An edge whose
/// endpoints share a prefix of length d has one cell per side at each of
/// levels 0..d. When D*_k(x) = |N*_k(x)| exceeds θ_k for the smallest such
/// k, coordinates k..L of x are rewritten one at a time, each to the value
/// least used among the neighbours that still share the prefix.
class DeterministicVertexColoring final : public ColoringEngine {
 public:
  explicit DeterministicVertexColoring(const DynamicGraph& graph)
      : graph_(graph),
        params_(graph.bound().is_adaptive()
                    ? throw Error(ErrorCode::InvalidSpec, "deterministic engine needs a fixed degree bound")
                    : DetParams::compute(graph.bound().delta())),
        width_(static_cast<std::size_t>(params_.L) + 1),
        coords_(graph.vertex_count() * static_cast<std::size_t>(params_.L), 1),
        heads_(graph.vertex_count() * width_),
        zscratch_(params_.lambda + 1, 0),
        queued_(graph.vertex_count(), false) {}

  std::string_view name() const override { return "det-vc"; }
  EngineKind kind() const override { return EngineKind::DeterministicVertex; }
  Color palette_size() const override { return params_.palette(); }

  const DetParams& params() const { return params_; }
  int L() const { return params_.L; }

  /// χ_j(v) for j in [1, L], valued in [1, λ].
  std::uint16_t coord(VertexId v, int j) const { return coords_[v * params_.L + static_cast<std::size_t>(j - 1)]; }
  std::vector<std::uint16_t> tuple(VertexId v) const {
    const auto* first = &coords_[v * static_cast<std::size_t>(params_.L)];
    return {first, first + params_.L};
  }
  /// The tuple read as a base-λ number, plus one.
  Color color(VertexId v) const {
    Color c = 0;
    for (int j = 1; j <= params_.L; ++j) c = c * params_.lambda + (coord(v, j) - 1);
    return c + 1;
  }
  std::vector<Color> colors() const {
    std::vector<Color> out(graph_.vertex_count());
    for (VertexId v = 0; v < out.size(); ++v) out[v] = color(v);
    return out;
  }

  std::uint32_t d_star(VertexId v, int i) const { return head(v, i).size; }
  template <class F>
  void for_each_star(VertexId v, int i, F&& f) const {
    links_.for_each(head(v, i), [&](std::uint32_t node) { f(neighbor_of(node)); });
  }
  int depth(EdgeId e) const { return depth_[e]; }

  bool violates(VertexId v) const { return smallest_violation(v) != 0; }
  /// Smallest i in [1, L] with D*_i(v) > θ_i, or 0.
  int smallest_violation(VertexId v) const {
    for (int i = 1; i <= params_.L; ++i)
      if (params_.exceeds(head(v, i).size, i)) return i;
    return 0;
  }

  std::uint64_t potential() const { return phi_; }
  std::uint64_t cells_touched() const { return cells_; }
  bool scratch_clear() const {
    return std::all_of(zscratch_.begin(), zscratch_.end(), [](std::uint32_t z) { return z == 0; });
  }

  // Fix-loop instrumentation, cumulative.
  std::uint64_t fix_iterations() const { return iterations_; }
  std::uint64_t removed_bound_failures() const { return removed_failures_; }
  std::uint64_t added_bound_failures() const { return added_failures_; }
  std::uint64_t drop_bound_failures() const { return drop_failures_; }
  std::uint64_t split_bound_failures() const { return split_failures_; }
  std::uint64_t exit_failures() const { return exit_failures_; }
  std::uint64_t max_edge_phi_change() const { return max_edge_phi_change_; }
  double max_work_ratio() const { return max_work_ratio_; }
  /// Fix records of the most recent update.
  const std::vector<FixRecord>& last_fixes() const { return fixes_; }

  void on_insert(const EdgeHandle& e, UpdateReceipt& receipt) override {
    fixes_.clear();
    const std::uint64_t cells_before = cells_;
    receipt.phi_before = phi_;
    ensure_edge_storage();
    int d = 0;
    while (d < params_.L && coord(e.u, d + 1) == coord(e.v, d + 1)) ++d;
    depth_[e.id] = static_cast<std::uint8_t>(d);
    for (int i = 0; i <= d; ++i) add_pair(e, i);
    note_edge_phi(receipt.phi_before, phi_);
    enqueue_if_violating(e.u);
    enqueue_if_violating(e.v);
    run_fix_loop(receipt);
    receipt.phi_after = phi_;
    receipt.cells_touched += cells_ - cells_before;
  }

  void on_delete(const EdgeHandle& e, UpdateReceipt& receipt) override {
    fixes_.clear();
    const std::uint64_t cells_before = cells_;
    receipt.phi_before = phi_;
    for (int i = 0; i <= depth_[e.id]; ++i) remove_pair(e, i);
    note_edge_phi(receipt.phi_before, phi_);
    receipt.phi_after = phi_;
    receipt.cells_touched += cells_ - cells_before;
  }

 private:
  std::uint32_t node(EdgeId e, int side, int level) const {
    return static_cast<std::uint32_t>((2 * static_cast<std::size_t>(e) + static_cast<std::size_t>(side)) * width_ +
                                      static_cast<std::size_t>(level));
  }
  VertexId neighbor_of(std::uint32_t n) const {
    const std::size_t cell = n / width_;
    const EdgeHandle& e = graph_.edge(static_cast<EdgeId>(cell / 2));
    return cell % 2 == 0 ? e.v : e.u;
  }
  EdgeId edge_of(std::uint32_t n) const { return static_cast<EdgeId>(n / width_ / 2); }

  ListHead& head(VertexId v, int i) { return heads_[v * width_ + static_cast<std::size_t>(i)]; }
  const ListHead& head(VertexId v, int i) const { return heads_[v * width_ + static_cast<std::size_t>(i)]; }
  std::uint16_t& coord_ref(VertexId v, int j) { return coords_[v * params_.L + static_cast<std::size_t>(j - 1)]; }

  void ensure_edge_storage() {
    links_.ensure(2 * graph_.edge_capacity() * width_);
    if (depth_.size() < graph_.edge_capacity()) depth_.resize(graph_.edge_capacity(), 0);
  }

  void add_pair(const EdgeHandle& e, int i) {
    links_.push_back(head(e.u, i), node(e.id, 0, i));
    links_.push_back(head(e.v, i), node(e.id, 1, i));
    phi_ += 2;
    cells_ += 2;
  }
  void remove_pair(const EdgeHandle& e, int i) {
    links_.erase(head(e.u, i), node(e.id, 0, i));
    links_.erase(head(e.v, i), node(e.id, 1, i));
    phi_ -= 2;
    cells_ += 2;
  }

  void note_edge_phi(std::uint64_t before, std::uint64_t after) {
    const std::uint64_t change = before > after ? before - after : after - before;
    max_edge_phi_change_ = std::max(max_edge_phi_change_, change);
  }

  void enqueue_if_violating(VertexId v) {
    if (!queued_[v] && violates(v)) {
      queued_[v] = true;
      queue_.push_back(v);
    }
  }

  void run_fix_loop(UpdateReceipt& receipt) {
    while (!queue_.empty()) {
      const VertexId x = queue_.front();
      queue_.pop_front();
      queued_[x] = false;
      const int k = smallest_violation(x);
      if (k == 0) continue;
      fix(x, k, receipt);
    }
  }

  void fix(VertexId x, int k, UpdateReceipt& receipt) {
    const std::uint64_t phi_start = phi_;
    const std::uint64_t cells_start = cells_;
    FixRecord rec{x, k, tuple(x), {}, 0, 0, 0, 0};

    // Cut every edge of x down to prefix length k-1.
    links_.for_each(head(x, k), [&](std::uint32_t n) {
      const EdgeHandle& e = graph_.edge(edge_of(n));
      const int d = depth_[e.id];
      for (int i = k; i <= d; ++i) remove_pair(e, i);
      rec.removed += static_cast<std::uint64_t>(d - k + 1);
      depth_[e.id] = static_cast<std::uint8_t>(k - 1);
    });

    std::vector<VertexId> gained;
    for (int j = k; j <= params_.L; ++j) {
      const ListHead& prev = head(x, j - 1);
      links_.for_each(prev, [&](std::uint32_t n) { ++zscratch_[coord(neighbor_of(n), j)]; });
      const std::uint16_t alpha = least_used(zscratch_.data(), params_.lambda);
      if (static_cast<std::uint64_t>(zscratch_[alpha]) * params_.lambda > prev.size) ++split_failures_;
      cells_ += 2 * static_cast<std::uint64_t>(prev.size) + params_.lambda;

      links_.for_each(prev, [&](std::uint32_t n) {
        const VertexId w = neighbor_of(n);
        const std::uint16_t c = coord(w, j);
        zscratch_[c] = 0;
        if (c != alpha) return;
        const EdgeHandle& e = graph_.edge(edge_of(n));
        add_pair(e, j);
        depth_[e.id] = static_cast<std::uint8_t>(j);
        ++rec.added;
        gained.push_back(w);
      });
      if (coord(x, j) != alpha) ++receipt.coords_rewritten;
      coord_ref(x, j) = alpha;
    }
    rec.new_tuple = tuple(x);
    rec.phi_drop = phi_start - std::min(phi_start, phi_);
    rec.work = cells_ - cells_start;

    // Per-iteration bounds, all on exact integers with den = λ^k (λ-1)^k:
    //   removed · den > Δ(λ+1)^k,  added · den < Δ(λ+1)^(k-1) λ,
    //   drop · den >= Δ(λ+1)^(k-1).
    const auto ki = static_cast<std::size_t>(k);
    const u128 den = params_.denominator[ki];
    const u128 base = params_.numerator[ki - 1];
    if (!(static_cast<u128>(rec.removed) * den > params_.numerator[ki])) ++removed_failures_;
    if (!(static_cast<u128>(rec.added) * den < base * params_.lambda)) ++added_failures_;
    if (phi_ > phi_start || !(static_cast<u128>(rec.phi_drop) * den >= base)) ++drop_failures_;
    const long double budget = params_.lambda + params_.L * params_.theta(k - 1);
    max_work_ratio_ = std::max(max_work_ratio_, static_cast<double>(rec.work / budget));
    if (violates(x)) ++exit_failures_;

    ++iterations_;
    ++receipt.fix_iterations;
    fixes_.push_back(std::move(rec));
    enqueue_if_violating(x);
    for (VertexId w : gained) enqueue_if_violating(w);
  }

  const DynamicGraph& graph_;
  DetParams params_;
  std::size_t width_;
  std::vector<std::uint16_t> coords_;
  std::vector<ListHead> heads_;
  LinkTable links_;
  std::vector<std::uint8_t> depth_;
  std::vector<std::uint32_t> zscratch_;
  std::deque<VertexId> queue_;
  std::vector<bool> queued_;
  std::vector<FixRecord> fixes_;
  std::uint64_t phi_ = 0;
  std::uint64_t cells_ = 0;
  std::uint64_t iterations_ = 0;
  std::uint64_t removed_failures_ = 0;
  std::uint64_t added_failures_ = 0;
  std::uint64_t drop_failures_ = 0;
  std::uint64_t split_failures_ = 0;
  std::uint64_t exit_failures_ = 0;
  std::uint64_t max_edge_phi_change_ = 0;
  double max_work_ratio_ = 0;
};

}  // namespace dyncolor
