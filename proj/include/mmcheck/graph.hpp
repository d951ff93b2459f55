#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <unordered_set>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/relation.hpp"

namespace mmcheck {

/**
 * Directed graph over event ids with deduplicated edges.
 *
 * Membership uses a dense n x n bit matrix up to kDenseLimit vertices and a
 * hash set above. Copy assignment reuses storage, which the solver relies on
 * when it resets a scratch graph to a base graph.
 */
class EventGraph {
 public:
  static constexpr std::size_t kDenseLimit = 4096;

  EventGraph() = default;
  explicit EventGraph(std::size_t n) : n_(n), adj_(n), in_degree_(n, 0) {
    if (dense()) {
      bits_.assign((n * n + 63) / 64, 0);
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const EventId> successors(EventId v) const { return adj_[v]; }
  std::uint32_t in_degree(EventId v) const { return in_degree_[v]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool contains(EventId from, EventId to) const {
    if (dense()) {
      std::size_t bit = static_cast<std::size_t>(from) * n_ + to;
      return (bits_[bit / 64] >> (bit % 64)) & 1u;
    }
    return sparse_.contains(key(from, to));
  }

  /// Returns false when the edge was already present.
  bool add_edge(EventId from, EventId to) {
    if (dense()) {
      std::size_t bit = static_cast<std::size_t>(from) * n_ + to;
      std::uint64_t& word = bits_[bit / 64];
      std::uint64_t m = std::uint64_t{1} << (bit % 64);
      if (word & m) {
        return false;
      }
      word |= m;
    } else if (!sparse_.insert(key(from, to)).second) {
      return false;
    }
    adj_[from].push_back(to);
    ++in_degree_[to];
    edges_.push_back({from, to});
    return true;
  }

  void add_relation(const Relation& r) {
    for (const Edge& e : r.pairs()) {
      add_edge(e.from, e.to);
    }
  }

 private:
  bool dense() const noexcept { return n_ <= kDenseLimit; }
  static std::uint64_t key(EventId a, EventId b) { return (std::uint64_t{a} << 32) | b; }

  std::size_t n_ = 0;
  std::vector<std::vector<EventId>> adj_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> sparse_;
};

inline EventGraph make_graph(std::size_t n, std::initializer_list<std::reference_wrapper<const Relation>> parts) {
  EventGraph g(n);
  for (const Relation& r : parts) {
    g.add_relation(r);
  }
  return g;
}

struct AcyclicityVerdict {
  bool acyclic = false;
  /// Topological order when acyclic, smallest ready id first; empty otherwise.
  std::vector<EventId> order;
};

inline AcyclicityVerdict kahn_acyclic(const EventGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> indeg(n);
  std::priority_queue<EventId, std::vector<EventId>, std::greater<>> ready;
  for (EventId v = 0; v < n; ++v) {
    indeg[v] = g.in_degree(v);
    if (indeg[v] == 0) {
      ready.push(v);
    }
  }
  AcyclicityVerdict out;
  out.order.reserve(n);
  while (!ready.empty()) {
    EventId v = ready.top();
    ready.pop();
    out.order.push_back(v);
    for (EventId w : g.successors(v)) {
      if (--indeg[w] == 0) {
        ready.push(w);
      }
    }
  }
  out.acyclic = out.order.size() == n;
  if (!out.acyclic) {
    out.order.clear();
  }
  return out;
}

/// Reusable buffers for repeated acyclicity tests without order output.
class AcyclicityScratch {
 public:
  bool acyclic(const EventGraph& g) {
    const std::size_t n = g.vertex_count();
    indeg_.resize(n);
    stack_.clear();
    for (EventId v = 0; v < n; ++v) {
      indeg_[v] = g.in_degree(v);
      if (indeg_[v] == 0) {
        stack_.push_back(v);
      }
    }
    std::size_t seen = 0;
    while (!stack_.empty()) {
      EventId v = stack_.back();
      stack_.pop_back();
      ++seen;
      for (EventId w : g.successors(v)) {
        if (--indeg_[w] == 0) {
          stack_.push_back(w);
        }
      }
    }
    return seen == n;
  }

 private:
  std::vector<std::uint32_t> indeg_;
  std::vector<EventId> stack_;
};

/// One directed cycle as a vertex sequence (first vertex not repeated); empty if acyclic.
inline std::vector<EventId> find_cycle(const EventGraph& g) {
  const std::size_t n = g.vertex_count();
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(n, White);
  std::vector<EventId> parent(n);
  std::vector<std::pair<EventId, std::size_t>> stack;
  for (EventId root = 0; root < n; ++root) {
    if (color[root] != White) {
      continue;
    }
    stack.push_back({root, 0});
    color[root] = Grey;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      auto succ = g.successors(v);
      if (idx == succ.size()) {
        color[v] = Black;
        stack.pop_back();
        continue;
      }
      EventId w = succ[idx++];
      if (color[w] == Grey) {
        std::vector<EventId> cycle{w};
        for (EventId u = v; u != w; u = parent[u]) {
          cycle.push_back(u);
        }
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (color[w] == White) {
        color[w] = Grey;
        parent[w] = v;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Write subsets
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxWriteBits = 63;

/// A subset of the k writes of a history, as a k-bit mask over write indexes.
struct WriteSubset {
  std::uint64_t mask = 0;

  static WriteSubset full(std::size_t k) {
    return {k == 0 ? 0 : (~std::uint64_t{0} >> (64 - k))};
  }

  bool contains(std::size_t bit) const noexcept { return (mask >> bit) & 1u; }
  WriteSubset with(std::size_t bit) const noexcept { return {mask | (std::uint64_t{1} << bit)}; }
  WriteSubset without(std::size_t bit) const noexcept { return {mask & ~(std::uint64_t{1} << bit)}; }
  WriteSubset complement(std::size_t k) const noexcept { return {full(k).mask & ~mask}; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask)); }
  bool empty() const noexcept { return mask == 0; }

  friend constexpr bool operator==(const WriteSubset&, const WriteSubset&) = default;
};

/// Dense numbering of write events: bit i stands for the i-th write in id order.
class WriteIndex {
 public:
  WriteIndex() = default;
  explicit WriteIndex(const History& h) : ids_(h.writes()), bit_of_(h.n(), kNone) {
    if (ids_.size() > kMaxWriteBits) {
      throw Error(ErrorKind::KTooLarge, "history has " + std::to_string(ids_.size()) +
                                            " writes; subsets support at most " + std::to_string(kMaxWriteBits));
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      bit_of_[ids_[i]] = static_cast<std::uint32_t>(i);
    }
  }

  std::size_t k() const noexcept { return ids_.size(); }
  EventId id(std::size_t bit) const { return ids_.at(bit); }
  bool is_write(EventId id) const { return id < bit_of_.size() && bit_of_[id] != kNone; }
  std::size_t bit(EventId id) const {
    if (!is_write(id)) {
      throw Error(ErrorKind::PreconditionViolated, "event " + std::to_string(id) + " is not a write");
    }
    return bit_of_[id];
  }

  WriteSubset subset(std::span<const EventId> ids) const {
    WriteSubset s;
    for (EventId id : ids) {
      s = s.with(bit(id));
    }
    return s;
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<EventId> ids_;
  std::vector<std::uint32_t> bit_of_;
};

/// Calls f(bit) for each set bit, ascending.
template <typename F>
void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask != 0) {
    f(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
}

/**
 * Snapshot order edges for V and a new minimum v:
 * every write outside V+{v} precedes every write in V+{v}, and v precedes V.
 */
inline Relation build_r_snapshot(const WriteIndex& writes, std::size_t universe, WriteSubset subset, EventId v) {
  const std::size_t vbit = writes.bit(v);
  if (subset.contains(vbit)) {
    throw Error(ErrorKind::PreconditionViolated, "new minimum is already in the subset");
  }
  const WriteSubset upper = subset.with(vbit);
  const WriteSubset lower = upper.complement(writes.k());
  std::vector<Edge> out;
  out.reserve(lower.size() * upper.size() + subset.size());
  for_each_bit(lower.mask, [&](std::size_t a) {
    for_each_bit(upper.mask, [&](std::size_t b) { out.push_back({writes.id(a), writes.id(b)}); });
  });
  for_each_bit(subset.mask, [&](std::size_t b) { out.push_back({v, writes.id(b)}); });
  return Relation(universe, std::move(out));
}

}  // namespace mmcheck
