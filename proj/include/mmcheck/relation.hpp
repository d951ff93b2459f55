#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace mmcheck {

using EventId = std::uint32_t;

struct Edge {
  EventId from;
  EventId to;

  friend constexpr bool operator==(const Edge&, const Edge&) = default;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * A set of directed pairs over the event ids [0, universe).
 *
 * Pairs are kept sorted and deduplicated, with forward and backward
 * adjacency lists built once at construction. Instances are immutable.
 */
class Relation {
 public:
  Relation() = default;

  explicit Relation(std::size_t universe, std::vector<Edge> pairs = {})
      : universe_(universe), pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    succ_.resize(universe_);
    pred_.resize(universe_);
    for (const Edge& e : pairs_) {
      succ_[e.from].push_back(e.to);
      pred_[e.to].push_back(e.from);
    }
    for (auto& p : pred_) {
      std::sort(p.begin(), p.end());
    }
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  std::span<const Edge> pairs() const noexcept { return pairs_; }
  std::span<const EventId> successors(EventId e) const { return succ_[e]; }
  std::span<const EventId> predecessors(EventId e) const { return pred_[e]; }

  bool contains(EventId from, EventId to) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), Edge{from, to});
  }

  /// Keeps the pairs accepted by `keep`.
  Relation filter(const std::function<bool(const Edge&)>& keep) const {
    std::vector<Edge> out;
    std::copy_if(pairs_.begin(), pairs_.end(), std::back_inserter(out), keep);
    return Relation(universe_, std::move(out));
  }

  bool is_subset_of(const Relation& other) const {
    return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.universe_ == b.universe_ && a.pairs_ == b.pairs_;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<Edge> pairs_;
  std::vector<std::vector<EventId>> succ_;
  std::vector<std::vector<EventId>> pred_;
};

inline Relation inverse(const Relation& a) {
  std::vector<Edge> out;
  out.reserve(a.size());
  for (const Edge& e : a.pairs()) {
    out.push_back({e.to, e.from});
  }
  return Relation(a.universe(), std::move(out));
}

/// {(x, z) | (x, y) in a, (y, z) in b}
inline Relation compose(const Relation& a, const Relation& b) {
  std::vector<Edge> out;
  for (const Edge& e : a.pairs()) {
    if (e.to >= b.universe()) {
      continue;
    }
    for (EventId z : b.successors(e.to)) {
      out.push_back({e.from, z});
    }
  }
  return Relation(std::max(a.universe(), b.universe()), std::move(out));
}

inline Relation unite(const Relation& a, const Relation& b) {
  std::vector<Edge> out(a.pairs().begin(), a.pairs().end());
  out.insert(out.end(), b.pairs().begin(), b.pairs().end());
  return Relation(std::max(a.universe(), b.universe()), std::move(out));
}

inline Relation subtract(const Relation& a, const Relation& b) {
  return a.filter([&](const Edge& e) { return !b.contains(e.from, e.to); });
}

// Debugging and explain output only; the solver never closes relations.
inline Relation transitive_closure(const Relation& a) {
  const std::size_t n = a.universe();
  std::vector<Edge> out;
  std::vector<char> seen(n);
  std::vector<EventId> stack;
  for (EventId src = 0; src < n; ++src) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(a.successors(src).begin(), a.successors(src).end());
    while (!stack.empty()) {
      EventId cur = stack.back();
      stack.pop_back();
      if (seen[cur]) {
        continue;
      }
      seen[cur] = 1;
      out.push_back({src, cur});
      for (EventId nxt : a.successors(cur)) {
        if (!seen[nxt]) {
          stack.push_back(nxt);
        }
      }
    }
  }
  return Relation(n, std::move(out));
}

}  // namespace mmcheck
