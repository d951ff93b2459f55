#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/models.hpp"
#include "mmcheck/solver.hpp"

// Brute-force deciders used as ground truth for the subset solver. They are
// deliberately naive and share nothing with it beyond the history and model
// derivation (and verify_witness, for the total-order enumeration).

namespace mmcheck {

inline constexpr std::size_t kOracleMaxK = 8;
inline constexpr std::uint64_t kOracleMaxStoreOrders = 1'000'000;

namespace detail {

// Plain recursive-colour DFS over an adjacency list.
inline bool dfs_acyclic(const std::vector<std::vector<EventId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::uint8_t> color(n, 0);
  std::vector<std::pair<EventId, std::size_t>> stack;
  for (EventId root = 0; root < n; ++root) {
    if (color[root] != 0) {
      continue;
    }
    color[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i == adj[v].size()) {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      EventId w = adj[v][i++];
      if (color[w] == 1) {
        return false;
      }
      if (color[w] == 0) {
        color[w] = 1;
        stack.push_back({w, 0});
      }
    }
  }
  return true;
}

inline void add_pairs(std::vector<std::vector<EventId>>& adj, const Relation& r) {
  for (const Edge& e : r.pairs()) {
    adj[e.from].push_back(e.to);
  }
}

inline bool oracle_oota_ok(const History& h) {
  std::vector<std::vector<EventId>> adj(h.n());
  add_pairs(adj, h.dp());
  add_pairs(adj, h.rf());
  return dfs_acyclic(adj);
}

}  // namespace detail

/// Enumerates every permutation of the writes in lexicographic id order.
inline Verdict oracle_total(const History& h, const DerivedModel& m) {
  if (h.k() > kOracleMaxK) {
    throw Error(ErrorKind::KTooLargeForOracle,
                "total-order oracle supports k <= " + std::to_string(kOracleMaxK) + ", got " + std::to_string(h.k()));
  }
  Verdict out;
  if (m.spec.requires_oota && !detail::oracle_oota_ok(h)) {
    out.diagnostics = "out-of-thin-air cycle";
    return out;
  }
  std::vector<EventId> tw = h.writes();
  do {
    ++out.stats.subsets_evaluated;
    if (verify_witness(h, m, tw)) {
      out.outcome = Outcome::Consistent;
      out.witness = tw;
      return out;
    }
  } while (std::next_permutation(tw.begin(), tw.end()));
  out.diagnostics = "no permutation of the writes passes";
  return out;
}

/// Per-variable total orders on same-variable writes.
struct StoreOrder {
  /// orders[x] lists WR(x) in store order.
  std::vector<std::vector<EventId>> orders;

  Relation relation(std::size_t universe) const {
    std::vector<Edge> out;
    for (const auto& o : orders) {
      for (std::size_t i = 0; i < o.size(); ++i) {
        for (std::size_t j = i + 1; j < o.size(); ++j) {
          out.push_back({o[i], o[j]});
        }
      }
    }
    return Relation(universe, std::move(out));
  }
};

/// fr = rf^-1 ; ww
inline Relation from_read(const History& h, const Relation& ww) { return compose(inverse(h.rf()), ww); }

struct StoreGraphs {
  std::vector<std::vector<EventId>> loc;
  std::vector<std::vector<EventId>> mm;
};

inline StoreGraphs store_graphs(const History& h, const DerivedModel& m, const StoreOrder& so) {
  const Relation ww = so.relation(h.n());
  const Relation fr = from_read(h, ww);
  StoreGraphs g{std::vector<std::vector<EventId>>(h.n()), std::vector<std::vector<EventId>>(h.n())};
  for (const Relation* r : {&m.po_loc_effective, &h.rf(), &ww, &fr}) {
    detail::add_pairs(g.loc, *r);
  }
  for (const Relation* r : {&m.po_mm, &m.rf_mm, &ww, &fr}) {
    detail::add_pairs(g.mm, *r);
  }
  return g;
}

inline bool store_order_valid(const History& h, const DerivedModel& m, const StoreOrder& so) {
  StoreGraphs g = store_graphs(h, m, so);
  return detail::dfs_acyclic(g.loc) && detail::dfs_acyclic(g.mm);
}

struct StoreVerdict {
  Verdict verdict;
  std::optional<StoreOrder> store_order;
  std::uint64_t enumerated = 0;
};

/// Number of store orders: product over variables of |WR(x)|!, saturating at limit+1.
inline std::uint64_t store_order_count(const History& h, std::uint64_t limit = kOracleMaxStoreOrders) {
  std::uint64_t total = 1;
  for (VarId x = 0; x < h.var_count(); ++x) {
    for (std::uint64_t i = 2; i <= h.writes_on(x).size(); ++i) {
      total *= i;
      if (total > limit) {
        return limit + 1;
      }
    }
  }
  return total;
}

/**
 * Enumerates the Cartesian product of per-variable write permutations. On
 * success the witness tw is the write projection of a topological order of
 * (po-mm + rf-mm + ww + fr), smallest id first.
 */
inline StoreVerdict oracle_store(const History& h, const DerivedModel& m) {
  if (store_order_count(h) > kOracleMaxStoreOrders) {
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "more than " + std::to_string(kOracleMaxStoreOrders) + " store orders to enumerate");
  }
  StoreVerdict out;
  if (m.spec.requires_oota && !detail::oracle_oota_ok(h)) {
    out.verdict.diagnostics = "out-of-thin-air cycle";
    return out;
  }
  StoreOrder so;
  for (VarId x = 0; x < h.var_count(); ++x) {
    so.orders.push_back(h.writes_on(x));
  }
  while (true) {
    ++out.enumerated;
    if (store_order_valid(h, m, so)) {
      const Relation ww = so.relation(h.n());
      const Relation fr = from_read(h, ww);
      EventGraph g = make_graph(h.n(), {m.po_mm, m.rf_mm, ww, fr});
      std::vector<EventId> tw;
      for (EventId e : kahn_acyclic(g).order) {
        if (h.event(e).is_write()) {
          tw.push_back(e);
        }
      }
      out.verdict.outcome = Outcome::Consistent;
      out.verdict.witness = std::move(tw);
      out.store_order = so;
      out.verdict.stats.subsets_evaluated = out.enumerated;
      return out;
    }
    // Odometer over per-variable permutations, last variable fastest.
    std::size_t x = so.orders.size();
    while (x > 0 && !std::next_permutation(so.orders[x - 1].begin(), so.orders[x - 1].end())) {
      --x;
    }
    if (x == 0) {
      break;
    }
  }
  out.verdict.diagnostics = "no store order passes";
  out.verdict.stats.subsets_evaluated = out.enumerated;
  return out;
}

}  // namespace mmcheck
