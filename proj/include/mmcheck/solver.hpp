#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmcheck/coherence.hpp"
#include "mmcheck/error.hpp"
#include "mmcheck/graph.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/models.hpp"

namespace mmcheck {

enum class Outcome { Consistent, Inconsistent };

inline constexpr std::string_view to_string(Outcome o) {
  return o == Outcome::Consistent ? "consistent" : "inconsistent";
}

struct SolveStats {
  std::uint64_t subsets_evaluated = 0;
  std::uint64_t graphs_built = 0;
  std::uint64_t kahn_runs = 0;
};

struct Verdict {
  Outcome outcome = Outcome::Inconsistent;
  /// Total write order, ascending; present iff consistent.
  std::optional<std::vector<EventId>> witness;
  std::optional<std::string> diagnostics;
  SolveStats stats;

  bool consistent() const noexcept { return outcome == Outcome::Consistent; }
};

/**
 * Memo for the subset table. Each evaluated mask is either inconsistent or
 * consistent together with the write removed as the subset's minimum.
 * Dense storage up to kDenseBits writes, a hash map above.
 */
class DpTable {
 public:
  static constexpr std::size_t kDenseBits = 24;
  enum class State { Unknown, Consistent, Inconsistent };

  explicit DpTable(std::size_t k) : k_(k) {
    if (k_ <= kDenseBits) {
      dense_.assign(std::size_t{1} << k_, kUnknown);
    }
  }

  std::size_t k() const noexcept { return k_; }

  State state(WriteSubset s) const {
    std::uint8_t e = get(s.mask);
    return e == kUnknown ? State::Unknown : e == kInconsistent ? State::Inconsistent : State::Consistent;
  }

  /// Write bit recorded as the minimum of a consistent subset.
  std::size_t choice(WriteSubset s) const {
    std::uint8_t e = get(s.mask);
    if (e == kUnknown || e == kInconsistent) {
      throw Error(ErrorKind::InternalWitnessInvalid, "subset has no recorded choice");
    }
    return e - 1u;
  }

  void set_consistent(WriteSubset s, std::size_t bit) { put(s.mask, static_cast<std::uint8_t>(bit + 1)); }
  void set_inconsistent(WriteSubset s) { put(s.mask, kInconsistent); }

  SolveStats stats;

 private:
  static constexpr std::uint8_t kUnknown = 0;
  static constexpr std::uint8_t kInconsistent = 0xff;

  std::uint8_t get(std::uint64_t mask) const {
    if (k_ <= kDenseBits) {
      return dense_[mask];
    }
    auto it = sparse_.find(mask);
    return it == sparse_.end() ? kUnknown : it->second;
  }
  void put(std::uint64_t mask, std::uint8_t e) {
    if (k_ <= kDenseBits) {
      dense_[mask] = e;
    } else {
      sparse_[mask] = e;
    }
  }

  std::size_t k_;
  std::vector<std::uint8_t> dense_;
  std::unordered_map<std::uint64_t, std::uint8_t> sparse_;
};

struct SolveOptions {
  std::size_t max_k = 30;
};

inline std::string describe_cycle(const History& h, const std::vector<EventId>& cycle) {
  std::string out;
  for (EventId e : cycle) {
    out += h.ref(e) + " -> ";
  }
  if (!cycle.empty()) {
    out += h.ref(cycle.front());
  }
  return out;
}

/// G_loc and G_mm for a total write order, conflicts taken from tw per variable.
inline GraphPair witness_graphs(const History& h, const DerivedModel& m, const std::vector<EventId>& tw) {
  std::vector<std::size_t> rank(h.n(), h.n());
  for (std::size_t i = 0; i < tw.size(); ++i) {
    EventId w = tw[i];
    if (w >= h.n() || !h.event(w).is_write() || rank[w] != h.n()) {
      throw Error(ErrorKind::NotAPermutation, "tw repeats or contains a non-write event");
    }
    rank[w] = i;
  }
  if (tw.size() != h.k()) {
    throw Error(ErrorKind::NotAPermutation,
                "tw has " + std::to_string(tw.size()) + " writes, history has " + std::to_string(h.k()));
  }
  std::vector<Edge> order;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    for (std::size_t j = i + 1; j < tw.size(); ++j) {
      order.push_back({tw[i], tw[j]});
    }
  }
  std::vector<Edge> conflict;
  for (EventId r : h.reads()) {
    EventId src = h.source_of(r);
    for (EventId w : h.writes_on(h.event(r).var)) {
      if (rank[src] < rank[w]) {
        conflict.push_back({r, w});
      }
    }
  }
  Relation tw_rel(h.n(), std::move(order));
  Relation cf(h.n(), std::move(conflict));
  return {make_graph(h.n(), {m.po_loc_effective, h.rf(), tw_rel, cf}),
          make_graph(h.n(), {m.po_mm, m.rf_mm, tw_rel, cf})};
}

/// Whether tw witnesses consistency: both graphs acyclic.
inline bool verify_witness(const History& h, const DerivedModel& m, const std::vector<EventId>& tw) {
  GraphPair g = witness_graphs(h, m, tw);
  return kahn_acyclic(g.loc).acyclic && kahn_acyclic(g.mm).acyclic;
}

/// Removal choices from the full set down to the empty set, i.e. tw ascending.
inline std::vector<EventId> extract_witness(const DpTable& table, const History& h) {
  WriteIndex writes(h);
  if (writes.k() != table.k()) {
    throw Error(ErrorKind::InternalWitnessInvalid, "table and history disagree on k");
  }
  std::vector<EventId> tw;
  WriteSubset s = WriteSubset::full(table.k());
  while (!s.empty()) {
    if (table.state(s) != DpTable::State::Consistent) {
      throw Error(ErrorKind::InternalWitnessInvalid, "witness walk reached an unresolved subset");
    }
    std::size_t bit = table.choice(s);
    if (!s.contains(bit)) {
      throw Error(ErrorKind::InternalWitnessInvalid, "recorded minimum lies outside its subset");
    }
    tw.push_back(writes.id(bit));
    s = s.without(bit);
  }
  return tw;
}

namespace detail {

class SubsetSearch {
 public:
  SubsetSearch(const CoherenceContext& ctx, DpTable& table) : ctx_(ctx), table_(table) {}

  bool eval(WriteSubset s) {
    switch (table_.state(s)) {
      case DpTable::State::Consistent: return true;
      case DpTable::State::Inconsistent: return false;
      case DpTable::State::Unknown: break;
    }
    ++table_.stats.subsets_evaluated;
    bool found = false;
    for_each_bit(s.mask, [&](std::size_t v) {
      if (found) {
        return;
      }
      WriteSubset rest = s.without(v);
      if (table_.state(rest) == DpTable::State::Inconsistent) {
        return;
      }
      if (coherent(rest, v) && eval(rest)) {
        table_.set_consistent(s, v);
        found = true;
      }
    });
    if (!found) {
      table_.set_inconsistent(s);
    }
    return found;
  }

 private:
  bool coherent(WriteSubset rest, std::size_t v) {
    ++table_.stats.graphs_built;
    ++table_.stats.kahn_runs;
    loc_ = ctx_.base().loc;
    ctx_.append_snapshot_edges(loc_, rest, v);
    if (!scratch_.acyclic(loc_)) {
      return false;
    }
    ++table_.stats.graphs_built;
    ++table_.stats.kahn_runs;
    mm_ = ctx_.base().mm;
    ctx_.append_snapshot_edges(mm_, rest, v);
    return scratch_.acyclic(mm_);
  }

  const CoherenceContext& ctx_;
  DpTable& table_;
  EventGraph loc_;
  EventGraph mm_;
  AcyclicityScratch scratch_;
};

}  // namespace detail

/**
 * Decides consistency of h under the derived model by evaluating the subset
 * table top-down from the full write set. Positive and negative entries are
 * memoized; candidate minima are tried in ascending write order, so the
 * witness is deterministic. A consistent verdict carries a re-verified tw.
 */
inline Verdict solve(const History& h, const DerivedModel& m, const SolveOptions& opts = {},
                     DpTable* table_out = nullptr) {
  const std::size_t k = h.k();
  if (k > opts.max_k || k > kMaxWriteBits) {
    throw Error(ErrorKind::KTooLarge, "history has k = " + std::to_string(k) + " writes, cap is " +
                                          std::to_string(std::min(opts.max_k, kMaxWriteBits)));
  }
  Verdict out;
  if (m.spec.requires_oota && !oota_check(h)) {
    out.diagnostics = "out-of-thin-air cycle in dp + rf: " +
                      describe_cycle(h, find_cycle(make_graph(h.n(), {h.dp(), h.rf()})));
    return out;
  }

  CoherenceContext ctx(h, m);
  DpTable table(k);
  table.stats.subsets_evaluated = 1;
  table.stats.kahn_runs = 2;
  table.stats.graphs_built = 2;
  AcyclicityScratch scratch;
  const bool loc_ok = scratch.acyclic(ctx.base().loc);
  const bool mm_ok = scratch.acyclic(ctx.base().mm);
  if (!loc_ok || !mm_ok) {
    table.set_inconsistent(WriteSubset{});
    const EventGraph& bad = loc_ok ? ctx.base().mm : ctx.base().loc;
    out.diagnostics = std::string("base graph ") + (loc_ok ? "G_mm" : "G_loc") +
                      " is cyclic: " + describe_cycle(h, find_cycle(bad));
    out.stats = table.stats;
    if (table_out != nullptr) {
      *table_out = std::move(table);
    }
    return out;
  }
  table.set_consistent(WriteSubset{}, 0);

  detail::SubsetSearch search(ctx, table);
  const bool ok = search.eval(WriteSubset::full(k));
  out.stats = table.stats;
  if (ok) {
    std::vector<EventId> tw = extract_witness(table, h);
    if (!verify_witness(h, m, tw)) {
      throw Error(ErrorKind::InternalWitnessInvalid, "reconstructed write order fails re-verification");
    }
    out.outcome = Outcome::Consistent;
    out.witness = std::move(tw);
  } else {
    out.diagnostics = "no total write order keeps both graphs acyclic (" +
                      std::to_string(out.stats.subsets_evaluated) + " subsets evaluated)";
  }
  if (table_out != nullptr) {
    *table_out = std::move(table);
  }
  return out;
}

inline Verdict solve(const History& h, const ModelSpec& spec, const SolveOptions& opts = {}) {
  return solve(h, derive(h, spec), opts);
}

}  // namespace mmcheck
