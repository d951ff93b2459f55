#pragma once

#include <vector>

#include "mmcheck/graph.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/models.hpp"

namespace mmcheck {

struct GraphPair {
  EventGraph loc;
  EventGraph mm;
};

/// The two order-free graphs: (po-loc + rf) and (po-mm + rf-mm).
inline GraphPair build_base_graphs(const History& h, const DerivedModel& m) {
  return {make_graph(h.n(), {m.po_loc_effective, h.rf()}), make_graph(h.n(), {m.po_mm, m.rf_mm})};
}

/**
 * Precomputed per-history data for emitting snapshot and conflict edges.
 *
 * For a subset V and a candidate minimum v, the snapshot edges put every
 * write outside V+{v} before every write in V+{v} and v before V. A read
 * conflicts with every same-variable write that the snapshot places after
 * the read's source.
 */
class CoherenceContext {
 public:
  CoherenceContext(const History& h, const DerivedModel& m)
      : writes_(h), n_(h.n()), base_(build_base_graphs(h, m)) {
    const std::size_t k = writes_.k();
    var_mask_.resize(h.var_count());
    write_var_.resize(k);
    readers_.resize(k);
    for (std::size_t b = 0; b < k; ++b) {
      VarId x = h.event(writes_.id(b)).var;
      write_var_[b] = x;
      var_mask_[x] |= std::uint64_t{1} << b;
    }
    for (EventId r : h.reads()) {
      readers_[writes_.bit(h.source_of(r))].push_back(r);
    }
  }

  const WriteIndex& writes() const noexcept { return writes_; }
  const GraphPair& base() const noexcept { return base_; }
  std::size_t n() const noexcept { return n_; }

  /// Appends the snapshot edges r[V,v] and conflict edges cf[V,v] to g.
  void append_snapshot_edges(EventGraph& g, WriteSubset subset, std::size_t vbit) const {
    const std::uint64_t upper = subset.mask | (std::uint64_t{1} << vbit);
    const std::uint64_t lower = WriteSubset::full(writes_.k()).mask & ~upper;
    const EventId v = writes_.id(vbit);
    for_each_bit(lower, [&](std::size_t a) {
      const EventId wa = writes_.id(a);
      for_each_bit(upper, [&](std::size_t b) { g.add_edge(wa, writes_.id(b)); });
      // Sources below the snapshot: their readers precede all later same-variable writes.
      const std::uint64_t after = upper & var_mask_[write_var_[a]];
      for (EventId r : readers_[a]) {
        for_each_bit(after, [&](std::size_t b) { g.add_edge(r, writes_.id(b)); });
      }
    });
    const std::uint64_t after_v = subset.mask & var_mask_[write_var_[vbit]];
    for_each_bit(subset.mask, [&](std::size_t b) { g.add_edge(v, writes_.id(b)); });
    for (EventId r : readers_[vbit]) {
      for_each_bit(after_v, [&](std::size_t b) { g.add_edge(r, writes_.id(b)); });
    }
  }

  GraphPair coherence_graphs(WriteSubset subset, std::size_t vbit) const {
    if (subset.contains(vbit)) {
      throw Error(ErrorKind::PreconditionViolated, "new minimum is already in the subset");
    }
    GraphPair out = base_;
    append_snapshot_edges(out.loc, subset, vbit);
    append_snapshot_edges(out.mm, subset, vbit);
    return out;
  }

 private:
  WriteIndex writes_;
  std::size_t n_;
  GraphPair base_;
  std::vector<std::uint64_t> var_mask_;
  std::vector<VarId> write_var_;
  std::vector<std::vector<EventId>> readers_;
};

/// Coherence graphs G_loc[V,v] and G_mm[V,v] for subset V and new minimum v.
inline GraphPair build_coherence_graphs(const History& h, const DerivedModel& m, WriteSubset subset, EventId v) {
  CoherenceContext ctx(h, m);
  return ctx.coherence_graphs(subset, ctx.writes().bit(v));
}

}  // namespace mmcheck
