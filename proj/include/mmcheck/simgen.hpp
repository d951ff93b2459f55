#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/models.hpp"

namespace mmcheck {

// Draws use `rng() % bound` on mt19937_64, whose output sequence is fixed by
// the standard, so seeded corpora are identical across toolchains.
using Rng = std::mt19937_64;

inline std::size_t draw(Rng& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }
inline bool coin(Rng& rng, unsigned percent) { return draw(rng, 100) < percent; }

inline std::string sim_var_name(std::size_t i) { return "x" + std::to_string(i); }

struct ProgramOp {
  EventKind kind = EventKind::Write;
  std::size_t var = 0;
  Value val = 0;  // writes only; reads are resolved by execution
};

struct RandomProgram {
  std::size_t threads = 2;
  std::size_t events_per_thread = 3;
  std::size_t vars = 2;
  std::uint64_t seed = 0;

  /// Thread bodies. Every write stores a fresh value for its variable; 0 is the initial value.
  std::vector<std::vector<ProgramOp>> generate() const {
    Rng rng(seed);
    std::vector<Value> next(vars, 1);
    std::vector<std::vector<ProgramOp>> body(threads);
    for (auto& t : body) {
      for (std::size_t i = 0; i < events_per_thread; ++i) {
        ProgramOp op;
        op.kind = coin(rng, 50) ? EventKind::Write : EventKind::Read;
        op.var = vars == 0 ? 0 : draw(rng, vars);
        if (op.kind == EventKind::Write) {
          op.val = next[op.var]++;
        }
        t.push_back(op);
      }
    }
    return body;
  }
};

/**
 * Operational machine state: shared memory plus store buffers. TSO keeps one
 * FIFO per thread, PSO one FIFO per (thread, variable), SC none. Reads take
 * the newest own buffered write to the variable, else memory.
 */
class MachineState {
 public:
  MachineState(ModelName model, std::size_t threads, std::size_t vars)
      : model_(model), memory_(vars, 0), pc_(threads, 0), tso_(threads), pso_(threads, std::vector<std::deque<Value>>(vars)) {}

  std::size_t pc(std::size_t t) const { return pc_[t]; }
  Value memory(std::size_t x) const { return memory_[x]; }

  struct Step {
    enum class Kind { Advance, Flush } kind;
    std::size_t thread;
    std::size_t var;  // PSO flushes only
  };

  std::vector<Step> enabled(const std::vector<std::vector<ProgramOp>>& prog) const {
    std::vector<Step> out;
    for (std::size_t t = 0; t < prog.size(); ++t) {
      if (pc_[t] < prog[t].size()) {
        out.push_back({Step::Kind::Advance, t, 0});
      }
    }
    for (std::size_t t = 0; t < prog.size(); ++t) {
      if (model_ == ModelName::TSO && !tso_[t].empty()) {
        out.push_back({Step::Kind::Flush, t, 0});
      }
      if (model_ == ModelName::PSO) {
        for (std::size_t x = 0; x < memory_.size(); ++x) {
          if (!pso_[t][x].empty()) {
            out.push_back({Step::Kind::Flush, t, x});
          }
        }
      }
    }
    return out;
  }

  /// Executes one instruction; returns the value it read or wrote.
  Value advance(std::size_t t, const ProgramOp& op) {
    ++pc_[t];
    if (op.kind == EventKind::Write) {
      switch (model_) {
        case ModelName::TSO: tso_[t].push_back({op.var, op.val}); break;
        case ModelName::PSO: pso_[t][op.var].push_back(op.val); break;
        default: memory_[op.var] = op.val; break;
      }
      return op.val;
    }
    if (model_ == ModelName::TSO) {
      for (auto it = tso_[t].rbegin(); it != tso_[t].rend(); ++it) {
        if (it->first == op.var) {
          return it->second;
        }
      }
    }
    if (model_ == ModelName::PSO && !pso_[t][op.var].empty()) {
      return pso_[t][op.var].back();
    }
    return memory_[op.var];
  }

  void flush(std::size_t t, std::size_t x) {
    if (model_ == ModelName::TSO) {
      auto [var, val] = tso_[t].front();
      tso_[t].pop_front();
      memory_[var] = val;
    } else {
      memory_[x] = pso_[t][x].front();
      pso_[t][x].pop_front();
    }
  }

 private:
  ModelName model_;
  std::vector<Value> memory_;
  std::vector<std::size_t> pc_;
  std::vector<std::deque<std::pair<std::size_t, Value>>> tso_;
  std::vector<std::vector<std::deque<Value>>> pso_;
};

/// Runs the program under SC, TSO or PSO with uniform random scheduling over enabled steps.
inline History simulate(const RandomProgram& prog, ModelName model, std::uint64_t seed) {
  if (model == ModelName::RMO) {
    throw Error(ErrorKind::UnknownModel, "no operational machine for rmo");
  }
  const auto body = prog.generate();
  MachineState state(model, body.size(), prog.vars);
  Rng rng(seed);
  TraceDoc doc;
  for (std::size_t x = 0; x < prog.vars; ++x) {
    doc.init.push_back({sim_var_name(x), 0, 0});
  }
  for (std::size_t t = 0; t < body.size(); ++t) {
    doc.threads.push_back({"T" + std::to_string(t), {}});
  }
  while (true) {
    auto steps = state.enabled(body);
    // Pending buffer entries no longer affect the history once every thread is done.
    bool running = false;
    for (std::size_t t = 0; t < body.size(); ++t) {
      running = running || state.pc(t) < body[t].size();
    }
    if (!running) {
      break;
    }
    const auto& step = steps[draw(rng, steps.size())];
    if (step.kind == MachineState::Step::Kind::Flush) {
      state.flush(step.thread, step.var);
      continue;
    }
    const ProgramOp& op = body[step.thread][state.pc(step.thread)];
    Value v = state.advance(step.thread, op);
    doc.threads[step.thread].ops.push_back({op.kind, sim_var_name(op.var), v, 0});
  }
  return build_history(doc);
}

/// Rewires one read to another writer of its variable, adopting that writer's value.
inline History mutate(const History& h, std::uint64_t seed) {
  std::vector<EventId> candidates;
  for (EventId r : h.reads()) {
    if (h.writes_on(h.event(r).var).size() >= 2) {
      candidates.push_back(r);
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::NoAlternativeWriter, "no read has a second candidate writer");
  }
  Rng rng(seed);
  const EventId r = candidates[draw(rng, candidates.size())];
  std::vector<EventId> alternatives;
  for (EventId w : h.writes_on(h.event(r).var)) {
    if (w != h.source_of(r)) {
      alternatives.push_back(w);
    }
  }
  const EventId w = alternatives[draw(rng, alternatives.size())];

  TraceDoc doc = to_trace_doc(h, true);
  const Event& re = h.event(r);
  const Event& we = h.event(w);
  const std::size_t first_thread = h.has_init() ? 1 : 0;
  doc.threads[re.thread - first_thread].ops[re.pos].val = we.val;
  for (TraceEdge& e : doc.rf) {
    if (e.to.thread == h.thread_names()[re.thread] && e.to.pos == re.pos) {
      e.from = {h.thread_names()[we.thread], we.pos};
    }
  }
  return build_history(doc);
}

/// Shape bounds for unstructured random histories (oracle-agreement corpora).
struct RandomHistoryParams {
  std::size_t max_threads = 3;
  std::size_t max_events = 8;   // including init writes
  std::size_t max_writes = 4;   // including init writes
  std::size_t max_vars = 2;
  unsigned init_percent = 50;
  unsigned dp_percent = 30;
};

/**
 * A random data-independent history: each read picks any same-variable
 * writer, wherever it sits. Dependency edges are drawn from po pairs that
 * start at a read.
 */
inline History random_history(const RandomHistoryParams& p, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t vars = 1 + draw(rng, p.max_vars);
  const bool init = coin(rng, p.init_percent) && vars <= p.max_writes && vars < p.max_events;
  TraceDoc doc;
  std::size_t budget_events = p.max_events;
  std::size_t budget_writes = p.max_writes;
  std::vector<Value> next(vars, 1);
  if (init) {
    for (std::size_t x = 0; x < vars; ++x) {
      doc.init.push_back({sim_var_name(x), 0, 0});
    }
    budget_events -= vars;
    budget_writes -= vars;
  }
  const std::size_t threads = 1 + draw(rng, p.max_threads);
  for (std::size_t t = 0; t < threads && budget_events > 0; ++t) {
    const std::size_t remaining_threads = threads - t;
    const std::size_t cap = std::max<std::size_t>(1, budget_events / remaining_threads + 1);
    const std::size_t len = 1 + draw(rng, std::min(cap, budget_events));
    TraceThread th{"T" + std::to_string(t), {}};
    for (std::size_t i = 0; i < len; ++i) {
      TraceOp op;
      op.var = sim_var_name(draw(rng, vars));
      op.kind = budget_writes > 0 && coin(rng, 50) ? EventKind::Write : EventKind::Read;
      if (op.kind == EventKind::Write) {
        --budget_writes;
        op.val = next[std::stoul(op.var.substr(1))]++;
      }
      th.ops.push_back(op);
    }
    budget_events -= len;
    doc.threads.push_back(std::move(th));
  }

  // Resolve reads against the writers that exist; reads with none become writes or go.
  std::vector<std::vector<Value>> written(vars);
  for (const InitWrite& w : doc.init) {
    written[std::stoul(w.var.substr(1))].push_back(w.val);
  }
  for (const auto& t : doc.threads) {
    for (const auto& op : t.ops) {
      if (op.kind == EventKind::Write) {
        written[std::stoul(op.var.substr(1))].push_back(op.val);
      }
    }
  }
  for (auto& t : doc.threads) {
    std::vector<TraceOp> kept;
    for (TraceOp op : t.ops) {
      if (op.kind == EventKind::Read) {
        auto& vals = written[std::stoul(op.var.substr(1))];
        if (vals.empty()) {
          if (budget_writes == 0) {
            continue;
          }
          --budget_writes;
          op.kind = EventKind::Write;
          op.val = next[std::stoul(op.var.substr(1))]++;
          vals.push_back(op.val);
        } else {
          op.val = vals[draw(rng, vals.size())];
        }
      }
      kept.push_back(op);
    }
    t.ops = std::move(kept);
  }

  for (const auto& t : doc.threads) {
    for (std::size_t i = 0; i < t.ops.size(); ++i) {
      if (t.ops[i].kind != EventKind::Read) {
        continue;
      }
      for (std::size_t j = i + 1; j < t.ops.size(); ++j) {
        if (coin(rng, p.dp_percent)) {
          doc.dp.push_back({{t.name, i}, {t.name, j}, 0});
        }
      }
    }
  }
  return build_history(doc);
}

}  // namespace mmcheck
