#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/relation.hpp"

namespace mmcheck {

using ThreadId = std::uint32_t;
using VarId = std::uint32_t;
using Value = std::uint64_t;

inline constexpr std::string_view kInitThreadName = "init";

enum class EventKind : std::uint8_t { Write, Read };

struct Event {
  EventId id = 0;
  ThreadId thread = 0;
  std::uint32_t pos = 0;
  EventKind kind = EventKind::Write;
  VarId var = 0;
  Value val = 0;
  bool is_init = false;

  bool is_write() const noexcept { return kind == EventKind::Write; }
  bool is_read() const noexcept { return kind == EventKind::Read; }
};

// ---------------------------------------------------------------------------
// Trace documents: the syntactic form of a history before validation.
// ---------------------------------------------------------------------------

struct TraceOp {
  EventKind kind = EventKind::Write;
  std::string var;
  Value val = 0;
  std::size_t line = 0;
};

struct TraceThread {
  std::string name;
  std::vector<TraceOp> ops;
};

struct EventRef {
  std::string thread;
  std::size_t pos = 0;
};

struct TraceEdge {
  EventRef from;
  EventRef to;
  std::size_t line = 0;
};

struct InitWrite {
  std::string var;
  Value val = 0;
  std::size_t line = 0;
};

struct TraceDoc {
  std::vector<InitWrite> init;
  std::vector<TraceThread> threads;
  std::vector<TraceEdge> rf;
  std::vector<TraceEdge> dp;
};

class History;
History build_history(const TraceDoc& doc);

/**
 * An execution trace: events, program order, reads-from and an optional
 * dependency relation. Built only through build_history(), which enforces
 * data-independence and the structural invariants. Immutable afterwards.
 */
class History {
 public:
  History() = default;

  std::size_t n() const noexcept { return events_.size(); }
  std::size_t k() const noexcept { return writes_.size(); }

  const std::vector<Event>& events() const noexcept { return events_; }
  const Event& event(EventId id) const { return events_.at(id); }

  /// Write event ids, ascending.
  const std::vector<EventId>& writes() const noexcept { return writes_; }
  const std::vector<EventId>& reads() const noexcept { return reads_; }

  const Relation& po() const noexcept { return po_; }
  const Relation& rf() const noexcept { return rf_; }
  const Relation& dp() const noexcept { return dp_; }

  bool has_init() const noexcept { return has_init_; }
  bool rf_explicit() const noexcept { return rf_explicit_; }

  const std::vector<std::string>& thread_names() const noexcept { return thread_names_; }
  const std::vector<std::string>& var_names() const noexcept { return var_names_; }
  const std::string& var_name(VarId v) const { return var_names_.at(v); }
  std::size_t var_count() const noexcept { return var_names_.size(); }

  /// The write that a read takes its value from.
  EventId source_of(EventId read) const { return rf_.predecessors(read).front(); }

  /// Writes on `var`, ascending.
  const std::vector<EventId>& writes_on(VarId var) const { return writes_by_var_.at(var); }

  /// `<thread>:<pos>` reference used by the trace format.
  std::string ref(EventId id) const {
    const Event& e = events_.at(id);
    return thread_names_[e.thread] + ":" + std::to_string(e.pos);
  }

 private:
  friend History build_history(const TraceDoc& doc);

  std::vector<Event> events_;
  std::vector<EventId> writes_;
  std::vector<EventId> reads_;
  std::vector<std::vector<EventId>> writes_by_var_;
  std::vector<std::string> thread_names_;
  std::vector<std::string> var_names_;
  Relation po_;
  Relation rf_;
  Relation dp_;
  bool has_init_ = false;
  bool rf_explicit_ = false;
};

namespace detail {

// Reads-from by value lookup; the unique (var, val) writer sources each read.
inline Relation infer_rf_from_events(const std::vector<Event>& events,
                                     const std::vector<std::string>& thread_names) {
  std::map<std::pair<VarId, Value>, EventId> writer;
  for (const Event& e : events) {
    if (e.is_write()) {
      writer.emplace(std::make_pair(e.var, e.val), e.id);
    }
  }
  std::vector<Edge> out;
  for (const Event& e : events) {
    if (!e.is_read()) {
      continue;
    }
    auto it = writer.find({e.var, e.val});
    if (it == writer.end()) {
      throw Error(ErrorKind::UnsourcedRead, "read " + thread_names[e.thread] + ":" +
                                                std::to_string(e.pos) + " of value " +
                                                std::to_string(e.val) + " has no writer");
    }
    out.push_back({it->second, e.id});
  }
  return Relation(events.size(), std::move(out));
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) {
    return false;
  }
  for (char c : s) {
    if (!alpha(c) && !digit(c)) {
      return false;
    }
  }
  return true;
}

inline bool is_thread_name(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (c == ':' || c == '#' || static_cast<unsigned char>(c) <= ' ') {
      return false;
    }
  }
  return true;
}

inline std::optional<Value> parse_value(std::string_view s) {
  Value v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) {
      ++j;
    }
    if (j > i) {
      out.push_back(s.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

inline EventRef parse_ref(std::string_view s, std::size_t line) {
  auto colon = s.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::Syntax, "expected <thread>:<pos>, got '" + std::string(s) + "'", line);
  }
  auto pos = parse_value(s.substr(colon + 1));
  std::string_view thread = s.substr(0, colon);
  if (!pos || !is_thread_name(thread)) {
    throw Error(ErrorKind::Syntax, "malformed event reference '" + std::string(s) + "'", line);
  }
  return EventRef{std::string(thread), static_cast<std::size_t>(*pos)};
}

}  // namespace detail

/// Reads-from recomputed from values alone, whatever rf the history carries.
inline Relation infer_rf(const History& h) {
  return detail::infer_rf_from_events(h.events(), h.thread_names());
}

inline History build_history(const TraceDoc& doc) {
  History h;
  std::unordered_map<std::string, VarId> var_ids;
  auto var_id = [&](const std::string& name) {
    auto [it, inserted] = var_ids.emplace(name, static_cast<VarId>(h.var_names_.size()));
    if (inserted) {
      h.var_names_.push_back(name);
    }
    return it->second;
  };

  std::unordered_map<std::string, ThreadId> thread_ids;
  std::vector<EventId> thread_first;
  std::vector<std::size_t> thread_len;
  std::map<std::pair<VarId, Value>, std::size_t> value_line;

  auto push_event = [&](ThreadId t, std::uint32_t pos, EventKind kind, const std::string& var,
                        Value val, bool is_init, std::size_t line) {
    Event e;
    e.id = static_cast<EventId>(h.events_.size());
    e.thread = t;
    e.pos = pos;
    e.kind = kind;
    e.var = var_id(var);
    e.val = val;
    e.is_init = is_init;
    if (kind == EventKind::Write) {
      auto [it, inserted] = value_line.emplace(std::make_pair(e.var, val), line);
      if (!inserted) {
        throw Error(ErrorKind::DuplicateValue,
                    "value " + std::to_string(val) + " written twice to '" + var + "'", line);
      }
    }
    h.events_.push_back(e);
  };

  if (!doc.init.empty()) {
    h.has_init_ = true;
    thread_ids.emplace(std::string(kInitThreadName), 0);
    h.thread_names_.emplace_back(kInitThreadName);
    thread_first.push_back(0);
    thread_len.push_back(doc.init.size());
    for (std::size_t i = 0; i < doc.init.size(); ++i) {
      const InitWrite& w = doc.init[i];
      push_event(0, static_cast<std::uint32_t>(i), EventKind::Write, w.var, w.val, true, w.line);
    }
  }

  for (const TraceThread& t : doc.threads) {
    if (t.name == kInitThreadName || !detail::is_thread_name(t.name)) {
      throw Error(ErrorKind::Syntax, "invalid thread name '" + t.name + "'");
    }
    auto tid = static_cast<ThreadId>(h.thread_names_.size());
    if (!thread_ids.emplace(t.name, tid).second) {
      throw Error(ErrorKind::Syntax, "duplicate thread '" + t.name + "'");
    }
    h.thread_names_.push_back(t.name);
    thread_first.push_back(static_cast<EventId>(h.events_.size()));
    thread_len.push_back(t.ops.size());
    for (std::size_t i = 0; i < t.ops.size(); ++i) {
      const TraceOp& op = t.ops[i];
      if (!detail::is_identifier(op.var)) {
        throw Error(ErrorKind::Syntax, "invalid variable name '" + op.var + "'", op.line);
      }
      push_event(tid, static_cast<std::uint32_t>(i), op.kind, op.var, op.val, false, op.line);
    }
  }

  const std::size_t n = h.events_.size();
  h.writes_by_var_.resize(h.var_names_.size());
  for (const Event& e : h.events_) {
    if (e.is_write()) {
      h.writes_.push_back(e.id);
      h.writes_by_var_[e.var].push_back(e.id);
    } else {
      h.reads_.push_back(e.id);
    }
  }

  // Program order: total within each thread, init writes before everything else.
  std::vector<Edge> po;
  for (std::size_t t = 0; t < thread_first.size(); ++t) {
    for (std::size_t i = 0; i < thread_len[t]; ++i) {
      for (std::size_t j = i + 1; j < thread_len[t]; ++j) {
        po.push_back({static_cast<EventId>(thread_first[t] + i), static_cast<EventId>(thread_first[t] + j)});
      }
    }
  }
  if (h.has_init_) {
    for (std::size_t i = 0; i < doc.init.size(); ++i) {
      for (EventId o = static_cast<EventId>(doc.init.size()); o < n; ++o) {
        po.push_back({static_cast<EventId>(i), o});
      }
    }
  }
  h.po_ = Relation(n, std::move(po));

  auto resolve = [&](const EventRef& r, std::size_t line) -> EventId {
    auto it = thread_ids.find(r.thread);
    if (it == thread_ids.end() || r.pos >= thread_len[it->second]) {
      throw Error(ErrorKind::DanglingRef, "no event " + r.thread + ":" + std::to_string(r.pos), line);
    }
    return static_cast<EventId>(thread_first[it->second] + r.pos);
  };

  if (!doc.rf.empty()) {
    h.rf_explicit_ = true;
    std::vector<Edge> rf;
    std::vector<char> covered(n, 0);
    for (const TraceEdge& te : doc.rf) {
      EventId w = resolve(te.from, te.line);
      EventId r = resolve(te.to, te.line);
      const Event& we = h.events_[w];
      const Event& re = h.events_[r];
      if (!we.is_write() || !re.is_read() || we.var != re.var || we.val != re.val) {
        throw Error(ErrorKind::AmbiguousRf,
                    "rf " + h.ref(w) + " -> " + h.ref(r) + " does not link a write to a read of its value",
                    te.line);
      }
      if (covered[r]) {
        throw Error(ErrorKind::AmbiguousRf, "read " + h.ref(r) + " has more than one rf source", te.line);
      }
      covered[r] = 1;
      rf.push_back({w, r});
    }
    for (EventId r : h.reads_) {
      if (!covered[r]) {
        throw Error(ErrorKind::UnsourcedRead, "read " + h.ref(r) + " lacks an rf line");
      }
    }
    h.rf_ = Relation(n, std::move(rf));
  } else {
    h.rf_ = detail::infer_rf_from_events(h.events_, h.thread_names_);
  }

  std::vector<Edge> dp;
  for (const TraceEdge& te : doc.dp) {
    EventId a = resolve(te.from, te.line);
    EventId b = resolve(te.to, te.line);
    if (!h.events_[a].is_read() || !h.po_.contains(a, b)) {
      throw Error(ErrorKind::InvalidDp,
                  "dp " + h.ref(a) + " -> " + h.ref(b) + " must start at a read and follow program order",
                  te.line);
    }
    dp.push_back({a, b});
  }
  h.dp_ = Relation(n, std::move(dp));
  return h;
}

/// Parses the line-oriented `.mmh` trace format into a document (no validation).
inline TraceDoc parse_trace_doc(std::string_view text) {
  TraceDoc doc;
  TraceThread* current = nullptr;
  bool seen_init = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    std::string_view head = tokens[0];
    if (head.starts_with("init:")) {
      if (seen_init || !doc.threads.empty()) {
        throw Error(ErrorKind::Syntax, "init line must appear once, before any thread", line_no);
      }
      seen_init = true;
      std::vector<std::string_view> assigns(tokens.begin() + 1, tokens.end());
      if (head.size() > 5) {
        assigns.insert(assigns.begin(), head.substr(5));
      }
      for (std::string_view a : assigns) {
        auto eq = a.find('=');
        if (eq == std::string_view::npos) {
          throw Error(ErrorKind::Syntax, "expected <var>=<val>, got '" + std::string(a) + "'", line_no);
        }
        std::string var(a.substr(0, eq));
        auto val = detail::parse_value(a.substr(eq + 1));
        if (!detail::is_identifier(var) || !val) {
          throw Error(ErrorKind::Syntax, "malformed init assignment '" + std::string(a) + "'", line_no);
        }
        for (const InitWrite& w : doc.init) {
          if (w.var == var) {
            throw Error(ErrorKind::Syntax, "variable '" + var + "' initialised twice", line_no);
          }
        }
        doc.init.push_back({var, *val, line_no});
      }
    } else if (head == "thread") {
      if (tokens.size() != 2 || !detail::is_thread_name(tokens[1]) || tokens[1] == kInitThreadName) {
        throw Error(ErrorKind::Syntax, "expected 'thread <name>'", line_no);
      }
      for (const TraceThread& t : doc.threads) {
        if (t.name == tokens[1]) {
          throw Error(ErrorKind::Syntax, "duplicate thread '" + t.name + "'", line_no);
        }
      }
      doc.threads.push_back({std::string(tokens[1]), {}});
      current = &doc.threads.back();
    } else if (head == "wr" || head == "rd") {
      if (current == nullptr) {
        throw Error(ErrorKind::Syntax, "event outside of a thread block", line_no);
      }
      auto val = tokens.size() == 3 ? detail::parse_value(tokens[2]) : std::nullopt;
      if (tokens.size() != 3 || !detail::is_identifier(tokens[1]) || !val) {
        throw Error(ErrorKind::Syntax, "expected '" + std::string(head) + " <var> <val>'", line_no);
      }
      current->ops.push_back(
          {head == "wr" ? EventKind::Write : EventKind::Read, std::string(tokens[1]), *val, line_no});
    } else if (head == "rf" || head == "dp") {
      std::string rest;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        rest += tokens[i];
      }
      auto arrow = rest.find("->");
      if (arrow == std::string::npos || rest.find("->", arrow + 2) != std::string::npos) {
        throw Error(ErrorKind::Syntax, "expected '" + std::string(head) + " <ref> -> <ref>'", line_no);
      }
      TraceEdge e{detail::parse_ref(std::string_view(rest).substr(0, arrow), line_no),
                  detail::parse_ref(std::string_view(rest).substr(arrow + 2), line_no), line_no};
      (head == "rf" ? doc.rf : doc.dp).push_back(std::move(e));
    } else {
      throw Error(ErrorKind::Syntax, "unrecognised line '" + std::string(line) + "'", line_no);
    }
    if (end == text.size()) {
      break;
    }
  }
  return doc;
}

inline History parse_history(std::string_view text) { return build_history(parse_trace_doc(text)); }

/// The document a history was built from, with rf lines included iff `explicit_rf`.
inline TraceDoc to_trace_doc(const History& h, bool explicit_rf) {
  TraceDoc doc;
  for (const Event& e : h.events()) {
    if (e.is_init) {
      doc.init.push_back({h.var_name(e.var), e.val, 0});
    }
  }
  const std::size_t first_thread = h.has_init() ? 1 : 0;
  for (std::size_t t = first_thread; t < h.thread_names().size(); ++t) {
    doc.threads.push_back({h.thread_names()[t], {}});
  }
  for (const Event& e : h.events()) {
    if (!e.is_init) {
      doc.threads[e.thread - first_thread].ops.push_back({e.kind, h.var_name(e.var), e.val, 0});
    }
  }
  auto to_ref = [&](EventId id) {
    const Event& e = h.event(id);
    return EventRef{h.thread_names()[e.thread], e.pos};
  };
  if (explicit_rf) {
    for (EventId r : h.reads()) {
      doc.rf.push_back({to_ref(h.source_of(r)), to_ref(r), 0});
    }
  }
  for (const Edge& e : h.dp().pairs()) {
    doc.dp.push_back({to_ref(e.from), to_ref(e.to), 0});
  }
  return doc;
}

inline std::string format_trace(const TraceDoc& doc) {
  std::ostringstream out;
  if (!doc.init.empty()) {
    out << "init:";
    for (const InitWrite& w : doc.init) {
      out << ' ' << w.var << '=' << w.val;
    }
    out << '\n';
  }
  for (const TraceThread& t : doc.threads) {
    out << "thread " << t.name << '\n';
    for (const TraceOp& op : t.ops) {
      out << "  " << (op.kind == EventKind::Write ? "wr " : "rd ") << op.var << ' ' << op.val << '\n';
    }
  }
  for (const TraceEdge& e : doc.rf) {
    out << "rf " << e.from.thread << ':' << e.from.pos << " -> " << e.to.thread << ':' << e.to.pos << '\n';
  }
  for (const TraceEdge& e : doc.dp) {
    out << "dp " << e.from.thread << ':' << e.from.pos << " -> " << e.to.thread << ':' << e.to.pos << '\n';
  }
  return out.str();
}

inline std::string format_trace(const History& h) { return format_trace(to_trace_doc(h, h.rf_explicit())); }

/// po restricted to same-variable pairs; with `llh`, read-read pairs are dropped too.
inline Relation po_loc(const History& h, bool llh) {
  return h.po().filter([&](const Edge& e) {
    const Event& a = h.event(e.from);
    const Event& b = h.event(e.to);
    return a.var == b.var && !(llh && a.is_read() && b.is_read());
  });
}

/// Per-variable family {a_x}, indexed by variable id.
inline std::vector<Relation> restrict_var(const Relation& a, const History& h) {
  std::vector<std::vector<Edge>> parts(h.var_count());
  for (const Edge& e : a.pairs()) {
    VarId x = h.event(e.from).var;
    if (h.event(e.to).var == x) {
      parts[x].push_back(e);
    }
  }
  std::vector<Relation> out;
  out.reserve(parts.size());
  for (auto& p : parts) {
    out.emplace_back(h.n(), std::move(p));
  }
  return out;
}

}  // namespace mmcheck
