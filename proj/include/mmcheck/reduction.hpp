#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/history.hpp"

// 3SAT to consistency: each variable gets two competing writers, each literal
// two guarded threads propagating the variable's value into the literal's
// own history variable, and each clause three reader threads that close a
// cycle exactly when all three of its literals end up false.

namespace mmcheck {

struct Literal {
  std::uint32_t var = 1;  // 1-based
  bool negated = false;

  friend constexpr bool operator==(const Literal&, const Literal&) = default;
  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

struct Cnf3 {
  std::uint32_t num_vars = 0;
  std::vector<std::array<Literal, 3>> clauses;

  /// Distinct literals occurring in some clause, ordered by variable then sign.
  std::vector<Literal> literals() const {
    std::set<Literal> seen;
    for (const auto& c : clauses) {
      seen.insert(c.begin(), c.end());
    }
    return {seen.begin(), seen.end()};
  }
};

inline Cnf3 parse_dimacs(std::string_view text) {
  Cnf3 cnf;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<Literal> pending;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c") {
      continue;
    }
    if (tok == "%") {
      break;
    }
    if (tok == "p") {
      std::string fmt;
      long long nv = -1;
      long long nc = -1;
      if (header || !(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0 || (ls >> tok)) {
        throw Error(ErrorKind::MalformedDimacs, "bad problem line", line_no);
      }
      header = true;
      cnf.num_vars = static_cast<std::uint32_t>(nv);
      declared_clauses = static_cast<std::size_t>(nc);
      continue;
    }
    if (!header) {
      throw Error(ErrorKind::MalformedDimacs, "clause before 'p cnf' header", line_no);
    }
    ls.clear();
    ls.str(line);
    while (ls >> tok) {
      long long lit = 0;
      std::size_t used = 0;
      try {
        lit = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw Error(ErrorKind::MalformedDimacs, "non-integer token '" + tok + "'", line_no);
      }
      if (lit == 0) {
        if (pending.size() != 3) {
          throw Error(ErrorKind::NotThreeSat, "clause with " + std::to_string(pending.size()) + " literals", line_no);
        }
        cnf.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
        continue;
      }
      const long long var = lit < 0 ? -lit : lit;
      if (var > cnf.num_vars) {
        throw Error(ErrorKind::MalformedDimacs, "variable " + std::to_string(var) + " out of range", line_no);
      }
      pending.push_back({static_cast<std::uint32_t>(var), lit < 0});
    }
  }
  if (!header) {
    throw Error(ErrorKind::MalformedDimacs, "missing 'p cnf' header");
  }
  if (!pending.empty()) {
    throw Error(ErrorKind::MalformedDimacs, "last clause is not terminated by 0");
  }
  if (cnf.clauses.size() != declared_clauses) {
    throw Error(ErrorKind::MalformedDimacs, "header declares " + std::to_string(declared_clauses) +
                                                " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

inline std::string format_dimacs(const Cnf3& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (const Literal& l : c) {
      out << (l.negated ? "-" : "") << l.var << ' ';
    }
    out << "0\n";
  }
  return out.str();
}

inline constexpr std::uint32_t kSatBruteForceMaxVars = 20;

inline bool satisfies(const Cnf3& cnf, std::uint32_t assignment) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (const Literal& l : c) {
      bool value = (assignment >> (l.var - 1)) & 1u;
      sat = sat || (value != l.negated);
    }
    if (!sat) {
      return false;
    }
  }
  return true;
}

inline bool sat_brute_force(const Cnf3& cnf) {
  if (cnf.num_vars > kSatBruteForceMaxVars) {
    throw Error(ErrorKind::TooManyVars, "brute force supports at most " + std::to_string(kSatBruteForceMaxVars) +
                                            " variables, got " + std::to_string(cnf.num_vars));
  }
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << cnf.num_vars); ++a) {
    if (satisfies(cnf, a)) {
      return true;
    }
  }
  return false;
}

namespace detail {

inline std::string var_name(std::uint32_t x) { return "x" + std::to_string(x); }
inline std::string literal_name(Literal l) { return (l.negated ? "n" : "p") + std::to_string(l.var); }

inline TraceOp rd(const std::string& var, Value v) { return {EventKind::Read, var, v, 0}; }
inline TraceOp wr(const std::string& var, Value v) { return {EventKind::Write, var, v, 0}; }

// c is the literal's value when its variable is 0, d when it is 1.
inline Value literal_low(Literal l) { return l.negated ? 1 : 0; }
inline Value literal_high(Literal l) { return l.negated ? 0 : 1; }

inline TraceDoc reduction_doc(const Cnf3& cnf, bool relaxed) {
  TraceDoc doc;
  for (std::uint32_t x = 1; x <= cnf.num_vars; ++x) {
    const std::string name = var_name(x);
    doc.threads.push_back({"T0_" + name, {wr(name, 0)}});
    doc.threads.push_back({"T1_" + name, {wr(name, 1)}});
  }
  for (const Literal& l : cnf.literals()) {
    const std::string x = var_name(l.var);
    const std::string lit = literal_name(l);
    const Value c = literal_low(l);
    const Value d = literal_high(l);
    if (relaxed) {
      doc.threads.push_back({"T0_" + lit, {rd(x, 0), wr(lit, c)}});
      doc.threads.push_back({"T1_" + lit, {rd(x, 1), wr(lit, d)}});
      doc.threads.push_back({"T0'_" + lit, {rd(lit, c), rd(x, 0)}});
      doc.threads.push_back({"T1'_" + lit, {rd(lit, d), rd(x, 1)}});
    } else {
      doc.threads.push_back({"T0_" + lit, {rd(x, 0), wr(lit, c), rd(x, 0)}});
      doc.threads.push_back({"T1_" + lit, {rd(x, 1), wr(lit, d), rd(x, 1)}});
    }
  }
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    // Thread i reads d[i-2] = 0 then d[i-1] = 1 over the clause's distinct
    // literals d, cyclically. With three distinct literals this is the plain
    // 3-cycle; a repeated literal must not get a thread of its own, since
    // [rd l 0; rd l 1] would force l true.
    std::vector<std::string> d;
    for (const Literal& l : cnf.clauses[j]) {
      const std::string name = literal_name(l);
      if (std::find(d.begin(), d.end(), name) == d.end()) {
        d.push_back(name);
      }
    }
    const std::size_t r = d.size();
    const std::string base = "C" + std::to_string(j + 1) + "_";
    for (std::size_t i = 1; i <= 3; ++i) {
      doc.threads.push_back({base + std::to_string(i), {rd(d[(i + 2 * r - 2) % r], 0), rd(d[(i - 1) % r], 1)}});
    }
  }
  return doc;
}

}  // namespace detail

/// History that is SC-consistent iff the formula is satisfiable.
inline History sat_to_history_sc(const Cnf3& cnf) { return build_history(detail::reduction_doc(cnf, false)); }

/// Variant without write-read or write-write po pairs, so SC, TSO and PSO agree on it.
inline History sat_to_history_relaxed(const Cnf3& cnf) { return build_history(detail::reduction_doc(cnf, true)); }

}  // namespace mmcheck
