#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmcheck/mmcheck.hpp"

namespace mmcheck::cli {

// Exit codes are the scripting contract.
inline constexpr int kExitConsistent = 0;
inline constexpr int kExitInconsistent = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

struct CheckReport {
  Verdict verdict;
  std::string model;
  std::size_t k = 0;
  std::size_t n = 0;
  double elapsed_ms = 0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Syntax, "cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error(ErrorKind::Syntax, "cannot write '" + path + "'");
  }
  f << text;
}

inline std::string format_witness(const History& h, const std::vector<EventId>& tw) {
  std::string s = "tw:";
  for (std::size_t i = 0; i < tw.size(); ++i) {
    s += (i == 0 ? " " : " < ") + h.ref(tw[i]);
  }
  return s;
}

inline void print_report(const CheckReport& r, const History& h, bool witness, bool stats, std::ostream& out) {
  out << "verdict: " << to_string(r.verdict.outcome) << '\n';
  out << "model: " << r.model << '\n';
  out << "k: " << r.k << '\n';
  out << "n: " << r.n << '\n';
  if (witness && r.verdict.witness) {
    out << format_witness(h, *r.verdict.witness) << '\n';
  }
  if (!r.verdict.consistent() && r.verdict.diagnostics) {
    out << "diagnostics: " << *r.verdict.diagnostics << '\n';
  }
  if (stats) {
    out << "subsets: " << r.verdict.stats.subsets_evaluated << '\n';
    out << "graphs: " << r.verdict.stats.graphs_built << '\n';
    out << "elapsed_ms: " << std::fixed << std::setprecision(3) << r.elapsed_ms << '\n';
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-model consistency checker for data-independent traces", "mmcheck"};
  app.require_subcommand(1);

  std::string trace_path;
  std::string model_name = "sc";
  bool want_witness = false;
  bool want_stats = false;
  std::size_t max_k = SolveOptions{}.max_k;
  std::string oracle_mode = "total";

  auto add_check_flags = [&](CLI::App* sub) {
    sub->add_option("trace", trace_path, "trace file (.mmh)")->required();
    sub->add_option("--model", model_name, "sc, tso, pso or rmo (case-insensitive)");
    sub->add_flag("--witness", want_witness, "print the total write order when consistent");
    sub->add_option("--max-k", max_k, "refuse histories with more writes than this");
    sub->add_flag("--stats", want_stats, "print subset and timing counters");
  };
  CLI::App* check = app.add_subcommand("check", "decide consistency with the subset solver");
  add_check_flags(check);
  CLI::App* oracle = app.add_subcommand("oracle", "decide consistency by brute-force enumeration");
  add_check_flags(oracle);
  oracle->add_option("--oracle-mode", oracle_mode, "total or store");

  CLI::App* gen = app.add_subcommand("gen", "generate traces");
  gen->require_subcommand(1);
  std::string output_path;
  std::string variant = "sc";
  std::string cnf_path;
  CLI::App* gen_sat = gen->add_subcommand("sat", "compile a 3-CNF formula into a trace");
  gen_sat->add_option("--variant", variant, "sc or relaxed");
  gen_sat->add_option("cnf", cnf_path, "DIMACS file")->required();
  gen_sat->add_option("-o,--output", output_path, "output path (default stdout)");

  RandomProgram prog;
  std::string gen_model = "sc";
  CLI::App* gen_random = gen->add_subcommand("random", "simulate a random program");
  gen_random->add_option("--model", gen_model, "sc, tso or pso");
  gen_random->add_option("--threads", prog.threads, "thread count");
  gen_random->add_option("--events", prog.events_per_thread, "events per thread");
  gen_random->add_option("--vars", prog.vars, "variable count");
  gen_random->add_option("--seed", prog.seed, "random seed");
  gen_random->add_option("-o,--output", output_path, "output path (default stdout)");

  std::uint64_t mutate_seed = 0;
  CLI::App* mut = app.add_subcommand("mutate", "rewire one read to a different writer");
  mut->add_option("--seed", mutate_seed, "random seed");
  mut->add_option("trace", trace_path, "trace file (.mmh)")->required();
  mut->add_option("-o,--output", output_path, "output path (default stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed() || oracle->parsed()) {
      ModelSpec spec = ModelSpec::parse(model_name);
      if (oracle->parsed() && oracle_mode != "total" && oracle_mode != "store") {
        err << "error: --oracle-mode must be 'total' or 'store'\n";
        return kExitUsage;
      }
      History h = parse_history(read_file(trace_path));
      DerivedModel m = derive(h, spec);
      for (const std::string& w : m.warnings) {
        err << "warning: " << w << '\n';
      }
      CheckReport report;
      report.model = std::string(to_string(spec.name));
      report.k = h.k();
      report.n = h.n();
      auto start = std::chrono::steady_clock::now();
      if (check->parsed()) {
        report.verdict = solve(h, m, SolveOptions{max_k});
      } else if (oracle_mode == "total") {
        report.verdict = oracle_total(h, m);
      } else {
        report.verdict = oracle_store(h, m).verdict;
      }
      report.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      print_report(report, h, want_witness, want_stats, out);
      return report.verdict.consistent() ? kExitConsistent : kExitInconsistent;
    }
    if (gen_sat->parsed()) {
      if (variant != "sc" && variant != "relaxed") {
        err << "error: --variant must be 'sc' or 'relaxed'\n";
        return kExitUsage;
      }
      Cnf3 cnf = parse_dimacs(read_file(cnf_path));
      History h = variant == "sc" ? sat_to_history_sc(cnf) : sat_to_history_relaxed(cnf);
      write_output(format_trace(h), output_path, out);
      return 0;
    }
    if (gen_random->parsed()) {
      ModelSpec spec = ModelSpec::parse(gen_model);
      if (spec.name == ModelName::RMO) {
        err << "error: random generation supports sc, tso and pso only\n";
        return kExitUsage;
      }
      write_output(format_trace(simulate(prog, spec.name, prog.seed)), output_path, out);
      return 0;
    }
    if (mut->parsed()) {
      History h = parse_history(read_file(trace_path));
      write_output(format_trace(mutate(h, mutate_seed)), output_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_resource_error(e.kind()) ? kExitResource : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mmcheck::cli
