// colorbench: generate update traces, replay them through a coloring
// engine with periodic audits, and compare engines side by side.
//
// Exit codes: 0 ok, 1 audit failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dyncolor/harness.hpp"

namespace {

using namespace dyncolor;

struct TraceArgs {
  std::string trace_path;
  std::size_t n = 1000;
  std::uint32_t delta = 32;
  bool adaptive = false;
  std::uint64_t ops = 100000;
  std::uint64_t seed = 1;
  std::string mode = "uniform-random";
};

void add_spec_flags(CLI::App* cmd, TraceArgs& a) {
  cmd->add_option("--n", a.n, "Number of vertices");
  auto* delta = cmd->add_option("--delta", a.delta, "Degree bound");
  cmd->add_flag("--adaptive", a.adaptive, "No fixed degree bound; palettes follow live degrees")->excludes(delta);
  cmd->add_option("--ops", a.ops, "Number of updates");
  cmd->add_option("--seed", a.seed, "Generator seed (also seeds rand-vc)");
  cmd->add_option("--mode", a.mode, "uniform-random | insert-heavy | sliding-window | conflict-heavy");
}

TraceSpec spec_of(const TraceArgs& a) {
  TraceSpec s;
  s.n = a.n;
  if (!a.adaptive) s.delta = a.delta;
  s.ops = a.ops;
  s.seed = a.seed;
  s.mode = parse_mode(a.mode);
  return s;
}

// A trace file if one was given, otherwise one generated from the flags.
Trace load_trace(const TraceArgs& a) {
  if (a.trace_path.empty()) return generate(spec_of(a));
  std::ifstream in(a.trace_path);
  if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open trace '" + a.trace_path + "'");
  return parse_trace(in);
}

std::ostream* open_or_null(const std::string& path, std::ofstream& file) {
  if (path.empty()) return nullptr;
  if (path == "-") return &std::cout;
  file.open(path);
  if (!file) throw Error(ErrorCode::InvalidSpec, "cannot write '" + path + "'");
  return &file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic graph coloring benchmark"};
  app.require_subcommand(1);

  TraceArgs gen_args;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "Generate an update trace");
  add_spec_flags(gen, gen_args);
  gen->add_option("-o,--out", gen_out, "Output file ('-' for stdout)");

  TraceArgs run_args;
  RunOptions run_opt;
  std::string metrics_out, audit_out;
  bool rand_adaptive = false;
  auto* run_cmd = app.add_subcommand("run", "Replay a trace through one engine");
  run_cmd->add_option("trace", run_args.trace_path, "Trace file; omitted: generate from the flags");
  add_spec_flags(run_cmd, run_args);
  run_cmd->add_option("--engine", run_opt.engine, "rand-vc | det-vc | edge-c | greedy-baseline");
  run_cmd->add_option("--beta", run_opt.engine_options.beta, "Level base for rand-vc (>= 2)");
  run_cmd->add_option("--audit-every", run_opt.audit_every, "Audit after every k updates (0: only at the end)");
  run_cmd->add_option("--metrics-out", metrics_out, "Per-update CSV ('-' for stdout)");
  run_cmd->add_option("--audit-out", audit_out, "Audit JSON lines ('-' for stdout)");
  run_cmd->add_flag("--adaptive-palette", rand_adaptive, "rand-vc: keep χ(v) <= D_v + 1 on a fixed-bound trace");

  TraceArgs cmp_args;
  RunOptions cmp_opt;
  std::vector<std::string> engines;
  auto* cmp = app.add_subcommand("compare", "Replay a trace through several engines in parallel");
  cmp->add_option("trace", cmp_args.trace_path, "Trace file; omitted: generate from the flags");
  add_spec_flags(cmp, cmp_args);
  cmp->add_option("--engine", engines, "Engines to compare (repeatable; default: all)");
  cmp->add_option("--beta", cmp_opt.engine_options.beta, "Level base for rand-vc (>= 2)");
  cmp->add_option("--audit-every", cmp_opt.audit_every, "Audit after every k updates (0: only at the end)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const Trace t = generate(spec_of(gen_args));
      std::ofstream file;
      std::ostream* out = open_or_null(gen_out, file);
      print_trace(*out, t);
      return 0;
    }
    if (*run_cmd) {
      const Trace t = load_trace(run_args);
      run_opt.engine_options.seed = run_args.seed;
      run_opt.engine_options.adaptive = rand_adaptive;
      std::ofstream metrics_file, audit_file;
      std::ostream* metrics = open_or_null(metrics_out, metrics_file);
      std::ostream* audits = open_or_null(audit_out, audit_file);
      const RunSummary s = run(t, run_opt, metrics, audits);
      print_summary_table(metrics == &std::cout || audits == &std::cout ? std::cerr : std::cout, {s});
      if (!s.passed()) {
        std::cerr << "audit failed (" << s.failed_audits << " of " << s.audits << " audits)\n";
        for (std::size_t i = 0; i < s.final_audit.violations.size() && i < 10; ++i) {
          const auto& v = s.final_audit.violations[i];
          std::cerr << "  " << v.check << ' ' << v.subject << " observed=" << v.observed << " bound=" << v.bound << '\n';
        }
        return 1;
      }
      return 0;
    }
    if (*cmp) {
      const Trace t = load_trace(cmp_args);
      cmp_opt.engine_options.seed = cmp_args.seed;
      if (engines.empty()) {
        for (const char* name : kEngineNames)
          if (!(t.bound().is_adaptive() && std::string(name) == "det-vc")) engines.emplace_back(name);
      }
      const auto rows = compare(t, engines, cmp_opt);
      print_summary_table(std::cout, rows);
      for (const auto& r : rows)
        if (!r.passed()) return 1;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
