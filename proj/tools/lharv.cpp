#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lharv/textio.hpp"

using namespace lharv;

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int drain(const DiagnosticSink& sink) {
  for (const Diagnostic& d : sink.items())
    std::cerr << format_diagnostic(d) << "\n";
  return 2;
}

struct Inputs {
  Network net;
  PathSet ps;
  ReachSpec spec;
};

/// Returns nothing after printing diagnostics; exit code is always 2 then.
std::optional<Inputs> load(const std::string& model_path,
                           const std::string& paths_path,
                           const std::string& spec_path) {
  DiagnosticSink sink;
  Inputs in;

  std::optional<std::string> model_text = read_file(model_path);
  if (!model_text) {
    std::cerr << "cannot read '" << model_path << "'\n";
    return std::nullopt;
  }
  std::optional<Network> net = parse_network(*model_text, model_path, sink);
  if (!net) {
    drain(sink);
    return std::nullopt;
  }
  in.net = std::move(*net);

  std::optional<std::string> paths_text = read_file(paths_path);
  if (!paths_text) {
    std::cerr << "cannot read '" << paths_path << "'\n";
    return std::nullopt;
  }
  std::optional<PathSet> ps =
      parse_pathset(*paths_text, paths_path, in.net, sink);
  if (!ps) {
    drain(sink);
    return std::nullopt;
  }
  in.ps = std::move(*ps);

  if (!spec_path.empty()) {
    std::optional<std::string> spec_text = read_file(spec_path);
    if (!spec_text) {
      std::cerr << "cannot read '" << spec_path << "'\n";
      return std::nullopt;
    }
    std::optional<ReachSpec> spec =
        parse_spec(*spec_text, spec_path, in.net, sink);
    if (!spec) {
      drain(sink);
      return std::nullopt;
    }
    in.spec = std::move(*spec);
  }
  return in;
}

bool solve_options_from(const std::string& mode, const std::string& epsilon,
                        SolveOptions& opt) {
  opt.mode = mode == "float" ? SolveMode::Float : SolveMode::Exact;
  if (!epsilon.empty()) {
    std::optional<Rat> eps = parse_rat(epsilon);
    if (!eps || *eps <= 0) {
      std::cerr << "epsilon must be a positive rational, got '" << epsilon
                << "'\n";
      return false;
    }
    opt.epsilon = *eps;
  }
  return true;
}

int run_check(const std::string& model_path, const std::string& paths_path,
              const std::string& spec_path, const SolveOptions& opt,
              const std::string& witness_path, const std::string& dump_path) {
  std::optional<Inputs> in = load(model_path, paths_path, spec_path);
  if (!in) return 2;

  CheckResult res = check_reachability(in->net, in->ps, in->spec, opt);
  for (const Diagnostic& d : res.diags)
    std::cerr << format_diagnostic(d) << "\n";

  std::cout << "verdict: " << verdict_str(res.verdict) << "\n"
            << "constraints: " << res.n_rows << "\n"
            << "variables: " << res.n_vars << "\n";

  if (res.verdict != VerdictKind::Inconsistent &&
      (!witness_path.empty() || !dump_path.empty())) {
    AlignOutcome aligned = align_occurrences(in->net, in->ps);
    if (aligned.skeleton) {
      if (!dump_path.empty()) {
        LinearSystem sys =
            encode(in->net, in->ps, *aligned.skeleton, in->spec);
        std::ofstream out(dump_path, std::ios::binary);
        out << dump_system(sys);
      }
      if (!witness_path.empty() && res.witness) {
        std::ofstream out(witness_path, std::ios::binary);
        out << emit_witness(*res.witness, *aligned.skeleton);
      }
    }
  }

  switch (res.verdict) {
    case VerdictKind::Unreachable: return 0;
    case VerdictKind::Reachable: return 1;
    default: return 2;
  }
}

int run_explain(const std::string& model_path, const std::string& paths_path) {
  std::optional<Inputs> in = load(model_path, paths_path, "");
  if (!in) return 2;

  AlignOutcome aligned = align_occurrences(in->net, in->ps);
  if (!aligned.skeleton) {
    for (const Diagnostic& d : aligned.diags)
      std::cerr << format_diagnostic(d) << "\n";
    return 2;
  }
  for (const SyncEvent& ev : aligned.skeleton->events) {
    std::cout << "event " << ev.label << " occurrence " << ev.occurrence
              << ":";
    for (const auto& [comp, pos] : ev.positions)
      std::cout << " " << in->net.automata[comp].name << "@" << pos;
    std::cout << "\n";
  }
  LinearSystem sys = encode(in->net, in->ps, *aligned.skeleton, ReachSpec{});
  std::cout << dump_system(sys);
  return 0;
}

int run_bench(const std::vector<std::size_t>& trains, std::size_t reps,
              const SolveOptions& opt) {
  std::vector<BenchRow> rows = bench(trains, reps, opt);
  bool all_clean = true;
  for (const BenchRow& row : rows) {
    std::cout << format_bench_row(row) << "\n";
    all_clean = all_clean && row.all_unreachable;
  }
  return all_clean ? 0 : 1;
}

int run_monitor(const std::string& input, double deadline_ms,
                const SolveOptions& opt) {
  std::ifstream file;
  if (input != "-") {
    file.open(input, std::ios::binary);
    if (!file) {
      std::cerr << "cannot read '" << input << "'\n";
      return 2;
    }
  }
  std::istream& is = input == "-" ? std::cin : file;

  DiagnosticSink sink;
  bool any_reachable = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string trimmed = line;
    while (!trimmed.empty() &&
           (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed.empty()) continue;

    DiagnosticSink line_sink;
    std::optional<CycleRecord> rec =
        parse_cycle_record(trimmed, lineno, input, line_sink);
    if (!rec) {
      for (const Diagnostic& d : line_sink.items())
        std::cerr << format_diagnostic(d) << "\n";
      MonitorVerdict v;
      v.result = VerdictKind::Inconsistent;
      std::cout << format_monitor_verdict(v) << std::endl;
      continue;
    }
    MonitorVerdict v = monitor_step(*rec, deadline_ms, opt);
    std::cout << format_monitor_verdict(v) << std::endl;
    if (v.result == VerdictKind::Reachable) any_reachable = true;
  }
  return any_reachable ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"path-oriented reachability checking for compositions of "
               "linear hybrid automata with readable shared variables"};
  app.require_subcommand(1);

  std::string model_path, paths_path, spec_path;
  std::string mode = "exact", epsilon, witness_path, dump_path;
  std::vector<std::size_t> trains = {8, 10, 12, 14, 16};
  std::size_t reps = 20;
  std::string input = "-";
  double deadline_ms = 500.0;
  std::string monitor_mode = "float";

  CLI::App* check = app.add_subcommand(
      "check", "decide reachability along one path per component");
  check->add_option("model", model_path, "automata file")->required();
  check->add_option("paths", paths_path, "path set file")->required();
  check->add_option("spec", spec_path, "reachability condition file");
  check->add_option("--mode", mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  check->add_option("--epsilon", epsilon,
                    "strict-inequality margin for float mode");
  check->add_option("--witness", witness_path,
                    "write the timed run here when reachable");
  check->add_option("--dump-lp", dump_path, "write the constraint system here");

  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "constraint growth and latency on the train fleet family");
  bench_cmd->add_option("--trains", trains, "fleet sizes to measure");
  bench_cmd->add_option("--reps", reps, "runs per fleet size");
  bench_cmd->add_option("--mode", mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  bench_cmd->add_option("--epsilon", epsilon,
                        "strict-inequality margin for float mode");

  CLI::App* monitor = app.add_subcommand(
      "monitor", "check a stream of train parameter records under a deadline");
  monitor->add_option("--input", input, "record file, or - for stdin");
  monitor->add_option("--deadline-ms", deadline_ms, "per-cycle budget");
  monitor->add_option("--mode", monitor_mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  monitor->add_option("--epsilon", epsilon,
                      "strict-inequality margin for float mode");

  CLI::App* explain = app.add_subcommand(
      "explain", "print the synchronization skeleton and the constraints");
  explain->add_option("model", model_path, "automata file")->required();
  explain->add_option("paths", paths_path, "path set file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      SolveOptions opt;
      if (!solve_options_from(mode, epsilon, opt)) return 2;
      return run_check(model_path, paths_path, spec_path, opt, witness_path,
                       dump_path);
    }
    if (bench_cmd->parsed()) {
      SolveOptions opt;
      if (!solve_options_from(mode, epsilon, opt)) return 2;
      return run_bench(trains, reps, opt);
    }
    if (monitor->parsed()) {
      SolveOptions opt;
      if (!solve_options_from(monitor_mode, epsilon, opt)) return 2;
      return run_monitor(input, deadline_ms, opt);
    }
    if (explain->parsed()) return run_explain(model_path, paths_path);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
