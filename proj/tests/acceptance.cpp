#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lharv/cbtc.hpp"
#include "lharv/check.hpp"
#include "lharv/replay.hpp"
#include "lharv/textio.hpp"
#include "support/fixtures.hpp"
#include "support/product.hpp"
#include "support/random_instances.hpp"

using namespace lharv;

namespace {

// Budgets and tolerances the release gates hold the build to.
constexpr double kGoldenMsMax = 1000.0;
constexpr double kBatteryMsMax = 120000.0;
constexpr std::size_t kBatterySeeds = 200;
constexpr std::size_t kBatteryOracleFloor = 20;
constexpr double kExactMedianMsMax = 500.0;
constexpr double kFloatMedianMsMax = 100.0;
constexpr std::size_t kRefConstraints = 2672;
constexpr std::size_t kRefVariables = 192;
constexpr std::size_t kShapeFactor = 3;
constexpr std::size_t kBenchReps = 7;
constexpr double kDeadlineMs = 500.0;
constexpr std::size_t kMonitorCycles = 100;
const Rat kFloatReplayTol(1, 10000000);

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f ms", ms);
  return buf;
}

Path make_path(const Network& net, const std::string& comp,
               std::initializer_list<std::size_t> transitions) {
  const Automaton& a = *net.find_automaton(comp);
  Path p;
  p.automaton = comp;
  p.locations = {a.initial_locations.front()};
  for (std::size_t ti : transitions) {
    p.transitions.push_back(ti);
    p.locations.push_back(a.transitions[ti].to);
  }
  return p;
}

// ---------------------------------------------------------------- criterion 1

std::string golden_rows() {
  Clock::time_point t0 = Clock::now();
  testing::LoadedCase fx = testing::load_stk();
  LinearSystem sys = encode(fx.net, fx.ps, fx.skel, fx.spec);
  std::string dump = dump_system(sys);

  const std::vector<std::string> expected = {
      "row flow: -9/10*dwell(T,2) - in(T,2,t) + out(T,2,t) >= 0",
      "row flow: -11/10*dwell(T,2) - in(T,2,t) + out(T,2,t) <= 0",
      "row guard: out(T,3,t) < 5",
      "row guard: out(S,2,s) + out(T,2,t) - out(K,1,k) > 0",
      "row reset: in(T,2,t) = 2",
      "row sync: dwell(S,0) + dwell(S,1) - dwell(T,0) = 0",
      "row total: dwell(S,0) + dwell(S,1) + dwell(S,2) + dwell(S,3) + "
      "dwell(S,4) - dwell(T,0) - dwell(T,1) - dwell(T,2) - dwell(T,3) - "
      "dwell(T,4) = 0",
      "row total: dwell(S,0) + dwell(S,1) + dwell(S,2) + dwell(S,3) + "
      "dwell(S,4) - dwell(K,0) - dwell(K,1) - dwell(K,2) - dwell(K,3) - "
      "dwell(K,4) = 0",
      "row total: dwell(T,0) + dwell(T,1) + dwell(T,2) + dwell(T,3) + "
      "dwell(T,4) - dwell(K,0) - dwell(K,1) - dwell(K,2) - dwell(K,3) - "
      "dwell(K,4) = 0",
      "row spec: out(S,4,s) + 2*out(T,4,t) - 3*out(K,4,k) = 0",
  };
  for (const std::string& line : expected)
    if (dump.find(line + "\n") == std::string::npos)
      return "missing row: " + line;

  if (sys.n_rows() != 71 || sys.n_vars() != 45)
    return "unexpected system shape";
  if (dump != dump_system(encode(fx.net, fx.ps, fx.skel, fx.spec)))
    return "encoding is not deterministic";

  double ms = ms_since(t0);
  if (ms >= kGoldenMsMax) return "too slow: " + fmt_ms(ms);
  return "";
}

// ---------------------------------------------------------------- criterion 2

std::string random_battery() {
  Clock::time_point t0 = Clock::now();
  std::size_t oracle_hits = 0;
  for (std::uint64_t seed = 1; seed <= kBatterySeeds; ++seed) {
    testing::RandomInstance inst = testing::make_instance(seed);
    AlignOutcome a = align_occurrences(inst.net, inst.ps);
    if (!a.skeleton) return "seed " + std::to_string(seed) + ": no alignment";
    LinearSystem sys = encode(inst.net, inst.ps, *a.skeleton, inst.spec);

    OracleResult oracle = sample_oracle(inst.net, inst.ps, *a.skeleton,
                                        inst.spec, Rat(1, 2), Rat(1));
    for (int bump = 1; oracle.kind == OracleResult::Kind::TooLarge && bump <= 5;
         ++bump) {
      inst = testing::make_instance(seed + 10000 * bump);
      a = align_occurrences(inst.net, inst.ps);
      if (!a.skeleton) return "seed bump " + std::to_string(seed) + ": no alignment";
      sys = encode(inst.net, inst.ps, *a.skeleton, inst.spec);
      oracle = sample_oracle(inst.net, inst.ps, *a.skeleton, inst.spec,
                             Rat(1, 2), Rat(1));
    }

    std::string tag = "seed " + std::to_string(inst.seed) + ": ";
    CheckResult ex =
        check_reachability(inst.net, inst.ps, inst.spec, SolveOptions{});
    SolveOptions fo;
    fo.mode = SolveMode::Float;
    CheckResult fl = check_reachability(inst.net, inst.ps, inst.spec, fo);

    if (ex.verdict != fl.verdict) return tag + "float/exact verdicts differ";

    if (oracle.kind == OracleResult::Kind::Feasible) {
      ++oracle_hits;
      if (!system_satisfied(sys, assignment_from_witness(sys, *oracle.witness),
                            Rat(0)))
        return tag + "grid witness violates the encoded system";
      if (ex.verdict != VerdictKind::Reachable)
        return tag + "grid witness exists but the verdict is not Reachable";
    }
    if (ex.verdict == VerdictKind::Reachable) {
      if (!ex.witness) return tag + "Reachable without a witness";
      ReplayResult r = replay_witness(inst.net, inst.ps, *a.skeleton, inst.spec,
                                      *ex.witness, Rat(0));
      if (!r.passed) return tag + "exact witness fails replay: " + r.violations[0];
    }
    if (fl.verdict == VerdictKind::Reachable) {
      if (!fl.witness) return tag + "float Reachable without a witness";
      ReplayResult r = replay_witness(inst.net, inst.ps, *a.skeleton, inst.spec,
                                      *fl.witness, kFloatReplayTol);
      if (!r.passed) return tag + "float witness fails replay: " + r.violations[0];
    }
  }
  if (oracle_hits < kBatteryOracleFloor)
    return "grid search confirmed too few instances: " +
           std::to_string(oracle_hits);
  double ms = ms_since(t0);
  if (ms >= kBatteryMsMax) return "too slow: " + fmt_ms(ms);
  return "";
}

// ---------------------------------------------------------------- criterion 3

const char* kTwoShared = R"(
automaton A {
  var x;
  shared label s;
  loc a0 { flow x in [0, 1]; }
  loc a1 { flow x in [0, 1]; }
  loc a2 { flow x in [0, 1]; }
  init a0 { x = 0; }
  trans a0 -s-> a1;
  trans a1 -s-> a2;
}

automaton B {
  var y;
  shared label s;
  loc b0 { flow y in [0, 1]; }
  loc b1 { flow y in [0, 1]; }
  init b0 { y = 0; }
  trans b0 -s-> b1;
  trans b1 -s-> b2;
  loc b2 { flow y in [0, 1]; }
}
)";

const char* kForkJoin = R"(
automaton P {
  var p;
  local label lp;
  shared label m, w;
  loc p0 { flow p in [0, 1]; }
  loc p1 { flow p in [0, 1]; }
  loc p2 { flow p in [0, 1]; }
  loc p3 { flow p in [0, 1]; }
  init p0 { p = 0; }
  trans p0 -lp-> p1;
  trans p1 -m-> p2;
  trans p2 -w-> p3;
}

automaton Q {
  var q;
  local label lq;
  shared label m;
  loc q0 { flow q in [0, 1]; }
  loc q1 { flow q in [0, 1]; }
  loc q2 { flow q in [0, 1]; }
  init q0 { q = 0; }
  trans q0 -m-> q1;
  trans q1 -lq-> q2;
}

automaton R {
  var r;
  shared label w;
  loc r0 { flow r in [0, 1]; }
  loc r1 { flow r in [0, 1]; }
  init r0 { r = 0; }
  trans r0 -w-> r1;
}
)";

const char* kRelay = R"(
automaton C1 {
  var a;
  local label ca;
  shared label u;
  loc c10 { flow a in [0, 1]; }
  loc c11 { flow a in [0, 1]; }
  loc c12 { flow a in [0, 1]; }
  init c10 { a = 0; }
  trans c10 -ca-> c11;
  trans c11 -u-> c12;
}

automaton C2 {
  var b;
  shared label u, v;
  loc c20 { flow b in [0, 1]; }
  loc c21 { flow b in [0, 1]; }
  loc c22 { flow b in [0, 1]; }
  init c20 { b = 0; }
  trans c20 -u-> c21;
  trans c21 -v-> c22;
}

automaton C3 {
  var c;
  local label cc;
  shared label v;
  loc c30 { flow c in [0, 1]; }
  loc c31 { flow c in [0, 1]; }
  loc c32 { flow c in [0, 1]; }
  init c30 { c = 0; }
  trans c30 -cc-> c31;
  trans c31 -v-> c32;
}
)";

const char* kCrossed = R"(
automaton A {
  var x;
  shared label s1, s2;
  loc a0 { flow x in [0, 1]; }
  loc a1 { flow x in [0, 1]; }
  loc a2 { flow x in [0, 1]; }
  init a0 { x = 0; }
  trans a0 -s1-> a1;
  trans a1 -s2-> a2;
}

automaton B {
  var y;
  shared label s1, s2;
  loc b0 { flow y in [0, 1]; }
  loc b1 { flow y in [0, 1]; }
  loc b2 { flow y in [0, 1]; }
  init b0 { y = 0; }
  trans b0 -s2-> b1;
  trans b1 -s1-> b2;
}
)";

std::string structural_soundness() {
  std::size_t accepted = 0;
  for (const char* text : {kTwoShared, kForkJoin, kRelay}) {
    Network net = testing::parse_net_or_throw(text);
    for (const GlobalPath& gp : testing::all_global_paths(net, 8)) {
      PathSet ps;
      for (std::size_t c = 0; c < net.automata.size(); ++c)
        ps.paths.push_back(project(net, gp, c));
      DiagnosticSink sink;
      if (!validate_pathset(net, ps, sink))
        return "a projection was rejected after " +
               std::to_string(gp.steps.size()) + " steps";
      AlignOutcome a = align_occurrences(net, ps);
      if (!a.skeleton)
        return "a projection failed to align after " +
               std::to_string(gp.steps.size()) + " steps";
      ++accepted;
    }
  }
  if (accepted != 22)
    return "enumeration produced " + std::to_string(accepted) +
           " projections, expected 22";

  Network crossed = testing::parse_net_or_throw(kCrossed);
  PathSet ps;
  ps.paths = {make_path(crossed, "A", {0, 1}), make_path(crossed, "B", {0, 1})};
  ReachSpec spec;
  spec.targets["A"] = "a2";
  spec.targets["B"] = "b2";
  CheckResult cr = check_reachability(crossed, ps, spec, SolveOptions{});
  if (cr.verdict != VerdictKind::Inconsistent)
    return "crossed orders were not flagged Inconsistent";
  return "";
}

// ---------------------------------------------------------------- criterion 4

std::string scaling_sweep(std::string& note) {
  const std::vector<std::size_t> fleets = {8, 10, 12, 14, 16};

  SolveOptions exact;
  std::vector<BenchRow> ex = bench(fleets, kBenchReps, exact);
  SolveOptions fl;
  fl.mode = SolveMode::Float;
  std::vector<BenchRow> fo = bench(fleets, kBenchReps, fl);

  for (const std::vector<BenchRow>* rows : {&ex, &fo}) {
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const BenchRow& r = (*rows)[i];
      if (!r.all_unreachable)
        return "a safe pair was not Unreachable at n=" + std::to_string(r.trains);
      if (i > 0 && ((*rows)[i - 1].constraints >= r.constraints ||
                    (*rows)[i - 1].variables >= r.variables))
        return "system size is not strictly monotone in the fleet size";
    }
  }
  const BenchRow& top = ex.back();
  if (top.constraints * kShapeFactor < kRefConstraints ||
      top.constraints > kRefConstraints * kShapeFactor)
    return "constraint count " + std::to_string(top.constraints) +
           " is not within " + std::to_string(kShapeFactor) + "x of " +
           std::to_string(kRefConstraints);
  if (top.variables * kShapeFactor < kRefVariables ||
      top.variables > kRefVariables * kShapeFactor)
    return "variable count " + std::to_string(top.variables) +
           " is not within " + std::to_string(kShapeFactor) + "x of " +
           std::to_string(kRefVariables);
  if (top.median_ms > kExactMedianMsMax)
    return "exact median at n=16 is " + fmt_ms(top.median_ms);
  if (fo.back().median_ms > kFloatMedianMsMax)
    return "float median at n=16 is " + fmt_ms(fo.back().median_ms);

  note = "n=16 exact " + fmt_ms(top.median_ms) + ", float " +
         fmt_ms(fo.back().median_ms) + ", " + std::to_string(top.constraints) +
         " rows x " + std::to_string(top.variables) + " vars";
  return "";
}

// ---------------------------------------------------------------- criterion 5

std::string collision_detection() {
  Timeouts t;
  Scenario bad = generate_scenario(default_params(2, Profile::Unsafe), t, 1);
  CheckResult cb = check_reachability(bad.net, bad.ps, bad.spec, SolveOptions{});
  if (cb.verdict != VerdictKind::Reachable || !cb.witness)
    return "shrunk gap did not yield Reachable";

  AlignOutcome a = align_occurrences(bad.net, bad.ps);
  ReplayResult r = replay_witness(bad.net, bad.ps, *a.skeleton, bad.spec,
                                  *cb.witness, Rat(0));
  if (!r.passed) return "collision witness fails exact replay";
  const WitnessComponent& lead = cb.witness->components[0];
  const WitnessComponent& tail = cb.witness->components[1];
  if (lead.steps.back().exit.at("Train1.x") !=
      tail.steps.back().exit.at("Train2.x"))
    return "witness positions differ at the end of braking";

  std::vector<TrainParams> fixed = default_params(2, Profile::Unsafe);
  fixed[1].x0 = fixed[0].x0 - 300;
  if (pair_margin(fixed, t, 1) <= 0) return "restored gap is not above the margin";
  Scenario ok = generate_scenario(fixed, t, 1);
  CheckResult cf = check_reachability(ok.net, ok.ps, ok.spec, SolveOptions{});
  if (cf.verdict != VerdictKind::Unreachable)
    return "restored gap did not flip the verdict";
  return "";
}

// ---------------------------------------------------------------- criterion 6

std::string monitor_discipline(std::string& note) {
  std::vector<TrainParams> fleet = default_params(16, Profile::Safe);
  SolveOptions opt;
  opt.mode = SolveMode::Float;

  double worst = 0.0;
  std::uint64_t last_cycle = 0;
  for (std::size_t k = 1; k <= kMonitorCycles; ++k) {
    CycleRecord rec;
    rec.cycle = k;
    rec.ts = Rat(k, 2);
    rec.trains = fleet;
    MonitorVerdict v = monitor_step(rec, kDeadlineMs, opt);
    if (v.result == VerdictKind::DeadlineMiss)
      return "cycle " + std::to_string(k) + " missed its deadline";
    if (v.result != VerdictKind::Unreachable)
      return "cycle " + std::to_string(k) + " is not Unreachable";
    if (v.cycle != k || v.cycle <= last_cycle)
      return "verdicts left cycle order at " + std::to_string(k);
    if (v.latency_ms > kDeadlineMs)
      return "verdict for cycle " + std::to_string(k) + " emitted after " +
             fmt_ms(v.latency_ms);
    last_cycle = v.cycle;
    worst = std::max(worst, v.latency_ms);
  }
  note = std::to_string(kMonitorCycles) + " cycles, worst latency " +
         fmt_ms(worst);
  return "";
}

// ---------------------------------------------------------------- criterion 7

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string witness;
  std::string dump;
};

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_check(const std::filesystem::path& dir, const std::string& model,
                 const std::string& paths, const std::string& spec) {
  std::filesystem::path out = dir / "stdout.txt";
  std::filesystem::path wit = dir / "witness.txt";
  std::filesystem::path dmp = dir / "system.txt";
  std::filesystem::remove(out);
  std::filesystem::remove(wit);
  std::filesystem::remove(dmp);

  std::string cmd = std::string("\"") + LHARV_CLI_PATH + "\" check \"" + model +
                    "\" \"" + paths + "\" \"" + spec +
                    "\" --mode exact --witness \"" + wit.string() +
                    "\" --dump-lp \"" + dmp.string() + "\" > \"" +
                    out.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());

  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out).value_or("<no stdout>");
  r.witness = read_file(wit).value_or("<no witness>");
  r.dump = read_file(dmp).value_or("<no dump>");
  return r;
}

std::string determinism() {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("reach-accept-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  struct Fixture {
    std::string name, model, paths, spec;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"stk", testing::fixture_path("stk.lharv"),
                      testing::fixture_path("stk.paths"),
                      testing::fixture_path("stk.spec")});

  Timeouts t;
  auto add_scenario = [&](const std::string& name,
                          const std::vector<TrainParams>& params) {
    Scenario sc = generate_scenario(params, t, 1);
    std::filesystem::path base = dir / name;
    std::ofstream(base.string() + ".lharv") << serialize_network(sc.net);
    std::ofstream(base.string() + ".paths") << serialize_pathset(sc.net, sc.ps);
    std::ofstream(base.string() + ".spec") << serialize_spec(sc.spec);
    fixtures.push_back({name, base.string() + ".lharv",
                        base.string() + ".paths", base.string() + ".spec"});
  };
  add_scenario("fleet-safe", default_params(2, Profile::Safe));
  add_scenario("fleet-unsafe", default_params(2, Profile::Unsafe));
  std::vector<TrainParams> fixed = default_params(2, Profile::Unsafe);
  fixed[1].x0 = fixed[0].x0 - 300;
  add_scenario("fleet-restored", fixed);

  for (const Fixture& f : fixtures) {
    CliRun first = run_check(dir, f.model, f.paths, f.spec);
    CliRun second = run_check(dir, f.model, f.paths, f.spec);
    if (first.exit_code != second.exit_code)
      return f.name + ": exit codes differ";
    if (first.out != second.out) return f.name + ": stdout differs";
    if (first.witness != second.witness) return f.name + ": witness differs";
    if (first.dump != second.dump) return f.name + ": system dump differs";
    if (first.exit_code != 0 && first.exit_code != 1)
      return f.name + ": check failed with exit code " +
             std::to_string(first.exit_code);
  }
  return "";
}

}  // namespace

int main() {
  struct Gate {
    const char* name;
    std::function<std::string(std::string&)> run;
  };
  const std::vector<Gate> gates = {
      {"golden constraint rows",
       [](std::string&) { return golden_rows(); }},
      {"random cross-validation",
       [](std::string&) { return random_battery(); }},
      {"structural soundness",
       [](std::string&) { return structural_soundness(); }},
      {"scaling sweep", scaling_sweep},
      {"collision detection",
       [](std::string&) { return collision_detection(); }},
      {"monitor discipline", monitor_discipline},
      {"deterministic output", [](std::string&) { return determinism(); }},
  };

  int passed = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    std::string note, failure;
    try {
      failure = gates[i].run(note);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    std::cout << "criterion " << (i + 1) << ": " << gates[i].name << ": ";
    if (failure.empty()) {
      ++passed;
      std::cout << "PASS" << (note.empty() ? "" : " (" + note + ")") << "\n";
    } else {
      std::cout << "FAIL (" << failure << ")\n";
    }
    std::cout.flush();
  }
  std::cout << passed << "/" << gates.size() << " criteria passed\n";
  return passed == static_cast<int>(gates.size()) ? 0 : 1;
}
