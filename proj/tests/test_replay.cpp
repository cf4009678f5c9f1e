#include <catch2/catch_amalgamated.hpp>

#include "lharv/check.hpp"
#include "lharv/replay.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

using namespace lharv;

namespace {

struct Pipeline {
  testing::LoadedCase fx;
  LinearSystem sys;
  Witness witness;
};

Pipeline solved_stk() {
  Pipeline p{testing::load_stk(), {}, {}};
  p.sys = encode(p.fx.net, p.fx.ps, p.fx.skel, p.fx.spec);
  SolveOutcome out = solve_feasibility(p.sys, SolveOptions{});
  REQUIRE(out.kind == SolveOutcome::Kind::Feasible);
  p.witness = extract_witness(p.sys, out.values, p.fx.ps, p.fx.skel);
  return p;
}

ReplayResult replay(const Pipeline& p, const Witness& w) {
  return replay_witness(p.fx.net, p.fx.ps, p.fx.skel, p.fx.spec, w, Rat(0));
}

void expect_rejected(const Pipeline& p, Witness w, const char* why) {
  ReplayResult r = replay(p, w);
  INFO(why);
  CHECK(!r.passed);
  CHECK(!r.violations.empty());
}

}  // namespace

TEST_CASE("solver witnesses replay cleanly in exact arithmetic", "[replay]") {
  Pipeline p = solved_stk();
  ReplayResult r = replay(p, p.witness);
  CHECK(r.passed);
  CHECK(r.violations.empty());
}

TEST_CASE("replay rejects corrupted runs", "[replay]") {
  Pipeline p = solved_stk();

  Witness w = p.witness;
  w.components[0].steps[0].dwell = Rat(-1);
  expect_rejected(p, w, "negative dwell");

  w = p.witness;
  w.components[0].steps[0].exit["s"] += Rat(10);
  expect_rejected(p, w, "slope above the rate interval");

  w = p.witness;
  w.components[1].steps[3].entry["t"] += Rat(1, 3);
  expect_rejected(p, w, "carry-over broken");

  w = p.witness;
  w.components[1].steps[2].entry["t"] = Rat(5);
  expect_rejected(p, w, "reset value ignored");

  w = p.witness;
  w.components[0].steps[1].dwell += Rat(1);
  expect_rejected(p, w, "sync instants diverge");

  w = p.witness;
  w.components[2].steps[4].dwell += Rat(1);
  expect_rejected(p, w, "totals diverge");

  w = p.witness;
  w.components[2].steps[4].exit["k"] += Rat(1);
  expect_rejected(p, w, "final condition broken");

  w = p.witness;
  REQUIRE(w.components[0].steps[1].dwell == 0);
  w.components[0].steps[1].exit["s"] += Rat(1);
  expect_rejected(p, w, "zero dwell with moving value");
}

TEST_CASE("grid search finds the first lexicographic run", "[replay]") {
  testing::LoadedCase fx = testing::load_stk();
  OracleResult res =
      sample_oracle(fx.net, fx.ps, fx.skel, fx.spec, Rat(1, 4), Rat(20));
  REQUIRE(res.kind == OracleResult::Kind::Feasible);
  REQUIRE(res.witness.has_value());

  for (const WitnessComponent& comp : res.witness->components) {
    for (std::size_t k = 0; k + 1 < comp.steps.size(); ++k)
      CHECK(comp.steps[k].dwell == 0);
    CHECK(comp.steps.back().dwell == Rat(27, 4));
  }
  ReplayResult r = replay_witness(fx.net, fx.ps, fx.skel, fx.spec,
                                  *res.witness, Rat(0));
  CHECK(r.passed);

  LinearSystem sys = encode(fx.net, fx.ps, fx.skel, fx.spec);
  CHECK(system_satisfied(sys, assignment_from_witness(sys, *res.witness),
                         Rat(0)));
}

TEST_CASE("grid search reports misses and oversized grids", "[replay]") {
  Network net = testing::parse_net_or_throw(R"(
automaton A {
  var x;
  local label u;
  loc a0 { flow x in [1, 1]; }
  loc a1 { flow x in [1, 1]; }
  init a0 { x = 0; }
  trans a0 -u-> a1;
}
)");
  PathSet ps;
  ps.paths.push_back({"A", {"a0", "a1"}, {0}});
  ReachSpec spec;
  spec.targets["A"] = "a1";
  Constraint c;
  c.lhs.add_term("x", 1);
  c.rel = Relation::EQ;
  c.rhs = Rat(5);
  spec.rows.push_back(c);
  AlignOutcome a = align_occurrences(net, ps);
  REQUIRE(a.skeleton.has_value());

  OracleResult miss =
      sample_oracle(net, ps, *a.skeleton, spec, Rat(1), Rat(2));
  CHECK(miss.kind == OracleResult::Kind::NotFound);

  OracleResult hit =
      sample_oracle(net, ps, *a.skeleton, spec, Rat(1), Rat(6));
  REQUIRE(hit.kind == OracleResult::Kind::Feasible);

  OracleResult huge =
      sample_oracle(net, ps, *a.skeleton, spec, Rat(1, 1000), Rat(2));
  CHECK(huge.kind == OracleResult::Kind::TooLarge);
}

TEST_CASE("random instances keep the pipeline and the grid in agreement",
          "[random]") {
  std::size_t oracle_hits = 0, reachable = 0;
  for (std::uint64_t base = 1; base <= 40; ++base) {
    testing::RandomInstance inst = testing::make_instance(base);
    INFO(testing::describe(inst));

    AlignOutcome a = align_occurrences(inst.net, inst.ps);
    REQUIRE(a.skeleton.has_value());
    LinearSystem sys = encode(inst.net, inst.ps, *a.skeleton, inst.spec);

    OracleResult oracle = sample_oracle(inst.net, inst.ps, *a.skeleton,
                                        inst.spec, Rat(1, 2), Rat(1));

    CheckResult ex = check_reachability(inst.net, inst.ps, inst.spec,
                                        SolveOptions{});
    SolveOptions fl;
    fl.mode = SolveMode::Float;
    CheckResult fo = check_reachability(inst.net, inst.ps, inst.spec, fl);
    CHECK(ex.verdict == fo.verdict);

    if (oracle.kind == OracleResult::Kind::Feasible) {
      ++oracle_hits;
      CHECK(system_satisfied(sys, assignment_from_witness(sys, *oracle.witness),
                             Rat(0)));
      CHECK(ex.verdict == VerdictKind::Reachable);
    }
    if (ex.verdict == VerdictKind::Reachable) {
      ++reachable;
      REQUIRE(ex.witness.has_value());
      ReplayResult r = replay_witness(inst.net, inst.ps, *a.skeleton,
                                      inst.spec, *ex.witness, Rat(0));
      INFO("violations: " << (r.violations.empty() ? "" : r.violations[0]));
      CHECK(r.passed);
    }
  }
  // The battery must exercise both sides, not trivially agree on one.
  CHECK(oracle_hits > 5);
  CHECK(reachable > 5);
  CHECK(reachable < 40);
}
