#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "lharv/path.hpp"
#include "support/fixtures.hpp"
#include "support/product.hpp"

using namespace lharv;

namespace {

bool mentions(const std::vector<Diagnostic>& diags, const std::string& needle) {
  for (const Diagnostic& d : diags) {
    if (d.message.find(needle) != std::string::npos) return true;
  }
  return false;
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

/// Sync events a global path realizes, with each participant's transition
/// position; the ground truth align_occurrences must reproduce.
std::vector<SyncEvent> events_of(const Network& net, const GlobalPath& gp) {
  std::vector<SyncEvent> out;
  std::map<std::string, std::size_t> occurrence;
  std::vector<std::size_t> pos(net.automata.size(), 0);
  for (const GlobalStep& st : gp.steps) {
    std::size_t first = st.moves.begin()->first;
    if (net.automata[first].label_is_shared(st.label)) {
      SyncEvent ev;
      ev.label = st.label;
      ev.occurrence = occurrence[st.label]++;
      for (const auto& [c, ti] : st.moves) {
        (void)ti;
        ev.positions[c] = pos[c];
      }
      out.push_back(std::move(ev));
    }
    for (const auto& [c, ti] : st.moves) {
      (void)ti;
      ++pos[c];
    }
  }
  return out;
}

bool same_events(std::vector<SyncEvent> a, std::vector<SyncEvent> b) {
  auto key = [](const SyncEvent& e) {
    return std::make_tuple(e.label, e.occurrence);
  };
  auto lt = [&](const SyncEvent& x, const SyncEvent& y) {
    return key(x) < key(y);
  };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (key(a[i]) != key(b[i]) || a[i].positions != b[i].positions)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("path structure is validated", "[pathset]") {
  testing::LoadedCase fx = testing::load_stk();
  DiagnosticSink ok;
  CHECK(validate_pathset(fx.net, fx.ps, ok));

  PathSet wrong_start = fx.ps;
  wrong_start.paths[0].locations[0] = "s2";
  DiagnosticSink s1;
  CHECK(!validate_pathset(fx.net, wrong_start, s1));
  CHECK(mentions(s1.items(), "starts at non-initial location 's2'"));

  PathSet disconnected = fx.ps;
  disconnected.paths[1].locations[2] = "t4";
  DiagnosticSink s2;
  CHECK(!validate_pathset(fx.net, disconnected, s2));
  CHECK(mentions(s2.items(), "not connected"));

  PathSet short_list;
  short_list.paths = {fx.ps.paths[0]};
  DiagnosticSink s3;
  CHECK(!validate_pathset(fx.net, short_list, s3));
  CHECK(mentions(s3.items(), "path set lists 1 components"));
}

TEST_CASE("alignment of the checked-in example", "[pathset]") {
  testing::LoadedCase fx = testing::load_stk();
  AlignOutcome out = align_occurrences(fx.net, fx.ps);
  REQUIRE(out.skeleton.has_value());
  REQUIRE(out.skeleton->events.size() == 3);

  const auto& ev = out.skeleton->events;
  CHECK(ev[0].label == "b");
  CHECK(ev[0].positions == std::map<std::size_t, std::size_t>{{0, 1}, {1, 0}});
  CHECK(ev[1].label == "e");
  CHECK(ev[1].positions ==
        std::map<std::size_t, std::size_t>{{0, 2}, {1, 2}, {2, 1}});
  CHECK(ev[2].label == "f");
  CHECK(ev[2].positions == std::map<std::size_t, std::size_t>{{0, 3}, {2, 3}});
}

TEST_CASE("occurrence count mismatches are inconsistent", "[pathset]") {
  Network net = testing::parse_net_or_throw(kTwoShared);
  PathSet ps;
  ps.paths = {make_path(net, "A", {0, 1}), make_path(net, "B", {0})};
  AlignOutcome out = align_occurrences(net, ps);
  CHECK(!out.skeleton.has_value());
  CHECK(mentions(out.diags, "label 's' occurs 2 times in 'A' but 1 times in "
                            "'B'"));
}

TEST_CASE("crossed synchronization orders are inconsistent", "[pathset]") {
  Network net = testing::parse_net_or_throw(kCrossed);
  PathSet ps;
  ps.paths = {make_path(net, "A", {0, 1}), make_path(net, "B", {0, 1})};
  AlignOutcome out = align_occurrences(net, ps);
  CHECK(!out.skeleton.has_value());
  CHECK(mentions(out.diags, "synchronization orders conflict"));
}

TEST_CASE("transition instants are cumulative dwell prefixes", "[pathset]") {
  testing::LoadedCase fx = testing::load_stk();
  const Automaton& s = fx.net.automata[0];
  CHECK(occurrence_positions(s, fx.ps.paths[0], "b") ==
        std::vector<std::size_t>{1});
  CHECK(occurrence_positions(s, fx.ps.paths[0], "a") ==
        std::vector<std::size_t>{0});
  CHECK(occurrence_positions(s, fx.ps.paths[0], "zz").empty());
}

TEST_CASE("crossed-order network has an empty composition", "[product]") {
  Network net = testing::parse_net_or_throw(kCrossed);
  std::vector<GlobalPath> all = testing::all_global_paths(net, 4);
  REQUIRE(all.size() == 1);
  CHECK(all[0].steps.empty());
}

TEST_CASE("projections of every global path align", "[product]") {
  for (const char* text : {kTwoShared, kForkJoin, kCrossed}) {
    Network net = testing::parse_net_or_throw(text);
    std::vector<GlobalPath> all = testing::all_global_paths(net, 6);
    REQUIRE(!all.empty());
    for (const GlobalPath& gp : all) {
      PathSet ps;
      for (std::size_t c = 0; c < net.automata.size(); ++c)
        ps.paths.push_back(project(net, gp, c));

      DiagnosticSink sink;
      REQUIRE(validate_pathset(net, ps, sink));
      AlignOutcome out = align_occurrences(net, ps);
      REQUIRE(out.skeleton.has_value());
      CHECK(same_events(out.skeleton->events, events_of(net, gp)));
    }
  }
}

TEST_CASE("a maximal run of the fork-join network exists", "[product]") {
  Network net = testing::parse_net_or_throw(kForkJoin);
  std::vector<GlobalPath> all = testing::all_global_paths(net, 6);
  std::size_t maximal = 0;
  for (const GlobalPath& gp : all) {
    if (gp.steps.size() == 4) ++maximal;
  }
  // lp, then the m join, then lq and the w join in either order.
  CHECK(maximal == 2);
}
