#include "lharv/cbtc.hpp"

#include <algorithm>
#include <chrono>

namespace lharv {

namespace {

std::string train_name(int id) { return "Train" + std::to_string(id); }

Constraint upper_bound(const std::string& var, const Rat& bound) {
  Constraint c;
  c.lhs.add_term(var, 1);
  c.rel = Relation::LE;
  c.rhs = bound;
  return c;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  auto d = std::chrono::steady_clock::now() - since;
  return std::chrono::duration<double, std::milli>(d).count();
}

Scenario base_scenario(const std::vector<TrainParams>& trains,
                       const Timeouts& t) {
  Scenario sc;
  sc.net = train_network(trains, t);
  for (const Automaton& a : sc.net.automata) {
    Path p;
    p.automaton = a.name;
    p.locations = {"compute", "adjust", "cruise", "EBraking"};
    p.transitions = {0, 1, 2};
    sc.ps.paths.push_back(std::move(p));
    sc.spec.targets[a.name] = "EBraking";
  }
  return sc;
}

Constraint collide_constraint(const TrainParams& leader,
                              const TrainParams& follower) {
  Constraint c;
  c.lhs.add_term(train_name(leader.id) + ".x", 1);
  c.lhs.add_term(train_name(follower.id) + ".x", -1);
  c.rel = Relation::EQ;
  c.rhs = 0;
  return c;
}

/// Shares one aligned, encoded, presolved system across all leader/follower
/// pairs of a fleet; each pair adds only its collision row.
class FleetChecker {
 public:
  FleetChecker(const std::vector<TrainParams>& trains, const Timeouts& t)
      : trains_(trains), sc_(base_scenario(trains, t)) {
    AlignOutcome a = align_occurrences(sc_.net, sc_.ps);
    if (!a.skeleton) throw InternalError("canonical paths failed to align");
    skel_ = std::move(*a.skeleton);
    sys_ = encode(sc_.net, sc_.ps, skel_, sc_.spec);
    prep_.emplace(sys_);
  }

  VerdictKind check_pair(std::size_t f, const SolveOptions& opt,
                         std::optional<Witness>* witness = nullptr) const {
    Row extra = collide_row(f);
    SolveOutcome out = prep_->solve({extra}, opt);
    if (out.kind == SolveOutcome::Kind::Infeasible)
      return VerdictKind::Unreachable;

    Witness w = extract_witness(sys_, out.values, sc_.ps, skel_);
    if (out.from_float) {
      ReachSpec pair_spec = sc_.spec;
      pair_spec.rows.push_back(collide_constraint(trains_[f - 1], trains_[f]));
      ReplayResult rr = replay_witness(sc_.net, sc_.ps, skel_, pair_spec, w,
                                       Rat(1, 10000000));
      if (!rr.passed) {
        SolveOptions exact_opt = opt;
        exact_opt.mode = SolveMode::Exact;
        SolveOutcome retry = prep_->solve({extra}, exact_opt);
        if (retry.kind == SolveOutcome::Kind::Infeasible)
          return VerdictKind::Unreachable;
        w = extract_witness(sys_, retry.values, sc_.ps, skel_);
      }
    }
    if (witness) *witness = std::move(w);
    return VerdictKind::Reachable;
  }

 private:
  std::size_t exit_col(std::size_t train_pos) const {
    const ComponentLayout& lay = sys_.layout[train_pos];
    std::string var = train_name(trains_[train_pos].id) + ".x";
    for (std::size_t j = 0; j < lay.locals.size(); ++j)
      if (lay.locals[j] == var) return lay.exit(lay.positions - 1, j);
    throw InternalError("train position column not found");
  }

  Row collide_row(std::size_t f) const {
    Row r;
    r.kind = RowKind::Spec;
    r.rel = Relation::EQ;
    r.rhs = 0;
    r.terms[exit_col(f - 1)] = 1;
    r.terms[exit_col(f)] = -1;
    return r;
  }

  std::vector<TrainParams> trains_;
  Scenario sc_;
  SyncSkeleton skel_;
  LinearSystem sys_;
  std::optional<PreparedSystem> prep_;
};

}  // namespace

bool validate_params(const std::vector<TrainParams>& trains,
                     DiagnosticSink& diags) {
  bool ok = true;
  auto bad = [&](int id, const std::string& msg) {
    diags.error({}, "train " + std::to_string(id) + ": " + msg);
    ok = false;
  };
  if (trains.empty()) {
    diags.error({}, "empty train list");
    return false;
  }
  for (std::size_t i = 0; i < trains.size(); ++i) {
    const TrainParams& p = trains[i];
    for (std::size_t j = 0; j < i; ++j)
      if (trains[j].id == p.id) bad(p.id, "duplicate id");
    if (p.cur_lo < 0 || p.cur_hi < p.cur_lo)
      bad(p.id, "current speed band is empty or negative");
    if (p.new_lo < 0 || p.new_hi < p.new_lo)
      bad(p.id, "new speed band is empty or negative");
    if (p.ma < p.sbd) bad(p.id, "brake onset beyond movement authority");
    if (p.sbd < p.x0) bad(p.id, "position already past brake onset");
    if (p.rsd < 0) bad(p.id, "negative safety distance");
    if (i > 0 && !(p.x0 < trains[i - 1].x0))
      bad(p.id, "position not strictly behind the preceding train");
  }
  return ok;
}

Network train_network(const std::vector<TrainParams>& trains,
                      const Timeouts& t) {
  Network net;
  for (const TrainParams& p : trains) {
    std::string name = train_name(p.id);
    std::string vx = name + ".x";
    std::string vt = name + ".t";

    Automaton a;
    a.name = name;
    a.locals = {vx, vt};
    a.local_labels = {"cv" + std::to_string(p.id), "op" + std::to_string(p.id)};
    a.shared_labels = {"EBrake"};

    auto driving = [&](const std::string& loc, const Rat& lo, const Rat& hi) {
      Location L;
      L.name = loc;
      L.flow[vx] = {lo, hi};
      L.flow[vt] = {1, 1};
      L.invariant.push_back(upper_bound(vx, p.sbd));
      L.invariant.push_back(upper_bound(vt, t.comm));
      return L;
    };
    Location compute = driving("compute", p.cur_lo, p.cur_hi);
    compute.initial_conditions[vx] = p.x0;
    compute.initial_conditions[vt] = 0;
    Location adjust = driving("adjust", (p.cur_lo + p.new_lo) / 2,
                              (p.cur_hi + p.new_hi) / 2);
    Location cruise = driving("cruise", p.new_lo, p.new_hi);
    Location braking;
    braking.name = "EBraking";
    braking.flow[vx] = {0, p.new_hi};
    braking.flow[vt] = {1, 1};
    braking.invariant.push_back(upper_bound(vt, t.brake));
    a.locations = {compute, adjust, cruise, braking};
    a.initial_locations = {"compute"};

    Transition commit;
    commit.label = a.local_labels[0];
    commit.from = "compute";
    commit.to = "adjust";
    Transition apply;
    apply.label = a.local_labels[1];
    apply.from = "adjust";
    apply.to = "cruise";
    Transition brake;
    brake.label = "EBrake";
    brake.from = "cruise";
    brake.to = "EBraking";
    Constraint timeout;
    timeout.lhs.add_term(vt, 1);
    timeout.rel = Relation::EQ;
    timeout.rhs = t.comm;
    brake.guard.push_back(timeout);
    brake.reset[vt] = LinearExpression{};
    a.transitions = {commit, apply, brake};

    net.automata.push_back(std::move(a));
  }
  return net;
}

Scenario generate_scenario(const std::vector<TrainParams>& trains,
                           const Timeouts& t, std::size_t follower_index) {
  if (follower_index == 0 || follower_index >= trains.size())
    throw InternalError("follower index out of range");

  Scenario sc = base_scenario(trains, t);
  sc.spec.rows.push_back(collide_constraint(trains[follower_index - 1],
                                            trains[follower_index]));
  return sc;
}

std::vector<TrainParams> default_params(std::size_t n, Profile profile) {
  if (n == 0 || (profile == Profile::Unsafe && n < 2))
    throw InternalError("fleet too small for the requested profile");

  std::vector<TrainParams> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    TrainParams& p = out[i];
    p.id = static_cast<int>(i) + 1;
    p.x0 = Rat(4000) + Rat(300) * Rat(static_cast<long>(n - i));
    p.cur_lo = 14;
    p.cur_hi = 16;
    p.new_lo = 16;
    p.new_hi = 18;
    p.rsd = 50;
  }
  if (profile == Profile::Unsafe) out[1].x0 = out[0].x0 - 80;

  out[0].ma = out[0].x0 + 1100;
  for (std::size_t i = 1; i < n; ++i) out[i].ma = out[i - 1].x0 - 50;
  for (TrainParams& p : out) p.sbd = p.ma - 90;

  if (profile == Profile::Unsafe) {
    out[1].ma = out[0].x0 + 100;
    out[1].sbd = out[1].ma - 90;
  }
  return out;
}

Rat pair_margin(const std::vector<TrainParams>& trains, const Timeouts& t,
                std::size_t follower_index) {
  if (follower_index == 0 || follower_index >= trains.size())
    throw InternalError("follower index out of range");
  const TrainParams& leader = trains[follower_index - 1];
  const TrainParams& f = trains[follower_index];
  return (leader.x0 - f.x0) - f.rsd - f.new_hi * (t.comm + t.brake);
}

MonitorVerdict monitor_step(const CycleRecord& rec, double deadline_ms,
                            const SolveOptions& opt, const Timeouts& t) {
  auto start = std::chrono::steady_clock::now();
  MonitorVerdict v;
  v.cycle = rec.cycle;

  DiagnosticSink sink;
  if (!validate_params(rec.trains, sink)) {
    v.result = VerdictKind::Inconsistent;
    v.latency_ms = elapsed_ms(start);
    return v;
  }

  FleetChecker checker(rec.trains, t);
  VerdictKind result = VerdictKind::Unreachable;
  for (std::size_t f = 1; f < rec.trains.size(); ++f) {
    if (elapsed_ms(start) > deadline_ms) {
      v.result = VerdictKind::DeadlineMiss;
      v.latency_ms = elapsed_ms(start);
      return v;
    }
    std::optional<Witness> w;
    if (checker.check_pair(f, opt, &w) == VerdictKind::Reachable) {
      result = VerdictKind::Reachable;
      v.pair_leader = rec.trains[f - 1].id;
      v.pair_follower = rec.trains[f].id;
      v.witness = std::move(w);
      break;
    }
  }

  v.latency_ms = elapsed_ms(start);
  if (v.latency_ms > deadline_ms) {
    v.result = VerdictKind::DeadlineMiss;
    v.pair_leader = v.pair_follower = -1;
    v.witness.reset();
  } else {
    v.result = result;
  }
  return v;
}

std::vector<BenchRow> bench(const std::vector<std::size_t>& n_list,
                            std::size_t repetitions, const SolveOptions& opt) {
  if (repetitions == 0) throw InternalError("bench needs at least one run");
  Timeouts t;
  std::vector<BenchRow> out;
  for (std::size_t n : n_list) {
    if (n < 2) throw InternalError("bench needs at least two trains");
    std::vector<TrainParams> params = default_params(n, Profile::Safe);

    BenchRow row;
    row.trains = n;
    {
      Scenario sc = generate_scenario(params, t, 1);
      AlignOutcome a = align_occurrences(sc.net, sc.ps);
      if (!a.skeleton) throw InternalError("canonical paths failed to align");
      LinearSystem sys = encode(sc.net, sc.ps, *a.skeleton, sc.spec);
      row.constraints = sys.n_rows();
      row.variables = sys.n_vars();
    }

    row.all_unreachable = true;
    std::vector<double> samples;
    for (std::size_t r = 0; r < repetitions; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      FleetChecker checker(params, t);
      for (std::size_t f = 1; f < n; ++f) {
        if (checker.check_pair(f, opt) != VerdictKind::Unreachable)
          row.all_unreachable = false;
      }
      samples.push_back(elapsed_ms(t0));
    }
    std::sort(samples.begin(), samples.end());
    std::size_t mid = samples.size() / 2;
    row.median_ms = samples.size() % 2 ? samples[mid]
                                       : (samples[mid - 1] + samples[mid]) / 2;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace lharv
