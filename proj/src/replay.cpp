#include "lharv/replay.hpp"

#include <algorithm>
#include <utility>

namespace lharv {

namespace {

bool holds(const Rat& lhs, Relation rel, const Rat& rhs, const Rat& tol) {
  switch (rel) {
    case Relation::LT: return lhs < rhs + tol;
    case Relation::LE: return lhs <= rhs + tol;
    case Relation::EQ: return lhs <= rhs + tol && lhs >= rhs - tol;
    case Relation::GE: return lhs >= rhs - tol;
    case Relation::GT: return lhs > rhs - tol;
  }
  return false;
}

Rat cumulative_dwell(const WitnessComponent& wc, std::size_t through_pos) {
  Rat sum = 0;
  for (std::size_t q = 0; q <= through_pos; ++q) sum += wc.steps[q].dwell;
  return sum;
}

/// Value of `var` as seen by component c's transition at position p: its own
/// exit value for locals, the owner's exit at the aligned occurrence for
/// reads.
bool sampled_value(const Network& net, const SyncSkeleton& skel,
                   const Witness& w, std::size_t c, std::size_t p,
                   const std::string& var, Rat& out) {
  if (net.automata[c].has_local(var)) {
    auto it = w.components[c].steps[p].exit.find(var);
    if (it == w.components[c].steps[p].exit.end()) return false;
    out = it->second;
    return true;
  }
  std::size_t o = owner_of(net, var);
  if (o == Network::npos) return false;
  for (const auto& e : skel.events) {
    auto me = e.positions.find(c);
    if (me == e.positions.end() || me->second != p) continue;
    auto po = e.positions.find(o);
    if (po == e.positions.end()) return false;
    auto it = w.components[o].steps[po->second].exit.find(var);
    if (it == w.components[o].steps[po->second].exit.end()) return false;
    out = it->second;
    return true;
  }
  return false;
}

}  // namespace

ReplayResult replay_witness(const Network& net, const PathSet& ps,
                            const SyncSkeleton& skel, const ReachSpec& spec,
                            const Witness& w, const Rat& tol) {
  ReplayResult res;
  auto fail = [&res](std::string msg) { res.violations.push_back(std::move(msg)); };

  if (w.components.size() != net.automata.size()) {
    fail("structure: witness covers " + std::to_string(w.components.size()) +
         " components, network has " + std::to_string(net.automata.size()));
    return res;
  }
  for (std::size_t c = 0; c < net.automata.size(); ++c) {
    const Path& p = ps.paths[c];
    const WitnessComponent& wc = w.components[c];
    if (wc.automaton != net.automata[c].name ||
        wc.steps.size() != p.locations.size()) {
      fail("structure: component '" + net.automata[c].name +
           "' does not match its path");
      return res;
    }
    for (std::size_t pos = 0; pos < wc.steps.size(); ++pos) {
      if (wc.steps[pos].location != p.locations[pos]) {
        fail("structure: component '" + net.automata[c].name + "' step " +
             std::to_string(pos) + " is at '" + wc.steps[pos].location +
             "', path says '" + p.locations[pos] + "'");
        return res;
      }
    }
  }

  for (std::size_t c = 0; c < net.automata.size(); ++c) {
    const Automaton& a = net.automata[c];
    const WitnessComponent& wc = w.components[c];
    const std::string who = "component '" + a.name + "'";

    for (std::size_t pos = 0; pos < wc.steps.size(); ++pos) {
      const WitnessStep& st = wc.steps[pos];
      const Location* loc = a.find_location(st.location);
      const std::string where = who + " position " + std::to_string(pos);

      if (st.dwell < 0) fail(where + ": negative dwell");

      for (const auto& v : a.locals) {
        auto ein = st.entry.find(v);
        auto eout = st.exit.find(v);
        if (ein == st.entry.end() || eout == st.exit.end()) {
          fail(where + ": missing value for '" + v + "'");
          continue;
        }
        const FlowRange& f = loc->flow.at(v);
        Rat diff = eout->second - ein->second;
        if (!holds(diff, Relation::GE, f.lo * st.dwell, tol)) {
          fail(where + ": slope of '" + v + "' below rate interval");
        }
        if (!holds(diff, Relation::LE, f.hi * st.dwell, tol)) {
          fail(where + ": slope of '" + v + "' above rate interval");
        }
      }

      for (std::size_t ci = 0; ci < loc->invariant.size(); ++ci) {
        const Constraint& con = loc->invariant[ci];
        Rat at_entry = con.lhs.evaluate(st.entry);
        Rat at_exit = con.lhs.evaluate(st.exit);
        if (!holds(at_entry, con.rel, con.rhs, tol)) {
          fail(where + ": invariant #" + std::to_string(ci) +
               " violated at entry");
        }
        if (!holds(at_exit, con.rel, con.rhs, tol)) {
          fail(where + ": invariant #" + std::to_string(ci) +
               " violated at exit");
        }
        std::map<std::string, Rat> mid;
        for (const auto& [var, val] : st.entry) {
          auto it = st.exit.find(var);
          if (it != st.exit.end()) mid[var] = (val + it->second) / 2;
        }
        if (!holds(con.lhs.evaluate(mid), con.rel, con.rhs, tol)) {
          fail(where + ": invariant #" + std::to_string(ci) +
               " violated at midpoint");
        }
      }
    }

    const Location* first = a.find_location(wc.steps.front().location);
    for (const auto& [v, val] : first->initial_conditions) {
      auto it = wc.steps.front().entry.find(v);
      if (it == wc.steps.front().entry.end() ||
          !holds(it->second, Relation::EQ, val, tol)) {
        fail(who + ": initial condition on '" + v + "' not met");
      }
    }

    const Path& p = ps.paths[c];
    for (std::size_t pos = 0; pos < p.transitions.size(); ++pos) {
      const Transition& t = a.transitions[p.transitions[pos]];
      const std::string where =
          who + " transition at position " + std::to_string(pos);

      for (std::size_t gi = 0; gi < t.guard.size(); ++gi) {
        const Constraint& con = t.guard[gi];
        Rat lhs = con.lhs.constant;
        bool ok = true;
        for (const auto& [var, coeff] : con.lhs.terms) {
          Rat v;
          if (!sampled_value(net, skel, w, c, pos, var, v)) {
            fail(where + ": no sampled value for '" + var + "'");
            ok = false;
            break;
          }
          lhs += coeff * v;
        }
        if (ok && !holds(lhs, con.rel, con.rhs, tol)) {
          fail(where + ": guard #" + std::to_string(gi) + " violated");
        }
      }

      for (const auto& v : a.locals) {
        auto next = wc.steps[pos + 1].entry.find(v);
        if (next == wc.steps[pos + 1].entry.end()) continue;
        auto rs = t.reset.find(v);
        if (rs == t.reset.end()) {
          Rat prev = wc.steps[pos].exit.at(v);
          if (!holds(next->second, Relation::EQ, prev, tol)) {
            fail(where + ": '" + v + "' not carried over");
          }
        } else {
          Rat rhs = rs->second.constant;
          bool ok = true;
          for (const auto& [var, coeff] : rs->second.terms) {
            Rat sv;
            if (!sampled_value(net, skel, w, c, pos, var, sv)) {
              fail(where + ": no sampled value for '" + var + "' in reset");
              ok = false;
              break;
            }
            rhs += coeff * sv;
          }
          if (ok && !holds(next->second, Relation::EQ, rhs, tol)) {
            fail(where + ": reset of '" + v + "' not applied");
          }
        }
      }
    }
  }

  if (w.sync_times.size() != skel.events.size()) {
    fail("sync: witness carries " + std::to_string(w.sync_times.size()) +
         " event times, skeleton has " + std::to_string(skel.events.size()));
  } else {
    for (std::size_t e = 0; e < skel.events.size(); ++e) {
      const SyncEvent& ev = skel.events[e];
      const std::string where = "event '" + ev.label + "' occurrence " +
                                std::to_string(ev.occurrence);
      for (const auto& [c, pos] : ev.positions) {
        Rat t = cumulative_dwell(w.components[c], pos);
        if (!holds(t, Relation::EQ, w.sync_times[e], tol)) {
          fail(where + ": component '" + net.automata[c].name +
               "' fires at a different instant");
        }
      }
    }
  }

  for (std::size_t c = 1; c < w.components.size(); ++c) {
    Rat t0 = 0, tc = 0;
    for (const auto& st : w.components[0].steps) t0 += st.dwell;
    for (const auto& st : w.components[c].steps) tc += st.dwell;
    if (!holds(tc, Relation::EQ, t0, tol)) {
      fail("total time of '" + net.automata[c].name + "' differs from '" +
           net.automata[0].name + "'");
    }
  }

  for (const auto& [comp, target] : spec.targets) {
    std::size_t c = net.automaton_index(comp);
    if (c == Network::npos) {
      fail("spec targets unknown component '" + comp + "'");
      continue;
    }
    if (w.components[c].steps.back().location != target) {
      fail("component '" + comp + "' ends at '" +
           w.components[c].steps.back().location + "', spec wants '" + target +
           "'");
    }
  }

  std::map<std::string, Rat> finals;
  for (const auto& wc : w.components) {
    for (const auto& [var, val] : wc.steps.back().exit) finals[var] = val;
  }
  for (std::size_t ri = 0; ri < spec.rows.size(); ++ri) {
    const Constraint& con = spec.rows[ri];
    if (!holds(con.lhs.evaluate(finals), con.rel, con.rhs, tol)) {
      fail("spec row #" + std::to_string(ri) + " violated at final values");
    }
  }

  res.passed = res.violations.empty();
  return res;
}

// ---------------------------------------------------------------------------
// Sampling oracle: grid search over dwell vectors, exact decision of the value
// constraints per candidate by Gaussian elimination of equalities followed by
// Fourier-Motzkin elimination of the inequalities.

namespace {

constexpr std::size_t kNodeBudget = 4000000;
constexpr std::size_t kFmRowCap = 20000;

struct FmRow {
  std::map<std::size_t, Rat> terms;  // sum terms <= rhs (or < when strict)
  Rat rhs{0};
  bool strict = false;
};

struct EqRow {
  std::map<std::size_t, Rat> terms;
  Rat rhs{0};
};

struct Substitution {
  std::size_t var = 0;
  std::map<std::size_t, Rat> expr;  // var = rhs - sum expr
  Rat rhs{0};
};

class ValueSolver {
 public:
  explicit ValueSolver(std::size_t n_vars) : n_vars_(n_vars) {}

  void add_eq(std::map<std::size_t, Rat> terms, Rat rhs) {
    eqs_.push_back({std::move(terms), std::move(rhs)});
  }
  void add_le(std::map<std::size_t, Rat> terms, Rat rhs, bool strict) {
    ineqs_.push_back({std::move(terms), std::move(rhs), strict});
  }
  void add(const Relation rel, std::map<std::size_t, Rat> terms, Rat rhs) {
    switch (rel) {
      case Relation::EQ:
        add_eq(std::move(terms), std::move(rhs));
        return;
      case Relation::LE:
        add_le(std::move(terms), std::move(rhs), false);
        return;
      case Relation::LT:
        add_le(std::move(terms), std::move(rhs), true);
        return;
      case Relation::GE:
      case Relation::GT: {
        std::map<std::size_t, Rat> neg;
        for (auto& [v, c] : terms) neg[v] = -c;
        add_le(std::move(neg), -rhs, rel == Relation::GT);
        return;
      }
    }
  }

  /// Feasibility plus a deterministic satisfying assignment.
  bool solve(std::vector<Rat>& out, bool& too_large) {
    too_large = false;
    if (!eliminate_equalities()) return false;
    if (!fourier_motzkin(too_large)) return false;
    assign_values(out);
    return true;
  }

 private:
  static void reduce(std::map<std::size_t, Rat>& terms, Rat& rhs,
                     const std::vector<Substitution>& subs) {
    for (const auto& s : subs) {
      auto it = terms.find(s.var);
      if (it == terms.end()) continue;
      Rat c = it->second;
      terms.erase(it);
      rhs -= c * s.rhs;
      for (const auto& [v, k] : s.expr) {
        Rat delta = -(c * k);
        auto [slot, fresh] = terms.emplace(v, delta);
        if (!fresh) {
          slot->second += delta;
          if (slot->second == 0) terms.erase(slot);
        } else if (slot->second == 0) {
          terms.erase(slot);
        }
      }
    }
  }

  bool eliminate_equalities() {
    for (auto& eq : eqs_) {
      reduce(eq.terms, eq.rhs, subs_);
      if (eq.terms.empty()) {
        if (eq.rhs != 0) return false;
        continue;
      }
      auto pivot = eq.terms.begin();
      Substitution s;
      s.var = pivot->first;
      Rat pc = pivot->second;
      s.rhs = eq.rhs / pc;
      for (auto it = std::next(eq.terms.begin()); it != eq.terms.end(); ++it) {
        s.expr[it->first] = it->second / pc;
      }
      subs_.push_back(std::move(s));
    }
    for (auto& row : ineqs_) reduce(row.terms, row.rhs, subs_);
    return true;
  }

  bool fourier_motzkin(bool& too_large) {
    std::vector<FmRow> rows;
    for (auto& r : ineqs_) {
      if (r.terms.empty()) {
        if (r.strict ? !(Rat(0) < r.rhs) : !(Rat(0) <= r.rhs)) return false;
        continue;
      }
      rows.push_back(std::move(r));
    }

    std::vector<bool> eliminated(n_vars_, false);
    for (const auto& s : subs_) eliminated[s.var] = true;

    for (std::size_t vi = n_vars_; vi-- > 0;) {
      if (eliminated[vi]) continue;
      order_.push_back(vi);
      snapshots_.push_back(rows);

      std::vector<FmRow> lower, upper, rest;
      for (auto& r : rows) {
        auto it = r.terms.find(vi);
        if (it == r.terms.end()) {
          rest.push_back(std::move(r));
        } else if (it->second > 0) {
          upper.push_back(std::move(r));
        } else {
          lower.push_back(std::move(r));
        }
      }
      for (const auto& lo : lower) {
        for (const auto& up : upper) {
          Rat cl = -lo.terms.at(vi);  // positive
          Rat cu = up.terms.at(vi);   // positive
          FmRow comb;
          comb.strict = lo.strict || up.strict;
          comb.rhs = lo.rhs * cu + up.rhs * cl;
          for (const auto& [v, c] : lo.terms) {
            if (v != vi) comb.terms[v] = c * cu;
          }
          for (const auto& [v, c] : up.terms) {
            if (v == vi) continue;
            auto [slot, fresh] = comb.terms.emplace(v, c * cl);
            if (!fresh) {
              slot->second += c * cl;
              if (slot->second == 0) comb.terms.erase(slot);
            }
          }
          if (comb.terms.empty()) {
            if (comb.strict ? !(Rat(0) < comb.rhs) : !(Rat(0) <= comb.rhs)) {
              return false;
            }
            continue;
          }
          rest.push_back(std::move(comb));
        }
      }
      rows = std::move(rest);
      if (rows.size() > kFmRowCap) {
        too_large = true;
        return false;
      }
    }
    return true;
  }

  void assign_values(std::vector<Rat>& out) {
    out.assign(n_vars_, Rat(0));
    // Surviving variables, in reverse elimination order (the canonical first
    // variable was eliminated last, so it is assigned first).
    for (std::size_t i = order_.size(); i-- > 0;) {
      std::size_t vi = order_[i];
      const std::vector<FmRow>& rows = snapshots_[i];
      bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
      Rat lo{0}, hi{0};
      for (const auto& r : rows) {
        auto it = r.terms.find(vi);
        if (it == r.terms.end()) continue;
        Rat rest = r.rhs;
        for (const auto& [v, c] : r.terms) {
          if (v != vi) rest -= c * out[v];
        }
        Rat bound = rest / it->second;
        if (it->second > 0) {
          if (!has_hi || bound < hi || (bound == hi && r.strict)) {
            hi = bound;
            hi_strict = r.strict;
            has_hi = true;
          }
        } else {
          if (!has_lo || bound > lo || (bound == lo && r.strict)) {
            lo = bound;
            lo_strict = r.strict;
            has_lo = true;
          }
        }
      }
      Rat value{0};
      if (has_lo && has_hi) {
        value = lo == hi ? lo : (lo + hi) / 2;
      } else if (has_lo) {
        value = lo_strict ? lo + 1 : lo;
      } else if (has_hi) {
        value = hi_strict ? hi - 1 : hi;
      }
      out[vi] = value;
    }
    for (std::size_t i = subs_.size(); i-- > 0;) {
      const Substitution& s = subs_[i];
      Rat v = s.rhs;
      for (const auto& [var, c] : s.expr) v -= c * out[var];
      out[s.var] = v;
    }
  }

  std::size_t n_vars_;
  std::vector<EqRow> eqs_;
  std::vector<FmRow> ineqs_;
  std::vector<Substitution> subs_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<FmRow>> snapshots_;
};

/// Value-variable layout for the oracle: per component, per position, entries
/// then exits, locals in declaration order.
struct ValueLayout {
  std::vector<std::size_t> base;
  std::vector<std::size_t> n_locals;
  std::size_t total = 0;

  ValueLayout(const Network& net, const PathSet& ps) {
    for (std::size_t c = 0; c < net.automata.size(); ++c) {
      base.push_back(total);
      n_locals.push_back(net.automata[c].locals.size());
      total += ps.paths[c].locations.size() * 2 * n_locals.back();
    }
  }
  std::size_t entry(std::size_t c, std::size_t pos, std::size_t j) const {
    return base[c] + pos * 2 * n_locals[c] + j;
  }
  std::size_t exit(std::size_t c, std::size_t pos, std::size_t j) const {
    return base[c] + pos * 2 * n_locals[c] + n_locals[c] + j;
  }
};

class OracleSearch {
 public:
  OracleSearch(const Network& net, const PathSet& ps, const SyncSkeleton& skel,
               const ReachSpec& spec, const Rat& step, const Rat& horizon)
      : net_(net), ps_(ps), skel_(skel), spec_(spec), step_(step),
        horizon_(horizon), vals_(net, ps) {
    for (std::size_t c = 0; c < net.automata.size(); ++c) {
      for (std::size_t pos = 0; pos < ps.paths[c].locations.size(); ++pos) {
        dims_.emplace_back(c, pos);
      }
    }
    build_dwell_equalities();
    Rat k = horizon_ / step_;
    max_steps_ = k.get_den() == 1 && k >= 0 ? k.get_num().get_ui() : 0;
  }

  OracleResult run() {
    OracleResult out;
    if (dims_.size() > 64 || max_steps_ > 1024) {
      out.kind = OracleResult::Kind::TooLarge;
      return out;
    }
    assigned_.assign(dims_.size(), Rat(0));
    if (!dfs(0, out)) {
      if (out.kind != OracleResult::Kind::TooLarge &&
          out.kind != OracleResult::Kind::Feasible) {
        out.kind = OracleResult::Kind::NotFound;
      }
    }
    return out;
  }

 private:
  std::size_t dim_index(std::size_t c, std::size_t pos) const {
    for (std::size_t d = 0; d < dims_.size(); ++d) {
      if (dims_[d].first == c && dims_[d].second == pos) return d;
    }
    return dims_.size();
  }

  void add_pair_equality(std::size_t ci, std::size_t pi, std::size_t cj,
                         std::size_t pj) {
    std::map<std::size_t, Rat> terms;
    for (std::size_t q = 0; q <= pi; ++q) terms[dim_index(ci, q)] += 1;
    for (std::size_t q = 0; q <= pj; ++q) terms[dim_index(cj, q)] -= 1;
    for (auto it = terms.begin(); it != terms.end();) {
      it = it->second == 0 ? terms.erase(it) : std::next(it);
    }
    if (!terms.empty()) dwell_eqs_.push_back(std::move(terms));
  }

  void build_dwell_equalities() {
    for (const auto& e : skel_.events) {
      std::vector<std::pair<std::size_t, std::size_t>> parts(
          e.positions.begin(), e.positions.end());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          add_pair_equality(parts[i].first, parts[i].second, parts[j].first,
                            parts[j].second);
        }
      }
    }
    for (std::size_t i = 0; i < net_.automata.size(); ++i) {
      for (std::size_t j = i + 1; j < net_.automata.size(); ++j) {
        add_pair_equality(i, ps_.paths[i].locations.size() - 1, j,
                          ps_.paths[j].locations.size() - 1);
      }
    }
    last_unassigned_.assign(dims_.size(), std::vector<std::size_t>());
    for (std::size_t e = 0; e < dwell_eqs_.size(); ++e) {
      std::size_t last = 0;
      for (const auto& [d, c] : dwell_eqs_[e]) last = std::max(last, d);
      last_unassigned_[last].push_back(e);
      (void)e;
    }
  }

  /// Forced value for dimension d when it closes equality e, given all its
  /// other dimensions are already assigned.
  bool forced_value(std::size_t e, std::size_t d, Rat& out) const {
    Rat sum = 0;
    Rat coeff = 0;
    for (const auto& [dim, c] : dwell_eqs_[e]) {
      if (dim == d) {
        coeff = c;
      } else {
        sum += c * assigned_[dim];
      }
    }
    out = -sum / coeff;
    return true;
  }

  bool on_grid(const Rat& v) const {
    if (v < 0 || v > horizon_) return false;
    Rat k = v / step_;
    return k.get_den() == 1;
  }

  bool dfs(std::size_t d, OracleResult& out) {
    if (++visited_ > kNodeBudget) {
      out.kind = OracleResult::Kind::TooLarge;
      return false;
    }
    if (d == dims_.size()) return try_leaf(out);

    const std::vector<std::size_t>& closing = last_unassigned_[d];
    if (!closing.empty()) {
      Rat v;
      forced_value(closing.front(), d, v);
      if (!on_grid(v)) return false;
      for (std::size_t e : closing) {
        Rat w;
        forced_value(e, d, w);
        if (w != v) return false;
      }
      assigned_[d] = v;
      return dfs(d + 1, out);
    }
    for (std::size_t k = 0; k <= max_steps_; ++k) {
      assigned_[d] = step_ * static_cast<long>(k);
      if (dfs(d + 1, out)) return true;
      if (out.kind == OracleResult::Kind::TooLarge) return false;
    }
    return false;
  }

  bool try_leaf(OracleResult& out) {
    ValueSolver solver(vals_.total);
    if (!build_value_system(solver)) return false;
    std::vector<Rat> values;
    bool too_large = false;
    if (!solver.solve(values, too_large)) {
      if (too_large) out.kind = OracleResult::Kind::TooLarge;
      return false;
    }
    Witness w = assemble(values);
    ReplayResult rr = replay_witness(net_, ps_, skel_, spec_, w, Rat(0));
    if (!rr.passed) return false;
    out.kind = OracleResult::Kind::Feasible;
    out.witness = std::move(w);
    return true;
  }

  Rat dwell_of(std::size_t c, std::size_t pos) const {
    return assigned_[dim_index(c, pos)];
  }

  bool sample_col(std::size_t c, std::size_t p, const std::string& var,
                  std::size_t& col) const {
    if (net_.automata[c].has_local(var)) {
      col = vals_.exit(c, p, local_index(c, var));
      return true;
    }
    std::size_t o = owner_of(net_, var);
    if (o == Network::npos) return false;
    for (const auto& e : skel_.events) {
      auto me = e.positions.find(c);
      if (me == e.positions.end() || me->second != p) continue;
      auto po = e.positions.find(o);
      if (po == e.positions.end()) return false;
      col = vals_.exit(o, po->second, local_index(o, var));
      return true;
    }
    return false;
  }

  std::size_t local_index(std::size_t c, const std::string& var) const {
    const auto& locals = net_.automata[c].locals;
    for (std::size_t j = 0; j < locals.size(); ++j) {
      if (locals[j] == var) return j;
    }
    return locals.size();
  }

  bool build_value_system(ValueSolver& solver) const {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      const Path& p = ps_.paths[c];

      const Location* first = a.find_location(p.locations.front());
      for (std::size_t j = 0; j < a.locals.size(); ++j) {
        auto it = first->initial_conditions.find(a.locals[j]);
        if (it == first->initial_conditions.end()) continue;
        solver.add_eq({{vals_.entry(c, 0, j), Rat(1)}}, it->second);
      }

      for (std::size_t pos = 0; pos < p.locations.size(); ++pos) {
        const Location* loc = a.find_location(p.locations[pos]);
        Rat d = dwell_of(c, pos);
        for (std::size_t j = 0; j < a.locals.size(); ++j) {
          const FlowRange& f = loc->flow.at(a.locals[j]);
          std::map<std::size_t, Rat> up = {{vals_.exit(c, pos, j), Rat(1)},
                                           {vals_.entry(c, pos, j), Rat(-1)}};
          solver.add_le(up, f.hi * d, false);
          std::map<std::size_t, Rat> lo = {{vals_.exit(c, pos, j), Rat(-1)},
                                           {vals_.entry(c, pos, j), Rat(1)}};
          solver.add_le(lo, -(f.lo * d), false);
        }
        for (const auto& con : loc->invariant) {
          for (int side = 0; side < 2; ++side) {
            std::map<std::size_t, Rat> terms;
            for (const auto& [var, coeff] : con.lhs.terms) {
              std::size_t j = local_index(c, var);
              terms[side == 0 ? vals_.entry(c, pos, j)
                              : vals_.exit(c, pos, j)] = coeff;
            }
            solver.add(con.rel, std::move(terms), con.rhs - con.lhs.constant);
          }
        }
      }

      for (std::size_t pos = 0; pos < p.transitions.size(); ++pos) {
        const Transition& t = a.transitions[p.transitions[pos]];
        for (const auto& con : t.guard) {
          std::map<std::size_t, Rat> terms;
          for (const auto& [var, coeff] : con.lhs.terms) {
            std::size_t col;
            if (!sample_col(c, pos, var, col)) return false;
            terms[col] = coeff;
          }
          solver.add(con.rel, std::move(terms), con.rhs - con.lhs.constant);
        }
        for (std::size_t j = 0; j < a.locals.size(); ++j) {
          auto rs = t.reset.find(a.locals[j]);
          std::map<std::size_t, Rat> terms;
          terms[vals_.entry(c, pos + 1, j)] = 1;
          Rat rhs{0};
          if (rs == t.reset.end()) {
            terms[vals_.exit(c, pos, j)] = -1;
          } else {
            rhs = rs->second.constant;
            for (const auto& [var, coeff] : rs->second.terms) {
              std::size_t col;
              if (!sample_col(c, pos, var, col)) return false;
              auto [slot, fresh] = terms.emplace(col, -coeff);
              if (!fresh) slot->second -= coeff;
            }
          }
          solver.add_eq(std::move(terms), std::move(rhs));
        }
      }
    }

    for (const auto& con : spec_.rows) {
      std::map<std::size_t, Rat> terms;
      for (const auto& [var, coeff] : con.lhs.terms) {
        std::size_t o = owner_of(net_, var);
        if (o == Network::npos) return false;
        std::size_t pos = ps_.paths[o].locations.size() - 1;
        terms[vals_.exit(o, pos, local_index(o, var))] = coeff;
      }
      solver.add(con.rel, std::move(terms), con.rhs - con.lhs.constant);
    }
    return true;
  }

  Witness assemble(const std::vector<Rat>& values) const {
    Witness w;
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      WitnessComponent wc;
      wc.automaton = a.name;
      for (std::size_t pos = 0; pos < ps_.paths[c].locations.size(); ++pos) {
        WitnessStep st;
        st.location = ps_.paths[c].locations[pos];
        st.dwell = dwell_of(c, pos);
        for (std::size_t j = 0; j < a.locals.size(); ++j) {
          st.entry[a.locals[j]] = values[vals_.entry(c, pos, j)];
          st.exit[a.locals[j]] = values[vals_.exit(c, pos, j)];
        }
        wc.steps.push_back(std::move(st));
      }
      w.components.push_back(std::move(wc));
    }
    for (const auto& e : skel_.events) {
      auto [c, pos] = *e.positions.begin();
      Rat t = 0;
      for (std::size_t q = 0; q <= pos; ++q) t += w.components[c].steps[q].dwell;
      w.sync_times.push_back(t);
    }
    return w;
  }

  const Network& net_;
  const PathSet& ps_;
  const SyncSkeleton& skel_;
  const ReachSpec& spec_;
  Rat step_;
  Rat horizon_;
  ValueLayout vals_;
  std::vector<std::pair<std::size_t, std::size_t>> dims_;
  std::vector<std::map<std::size_t, Rat>> dwell_eqs_;
  std::vector<std::vector<std::size_t>> last_unassigned_;
  std::vector<Rat> assigned_;
  std::size_t max_steps_ = 0;
  std::size_t visited_ = 0;
};

}  // namespace

OracleResult sample_oracle(const Network& net, const PathSet& ps,
                           const SyncSkeleton& skel, const ReachSpec& spec,
                           const Rat& step, const Rat& horizon) {
  return OracleSearch(net, ps, skel, spec, step, horizon).run();
}

}  // namespace lharv
