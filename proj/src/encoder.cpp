#include "lharv/encoder.hpp"

#include <stdexcept>
#include <utility>

namespace lharv {

std::string row_kind_str(RowKind kind) {
  switch (kind) {
    case RowKind::NonNeg: return "nonneg";
    case RowKind::Init: return "init";
    case RowKind::Flow: return "flow";
    case RowKind::Inv: return "inv";
    case RowKind::Guard: return "guard";
    case RowKind::Reset: return "reset";
    case RowKind::Carry: return "carry";
    case RowKind::Sync: return "sync";
    case RowKind::Total: return "total";
    case RowKind::Spec: return "spec";
  }
  return "?";
}

std::string LinearSystem::var_name(std::size_t index) const {
  const LPVar& v = vars[index];
  const std::string& comp = component_names[v.comp];
  switch (v.kind) {
    case VarKind::Dwell:
      return "dwell(" + comp + "," + std::to_string(v.pos) + ")";
    case VarKind::Entry:
      return "in(" + comp + "," + std::to_string(v.pos) + "," + v.var + ")";
    case VarKind::Exit:
      return "out(" + comp + "," + std::to_string(v.pos) + "," + v.var + ")";
  }
  return "?";
}

namespace {

class Encoder {
 public:
  Encoder(const Network& net, const PathSet& ps, const SyncSkeleton& skel,
          const ReachSpec& spec)
      : net_(net), ps_(ps), skel_(skel), spec_(spec) {}

  LinearSystem run() {
    build_columns();
    build_event_lookup();
    emit_nonneg();
    emit_init();
    emit_flow();
    emit_invariants();
    emit_guards();
    emit_resets_and_carries();
    emit_sync();
    emit_total();
    emit_spec();
    return std::move(sys_);
  }

 private:
  void build_columns() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      const Path& p = ps_.paths[c];
      ComponentLayout lay;
      lay.base = sys_.vars.size();
      lay.positions = p.locations.size();
      lay.locals = a.locals;
      for (std::size_t pos = 0; pos < lay.positions; ++pos) {
        sys_.vars.push_back({VarKind::Dwell, static_cast<std::uint32_t>(c),
                             static_cast<std::uint32_t>(pos), ""});
        for (const auto& v : a.locals) {
          sys_.vars.push_back({VarKind::Entry, static_cast<std::uint32_t>(c),
                               static_cast<std::uint32_t>(pos), v});
        }
        for (const auto& v : a.locals) {
          sys_.vars.push_back({VarKind::Exit, static_cast<std::uint32_t>(c),
                               static_cast<std::uint32_t>(pos), v});
        }
      }
      sys_.layout.push_back(std::move(lay));
      sys_.component_names.push_back(a.name);
    }
  }

  void build_event_lookup() {
    for (const auto& e : skel_.events) {
      for (const auto& [c, p] : e.positions) ev_at_[{c, p}] = &e;
    }
  }

  std::size_t local_index(std::size_t c, const std::string& var) const {
    const auto& locals = sys_.layout[c].locals;
    for (std::size_t j = 0; j < locals.size(); ++j) {
      if (locals[j] == var) return j;
    }
    throw InternalError("no local '" + var + "' in component " +
                        sys_.component_names[c]);
  }

  /// Column holding the value of `var` as seen by component c's transition at
  /// position p: its own exit for locals, the owner's exit at the aligned
  /// occurrence for reads.
  std::size_t sample(std::size_t c, std::size_t p, const std::string& var) {
    if (net_.automata[c].has_local(var)) {
      return sys_.layout[c].exit(p, local_index(c, var));
    }
    std::size_t o = owner_of(net_, var);
    if (o == Network::npos) throw InternalError("unowned variable " + var);
    auto it = ev_at_.find({c, p});
    if (it == ev_at_.end()) {
      throw InternalError("read of '" + var + "' with no aligned occurrence");
    }
    auto po = it->second->positions.find(o);
    if (po == it->second->positions.end()) {
      throw InternalError("owner of '" + var + "' absent from event '" +
                          it->second->label + "'");
    }
    return sys_.layout[o].exit(po->second, local_index(o, var));
  }

  void add_row(Row row) { sys_.rows.push_back(std::move(row)); }

  void emit_nonneg() {
    for (std::size_t c = 0; c < sys_.layout.size(); ++c) {
      for (std::size_t pos = 0; pos < sys_.layout[c].positions; ++pos) {
        Row r;
        r.kind = RowKind::NonNeg;
        r.terms[sys_.layout[c].dwell(pos)] = 1;
        r.rel = Relation::GE;
        r.rhs = 0;
        add_row(std::move(r));
      }
    }
  }

  void emit_init() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      const Location* first = a.find_location(ps_.paths[c].locations.front());
      for (std::size_t j = 0; j < a.locals.size(); ++j) {
        auto it = first->initial_conditions.find(a.locals[j]);
        if (it == first->initial_conditions.end()) continue;
        Row r;
        r.kind = RowKind::Init;
        r.terms[sys_.layout[c].entry(0, j)] = 1;
        r.rel = Relation::EQ;
        r.rhs = it->second;
        add_row(std::move(r));
      }
    }
  }

  void emit_flow() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      for (std::size_t pos = 0; pos < sys_.layout[c].positions; ++pos) {
        const Location* loc = a.find_location(ps_.paths[c].locations[pos]);
        for (std::size_t j = 0; j < a.locals.size(); ++j) {
          const FlowRange& f = loc->flow.at(a.locals[j]);
          Row lo;
          lo.kind = RowKind::Flow;
          lo.terms[sys_.layout[c].exit(pos, j)] = 1;
          lo.terms[sys_.layout[c].entry(pos, j)] = -1;
          if (f.lo != 0) lo.terms[sys_.layout[c].dwell(pos)] = -f.lo;
          lo.rel = Relation::GE;
          lo.rhs = 0;
          add_row(std::move(lo));
          Row hi;
          hi.kind = RowKind::Flow;
          hi.terms[sys_.layout[c].exit(pos, j)] = 1;
          hi.terms[sys_.layout[c].entry(pos, j)] = -1;
          if (f.hi != 0) hi.terms[sys_.layout[c].dwell(pos)] = -f.hi;
          hi.rel = Relation::LE;
          hi.rhs = 0;
          add_row(std::move(hi));
        }
      }
    }
  }

  Row instantiate(const Constraint& con, RowKind kind, std::size_t c,
                  std::size_t pos, VarKind at) {
    Row r;
    r.kind = kind;
    for (const auto& [var, coeff] : con.lhs.terms) {
      std::size_t j = local_index(c, var);
      std::size_t col = at == VarKind::Entry ? sys_.layout[c].entry(pos, j)
                                             : sys_.layout[c].exit(pos, j);
      r.terms[col] = coeff;
    }
    r.rel = con.rel;
    r.rhs = con.rhs - con.lhs.constant;
    return r;
  }

  void emit_invariants() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      for (std::size_t pos = 0; pos < sys_.layout[c].positions; ++pos) {
        const Location* loc = a.find_location(ps_.paths[c].locations[pos]);
        for (const auto& con : loc->invariant) {
          add_row(instantiate(con, RowKind::Inv, c, pos, VarKind::Entry));
          add_row(instantiate(con, RowKind::Inv, c, pos, VarKind::Exit));
        }
      }
    }
  }

  void emit_guards() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      const Path& p = ps_.paths[c];
      for (std::size_t pos = 0; pos < p.transitions.size(); ++pos) {
        const Transition& t = a.transitions[p.transitions[pos]];
        for (const auto& con : t.guard) {
          Row r;
          r.kind = RowKind::Guard;
          for (const auto& [var, coeff] : con.lhs.terms) {
            r.terms[sample(c, pos, var)] = coeff;
          }
          r.rel = con.rel;
          r.rhs = con.rhs - con.lhs.constant;
          add_row(std::move(r));
        }
      }
    }
  }

  void emit_resets_and_carries() {
    for (std::size_t c = 0; c < net_.automata.size(); ++c) {
      const Automaton& a = net_.automata[c];
      const Path& p = ps_.paths[c];
      for (std::size_t pos = 0; pos < p.transitions.size(); ++pos) {
        const Transition& t = a.transitions[p.transitions[pos]];
        for (std::size_t j = 0; j < a.locals.size(); ++j) {
          auto it = t.reset.find(a.locals[j]);
          Row r;
          r.terms[sys_.layout[c].entry(pos + 1, j)] = 1;
          r.rel = Relation::EQ;
          if (it == t.reset.end()) {
            r.kind = RowKind::Carry;
            r.terms[sys_.layout[c].exit(pos, j)] = -1;
            r.rhs = 0;
          } else {
            r.kind = RowKind::Reset;
            for (const auto& [var, coeff] : it->second.terms) {
              std::size_t col = sample(c, pos, var);
              auto [slot, fresh] = r.terms.emplace(col, -coeff);
              if (!fresh) slot->second -= coeff;
            }
            r.rhs = it->second.constant;
          }
          add_row(std::move(r));
        }
      }
    }
  }

  void add_cumulative(Row& r, std::size_t c, std::size_t through_pos,
                      const Rat& sign) {
    for (std::size_t q = 0; q <= through_pos; ++q) {
      r.terms[sys_.layout[c].dwell(q)] = sign;
    }
  }

  void emit_sync() {
    for (const auto& e : skel_.events) {
      std::vector<std::pair<std::size_t, std::size_t>> parts(
          e.positions.begin(), e.positions.end());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          Row r;
          r.kind = RowKind::Sync;
          add_cumulative(r, parts[i].first, parts[i].second, 1);
          add_cumulative(r, parts[j].first, parts[j].second, -1);
          r.rel = Relation::EQ;
          r.rhs = 0;
          add_row(std::move(r));
        }
      }
    }
  }

  void emit_total() {
    for (std::size_t i = 0; i < sys_.layout.size(); ++i) {
      for (std::size_t j = i + 1; j < sys_.layout.size(); ++j) {
        Row r;
        r.kind = RowKind::Total;
        add_cumulative(r, i, sys_.layout[i].positions - 1, 1);
        add_cumulative(r, j, sys_.layout[j].positions - 1, -1);
        r.rel = Relation::EQ;
        r.rhs = 0;
        add_row(std::move(r));
      }
    }
  }

  void emit_spec() {
    for (const auto& con : spec_.rows) {
      Row r;
      r.kind = RowKind::Spec;
      for (const auto& [var, coeff] : con.lhs.terms) {
        std::size_t o = owner_of(net_, var);
        if (o == Network::npos) throw InternalError("unowned variable " + var);
        std::size_t final_pos = sys_.layout[o].positions - 1;
        r.terms[sys_.layout[o].exit(final_pos, local_index(o, var))] = coeff;
      }
      r.rel = con.rel;
      r.rhs = con.rhs - con.lhs.constant;
      add_row(std::move(r));
    }
  }

  const Network& net_;
  const PathSet& ps_;
  const SyncSkeleton& skel_;
  const ReachSpec& spec_;
  LinearSystem sys_;
  std::map<std::pair<std::size_t, std::size_t>, const SyncEvent*> ev_at_;
};

}  // namespace

LinearSystem encode(const Network& net, const PathSet& ps,
                    const SyncSkeleton& skel, const ReachSpec& spec) {
  return Encoder(net, ps, skel, spec).run();
}

std::string row_str(const LinearSystem& sys, const Row& row) {
  std::string s;
  bool first = true;
  for (const auto& [col, coeff] : row.terms) {
    if (coeff > 0) {
      if (!first) s += " + ";
      if (coeff != 1) s += rat_str(coeff) + "*";
    } else {
      s += first ? "-" : " - ";
      Rat mag = -coeff;
      if (mag != 1) s += rat_str(mag) + "*";
    }
    s += sys.var_name(col);
    first = false;
  }
  if (first) s = "0";
  s += " " + relation_str(row.rel) + " " + rat_str(row.rhs);
  return s;
}

std::string dump_system(const LinearSystem& sys) {
  std::string out;
  out += "vars: " + std::to_string(sys.n_vars()) + "\n";
  out += "rows: " + std::to_string(sys.n_rows()) + "\n";
  for (const auto& row : sys.rows) {
    out += "row " + row_kind_str(row.kind) + ": " + row_str(sys, row) + "\n";
  }
  return out;
}

bool row_satisfied(const Row& row, const std::vector<Rat>& values,
                   const Rat& tol) {
  Rat lhs = 0;
  for (const auto& [col, coeff] : row.terms) lhs += coeff * values[col];
  switch (row.rel) {
    case Relation::LT: return lhs < row.rhs + tol;
    case Relation::LE: return lhs <= row.rhs + tol;
    case Relation::EQ: return lhs <= row.rhs + tol && lhs >= row.rhs - tol;
    case Relation::GE: return lhs >= row.rhs - tol;
    case Relation::GT: return lhs > row.rhs - tol;
  }
  return false;
}

bool system_satisfied(const LinearSystem& sys, const std::vector<Rat>& values,
                      const Rat& tol) {
  for (const auto& row : sys.rows) {
    if (!row_satisfied(row, values, tol)) return false;
  }
  return true;
}

}  // namespace lharv
