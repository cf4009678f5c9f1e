#include "lharv/model.hpp"

#include <algorithm>
#include <set>

namespace lharv {

std::string relation_str(Relation rel) {
  switch (rel) {
    case Relation::LT: return "<";
    case Relation::LE: return "<=";
    case Relation::EQ: return "=";
    case Relation::GE: return ">=";
    case Relation::GT: return ">";
  }
  return "?";
}

void LinearExpression::add_term(const std::string& var, const Rat& coeff) {
  auto it = terms.find(var);
  if (it == terms.end()) {
    if (coeff != 0) terms.emplace(var, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0) terms.erase(it);
}

Rat LinearExpression::evaluate(const std::map<std::string, Rat>& values) const {
  Rat out = constant;
  for (const auto& [var, coeff] : terms) {
    auto it = values.find(var);
    if (it != values.end()) out += coeff * it->second;
  }
  return out;
}

const Location* Automaton::find_location(const std::string& name) const {
  for (const auto& loc : locations) {
    if (loc.name == name) return &loc;
  }
  return nullptr;
}

bool Automaton::is_initial(const std::string& location) const {
  return std::find(initial_locations.begin(), initial_locations.end(),
                   location) != initial_locations.end();
}

bool Automaton::has_local(const std::string& var) const {
  return std::find(locals.begin(), locals.end(), var) != locals.end();
}

bool Automaton::has_read(const std::string& var) const {
  return std::find(reads.begin(), reads.end(), var) != reads.end();
}

bool Automaton::has_label(const std::string& label) const {
  return std::find(local_labels.begin(), local_labels.end(), label) !=
             local_labels.end() ||
         label_is_shared(label);
}

bool Automaton::label_is_shared(const std::string& label) const {
  return std::find(shared_labels.begin(), shared_labels.end(), label) !=
         shared_labels.end();
}

const Automaton* Network::find_automaton(const std::string& name) const {
  for (const auto& a : automata) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::size_t Network::automaton_index(const std::string& name) const {
  for (std::size_t i = 0; i < automata.size(); ++i) {
    if (automata[i].name == name) return i;
  }
  return npos;
}

std::size_t owner_of(const Network& net, const std::string& var) {
  for (std::size_t i = 0; i < net.automata.size(); ++i) {
    if (net.automata[i].has_local(var)) return i;
  }
  return Network::npos;
}

std::vector<std::size_t> participants_of(const Network& net,
                                         const std::string& label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.automata.size(); ++i) {
    if (net.automata[i].label_is_shared(label)) out.push_back(i);
  }
  if (out.empty()) {
    for (std::size_t i = 0; i < net.automata.size(); ++i) {
      const auto& ll = net.automata[i].local_labels;
      if (std::find(ll.begin(), ll.end(), label) != ll.end()) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

namespace {

void check_scope(const Network& net, const Automaton& a, const Transition& t,
                 const LinearExpression& expr, const std::string& context,
                 DiagnosticSink& diags) {
  for (const auto& [var, coeff] : expr.terms) {
    (void)coeff;
    if (a.has_local(var)) continue;
    if (a.has_read(var)) {
      if (!a.label_is_shared(t.label)) {
        diags.error({}, "automaton '" + a.name + "': " + context +
                            " reads outer variable '" + var +
                            "' on non-shared label '" + t.label + "'");
        continue;
      }
      std::size_t owner = owner_of(net, var);
      if (owner != Network::npos &&
          !net.automata[owner].label_is_shared(t.label)) {
        diags.error({}, "automaton '" + a.name + "': " + context +
                            " reads '" + var + "' but its owner '" +
                            net.automata[owner].name +
                            "' does not participate in label '" + t.label + "'");
      }
      continue;
    }
    diags.error({}, "automaton '" + a.name + "': " + context +
                        " references undeclared variable '" + var + "'");
  }
}

}  // namespace

bool validate_network(const Network& net, DiagnosticSink& diags) {
  std::set<std::string> automaton_names;
  std::set<std::string> all_locals;
  std::set<std::string> all_local_labels;
  std::set<std::string> all_shared_labels;

  for (const auto& a : net.automata) {
    if (!automaton_names.insert(a.name).second) {
      diags.error({}, "duplicate automaton name '" + a.name + "'");
    }
    for (const auto& v : a.locals) {
      if (!all_locals.insert(v).second) {
        diags.error({}, "duplicate local variable '" + v + "'");
      }
    }
    for (const auto& l : a.local_labels) {
      if (!all_local_labels.insert(l).second) {
        diags.error({}, "local label '" + l + "' declared by two components");
      }
    }
    for (const auto& l : a.shared_labels) all_shared_labels.insert(l);
  }
  for (const auto& l : all_shared_labels) {
    if (all_local_labels.count(l)) {
      diags.error({}, "label '" + l + "' is local in one component and shared " +
                          "in another");
    }
  }

  for (const auto& a : net.automata) {
    std::set<std::string> label_names;
    for (const auto& l : a.local_labels) {
      if (!label_names.insert(l).second) {
        diags.error({}, "automaton '" + a.name + "': duplicate label '" + l +
                            "'");
      }
    }
    for (const auto& l : a.shared_labels) {
      if (!label_names.insert(l).second) {
        diags.error({}, "automaton '" + a.name + "': duplicate label '" + l +
                            "'");
      }
    }

    std::set<std::string> local_names(a.locals.begin(), a.locals.end());
    if (local_names.size() != a.locals.size()) {
      diags.error({}, "automaton '" + a.name + "': repeated variable " +
                          "declaration");
    }

    for (const auto& r : a.reads) {
      if (a.has_local(r)) {
        diags.error({}, "automaton '" + a.name + "': read '" + r +
                            "' is also a local variable");
        continue;
      }
      bool owned = false;
      for (const auto& other : net.automata) {
        if (other.name != a.name && other.has_local(r)) {
          owned = true;
          break;
        }
      }
      if (!owned) {
        diags.error({}, "automaton '" + a.name + "': unowned readable " +
                            "variable '" + r + "'");
      }
    }

    std::set<std::string> location_names;
    for (const auto& loc : a.locations) {
      if (!location_names.insert(loc.name).second) {
        diags.error({}, "automaton '" + a.name + "': duplicate location '" +
                            loc.name + "'");
      }
      for (const auto& v : a.locals) {
        auto it = loc.flow.find(v);
        if (it == loc.flow.end()) {
          diags.error({}, "automaton '" + a.name + "': location '" + loc.name +
                              "' has no flow range for '" + v + "'");
        } else if (it->second.lo > it->second.hi) {
          diags.error({}, "automaton '" + a.name + "': location '" + loc.name +
                              "': empty rate interval for '" + v + "'");
        }
      }
      for (const auto& [v, range] : loc.flow) {
        (void)range;
        if (!a.has_local(v)) {
          diags.error({}, "automaton '" + a.name + "': location '" + loc.name +
                              "' declares flow for unknown variable '" + v +
                              "'");
        }
      }
      for (const auto& c : loc.invariant) {
        for (const auto& [var, coeff] : c.lhs.terms) {
          (void)coeff;
          if (!a.has_local(var)) {
            diags.error({}, "automaton '" + a.name + "': invariant of '" +
                                loc.name + "' references non-local variable '" +
                                var + "'");
          }
        }
      }
      for (const auto& [v, value] : loc.initial_conditions) {
        (void)value;
        if (!a.has_local(v)) {
          diags.error({}, "automaton '" + a.name + "': initial condition for " +
                              "unknown variable '" + v + "'");
        }
        if (!a.is_initial(loc.name)) {
          diags.error({}, "automaton '" + a.name + "': initial condition on " +
                              "non-initial location '" + loc.name + "'");
        }
      }
    }

    if (a.locations.empty()) {
      diags.error({}, "automaton '" + a.name + "' has no locations");
    }
    if (a.initial_locations.empty()) {
      diags.error({}, "automaton '" + a.name + "' has no initial location");
    }
    for (const auto& il : a.initial_locations) {
      if (!a.find_location(il)) {
        diags.error({}, "automaton '" + a.name + "': initial location '" + il +
                            "' does not exist");
      }
    }

    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
      const auto& t = a.transitions[i];
      const std::string context = "transition #" + std::to_string(i);
      if (!a.find_location(t.from)) {
        diags.error({}, "automaton '" + a.name + "': " + context +
                            " leaves unknown location '" + t.from + "'");
      }
      if (!a.find_location(t.to)) {
        diags.error({}, "automaton '" + a.name + "': " + context +
                            " enters unknown location '" + t.to + "'");
      }
      if (!a.has_label(t.label)) {
        diags.error({}, "automaton '" + a.name + "': " + context +
                            " uses undeclared label '" + t.label + "'");
      }
      for (const auto& c : t.guard) {
        check_scope(net, a, t, c.lhs, "guard of " + context, diags);
      }
      for (const auto& [target, expr] : t.reset) {
        if (!a.has_local(target)) {
          diags.error({}, "automaton '" + a.name + "': " + context +
                              " resets non-local variable '" + target + "'");
        }
        check_scope(net, a, t, expr, "reset of " + context, diags);
      }
    }
  }

  return !diags.has_errors();
}

}  // namespace lharv
