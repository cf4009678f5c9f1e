#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lharv/diag.hpp"
#include "lharv/rat.hpp"

namespace lharv {

enum class Relation { LT, LE, EQ, GE, GT };

std::string relation_str(Relation rel);

/// Sum of coefficient*variable plus a constant. Terms are keyed by variable
/// name; zero coefficients are never stored.
struct LinearExpression {
  std::map<std::string, Rat> terms;
  Rat constant{0};

  void add_term(const std::string& var, const Rat& coeff);
  /// Missing variables evaluate as 0.
  Rat evaluate(const std::map<std::string, Rat>& values) const;
};

/// Normal form: all variable terms on the left, a pure rational on the right.
struct Constraint {
  LinearExpression lhs;
  Relation rel = Relation::LE;
  Rat rhs{0};
};

/// Rate interval for one variable in one location, units per second.
struct FlowRange {
  Rat lo{0};
  Rat hi{0};
};

struct Location {
  std::string name;
  std::map<std::string, FlowRange> flow;       // one range per local variable
  std::vector<Constraint> invariant;           // local variables only
  std::map<std::string, Rat> initial_conditions;  // meaningful on initial locs
};

struct Transition {
  std::string label;
  std::string from;
  std::string to;
  std::vector<Constraint> guard;  // locals; outer reads on shared labels only
  std::map<std::string, LinearExpression> reset;  // local -> new value
};

struct Automaton {
  std::string name;
  std::vector<std::string> locals;       // declaration order
  std::vector<std::string> reads;        // outer variables this one samples
  std::vector<std::string> local_labels;
  std::vector<std::string> shared_labels;
  std::vector<Location> locations;       // declaration order
  std::vector<std::string> initial_locations;
  std::vector<Transition> transitions;   // declaration order

  const Location* find_location(const std::string& name) const;
  bool is_initial(const std::string& location) const;
  bool has_local(const std::string& var) const;
  bool has_read(const std::string& var) const;
  bool has_label(const std::string& label) const;
  bool label_is_shared(const std::string& label) const;
};

/// A composition is just the component list; the product automaton is never
/// built here.
struct Network {
  std::vector<Automaton> automata;  // declaration order

  const Automaton* find_automaton(const std::string& name) const;
  std::size_t automaton_index(const std::string& name) const;  // npos if absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Target locations per component plus linear constraints over final values.
struct ReachSpec {
  std::map<std::string, std::string> targets;  // automaton name -> location
  std::vector<Constraint> rows;                // over locals, at final exits
};

/// Index of the component that declares `var` as a local, or Network::npos.
std::size_t owner_of(const Network& net, const std::string& var);

/// Indices of every component declaring `label` as shared, ascending; for a
/// label only declared local, the singleton owner.
std::vector<std::size_t> participants_of(const Network& net,
                                         const std::string& label);

/// Structural well-formedness: unique component names; globally unique local
/// variables; pairwise disjoint local label sets; a label is never local in
/// one component and shared in another; every read resolves to exactly one
/// other component's local; flow ranges total per location with lo <= hi;
/// initial conditions only on initial locations and only for locals;
/// invariants reference locals only; guards and resets may reference reads
/// only on a shared label whose participants include the read's owner.
/// Returns true when no errors were reported.
bool validate_network(const Network& net, DiagnosticSink& diags);

}  // namespace lharv
