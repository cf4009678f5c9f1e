#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lharv/diag.hpp"
#include "lharv/model.hpp"

namespace lharv {

/// One component's location/transition sequence. locations.size() is always
/// transitions.size() + 1; transitions hold indices into
/// Automaton::transitions.
struct Path {
  std::string automaton;
  std::vector<std::string> locations;
  std::vector<std::size_t> transitions;
};

/// Exactly one path per component, in network declaration order.
struct PathSet {
  std::vector<Path> paths;
};

/// One global move of an explicit composition: the fired label plus, for each
/// moving component, its transition index. Used by tests and by project().
struct GlobalStep {
  std::string label;
  std::map<std::size_t, std::size_t> moves;  // component index -> transition
};

struct GlobalPath {
  std::vector<std::string> initial_locations;  // one per component
  std::vector<GlobalStep> steps;
};

/// The k-th joint firing of a shared label: for each participating component,
/// the position of its k-th occurrence within its path.
struct SyncEvent {
  std::string label;
  std::size_t occurrence = 0;
  std::map<std::size_t, std::size_t> positions;  // component -> transition pos
};

/// Events in one topological order of the union of per-path orders.
struct SyncSkeleton {
  std::vector<SyncEvent> events;
};

/// Paths are structurally checked against the network: known component, every
/// component covered exactly once, connected steps, initial first location.
bool validate_pathset(const Network& net, const PathSet& ps,
                      DiagnosticSink& diags);

/// Occurrence alignment. Returns no skeleton (and Inconsistent diagnostics)
/// iff either some shared label occurs a different number of times in two
/// participants' paths, or the union of per-path orders over sync events has
/// a cycle, i.e. no interleaving exists.
struct AlignOutcome {
  std::optional<SyncSkeleton> skeleton;
  std::vector<Diagnostic> diags;
};
AlignOutcome align_occurrences(const Network& net, const PathSet& ps);

/// Projection of a global path onto one component: keep its coordinate, drop
/// steps it does not move on.
Path project(const Network& net, const GlobalPath& gp, std::size_t component);

/// Cumulative dwell index set {0..pos}; the instant of a transition equals the
/// cumulative dwell through and including its source location.
std::vector<std::size_t> occurrence_positions(const Automaton& a,
                                              const Path& path,
                                              const std::string& label);

}  // namespace lharv
