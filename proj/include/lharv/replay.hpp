#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lharv/model.hpp"
#include "lharv/path.hpp"

namespace lharv {

/// One solved step: where the component stayed, for how long, and the
/// variable values on entry and exit.
struct WitnessStep {
  std::string location;
  Rat dwell{0};
  std::map<std::string, Rat> entry;
  std::map<std::string, Rat> exit;
};

struct WitnessComponent {
  std::string automaton;
  std::vector<WitnessStep> steps;
};

/// A timed run of the whole composition. sync_times[i] is the global instant
/// of skeleton event i. Values are exact rationals in both modes; float-mode
/// doubles convert exactly.
struct Witness {
  std::vector<WitnessComponent> components;
  std::vector<Rat> sync_times;
};

struct ReplayResult {
  bool passed = false;
  std::vector<std::string> violations;
};

/// Semantic validation straight from the automaton semantics, independent of
/// the encoder: initial conditions, slope bounds (zero dwell forces equal
/// endpoints), endpoint invariants plus a midpoint spot-check, guards at exit
/// values with owner-sampled reads, resets, carry-over, pairwise-equal sync
/// timestamps, equal totals, and spec rows at final exits. tol relaxes every
/// comparison; exact mode passes tol = 0.
ReplayResult replay_witness(const Network& net, const PathSet& ps,
                            const SyncSkeleton& skel, const ReachSpec& spec,
                            const Witness& w, const Rat& tol);

struct OracleResult {
  enum class Kind { Feasible, NotFound, TooLarge };
  Kind kind = Kind::NotFound;
  std::optional<Witness> witness;
};

/// Brute-force ground truth for small instances: enumerates dwell vectors on
/// the grid {0, step, ..., horizon} in lexicographic order (sync and total
/// equalities prune the search), decides each candidate's value constraints
/// exactly, and returns the first witness that passes replay_witness with
/// tol 0. NotFound is grid-relative, not a proof of infeasibility.
OracleResult sample_oracle(const Network& net, const PathSet& ps,
                           const SyncSkeleton& skel, const ReachSpec& spec,
                           const Rat& step, const Rat& horizon);

}  // namespace lharv
