#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "lharv/encoder.hpp"
#include "lharv/replay.hpp"

namespace lharv {

enum class SolveMode { Exact, Float };

struct SolveOptions {
  SolveMode mode = SolveMode::Exact;
  /// Float mode tightens every strict row by this margin before solving.
  Rat epsilon{1, 1000000};
};

struct SolveOutcome {
  enum class Kind { Feasible, Infeasible };
  Kind kind = Kind::Infeasible;
  /// Total assignment over the system's variables. Float-mode results are
  /// doubles converted exactly to rationals.
  std::vector<Rat> values;
  bool from_float = false;
};

/// Decides nonemptiness of the mixed open/closed polyhedron. Exact mode
/// maximizes one auxiliary slack added to every strict row (capped at 1) and
/// reports Feasible iff the optimum is positive, or, with no strict rows,
/// iff phase one succeeds. Float mode answers directly when the numbers are
/// decisive: Feasible results must still be replay-confirmed by the caller,
/// and Infeasible is only reported when the residual clears a safety margin;
/// marginal outcomes fall back to the exact path.
SolveOutcome solve_feasibility(const LinearSystem& sys,
                               const SolveOptions& opt);

/// Presolves a system once so many variants differing only in appended rows
/// can be decided quickly. `solve` decides the same question as
/// solve_feasibility on the base system with `extras` appended; a Feasible
/// answer may pick a different vertex of the same polyhedron.
class PreparedSystem {
 public:
  explicit PreparedSystem(const LinearSystem& base);
  ~PreparedSystem();
  PreparedSystem(PreparedSystem&&) noexcept;
  PreparedSystem& operator=(PreparedSystem&&) noexcept;

  SolveOutcome solve(const std::vector<Row>& extras,
                     const SolveOptions& opt) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reshapes a satisfying assignment into a timed run; sync timestamps are the
/// cumulative dwell of each event's first participant.
Witness extract_witness(const LinearSystem& sys, const std::vector<Rat>& values,
                        const PathSet& ps, const SyncSkeleton& skel);

/// Reads a witness back into the column order of `sys`.
std::vector<Rat> assignment_from_witness(const LinearSystem& sys,
                                         const Witness& w);

}  // namespace lharv
