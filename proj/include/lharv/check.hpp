#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lharv/lp.hpp"

namespace lharv {

enum class VerdictKind { Unreachable, Reachable, Inconsistent, DeadlineMiss };

std::string verdict_str(VerdictKind kind);

struct CheckResult {
  VerdictKind verdict = VerdictKind::Inconsistent;
  std::optional<Witness> witness;  // present iff Reachable
  std::size_t n_rows = 0;
  std::size_t n_vars = 0;
  bool used_float = false;
  std::vector<Diagnostic> diags;
};

/// Full pipeline on validated inputs: occurrence alignment (Inconsistent on
/// failure), structural target check (Unreachable when a target is not the
/// path's final location), encoding, feasibility solve, witness extraction.
/// Float-mode Feasible answers are replay-confirmed at tol 1e-7 and fall back
/// to the exact solver when the confirmation fails.
CheckResult check_reachability(const Network& net, const PathSet& ps,
                               const ReachSpec& spec, const SolveOptions& opt);

}  // namespace lharv
