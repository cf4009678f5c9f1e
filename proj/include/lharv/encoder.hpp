#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lharv/model.hpp"
#include "lharv/path.hpp"

namespace lharv {

enum class VarKind { Dwell, Entry, Exit };

/// One LP column: the dwell time of a path position, or one variable's value
/// when entering / leaving that position.
struct LPVar {
  VarKind kind = VarKind::Dwell;
  std::uint32_t comp = 0;
  std::uint32_t pos = 0;
  std::string var;  // empty for Dwell
};

enum class RowKind { NonNeg, Init, Flow, Inv, Guard, Reset, Carry, Sync, Total, Spec };

std::string row_kind_str(RowKind kind);

/// One LP row over LPVar indices, in normal form (terms left, rational right).
struct Row {
  RowKind kind = RowKind::NonNeg;
  std::map<std::size_t, Rat> terms;
  Relation rel = Relation::LE;
  Rat rhs{0};
};

/// Column layout of one component: a block of 1 + 2*|locals| columns per path
/// position (dwell, then entries, then exits, locals in declaration order).
struct ComponentLayout {
  std::size_t base = 0;
  std::size_t positions = 0;
  std::vector<std::string> locals;

  std::size_t block() const { return 1 + 2 * locals.size(); }
  std::size_t dwell(std::size_t pos) const { return base + pos * block(); }
  std::size_t entry(std::size_t pos, std::size_t var) const {
    return base + pos * block() + 1 + var;
  }
  std::size_t exit(std::size_t pos, std::size_t var) const {
    return base + pos * block() + 1 + locals.size() + var;
  }
};

struct LinearSystem {
  std::vector<LPVar> vars;
  std::vector<Row> rows;
  std::vector<ComponentLayout> layout;
  std::vector<std::string> component_names;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_vars() const { return vars.size(); }
  std::string var_name(std::size_t index) const;
};

/// Compiles the aligned path set plus the reachability rows into one linear
/// feasibility system. Emits, per component: dwell nonnegativity, initial
/// conditions, flow rows lo*d <= exit-entry <= hi*d, invariants at entry and
/// exit, guards at the source exit (outer reads at the owner's exit at the
/// aligned occurrence), resets and carry-overs; then pairwise cumulative-dwell
/// equality per sync event, pairwise equal totals, and the spec rows at final
/// exits. Deterministic: identical inputs give identical systems.
LinearSystem encode(const Network& net, const PathSet& ps,
                    const SyncSkeleton& skel, const ReachSpec& spec);

/// One row per line, canonical rendering; used by golden tests and --dump-lp.
std::string row_str(const LinearSystem& sys, const Row& row);
std::string dump_system(const LinearSystem& sys);

/// tol = 0 gives the exact semantics (strict rows strictly). With tol > 0,
/// every comparison is relaxed by tol.
bool row_satisfied(const Row& row, const std::vector<Rat>& values,
                   const Rat& tol);
bool system_satisfied(const LinearSystem& sys, const std::vector<Rat>& values,
                      const Rat& tol);

}  // namespace lharv
