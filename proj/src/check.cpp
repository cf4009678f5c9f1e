#include "lharv/check.hpp"

namespace lharv {

std::string verdict_str(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Unreachable: return "Unreachable";
    case VerdictKind::Reachable: return "Reachable";
    case VerdictKind::Inconsistent: return "Inconsistent";
    case VerdictKind::DeadlineMiss: return "DeadlineMiss";
  }
  throw InternalError("unknown verdict");
}

namespace {

CheckResult solved_result(const Network& net, const PathSet& ps,
                          const SyncSkeleton& skel, const ReachSpec& spec,
                          const LinearSystem& sys, const SolveOptions& opt) {
  CheckResult res;
  res.n_rows = sys.n_rows();
  res.n_vars = sys.n_vars();

  SolveOutcome out = solve_feasibility(sys, opt);
  if (out.kind == SolveOutcome::Kind::Infeasible) {
    res.verdict = VerdictKind::Unreachable;
    return res;
  }

  Witness w = extract_witness(sys, out.values, ps, skel);
  if (out.from_float) {
    ReplayResult rr = replay_witness(net, ps, skel, spec, w, Rat(1, 10000000));
    if (!rr.passed) {
      SolveOptions exact_opt = opt;
      exact_opt.mode = SolveMode::Exact;
      SolveOutcome retry = solve_feasibility(sys, exact_opt);
      if (retry.kind == SolveOutcome::Kind::Infeasible) {
        res.verdict = VerdictKind::Unreachable;
        return res;
      }
      w = extract_witness(sys, retry.values, ps, skel);
    } else {
      res.used_float = true;
    }
  }

  res.verdict = VerdictKind::Reachable;
  res.witness = std::move(w);
  return res;
}

}  // namespace

CheckResult check_reachability(const Network& net, const PathSet& ps,
                               const ReachSpec& spec, const SolveOptions& opt) {
  CheckResult res;

  AlignOutcome aligned = align_occurrences(net, ps);
  res.diags = aligned.diags;
  if (!aligned.skeleton) {
    res.verdict = VerdictKind::Inconsistent;
    return res;
  }

  for (const auto& [comp, loc] : spec.targets) {
    std::size_t idx = net.automaton_index(comp);
    if (idx == Network::npos) {
      res.verdict = VerdictKind::Inconsistent;
      res.diags.push_back(
          {Severity::Error, {}, "target names unknown component '" + comp + "'"});
      return res;
    }
    if (ps.paths[idx].locations.back() != loc) {
      res.verdict = VerdictKind::Unreachable;
      return res;
    }
  }

  LinearSystem sys = encode(net, ps, *aligned.skeleton, spec);
  CheckResult solved = solved_result(net, ps, *aligned.skeleton, spec, sys, opt);
  solved.diags = std::move(res.diags);
  return solved;
}

}  // namespace lharv
