#pragma once

#include <cstdint>
#include <vector>

#include "lharv/check.hpp"

namespace lharv {

/// Control parameters reported by one train for one decision cycle.
/// Speeds are interval-valued: [cur_lo, cur_hi] while the old command is in
/// effect, [new_lo, new_hi] once the new command is fully applied.
struct TrainParams {
  int id = 0;
  Rat x0;      // reported front position; trains are ordered front first
  Rat cur_lo;  // current commanded speed band
  Rat cur_hi;
  Rat new_lo;  // newly computed speed band
  Rat new_hi;
  Rat ma;      // movement authority limit
  Rat sbd;     // service brake deceleration point, at most ma
  Rat rsd;     // required safety distance behind the leading train
};

struct Timeouts {
  Rat comm{5};   // seconds without a fresh command before emergency braking
  Rat brake{5};  // bound on the braking phase duration
};

struct CycleRecord {
  std::uint64_t cycle = 0;
  Rat ts;
  std::vector<TrainParams> trains;
};

struct Scenario {
  Network net;
  PathSet ps;
  ReachSpec spec;
};

enum class Profile { Safe, Unsafe };

bool validate_params(const std::vector<TrainParams>& trains,
                     DiagnosticSink& diags);

/// One four-location automaton per train (compute, adjust, cruise, EBraking)
/// with a shared EBrake label that forces all trains to start braking together
/// when the communication timeout expires.
Network train_network(const std::vector<TrainParams>& trains,
                      const Timeouts& t);

/// Network plus the canonical path (compute -> adjust -> cruise -> EBraking
/// for every train) and the collision condition for the train at
/// follower_index and the one ahead of it: equal positions with everyone in
/// EBraking.
Scenario generate_scenario(const std::vector<TrainParams>& trains,
                           const Timeouts& t, std::size_t follower_index);

/// Safe profile keeps every adjacent gap above the worst-case closing
/// distance; Unsafe shrinks the gap between trains 1 and 2 and grants
/// train 2 a movement authority beyond the leader's position.
std::vector<TrainParams> default_params(std::size_t n, Profile profile);

/// Conservative collision margin for the adjacent pair ending at
/// follower_index: front gap minus the safety distance minus the farthest the
/// follower can travel before braking ends, with the leader held still.
/// Positive margin guarantees Unreachable.
Rat pair_margin(const std::vector<TrainParams>& trains, const Timeouts& t,
                std::size_t follower_index);

struct MonitorVerdict {
  std::uint64_t cycle = 0;
  VerdictKind result = VerdictKind::Inconsistent;
  int pair_leader = -1;  // train ids; -1 when no pair is implicated
  int pair_follower = -1;
  double latency_ms = 0.0;
  std::optional<Witness> witness;
};

/// Checks every adjacent pair of one cycle record against the deadline.
/// Malformed records yield an Inconsistent verdict without stopping the
/// stream; a deadline overrun at emission time yields DeadlineMiss rather
/// than a possibly stale verdict.
MonitorVerdict monitor_step(const CycleRecord& rec, double deadline_ms,
                            const SolveOptions& opt, const Timeouts& t = {});

struct BenchRow {
  std::size_t trains = 0;
  std::size_t constraints = 0;
  std::size_t variables = 0;
  double median_ms = 0.0;
  bool all_unreachable = false;
};

/// Safe-profile sweep: for each fleet size, the constraint system shape of
/// one pair check and the median end-to-end latency of checking all adjacent
/// pairs.
std::vector<BenchRow> bench(const std::vector<std::size_t>& n_list,
                            std::size_t repetitions, const SolveOptions& opt);

}  // namespace lharv
