#pragma once

#include <optional>
#include <string>

#include "lharv/cbtc.hpp"

namespace lharv {

/// Parsers accept LF and CRLF input, report positions 1-based through the
/// sink, and return nothing when any error was reported. Numeric literals are
/// read exactly (decimals become the rational they denote).

std::optional<Network> parse_network(const std::string& text,
                                     const std::string& filename,
                                     DiagnosticSink& diags);

std::optional<PathSet> parse_pathset(const std::string& text,
                                     const std::string& filename,
                                     const Network& net, DiagnosticSink& diags);

std::optional<ReachSpec> parse_spec(const std::string& text,
                                    const std::string& filename,
                                    const Network& net, DiagnosticSink& diags);

std::optional<Witness> parse_witness(const std::string& text,
                                     const std::string& filename,
                                     DiagnosticSink& diags);

/// Canonical renderings; parse(serialize(x)) reproduces x.
std::string serialize_network(const Network& net);
std::string serialize_pathset(const Network& net, const PathSet& ps);
std::string serialize_spec(const ReachSpec& spec);
std::string emit_witness(const Witness& w, const SyncSkeleton& skel);

std::string constraint_str(const Constraint& c);

/// One cycle of control parameters on a single line:
///   cycle=1 ts=0 | id=1 x0=4600 cur=14:16 new=16:18 ma=5700 sbd=5610 rsd=50 | ...
std::optional<CycleRecord> parse_cycle_record(const std::string& line,
                                              std::size_t lineno,
                                              const std::string& filename,
                                              DiagnosticSink& diags);
std::string emit_cycle_record(const CycleRecord& rec);

std::string format_monitor_verdict(const MonitorVerdict& v);
std::string format_bench_row(const BenchRow& row);

}  // namespace lharv
