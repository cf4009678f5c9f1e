#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace lharv {

/// Exact rational scalar used throughout the IR and the exact solver.
using Rat = mpq_class;

/// Parses "5", "-3", "9/10", "0.9", "-1.25" into an exact rational.
/// Decimal literals are converted exactly (0.9 -> 9/10), never via binary
/// floating point. Returns nullopt on malformed input.
std::optional<Rat> parse_rat(const std::string& text);

/// Canonical rendering: integer if the denominator is 1, else "p/q" in
/// lowest terms. Deterministic; used by every serializer.
std::string rat_str(const Rat& value);

/// Exact conversion of a double (every finite double is a rational).
Rat rat_of_double(double value);

double rat_to_double(const Rat& value);

}  // namespace lharv
