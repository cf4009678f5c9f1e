#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lharv {

/// Invariant breakage inside the pipeline; the CLI maps this to exit 3.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  std::string file;
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::size_t length = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan where;
  std::string message;
};

/// Accumulates problems instead of throwing; parsers and validators report
/// through one of these and the caller decides what is fatal.
class DiagnosticSink {
 public:
  void error(SourceSpan where, std::string message) {
    items_.push_back({Severity::Error, std::move(where), std::move(message)});
  }
  void warning(SourceSpan where, std::string message) {
    items_.push_back({Severity::Warning, std::move(where), std::move(message)});
  }
  bool has_errors() const {
    for (const auto& d : items_) {
      if (d.severity == Severity::Error) return true;
    }
    return false;
  }
  const std::vector<Diagnostic>& items() const { return items_; }

 private:
  std::vector<Diagnostic> items_;
};

std::string format_diagnostic(const Diagnostic& d);

}  // namespace lharv
