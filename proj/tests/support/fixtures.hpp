#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "lharv/textio.hpp"

namespace lharv::testing {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(LHARV_FIXTURE_DIR) + "/" + name;
}

struct LoadedCase {
  Network net;
  PathSet ps;
  ReachSpec spec;
  SyncSkeleton skel;
};

inline LoadedCase load_case(const std::string& model, const std::string& paths,
                            const std::string& spec) {
  DiagnosticSink sink;
  auto fail = [&](const std::string& what) {
    std::string msg = what;
    for (const Diagnostic& d : sink.items()) msg += "\n" + format_diagnostic(d);
    return std::runtime_error(msg);
  };
  auto net = parse_network(slurp(fixture_path(model)), model, sink);
  if (!net) throw fail("bad model fixture " + model);
  auto ps = parse_pathset(slurp(fixture_path(paths)), paths, *net, sink);
  if (!ps) throw fail("bad path fixture " + paths);
  auto rs = parse_spec(slurp(fixture_path(spec)), spec, *net, sink);
  if (!rs) throw fail("bad spec fixture " + spec);
  AlignOutcome a = align_occurrences(*net, *ps);
  if (!a.skeleton) throw std::runtime_error("fixture paths fail to align");
  return {std::move(*net), std::move(*ps), std::move(*rs),
          std::move(*a.skeleton)};
}

/// The checked-in three-component example: S, T, K with shared steps b, e, f,
/// T sampling s and k, one reset and two strict guards.
inline LoadedCase load_stk() {
  return load_case("stk.lharv", "stk.paths", "stk.spec");
}

inline Network parse_net_or_throw(const std::string& text) {
  DiagnosticSink sink;
  auto net = parse_network(text, "inline", sink);
  if (!net) {
    std::string msg = "inline model rejected";
    for (const Diagnostic& d : sink.items()) msg += "\n" + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return *net;
}

}  // namespace lharv::testing
