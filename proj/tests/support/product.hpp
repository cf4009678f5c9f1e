#pragma once

#include <set>
#include <string>
#include <vector>

#include "lharv/path.hpp"

namespace lharv::testing {

/// Explicit-state composition used as ground truth for alignment tests. A
/// local label moves its one component; a shared label moves every declaring
/// component at once, each over its unique matching transition. Test networks
/// keep one transition per (location, label) so the step set is unambiguous.

inline std::vector<GlobalStep> global_steps(const Network& net,
                                            const std::vector<std::string>& locs) {
  std::vector<GlobalStep> out;
  for (std::size_t c = 0; c < net.automata.size(); ++c) {
    const Automaton& a = net.automata[c];
    for (std::size_t ti = 0; ti < a.transitions.size(); ++ti) {
      const Transition& tr = a.transitions[ti];
      if (tr.from != locs[c] || a.label_is_shared(tr.label)) continue;
      GlobalStep st;
      st.label = tr.label;
      st.moves[c] = ti;
      out.push_back(std::move(st));
    }
  }
  std::set<std::string> shared;
  for (const Automaton& a : net.automata)
    shared.insert(a.shared_labels.begin(), a.shared_labels.end());
  for (const std::string& label : shared) {
    std::vector<std::size_t> parts = participants_of(net, label);
    GlobalStep st;
    st.label = label;
    bool enabled = !parts.empty();
    for (std::size_t c : parts) {
      const Automaton& a = net.automata[c];
      bool found = false;
      for (std::size_t ti = 0; ti < a.transitions.size(); ++ti) {
        if (a.transitions[ti].label == label &&
            a.transitions[ti].from == locs[c]) {
          st.moves[c] = ti;
          found = true;
          break;
        }
      }
      if (!found) {
        enabled = false;
        break;
      }
    }
    if (enabled) out.push_back(std::move(st));
  }
  return out;
}

inline void enumerate_from(const Network& net, std::vector<std::string>& locs,
                           GlobalPath& cur, std::size_t max_steps,
                           std::vector<GlobalPath>& out) {
  out.push_back(cur);
  if (cur.steps.size() == max_steps) return;
  for (const GlobalStep& st : global_steps(net, locs)) {
    std::vector<std::string> saved = locs;
    for (const auto& [c, ti] : st.moves)
      locs[c] = net.automata[c].transitions[ti].to;
    cur.steps.push_back(st);
    enumerate_from(net, locs, cur, max_steps, out);
    cur.steps.pop_back();
    locs = saved;
  }
}

/// Every global path of length <= max_steps, shorter prefixes included.
/// Components are started at their first initial location.
inline std::vector<GlobalPath> all_global_paths(const Network& net,
                                                std::size_t max_steps) {
  GlobalPath gp;
  std::vector<std::string> locs;
  for (const Automaton& a : net.automata)
    locs.push_back(a.initial_locations.front());
  gp.initial_locations = locs;
  std::vector<GlobalPath> out;
  enumerate_from(net, locs, gp, max_steps, out);
  return out;
}

}  // namespace lharv::testing
