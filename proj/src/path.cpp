#include "lharv/path.hpp"

#include <algorithm>
#include <set>

namespace lharv {

bool validate_pathset(const Network& net, const PathSet& ps,
                      DiagnosticSink& diags) {
  if (ps.paths.size() != net.automata.size()) {
    diags.error({}, "path set lists " + std::to_string(ps.paths.size()) +
                        " components, network has " +
                        std::to_string(net.automata.size()));
    return false;
  }
  for (std::size_t i = 0; i < ps.paths.size(); ++i) {
    const Path& p = ps.paths[i];
    const Automaton& a = net.automata[i];
    if (p.automaton != a.name) {
      diags.error({}, "path #" + std::to_string(i) + " is for '" +
                          p.automaton + "', expected component '" + a.name +
                          "'");
      continue;
    }
    if (p.locations.empty() ||
        p.locations.size() != p.transitions.size() + 1) {
      diags.error({}, "path of '" + a.name + "' is malformed");
      continue;
    }
    if (!a.is_initial(p.locations.front())) {
      diags.error({}, "path of '" + a.name + "' starts at non-initial " +
                          "location '" + p.locations.front() + "'");
    }
    for (std::size_t k = 0; k < p.transitions.size(); ++k) {
      if (p.transitions[k] >= a.transitions.size()) {
        diags.error({}, "path of '" + a.name + "': transition index out of " +
                            "range at step " + std::to_string(k));
        continue;
      }
      const Transition& t = a.transitions[p.transitions[k]];
      if (t.from != p.locations[k] || t.to != p.locations[k + 1]) {
        diags.error({}, "path of '" + a.name + "': step " + std::to_string(k) +
                            " is not connected");
      }
    }
  }
  return !diags.has_errors();
}

std::vector<std::size_t> occurrence_positions(const Automaton& a,
                                              const Path& path,
                                              const std::string& label) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < path.transitions.size(); ++k) {
    if (a.transitions[path.transitions[k]].label == label) out.push_back(k);
  }
  return out;
}

AlignOutcome align_occurrences(const Network& net, const PathSet& ps) {
  AlignOutcome out;

  std::set<std::string> shared;
  for (const auto& a : net.automata) {
    for (const auto& l : a.shared_labels) shared.insert(l);
  }

  std::vector<SyncEvent> events;
  for (const auto& label : shared) {
    std::vector<std::size_t> parts = participants_of(net, label);
    if (parts.size() < 2) continue;  // degenerates to a local label

    std::size_t count = 0;
    bool first = true;
    bool mismatch = false;
    std::vector<std::vector<std::size_t>> positions(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      positions[i] =
          occurrence_positions(net.automata[parts[i]], ps.paths[parts[i]],
                               label);
      if (first) {
        count = positions[i].size();
        first = false;
      } else if (positions[i].size() != count) {
        out.diags.push_back(
            {Severity::Error, {},
             "label '" + label + "' occurs " + std::to_string(count) +
                 " times in '" + net.automata[parts[0]].name + "' but " +
                 std::to_string(positions[i].size()) + " times in '" +
                 net.automata[parts[i]].name + "'"});
        mismatch = true;
      }
    }
    if (mismatch) continue;
    for (std::size_t k = 0; k < count; ++k) {
      SyncEvent e;
      e.label = label;
      e.occurrence = k;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        e.positions[parts[i]] = positions[i][k];
      }
      events.push_back(std::move(e));
    }
  }
  if (!out.diags.empty()) return out;

  // Union of per-path orders over the events, then a Kahn sort with the
  // smallest (label, occurrence) winning ties.
  std::size_t n = events.size();
  std::vector<std::set<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t c = 0; c < net.automata.size(); ++c) {
    std::vector<std::pair<std::size_t, std::size_t>> mine;  // (pos, event)
    for (std::size_t e = 0; e < n; ++e) {
      auto it = events[e].positions.find(c);
      if (it != events[e].positions.end()) mine.emplace_back(it->second, e);
    }
    std::sort(mine.begin(), mine.end());
    for (std::size_t k = 0; k + 1 < mine.size(); ++k) {
      if (succ[mine[k].second].insert(mine[k + 1].second).second) {
        ++indeg[mine[k + 1].second];
      }
    }
  }

  std::set<std::size_t> ready;
  for (std::size_t e = 0; e < n; ++e) {
    if (indeg[e] == 0) ready.insert(e);
  }
  SyncSkeleton skel;
  while (!ready.empty()) {
    std::size_t e = *ready.begin();
    ready.erase(ready.begin());
    skel.events.push_back(events[e]);
    for (std::size_t s : succ[e]) {
      if (--indeg[s] == 0) ready.insert(s);
    }
  }
  if (skel.events.size() != n) {
    out.diags.push_back({Severity::Error, {},
                         "synchronization orders conflict: no interleaving " +
                             std::string("realizes these paths")});
    return out;
  }
  out.skeleton = std::move(skel);
  return out;
}

Path project(const Network& net, const GlobalPath& gp, std::size_t component) {
  Path p;
  p.automaton = net.automata[component].name;
  p.locations.push_back(gp.initial_locations[component]);
  for (const auto& step : gp.steps) {
    auto it = step.moves.find(component);
    if (it == step.moves.end()) continue;
    const Transition& t = net.automata[component].transitions[it->second];
    p.transitions.push_back(it->second);
    p.locations.push_back(t.to);
  }
  return p;
}

}  // namespace lharv
