#include "checks.hpp"

#include <map>
#include <set>

namespace lbc {

namespace {

std::string at_phase(int p) { return "phase " + std::to_string(p); }

}  // namespace

std::vector<std::string> check_phase_invariants(const Graph& g, const PhaseRunResult& r,
                                                NodeMask faulty, NodeMask equivocators) {
  std::vector<std::string> out;
  const int n = g.n;
  const int phases = (int)r.schedule.size();
  const int rpp = r.rounds_per_phase;

  // Gamma history: entry p is the phase-p start value, entry phases the final.
  for (int p = 0; p < phases; ++p) {
    NodeMask starts = 0;
    for (int u = 0; u < n; ++u)
      if (!has(faulty, u)) starts |= bit(r.gamma_history[u][p]);
    int agreed = -1;
    bool all_equal = true;
    for (int v = 0; v < n; ++v) {
      if (has(faulty, v)) continue;
      int end = r.gamma_history[v][p + 1];
      if (!has(starts, end))
        out.push_back(at_phase(p) + ": node " + std::to_string(v) + " ended with " +
                      std::to_string(end) + " matching no non-faulty start value");
      if (agreed == -1) agreed = end;
      if (end != agreed) all_equal = false;
    }
    const PhaseConfig& cfg = r.schedule[p];
    bool covers = (equivocators & ~cfg.T) == 0 && (faulty & ~(cfg.F | cfg.T)) == 0;
    if (covers && !all_equal)
      out.push_back(at_phase(p) + ": covering hypothesis left non-faulty states unequal");
  }

  // First initiating broadcast per (phase, origin); targeted initiations mark
  // the origin as equivocating for that phase and exempt it.
  std::map<std::pair<int, int>, int> init;
  std::set<std::pair<int, int>> exempt;
  for (const Transmission& t : r.trace.tx) {
    if (t.payload.kind != PayloadKind::flood || !t.payload.path.empty()) continue;
    int p = t.round / rpp;
    if (t.round % rpp != 0) continue;
    if (t.target >= 0) {
      exempt.insert({p, t.sender});
      continue;
    }
    init.try_emplace({p, t.sender}, (int)t.payload.bit);
  }

  for (const Transmission& t : r.trace.tx) {
    if (t.payload.kind != PayloadKind::flood) continue;
    if (has(faulty, t.sender)) continue;
    int p = t.round / rpp;
    int pr = t.round % rpp;
    const PackedPath& path = t.payload.path;

    if ((int)path.len != pr)
      out.push_back(at_phase(p) + " round " + std::to_string(pr) + ": node " +
                    std::to_string(t.sender) + " emitted a path of length " +
                    std::to_string(path.len));
    Path full = path.to_vector();
    full.push_back(t.sender);
    if (!is_path_in_graph(g, full))
      out.push_back(at_phase(p) + ": node " + std::to_string(t.sender) +
                    " emitted a non-path relay " + serialize_path(path));

    if (path.empty()) continue;
    int origin = path.first();
    bool relays_clean = true;
    for (int i = 1; i < (int)path.len; ++i)
      if (has(faulty, path.at(i))) relays_clean = false;
    if (!relays_clean || exempt.count({p, origin})) continue;
    auto it = init.find({p, origin});
    int expect;
    if (it != init.end()) {
      expect = it->second;
    } else if (has(faulty, origin)) {
      expect = 1;  // never initiated, so neighbors substituted the default
    } else {
      out.push_back(at_phase(p) + ": non-faulty origin " + std::to_string(origin) +
                    " has no initiating broadcast");
      continue;
    }
    if ((int)t.payload.bit != expect)
      out.push_back(at_phase(p) + ": node " + std::to_string(t.sender) + " recorded " +
                    std::to_string((int)t.payload.bit) + " from origin " +
                    std::to_string(origin) + " along clean path " + serialize_path(path) +
                    " but the origin broadcast " + std::to_string(expect));
  }

  return out;
}

}  // namespace lbc
