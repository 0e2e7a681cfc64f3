#include "feasibility.hpp"

#include <algorithm>

namespace lbc {

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::local_broadcast: return "lb";
    case ModelKind::hybrid: return "hybrid";
    case ModelKind::point_to_point: return "p2p";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  if (s == "lb") return ModelKind::local_broadcast;
  if (s == "hybrid") return ModelKind::hybrid;
  if (s == "p2p") return ModelKind::point_to_point;
  throw InputError("unknown model '" + s + "' (expected lb, hybrid, or p2p)");
}

FaultModel make_fault_model(ModelKind kind, int f, int t) {
  if (f < 0) throw InputError("fault model: f must be >= 0");
  if (t < 0 || t > f) throw InputError("fault model: t must satisfy 0 <= t <= f");
  if (kind == ModelKind::local_broadcast && t != 0)
    throw InputError("fault model: local-broadcast requires t = 0");
  if (kind == ModelKind::point_to_point && t != f)
    throw InputError("fault model: point-to-point requires t = f");
  return FaultModel{kind, f, t};
}

int required_connectivity(ModelKind kind, int f, int t) {
  if (f < 0 || t < 0 || t > f) throw InputError("required_connectivity: need 0 <= t <= f");
  switch (kind) {
    case ModelKind::local_broadcast: return 3 * f / 2 + 1;
    case ModelKind::hybrid: return 3 * (f - t) / 2 + 2 * t + 1;
    case ModelKind::point_to_point: return 2 * f + 1;
  }
  throw InputError("required_connectivity: bad model");
}

std::string FeasibilityReport::summary() const {
  std::string out;
  for (const auto& c : checks)
    out += "check=" + c.name + " required=" + std::to_string(c.required) +
           " actual=" + std::to_string(c.actual) + " pass=" + (c.pass ? "1" : "0") + "\n";
  out += std::string("achievable=") + (achievable ? "1" : "0") + "\n";
  if (!witness_cut.empty()) out += "witness-cut=" + join_ids(witness_cut, ",") + "\n";
  if (witness_node >= 0) out += "witness-node=" + std::to_string(witness_node) + "\n";
  if (!witness_set.empty()) out += "witness-set=" + join_ids(witness_set, ",") + "\n";
  return out;
}

namespace {

int argmin_degree(const Graph& g) {
  int best = 0;
  for (int v = 1; v < g.n; ++v)
    if (g.degree(v) < g.degree(best)) best = v;
  return best;
}

void add_connectivity_check(FeasibilityReport& r, const Graph& g, int required) {
  auto w = vertex_connectivity_with_cut(g);
  bool pass = w.value >= required;
  r.checks.push_back({"connectivity", required, w.value, pass});
  if (!pass) r.witness_cut = w.cut;
}

void add_degree_check(FeasibilityReport& r, const Graph& g, int required) {
  int d = min_degree(g);
  bool pass = d >= required;
  r.checks.push_back({"min-degree", required, d, pass});
  if (!pass) r.witness_node = argmin_degree(g);
}

void finish(FeasibilityReport& r) {
  r.achievable = std::all_of(r.checks.begin(), r.checks.end(),
                             [](const CheckItem& c) { return c.pass; });
}

}  // namespace

FeasibilityReport check_lb(const Graph& g, int f) {
  if (f < 0) throw InputError("check_lb: f must be >= 0");
  FeasibilityReport r;
  add_degree_check(r, g, 2 * f);
  add_connectivity_check(r, g, required_connectivity(ModelKind::local_broadcast, f, 0));
  finish(r);
  return r;
}

FeasibilityReport check_hybrid(const Graph& g, int f, int t) {
  if (f < 0 || t < 0 || t > f) throw InputError("check_hybrid: need 0 <= t <= f");
  FeasibilityReport r;
  add_connectivity_check(r, g, required_connectivity(ModelKind::hybrid, f, t));
  if (t == 0) {
    add_degree_check(r, g, 2 * f);
  } else {
    // Every nonempty set of at most t nodes needs at least 2f+1 neighbors.
    int required = 2 * f + 1;
    int worst = g.n;  // neighbor count lower than any real one
    std::vector<int> worst_set;
    NodeMask all = full_mask(g.n);
    for (NodeMask s = 1; s != 0 && s <= all; ++s) {
      int sz = popcount(s);
      if (sz < 1 || sz > t) continue;
      NodeMask nb = 0;
      for_bits(s, [&](int v) { nb |= g.adj[v]; });
      int count = popcount(nb & ~s);
      if (count < worst || (count == worst && (worst_set.empty() || ids_of(s) < worst_set))) {
        worst = count;
        worst_set = ids_of(s);
      }
    }
    bool pass = worst >= required;
    r.checks.push_back({"small-set-neighbors", required, worst, pass});
    if (!pass) r.witness_set = worst_set;
  }
  finish(r);
  return r;
}

FeasibilityReport check_p2p(const Graph& g, int f) {
  if (f < 0) throw InputError("check_p2p: f must be >= 0");
  FeasibilityReport r;
  bool count_ok = g.n >= 3 * f + 1;
  r.checks.push_back({"node-count", 3 * f + 1, g.n, count_ok});
  add_connectivity_check(r, g, required_connectivity(ModelKind::point_to_point, f, f));
  finish(r);
  return r;
}

FeasibilityReport check_model(const Graph& g, const FaultModel& m) {
  switch (m.kind) {
    case ModelKind::local_broadcast: return check_lb(g, m.f);
    case ModelKind::hybrid: return check_hybrid(g, m.f, m.t);
    case ModelKind::point_to_point: return check_p2p(g, m.f);
  }
  throw InputError("check_model: bad model");
}

}  // namespace lbc
