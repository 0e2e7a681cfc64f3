#include "split.hpp"

#include <algorithm>
#include <memory>
#include <tuple>

#include "adversary.hpp"
#include "protocol_phase.hpp"
#include "wire.hpp"

namespace lbc {

namespace {

bool is_hybrid(SplitKind k) {
  return k == SplitKind::hybrid_degree || k == SplitKind::hybrid_connectivity;
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::decided: return "decided";
    case RunStatus::budget_exhausted: return "budget";
    case RunStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

NodeMask set_neighbors(const Graph& g, NodeMask s) {
  return mask_of(neighbors_of_set(g, ids_of(s)));
}

std::vector<NodeMask> components_excluding(const Graph& g, NodeMask removed) {
  std::vector<NodeMask> comps;
  NodeMask seen = removed;
  for (int v = 0; v < g.n; ++v) {
    if (has(seen, v)) continue;
    NodeMask comp = 0;
    std::vector<int> stack{v};
    seen |= bit(v);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp |= bit(u);
      for (int w : g.nbrs[u])
        if (!has(seen, w)) {
          seen |= bit(w);
          stack.push_back(w);
        }
    }
    comps.push_back(comp);
  }
  return comps;
}

// Distributes the pool's members, in ascending id order, into parts with the
// given capacities. Total capacity must cover the pool.
std::vector<NodeMask> fill_parts(NodeMask pool, const std::vector<int>& caps) {
  std::vector<NodeMask> parts(caps.size(), 0);
  size_t idx = 0;
  int used = 0;
  for_bits(pool, [&](int v) {
    while (idx < parts.size() && used >= caps[idx]) {
      ++idx;
      used = 0;
    }
    if (idx < parts.size()) {
      parts[idx] |= bit(v);
      ++used;
    }
  });
  return parts;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

}  // namespace

std::string split_kind_name(SplitKind k) {
  switch (k) {
    case SplitKind::degree: return "degree";
    case SplitKind::connectivity: return "connectivity";
    case SplitKind::hybrid_degree: return "hybrid-degree";
    case SplitKind::hybrid_connectivity: return "hybrid-connectivity";
  }
  return "unknown";
}

SplitKind parse_split_kind(const std::string& s) {
  if (s == "degree") return SplitKind::degree;
  if (s == "connectivity") return SplitKind::connectivity;
  if (s == "hybrid-degree") return SplitKind::hybrid_degree;
  if (s == "hybrid-connectivity") return SplitKind::hybrid_connectivity;
  throw InputError("unknown construction '" + s + "'");
}

void validate_split_spec(const Graph& g, const SplitSpec& s) {
  NodeMask full = full_mask(g.n);
  require(s.f >= 1, "construction needs f >= 1");
  auto inside = [&](NodeMask m) { return (m & ~full) == 0; };
  require(inside(s.S | s.F1 | s.F2 | s.R | s.T | s.A | s.B | s.C1 | s.C2 | s.C3),
          "partition names nodes outside the graph");
  int phi = s.f - s.t;
  switch (s.kind) {
    case SplitKind::degree: {
      require(s.t == 0, "degree construction has no equivocators");
      require(g.valid_node(s.z), "degree construction needs a center node z");
      require((s.S | s.R | s.T | s.A | s.B | s.C1 | s.C2 | s.C3) == 0,
              "degree construction uses only z, F1, F2");
      require((s.F1 & s.F2) == 0, "F1 and F2 overlap");
      require((s.F1 | s.F2) == g.adj[s.z], "F1 and F2 must partition N(z)");
      require(popcount(s.F1) <= s.f - 1, "|F1| exceeds f-1");
      require(s.F2 != 0 && popcount(s.F2) <= s.f, "|F2| must be in [1, f]");
      break;
    }
    case SplitKind::connectivity: {
      require(s.t == 0, "connectivity construction has no equivocators");
      require((s.S | s.R | s.T) == 0 && s.z == -1,
              "connectivity construction uses A, B, C1, C2, C3");
      NodeMask parts[] = {s.A, s.B, s.C1, s.C2, s.C3};
      NodeMask seen = 0;
      for (NodeMask p : parts) {
        require((seen & p) == 0, "partition parts overlap");
        seen |= p;
      }
      require(seen == full, "partition must cover every node");
      require(s.A != 0 && s.B != 0, "A and B must be non-empty");
      require(popcount(s.C1) <= s.f / 2, "|C1| exceeds floor(f/2)");
      require(popcount(s.C2) <= s.f / 2, "|C2| exceeds floor(f/2)");
      require(popcount(s.C3) <= (s.f + 1) / 2, "|C3| exceeds ceil(f/2)");
      for_bits(s.A, [&](int u) { require((g.adj[u] & s.B) == 0, "A and B share an edge"); });
      break;
    }
    case SplitKind::hybrid_degree: {
      require(s.t >= 1 && phi >= 0, "hybrid construction needs 1 <= t <= f");
      require((s.A | s.B | s.C1 | s.C2 | s.C3) == 0 && s.z == -1,
              "hybrid-degree construction uses S, F1, F2, R, T");
      require(s.S != 0 && popcount(s.S) <= s.t, "|S| must be in [1, t]");
      NodeMask nb = set_neighbors(g, s.S);
      NodeMask parts[] = {s.F1, s.F2, s.R, s.T};
      NodeMask seen = 0;
      for (NodeMask p : parts) {
        require((seen & p) == 0, "partition parts overlap");
        seen |= p;
      }
      require(seen == nb, "F1, F2, R, T must partition N(S)");
      require(popcount(s.F1) <= phi, "|F1| exceeds f-t");
      require(popcount(s.F2) <= phi, "|F2| exceeds f-t");
      require(s.R != 0 && popcount(s.R) <= s.t, "|R| must be in [1, t]");
      require(popcount(s.T) <= s.t, "|T| exceeds t");
      break;
    }
    case SplitKind::hybrid_connectivity: {
      require(s.t >= 1 && phi >= 0, "hybrid construction needs 1 <= t <= f");
      require(s.S == 0 && s.z == -1,
              "hybrid-connectivity construction uses A, B, C1, C2, C3, R, T");
      NodeMask parts[] = {s.A, s.B, s.C1, s.C2, s.C3, s.R, s.T};
      NodeMask seen = 0;
      for (NodeMask p : parts) {
        require((seen & p) == 0, "partition parts overlap");
        seen |= p;
      }
      require(seen == full, "partition must cover every node");
      require(s.A != 0 && s.B != 0, "A and B must be non-empty");
      require(popcount(s.C1) <= phi / 2, "|C1| exceeds floor((f-t)/2)");
      require(popcount(s.C2) <= phi / 2, "|C2| exceeds floor((f-t)/2)");
      require(popcount(s.C3) <= (phi + 1) / 2, "|C3| exceeds ceil((f-t)/2)");
      require(popcount(s.R) <= s.t, "|R| exceeds t");
      require(popcount(s.T) <= s.t, "|T| exceeds t");
      for_bits(s.A, [&](int u) { require((g.adj[u] & s.B) == 0, "A and B share an edge"); });
      break;
    }
  }
}

namespace {

NodeMask doubled_mask(const Graph& g, const SplitSpec& s) {
  NodeMask full = full_mask(g.n);
  switch (s.kind) {
    case SplitKind::degree:
      return full & ~(bit(s.z) | s.F1 | s.F2);
    case SplitKind::connectivity:
      return s.A | s.B;
    case SplitKind::hybrid_degree:
      return (full & ~(s.S | s.F1 | s.F2 | s.R)) ;  // W and T
    case SplitKind::hybrid_connectivity:
      return s.A | s.B | s.R | s.T;
  }
  return 0;
}

// Copy index of the doubled node d that the single node s keeps an
// undirected edge to; s additionally talks one-way into the other copy.
int undirected_copy(const SplitSpec& sp, int s, int d) {
  switch (sp.kind) {
    case SplitKind::degree:
      return has(sp.F1, s) ? 0 : 1;
    case SplitKind::connectivity:
      if (has(sp.C1, s)) return 0;
      if (has(sp.C2, s)) return has(sp.A, d) ? 0 : 1;
      return 1;  // C3
    case SplitKind::hybrid_degree:
      return (has(sp.S, s) || has(sp.F1, s)) ? 0 : 1;
    case SplitKind::hybrid_connectivity:
      if (has(sp.C1, s)) return 0;
      if (has(sp.C2, s)) return has(sp.A, d) ? 0 : 1;
      return has(sp.T, d) ? 0 : 1;  // C3
  }
  return 0;
}

// Doubled pairs normally connect copy0-copy0 and copy1-copy1; the one
// exception pairs A with the opposite copies of T.
bool crossed_pair(const SplitSpec& sp, int u, int v) {
  if (sp.kind != SplitKind::hybrid_connectivity) return false;
  return (has(sp.A, u) && has(sp.T, v)) || (has(sp.T, u) && has(sp.A, v));
}

NodeMask zero_singles(const SplitSpec& s) {
  switch (s.kind) {
    case SplitKind::degree: return bit(s.z) | s.F1;
    case SplitKind::connectivity: return s.C1;
    case SplitKind::hybrid_degree: return s.S | s.F1;
    case SplitKind::hybrid_connectivity: return s.C1;
  }
  return 0;
}

}  // namespace

SplitNetwork build_split_network(const Graph& g, const SplitSpec& spec) {
  validate_split_spec(g, spec);
  SplitNetwork sn;
  sn.g = g;
  sn.spec = spec;
  NodeMask dbl = doubled_mask(g, spec);
  int en = g.n + popcount(dbl);
  require(en <= 31, "doubled network exceeds the engine's node capacity");

  sn.copy0.assign(g.n, -1);
  sn.copy1.assign(g.n, -1);
  sn.net.n = en;
  NodeMask zeros = zero_singles(spec);
  for (int v = 0; v < g.n; ++v) {
    sn.copy0[v] = (int)sn.net.proto.size();
    sn.net.proto.push_back(v);
    if (has(dbl, v)) {
      sn.copy1[v] = (int)sn.net.proto.size();
      sn.net.proto.push_back(v);
      sn.inputs.push_back(0);
      sn.inputs.push_back(1);
    } else {
      sn.inputs.push_back(has(zeros, v) ? 0 : 1);
    }
  }
  sn.net.hearers.assign(en, 0);

  auto und = [&](int a, int b) {
    sn.net.hearers[a] |= bit(b);
    sn.net.hearers[b] |= bit(a);
  };
  auto dir = [&](int from, int to) { sn.net.hearers[from] |= bit(to); };
  auto eng = [&](int v, int c) { return c == 0 ? sn.copy0[v] : sn.copy1[v]; };

  for (int u = 0; u < g.n; ++u) {
    for (int v : g.nbrs[u]) {
      if (v <= u) continue;
      bool du = has(dbl, u), dv = has(dbl, v);
      if (!du && !dv) {
        und(sn.copy0[u], sn.copy0[v]);
      } else if (du && dv) {
        if (crossed_pair(spec, u, v)) {
          und(eng(u, 0), eng(v, 1));
          und(eng(u, 1), eng(v, 0));
        } else {
          und(eng(u, 0), eng(v, 0));
          und(eng(u, 1), eng(v, 1));
        }
      } else {
        int s = du ? v : u;
        int d = du ? u : v;
        int c = undirected_copy(spec, s, d);
        und(sn.copy0[s], eng(d, c));
        dir(sn.copy0[s], eng(d, 1 - c));
      }
    }
  }
  return sn;
}

std::vector<std::string> check_hearing(const SplitNetwork& sn) {
  std::vector<std::string> out;
  const Graph& g = sn.g;
  for (int e = 0; e < sn.net.n; ++e) {
    int u = sn.net.proto[e];
    for (int v = 0; v < g.n; ++v) {
      int heard = 0;
      for (int e2 = 0; e2 < sn.net.n; ++e2)
        if (sn.net.proto[e2] == v && has(sn.net.hearers[e2], e)) ++heard;
      int want = g.has_edge(u, v) ? 1 : 0;
      if (heard != want)
        out.push_back("copy " + std::to_string(e) + " of node " + std::to_string(u) + " hears " +
                      std::to_string(heard) + " copies of node " + std::to_string(v) +
                      ", expected " + std::to_string(want));
    }
  }
  return out;
}

std::optional<SplitSpec> find_split_spec(const Graph& g, SplitKind kind, int f, int t) {
  require(f >= 1, "construction needs f >= 1");
  if (is_hybrid(kind))
    require(t >= 1 && t <= f, "hybrid construction needs 1 <= t <= f");
  else
    require(t == 0, "t applies only to the hybrid constructions");
  int phi = f - t;
  NodeMask full = full_mask(g.n);

  auto cut_search = [&](int cap, const std::vector<int>& caps) -> std::optional<SplitSpec> {
    for (int c = 0; c <= std::min(cap, g.n - 2); ++c) {
      for (NodeMask cut = 0; cut <= full; ++cut) {
        if (popcount(cut) != c) continue;
        auto comps = components_excluding(g, cut);
        if (comps.size() < 2) continue;
        SplitSpec s;
        s.kind = kind;
        s.f = f;
        s.t = t;
        s.A = comps.front();
        for (size_t i = 1; i < comps.size(); ++i) s.B |= comps[i];
        auto parts = fill_parts(cut, caps);
        s.C1 = parts[0];
        s.C2 = parts[1];
        s.C3 = parts[2];
        if (parts.size() == 5) {
          s.R = parts[3];
          s.T = parts[4];
        }
        return s;
      }
    }
    return std::nullopt;
  };

  switch (kind) {
    case SplitKind::degree: {
      for (int z = 0; z < g.n; ++z) {
        int d = g.degree(z);
        if (d == 0 || d >= 2 * f) continue;
        int a = std::max(0, d - f);
        auto parts = fill_parts(g.adj[z], {a, d - a});
        SplitSpec s;
        s.kind = kind;
        s.f = f;
        s.z = z;
        s.F1 = parts[0];
        s.F2 = parts[1];
        return s;
      }
      return std::nullopt;
    }
    case SplitKind::connectivity:
      return cut_search((3 * f) / 2, {f / 2, f / 2, (f + 1) / 2});
    case SplitKind::hybrid_degree: {
      for (int sz = 1; sz <= t; ++sz) {
        for (NodeMask S = 0; S <= full; ++S) {
          if (popcount(S) != sz) continue;
          NodeMask nb = set_neighbors(g, S);
          int k = popcount(nb);
          if (k == 0 || k > 2 * f) continue;
          int r = std::max(1, k - 2 * phi - t);
          int tt = std::max(0, (k - r) - 2 * phi);
          int f1 = std::min(phi, k - r - tt);
          int f2 = k - r - tt - f1;
          auto parts = fill_parts(nb, {f1, f2, r, tt});
          SplitSpec s;
          s.kind = kind;
          s.f = f;
          s.t = t;
          s.S = S;
          s.F1 = parts[0];
          s.F2 = parts[1];
          s.R = parts[2];
          s.T = parts[3];
          return s;
        }
      }
      return std::nullopt;
    }
    case SplitKind::hybrid_connectivity:
      return cut_search((3 * phi) / 2 + 2 * t, {phi / 2, phi / 2, (phi + 1) / 2, t, t});
  }
  return std::nullopt;
}

namespace {

// Per-execution casting: which nodes are faulty, which of those equivocate,
// and which copy stands in for each node (the image of honest nodes, the
// script source for scripted ones; equivocators draw on both copies).
struct ExecPlan {
  NodeMask faulty = 0;
  NodeMask eq = 0;
  std::vector<int> copy_of;
};

std::vector<ExecPlan> make_plans(const Graph& g, const SplitSpec& s) {
  NodeMask full = full_mask(g.n);
  std::vector<ExecPlan> ps(3);
  for (auto& p : ps) p.copy_of.assign(g.n, 0);
  auto to1 = [&](ExecPlan& p, NodeMask m) {
    for_bits(m, [&](int v) { p.copy_of[v] = 1; });
  };
  switch (s.kind) {
    case SplitKind::degree: {
      NodeMask W = full & ~(bit(s.z) | s.F1 | s.F2);
      ps[0].faulty = s.F2;
      ps[1].faulty = s.F1;
      to1(ps[1], W);
      ps[2].faulty = s.F1 | bit(s.z);
      to1(ps[2], W);
      break;
    }
    case SplitKind::connectivity: {
      ps[0].faulty = s.C2 | s.C3;
      ps[1].faulty = s.C1 | s.C3;
      to1(ps[1], s.B);
      ps[2].faulty = s.C1 | s.C2;
      to1(ps[2], s.A | s.B);
      break;
    }
    case SplitKind::hybrid_degree: {
      NodeMask W = full & ~(s.S | s.F1 | s.F2 | s.R | s.T);
      ps[0].faulty = s.F2 | s.R;
      ps[1].faulty = s.F1 | s.T;
      ps[1].eq = s.T;
      to1(ps[1], W);
      ps[2].faulty = s.F1 | s.S;
      to1(ps[2], s.T | W);
      break;
    }
    case SplitKind::hybrid_connectivity: {
      ps[0].faulty = s.C2 | s.C3 | s.T;
      ps[0].eq = s.T;
      ps[1].faulty = s.C1 | s.C3 | s.R;
      ps[1].eq = s.R;
      to1(ps[1], s.B | s.T);
      ps[2].faulty = s.C1 | s.C2 | s.T;
      ps[2].eq = s.T;
      to1(ps[2], s.A | s.B | s.R);
      break;
    }
  }
  return ps;
}

}  // namespace

NecessityDemo demo_necessity(const Graph& g, SplitKind kind, int f, int t,
                             const SplitSpec* forced) {
  SplitSpec spec;
  if (forced) {
    spec = *forced;
  } else {
    auto found = find_split_spec(g, kind, f, t);
    if (!found)
      throw InputError("no " + split_kind_name(kind) +
                       " construction applies; the graph meets the bound");
    spec = *found;
  }
  SplitNetwork sn = build_split_network(g, spec);
  auto hearing = check_hearing(sn);
  if (!hearing.empty()) throw InputError("hearing property violated: " + hearing.front());

  int ta = is_hybrid(kind) ? t : 0;
  auto schedule = phase_schedule(g.n, f, ta);
  int total = (int)schedule.size() * g.n;

  NecessityDemo demo;
  demo.spec = spec;

  BlobStore blobs;
  RunSetup setup;
  setup.net = sn.net;
  for (int e = 0; e < sn.net.n; ++e)
    setup.programs.push_back(std::make_unique<PhaseProgram>(&sn.g, sn.net.proto[e], f, ta,
                                                            sn.inputs[e], &schedule, false));
  setup.tracked = full_mask(sn.net.n);
  setup.max_rounds = total;
  RunTrace E = run_synchronous(setup);
  demo.doubled_trace = serialize_trace(E, blobs);
  demo.doubled_status = status_name(E.status);

  auto plans = make_plans(g, spec);
  const char* names[3] = {"E1", "E2", "E3"};
  const char* expects[3] = {"all-0", "agreement", "all-1"};
  auto eng = [&](int v, int c) {
    return (c == 1 && sn.copy1[v] >= 0) ? sn.copy1[v] : sn.copy0[v];
  };

  for (int i = 0; i < 3; ++i) {
    const ExecPlan& p = plans[i];
    DemoExecution ex;
    ex.name = names[i];
    ex.expect = expects[i];
    ex.faulty = p.faulty;
    ex.equivocators = p.eq;
    ex.inputs.resize(g.n);
    for (int v = 0; v < g.n; ++v) ex.inputs[v] = sn.inputs[eng(v, p.copy_of[v])];

    ScriptSet scripts;
    for_bits(p.faulty, [&](int u) {
      auto& rounds = scripts[u];
      rounds.assign(total, {});
      if (!has(p.eq, u)) {
        int src = eng(u, p.copy_of[u]);
        for (const auto& tx : E.tx)
          if (tx.sender == src) rounds[tx.round].push_back({tx.payload, -1});
      } else {
        // Each honest neighbor hears the copy it borders in the doubled
        // network; replaying that copy's broadcasts as targeted sends
        // reproduces the equivocation.
        for (int w : g.nbrs[u]) {
          if (has(p.faulty, w)) continue;
          int wimg = eng(w, p.copy_of[w]);
          int src = has(sn.net.hearers[sn.copy0[u]], wimg) ? sn.copy0[u] : sn.copy1[u];
          for (const auto& tx : E.tx)
            if (tx.sender == src) rounds[tx.round].push_back({tx.payload, w});
        }
      }
    });
    ex.script = serialize_script(scripts, blobs);

    PhaseRunConfig cfg;
    cfg.g = &sn.g;
    cfg.f = f;
    cfg.t = ta;
    cfg.inputs = ex.inputs;
    cfg.faulty = p.faulty;
    cfg.equivocators = p.eq;
    cfg.faulty_program = make_scripted_factory(scripts);
    cfg.conforming = false;
    PhaseRunResult res = ta > 0 ? run_algorithm3(cfg) : run_algorithm1(cfg);
    ex.trace = serialize_trace(res.trace, blobs);
    ex.status = status_name(res.trace.status);
    ex.outputs = res.outputs;

    std::vector<std::tuple<int, int, std::string>> ours, theirs;
    for (const auto& tx : res.trace.tx)
      if (!has(p.faulty, tx.sender))
        ours.emplace_back(tx.round, tx.sender, serialize_payload(tx.payload, blobs));
    std::vector<char> image(sn.net.n, 0);
    for (int v = 0; v < g.n; ++v)
      if (!has(p.faulty, v)) image[eng(v, p.copy_of[v])] = 1;
    for (const auto& tx : E.tx)
      if (image[tx.sender])
        theirs.emplace_back(tx.round, sn.net.proto[tx.sender], serialize_payload(tx.payload, blobs));
    ex.projection_ok = ours == theirs;

    if (res.trace.status == RunStatus::decided) {
      bool ok = true;
      int first = -1;
      for (int v = 0; v < g.n; ++v) {
        if (has(p.faulty, v)) continue;
        int o = ex.outputs[v];
        if (o < 0 || (i == 0 && o != 0) || (i == 2 && o != 1)) ok = false;
        if (i == 1) {
          if (first < 0)
            first = o;
          else if (o != first)
            ok = false;
        }
      }
      ex.expect_ok = ok;
    }
    demo.execs.push_back(std::move(ex));
  }

  bool any_infeasible = demo.doubled_status == "infeasible";
  bool any_budget = demo.doubled_status == "budget";
  bool any_projfail = false;
  std::vector<std::string> violated;
  for (const auto& ex : demo.execs) {
    if (ex.status == "infeasible") any_infeasible = true;
    if (ex.status == "budget") any_budget = true;
    if (!ex.projection_ok) any_projfail = true;
    if (ex.status == "decided" && !ex.expect_ok)
      violated.push_back(ex.name + (ex.name == "E2" ? " agreement" : " validity"));
  }
  if (any_projfail) {
    demo.verdict = "projection mismatch; construction invalid";
  } else if (any_infeasible) {
    demo.verdict = "protocol aborted: no admissible partition on this graph";
    demo.demonstrated = true;
  } else if (any_budget) {
    demo.verdict = "round budget exhausted";
  } else if (!violated.empty()) {
    std::string list;
    for (const auto& v : violated) list += (list.empty() ? "" : ", ") + v;
    demo.verdict = "violated " + list;
    demo.demonstrated = true;
  } else {
    demo.verdict = "no violation demonstrated";
  }
  return demo;
}

}  // namespace lbc
