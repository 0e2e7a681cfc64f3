#include "protocol_phase.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace lbc {

namespace {

// All k-element subsets of V as masks, ascending numerically; with ids in low
// bits this is lexicographic order on the id sequences.
void append_size_lex(std::vector<NodeMask>& out, const std::vector<int>& ids, int k) {
  int m = (int)ids.size();
  if (k > m) return;
  if (k == 0) {
    out.push_back(0);
    return;
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    NodeMask mask = 0;
    for (int i : idx) mask |= bit(ids[i]);
    out.push_back(mask);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    idx[i] += 1;
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<PhaseConfig> phase_schedule(int n, int f, int t) {
  if (n < 1 || n > 32) throw InputError("node count out of range");
  if (f < 0 || t < 0 || t > f) throw InputError("invalid fault parameters");
  std::vector<int> all_ids(n);
  for (int i = 0; i < n; ++i) all_ids[i] = i;

  std::vector<PhaseConfig> out;
  std::vector<NodeMask> ts;
  for (int k = 0; k <= t; ++k) append_size_lex(ts, all_ids, k);
  for (NodeMask T : ts) {
    int phi = f - std::popcount(T);
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (!has(T, i)) rest.push_back(i);
    std::vector<NodeMask> fs;
    for (int k = 0; k <= phi; ++k) append_size_lex(fs, rest, k);
    for (NodeMask F : fs) out.push_back({F, T, phi});
  }
  return out;
}

Partition compute_partition(const Graph& g, int v, int gamma, const FloodTable& table, NodeMask F,
                            NodeMask T, PexclCache* cache) {
  Partition p;
  NodeMask excl = F | T;
  for (int u = 0; u < g.n; ++u) {
    if (has(T, u)) continue;
    if (u == v) {
      if (gamma == 0)
        p.Z |= bit(v);
      else
        p.N |= bit(v);
      continue;
    }
    std::optional<Path> pu;
    if (cache) {
      uint64_t key = ((uint64_t)excl << 8) | (uint64_t)u;
      auto it = cache->find(key);
      if (it == cache->end()) it = cache->emplace(key, path_excluding(g, u, v, ids_of(excl))).first;
      pu = it->second;
    } else {
      pu = path_excluding(g, u, v, ids_of(excl));
    }
    if (!pu) throw ProtocolInfeasible("no path from " + std::to_string(u) + " to " +
                                      std::to_string(v) + " avoiding the excluded set");
    PackedPath key;
    for (size_t i = 0; i + 1 < pu->size(); ++i) key.push((*pu)[i]);
    auto val = table.value_along(key);
    if (val && *val == 0)
      p.Z |= bit(u);
    else
      p.N |= bit(u);
  }
  return p;
}

CaseChoice step_c_case_select(const Partition& p, NodeMask F, int f, int phi) {
  int zf = std::popcount(p.Z & F);
  bool low = zf <= phi / 2;
  CaseChoice cc;
  if (low) {
    if (std::popcount(p.N) > f)
      cc = {1, p.N, p.Z};
    else
      cc = {2, p.Z, p.N};
  } else {
    if (std::popcount(p.Z) > f)
      cc = {3, p.Z, p.N};
    else
      cc = {4, p.N, p.Z};
  }
  return cc;
}

int step_c_update(const Graph& g, int v, int gamma, const FloodTable& table, const CaseChoice& cc,
                  NodeMask F, NodeMask T, int f, bool conforming, FamilyCache* fcache) {
  if (!has(cc.B, v)) return gamma;
  NodeMask forbidden = F | T;
  for (int delta = 0; delta <= 1; ++delta) {
    auto fam = table.find_family(f + 1, (uint32_t)delta, cc.A, forbidden, true);
    if (fam) return delta;
  }
  if (conforming) {
    bool exists;
    uint64_t key = ((uint64_t)cc.A << 32) | (uint64_t)forbidden;
    auto lookup = [&]() {
      auto fam = disjoint_set_paths_excluding(g, ids_of(cc.A), v, f + 1, ids_of(forbidden));
      return fam.has_value();
    };
    if (fcache) {
      auto it = fcache->find(key);
      if (it == fcache->end()) it = fcache->emplace(key, lookup()).first;
      exists = it->second;
    } else {
      exists = lookup();
    }
    if (!exists)
      throw std::logic_error("internal error: path family absent on a conforming graph");
  }
  return gamma;
}

PhaseProgram::PhaseProgram(const Graph* g, int self, int f, int t, int input,
                           const std::vector<PhaseConfig>* schedule, bool conforming)
    : g_(g),
      self_(self),
      f_(f),
      t_(t),
      n_(g->n),
      gamma_(input ? 1 : 0),
      sched_(schedule),
      conforming_(conforming),
      table_(g, self) {}

std::vector<Emission> PhaseProgram::process_inbox(const std::vector<Delivery>& inbox) {
  std::vector<Emission> out;
  out.reserve(inbox.size());
  for (const auto& d : inbox) {
    if (d.payload->kind != PayloadKind::flood) continue;
    auto rec = table_.offer(d.from, (uint32_t)d.payload->bit, d.payload->path);
    if (rec) out.push_back({Payload::flood_msg(d.payload->bit, *rec), -1});
  }
  return out;
}

std::vector<Emission> PhaseProgram::on_round(int round, const std::vector<Delivery>& inbox) {
  int phases = (int)sched_->size();
  if (round >= n_ * phases) return {};
  int phase = round / n_;
  int pr = round % n_;
  const PhaseConfig& cfg = (*sched_)[phase];

  std::vector<Emission> out;
  if (pr == 0) {
    history_.push_back(gamma_);
    table_.reset();
    table_.record_self((uint32_t)gamma_);
    out.push_back({Payload::flood_msg(gamma_, {}), -1});
    auto fwd = process_inbox(inbox);
    out.insert(out.end(), fwd.begin(), fwd.end());
  } else {
    out = process_inbox(inbox);
    if (pr == 1) {
      // Neighbors that initiated are visible in this inbox; the rest get the
      // default (1, empty) substituted, ascending by id.
      NodeMask present = 0;
      for (const auto& d : inbox)
        if (d.payload->kind == PayloadKind::flood && d.payload->path.empty()) present |= bit(d.from);
      for (int u : g_->nbrs[self_]) {
        if (has(present, u)) continue;
        auto rec = table_.offer(u, 1, {});
        if (rec) out.push_back({Payload::flood_msg(1, *rec), -1});
      }
    }
  }

  if (pr == n_ - 1) {
    Partition part = compute_partition(*g_, self_, gamma_, table_, cfg.F, cfg.T, &pexcl_cache_);
    CaseChoice cc = step_c_case_select(part, cfg.F, f_, cfg.phi);
    gamma_ = step_c_update(*g_, self_, gamma_, table_, cc, cfg.F, cfg.T, f_, conforming_,
                           &family_cache_);
    if (phase == phases - 1) {
      history_.push_back(gamma_);
      decision_ = gamma_;
    }
  }
  return out;
}

PhaseRunResult run_phase_protocol(const PhaseRunConfig& cfg) {
  const Graph& g = *cfg.g;
  if (g.n > 15) throw InputError("protocol runs support at most 15 nodes");
  if ((int)cfg.inputs.size() != g.n) throw InputError("inputs must list one bit per node");
  if (std::popcount(cfg.faulty) > cfg.f) throw InputError("more faulty nodes than f");
  if ((cfg.equivocators & ~cfg.faulty) != 0) throw InputError("equivocators must be faulty");
  if (std::popcount(cfg.equivocators) > cfg.t) throw InputError("more equivocators than t");

  PhaseRunResult res;
  res.schedule = phase_schedule(g.n, cfg.f, cfg.t);
  res.rounds_per_phase = g.n;

  RunSetup setup;
  setup.net = DeliveryNet::from_graph(g);
  setup.equivocators = cfg.equivocators;
  setup.max_rounds = cfg.max_rounds > 0 ? cfg.max_rounds : g.n * (int)res.schedule.size();

  std::vector<PhaseProgram*> honest(g.n, nullptr);
  for (int v = 0; v < g.n; ++v) {
    if (has(cfg.faulty, v)) {
      std::unique_ptr<NodeProgram> p;
      if (cfg.faulty_program) p = cfg.faulty_program(v, &res.schedule);
      if (!p) p = std::make_unique<SilentProgram>();
      setup.programs.push_back(std::move(p));
    } else {
      auto p = std::make_unique<PhaseProgram>(&g, v, cfg.f, cfg.t, cfg.inputs[v], &res.schedule,
                                              cfg.conforming);
      honest[v] = p.get();
      setup.programs.push_back(std::move(p));
      setup.tracked |= bit(v);
    }
  }

  res.trace = run_synchronous(setup);
  res.gamma_history.resize(g.n);
  res.outputs.assign(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    if (!honest[v]) continue;
    res.gamma_history[v] = honest[v]->gamma_history();
    if (auto d = honest[v]->decided()) res.outputs[v] = *d;
  }
  return res;
}

PhaseRunResult run_algorithm1(const PhaseRunConfig& cfg) {
  if (cfg.t != 0) throw InputError("algorithm 1 requires t = 0");
  return run_phase_protocol(cfg);
}

PhaseRunResult run_algorithm3(const PhaseRunConfig& cfg) { return run_phase_protocol(cfg); }

}  // namespace lbc
