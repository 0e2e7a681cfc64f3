#include "protocol_ident.hpp"

#include <algorithm>

namespace lbc {

namespace {

// Packs a flood payload for hashing; path length <= 14 keeps this exact.
uint64_t flood_item_key(const Payload& p) {
  return ((p.path.packed | ((uint64_t)p.path.len << 56)) << 1) | (uint64_t)(p.bit & 1);
}

}  // namespace

IdentProgram::IdentProgram(const Graph* g, int self, int f, int input, BlobStore* blobs)
    : g_(g),
      self_(self),
      f_(f),
      n_(g->n),
      input_(input ? 1 : 0),
      blobs_(blobs),
      floods_(g, self),
      heard_(g->n),
      claim_cache_(g->n),
      claim_index_(g->n) {}

std::vector<Emission> IdentProgram::on_round(int round, const std::vector<Delivery>& inbox) {
  if (round >= 3 * n_) return {};

  // Forwards accumulate in delivery order. Hearing is logged verbatim for
  // every phase-1 arrival (sends up to round n-1), which is exactly the
  // window claims can refer to.
  std::vector<Emission> fwd;
  fwd.reserve(inbox.size());
  for (const auto& d : inbox) {
    if (round <= n_ && has(g_->adj[self_], d.from))
      heard_[d.from].push_back({(uint16_t)round, *d.payload});
    const Payload& p = *d.payload;
    switch (p.kind) {
      case PayloadKind::flood: {
        auto rec = floods_.offer(d.from, (uint32_t)p.bit, p.path);
        if (rec && round < n_) fwd.push_back({Payload::flood_msg(p.bit, *rec), -1});
        break;
      }
      case PayloadKind::bundle: {
        int origin = p.path.empty() ? d.from : p.path.first();
        if (origin < 0 || origin >= n_ || (int)p.subject >= n_) break;
        auto [it, fresh] = bundles_.try_emplace({origin, (int)p.subject}, g_, self_);
        auto rec = it->second.offer(d.from, p.blob, p.path);
        if (rec && round < 2 * n_)
          fwd.push_back({Payload::bundle_msg(p.subject, *rec, p.blob), -1});
        break;
      }
      case PayloadKind::decision: {
        int origin = p.path.empty() ? d.from : p.path.first();
        if (origin < 0 || origin >= n_) break;
        auto [it, fresh] = decisions_.try_emplace(origin, g_, self_);
        auto rec = it->second.offer(d.from, (uint32_t)p.bit, p.path);
        if (rec && round < 3 * n_ - 1)
          fwd.push_back({Payload::decision_msg(p.bit, *rec), -1});
        break;
      }
      case PayloadKind::raw:
        break;
    }
  }

  std::vector<Emission> out;
  out.reserve(fwd.size() + (size_t)n_);
  if (round == 0) {
    floods_.record_self((uint32_t)input_);
    out.push_back({Payload::flood_msg(input_, {}), -1});
  } else if (round == n_) {
    // One report per neighbor, subject ascending, covering everything heard
    // from that neighbor in phase 1.
    for (int z : g_->nbrs[self_]) out.push_back({Payload::bundle_msg(z, {}, blobs_->intern(heard_[z])), -1});
  } else if (round == 2 * n_ && !type_a_) {
    decision_ = majority_decision();
    out.push_back({Payload::decision_msg(*decision_, {}), -1});
  }
  for (auto& e : fwd) out.push_back(std::move(e));

  if (round == 1) {
    // Neighbors whose initiation is missing get the default (1, empty)
    // substituted, ascending by id, through the same recording rules.
    NodeMask present = 0;
    for (const auto& d : inbox)
      if (d.payload->kind == PayloadKind::flood && d.payload->path.empty()) present |= bit(d.from);
    for (int u : g_->nbrs[self_]) {
      if (has(present, u)) continue;
      auto rec = floods_.offer(u, 1, {});
      if (rec) out.push_back({Payload::flood_msg(1, *rec), -1});
    }
  }

  // Claims may name this node, so its own phase-1 broadcasts are part of the
  // evidence base.
  if (round < n_)
    for (const auto& e : out)
      if (e.payload.kind == PayloadKind::flood) sent_.push_back(e.payload);

  if (round == 2 * n_ - 1) {
    evaluate_receipts();
    identify_faulty();
    type_a_ = popcount(identified_) == f_;
  }
  if (round == 3 * n_ - 1 && !decision_) decision_ = accept_decision();
  return out;
}

std::optional<ReliableReceipt> IdentProgram::reliable_receive(const Graph& g, int v,
                                                              const FloodTable& table, int source,
                                                              int f) {
  PackedPath direct;
  direct.push(source);
  if (source == v) {
    if (auto val = table.value_along(direct)) return ReliableReceipt{source, (int)*val, 1};
    return std::nullopt;
  }
  if (has(g.adj[v], source)) {
    if (auto val = table.value_along(direct)) return ReliableReceipt{source, (int)*val, 2};
  }
  for (int delta = 0; delta <= 1; ++delta)
    if (table.find_family(f + 1, (uint32_t)delta, bit(source), 0, false))
      return ReliableReceipt{source, delta, 3};
  return std::nullopt;
}

void IdentProgram::evaluate_receipts() {
  for (int w = 0; w < n_; ++w)
    if (auto r = reliable_receive(*g_, self_, floods_, w, f_)) receipts_.push_back(*r);
}

const std::vector<Path>& IdentProgram::paths_between(int u, int w) {
  int a = std::min(u, w), b = std::max(u, w);
  uint64_t key = ((uint64_t)a << 8) | (uint64_t)b;
  auto it = path_cache_.find(key);
  if (it != path_cache_.end()) return it->second;
  auto got = disjoint_uv_paths(*g_, a, b, 2 * f_);
  if (!got)
    throw ProtocolInfeasible("need " + std::to_string(2 * f_) + " node-disjoint paths between " +
                             std::to_string(a) + " and " + std::to_string(b));
  return path_cache_.emplace(key, std::move(*got)).first->second;
}

void IdentProgram::identify_faulty() {
  for (const auto& rr : receipts_) {
    int w = rr.source;
    int bbar = 1 - rr.value;
    for (int u = 0; u < n_; ++u) {
      if (u == w) continue;
      for (const auto& path : paths_between(u, w)) {
        // Walk from the w end; the claim for the node at position j is the
        // flood of the opposite value carried along the path prefix, which is
        // exactly what that node would have broadcast.
        int m = (int)path.size();
        bool from_front = path.front() == w;
        PackedPath pref;
        pref.push(w);
        for (int j = 1; j < m; ++j) {
          int z = from_front ? path[j] : path[m - 1 - j];
          if (claim_received(z, Payload::flood_msg(bbar, pref))) {
            identified_ |= bit(z);
            break;
          }
          pref.push(z);
        }
      }
    }
  }

  // The claim walk only sees tampered forwards. Withholding leaves no claim
  // behind, but a node that broadcast nothing in phase 1 shows up as an empty
  // heard log at each of its neighbors, so silence is marked from the own log
  // or from a reliably received empty report. Reports are never emptied in
  // transit: a relay flip changes items, and a forged blob on relayed paths
  // cannot reach f+1 disjoint ones.
  uint32_t empty_blob = blobs_->intern(Blob{});
  for (int z = 0; z < n_; ++z) {
    if (z == self_) continue;
    if (has(g_->adj[self_], z)) {
      if (heard_[z].empty()) identified_ |= bit(z);
      continue;
    }
    for (int r : g_->nbrs[z]) {
      if (r == self_) continue;
      auto it = bundles_.find({r, z});
      if (it == bundles_.end()) continue;
      const FloodTable& table = it->second;
      bool silent = false;
      if (has(g_->adj[self_], r)) {
        PackedPath direct;
        direct.push(r);
        auto blob = table.value_along(direct);
        silent = blob && *blob == empty_blob;
      } else {
        silent = table.find_family(f_ + 1, empty_blob, bit(r), 0, false).has_value();
      }
      if (silent) {
        identified_ |= bit(z);
        break;
      }
    }
  }
}

bool IdentProgram::claim_received(int z, const Payload& claim) {
  uint64_t ck = claim.path.packed | ((uint64_t)claim.path.len << 56) | ((uint64_t)claim.bit << 60);
  auto& cache = claim_cache_[z];
  if (auto it = cache.find(ck); it != cache.end()) return it->second != 0;

  bool res = false;
  if (z == self_) {
    res = std::find(sent_.begin(), sent_.end(), claim) != sent_.end();
  } else if (has(g_->adj[self_], z)) {
    for (const auto& item : heard_[z])
      if (item.payload == claim) {
        res = true;
        break;
      }
  } else {
    // A composite z-to-here path is z, a reporting neighbor of z, then the
    // relays of that report; f+1 pairwise disjoint ones are needed. The
    // bundle blobs about z are indexed by contained payload once, so each
    // claim is a lookup plus a packing check.
    if (!claim_index_[z]) {
      auto& index = claim_index_[z].emplace();
      for (int r : g_->nbrs[z]) {
        if (r == self_) continue;
        auto it = bundles_.find({r, z});
        if (it == bundles_.end()) continue;
        for (const auto& e : it->second.entries()) {
          NodeMask km = e.key.mask();
          if (has(km, z) || e.value >= blobs_->size()) continue;
          for (const auto& item : blobs_->get(e.value)) {
            if (item.payload.kind != PayloadKind::flood) continue;
            uint64_t pk = flood_item_key(item.payload);
            auto& masks = index[pk];
            if (masks.empty() || masks.back() != km) masks.push_back(km);
          }
        }
      }
    }
    auto hit = claim_index_[z]->find(flood_item_key(claim));
    if (hit != claim_index_[z]->end()) res = pack_masks(hit->second, f_ + 1).has_value();
  }
  cache.emplace(ck, res ? 1 : 0);
  return res;
}

int IdentProgram::majority_decision() const {
  int ones = 0, zeros = 0;
  for (const auto& r : receipts_) (r.value ? ones : zeros)++;
  return ones > zeros ? 1 : 0;
}

int IdentProgram::accept_decision() const {
  for (const auto& [origin, table] : decisions_)
    for (const auto& e : table.entries())
      if ((e.key.mask() & identified_) == 0) return (int)(e.value & 1);

  // No decision arrived clean of identified nodes: read every other node's
  // input along a path avoiding them and take the majority.
  std::vector<int> excl = ids_of(identified_);
  int ones = 0, zeros = 0;
  for (int w = 0; w < n_; ++w) {
    if (has(identified_, w)) continue;
    if (w == self_) {
      (input_ ? ones : zeros)++;
      continue;
    }
    auto p = path_excluding(*g_, w, self_, excl);
    if (!p) continue;
    PackedPath key;
    for (size_t i = 0; i + 1 < p->size(); ++i) key.push((*p)[i]);
    auto val = floods_.value_along(key);
    if (!val) continue;
    (*val ? ones : zeros)++;
  }
  return ones > zeros ? 1 : 0;
}

IdentRunResult run_algorithm2(const IdentRunConfig& cfg) {
  const Graph& g = *cfg.g;
  if (g.n > 15) throw InputError("protocol runs support at most 15 nodes");
  if ((int)cfg.inputs.size() != g.n) throw InputError("inputs must list one bit per node");
  if (popcount(cfg.faulty) > cfg.f) throw InputError("more faulty nodes than f");
  if (cfg.faulty != 0 && !cfg.faulty_program)
    throw InputError("faulty nodes need a program factory");
  if (vertex_connectivity(g) < 2 * cfg.f)
    throw ProtocolInfeasible("graph is not 2f-connected");

  IdentRunResult res;
  res.blobs = std::make_shared<BlobStore>();

  RunSetup setup;
  setup.net = DeliveryNet::from_graph(g);
  setup.max_rounds = cfg.max_rounds > 0 ? cfg.max_rounds : 3 * g.n;
  std::vector<IdentProgram*> live(g.n, nullptr);
  for (int v = 0; v < g.n; ++v) {
    if (has(cfg.faulty, v)) {
      setup.programs.push_back(cfg.faulty_program(v, res.blobs.get()));
    } else {
      auto p = std::make_unique<IdentProgram>(&g, v, cfg.f, cfg.inputs[v], res.blobs.get());
      live[v] = p.get();
      setup.programs.push_back(std::move(p));
      setup.tracked |= bit(v);
    }
  }

  res.trace = run_synchronous(setup);
  res.outputs.assign(g.n, -1);
  res.identified.assign(g.n, 0);
  res.type_a.assign(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    if (!live[v]) continue;
    auto d = live[v]->decided();
    res.outputs[v] = d ? *d : -1;
    res.identified[v] = live[v]->identified();
    res.type_a[v] = live[v]->type_a() ? 1 : 0;
  }
  return res;
}

}  // namespace lbc
