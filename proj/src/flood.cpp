#include "flood.hpp"

#include <algorithm>
#include <bit>

namespace lbc {

namespace {

uint64_t group_key(int origin, uint32_t value) { return ((uint64_t)origin << 32) | value; }

}  // namespace

void FloodTable::reset() {
  seen_.clear();
  by_key_.clear();
  entries_.clear();
  groups_.clear();
}

std::optional<NodeMask> FloodTable::path_mask_checked(const PackedPath& carried,
                                                      int sender) const {
  if (sender < 0 || sender >= g_->n) return std::nullopt;
  // A simple path has at most n nodes including the sender.
  if ((int)carried.len + 1 > g_->n) return std::nullopt;
  if (carried.len >= PackedPath::max_len) return std::nullopt;
  NodeMask m = 0;
  int prev = -1;
  uint64_t p = carried.packed;
  for (int i = 0; i < carried.len; ++i, p >>= 4) {
    int id = (int)(p & 0xf) - 1;
    if (id < 0 || id >= g_->n) return std::nullopt;
    if (i > 0 && !has(g_->adj[prev], id)) return std::nullopt;
    m |= bit(id);
    prev = id;
  }
  if (std::popcount(m) != carried.len) return std::nullopt;
  if (has(m, sender)) return std::nullopt;
  if (prev >= 0 && !has(g_->adj[prev], sender)) return std::nullopt;
  return m;
}

std::optional<PackedPath> FloodTable::offer(int sender, uint32_t value, const PackedPath& carried) {
  // The three discard rules are independent predicates and the dedup key is
  // only consumed on accept, so evaluation order is free.
  auto m = path_mask_checked(carried, sender);
  if (!m) return std::nullopt;
  if (has(*m, self_)) return std::nullopt;
  // carried.len <= 14 here, so packed fits in 56 bits and the key is exact.
  uint64_t dk = carried.packed | ((uint64_t)carried.len << 56) | ((uint64_t)sender << 60);
  if (!seen_.insert(dk)) return std::nullopt;
  PackedPath rec = carried.appended(sender);
  by_key_.insert(rec.key(), value);
  uint32_t idx = (uint32_t)entries_.size();
  entries_.push_back({rec, value});
  Group& grp = groups_[group_key(rec.first(), value)];
  grp.cands.push_back({rec.mask() ^ bit(rec.first()), idx});
  grp.clean = false;
  return rec;
}

void FloodTable::record_self(uint32_t value) {
  PackedPath p;
  p.push(self_);
  by_key_.insert(p.key(), value);
  uint32_t idx = (uint32_t)entries_.size();
  entries_.push_back({p, value});
  Group& grp = groups_[group_key(self_, value)];
  grp.cands.push_back({0, idx});
  grp.clean = false;
}

std::optional<uint32_t> FloodTable::value_along(const PackedPath& key) const {
  const uint32_t* v = by_key_.find(key.key());
  if (!v) return std::nullopt;
  return *v;
}

const std::vector<std::pair<NodeMask, uint32_t>>& FloodTable::minimal_of(const Group& g) const {
  if (!g.clean) {
    auto sorted = g.cands;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      int pa = std::popcount(a.first), pb = std::popcount(b.first);
      if (pa != pb) return pa < pb;
      return a.second < b.second;
    });
    g.minimal.clear();
    for (const auto& c : sorted) {
      bool dominated = false;
      for (const auto& kept : g.minimal) {
        if ((kept.first & c.first) == kept.first) {
          dominated = true;
          break;
        }
      }
      if (!dominated) g.minimal.push_back(c);
    }
    g.clean = true;
  }
  return g.minimal;
}

std::optional<std::vector<FloodTable::Member>> FloodTable::find_family(
    int k, uint32_t value, NodeMask allowed_origins, NodeMask forbidden,
    bool distinct_origins) const {
  if (k <= 0) return std::vector<Member>{};

  struct List {
    int origin;
    std::vector<std::pair<NodeMask, uint32_t>> cands;
  };
  std::vector<List> lists;
  for_bits(allowed_origins, [&](int origin) {
    auto it = groups_.find(group_key(origin, value));
    if (it == groups_.end()) return;
    List l{origin, {}};
    for (const auto& c : minimal_of(it->second))
      if ((c.first & forbidden) == 0) l.cands.push_back(c);
    if (!l.cands.empty()) lists.push_back(std::move(l));
  });

  std::vector<Member> chosen;
  chosen.reserve(k);
  bool found = false;

  if (distinct_origins) {
    // One path per origin; a chosen path may not pass through another chosen
    // path's origin, so origins join the conflict mask.
    auto rec = [&](auto&& self, size_t i, int need, NodeMask conflict) -> bool {
      if (need == 0) return true;
      if (lists.size() - i < (size_t)need) return false;
      const List& l = lists[i];
      NodeMask ob = bit(l.origin);
      for (const auto& [m, idx] : l.cands) {
        if (((m | ob) & conflict) != 0) continue;
        chosen.push_back({l.origin, entries_[idx].key, m});
        if (self(self, i + 1, need - 1, conflict | m | ob)) return true;
        chosen.pop_back();
      }
      return self(self, i + 1, need, conflict);
    };
    found = rec(rec, 0, k, 0);
  } else {
    // Shared origins: only internals must be pairwise disjoint.
    std::vector<std::pair<NodeMask, uint32_t>> flat;
    std::vector<int> origin_of;
    for (const auto& l : lists)
      for (const auto& c : l.cands) {
        flat.push_back(c);
        origin_of.push_back(l.origin);
      }
    auto rec = [&](auto&& self, size_t j, int need, NodeMask conflict) -> bool {
      if (need == 0) return true;
      if (flat.size() - j < (size_t)need) return false;
      const auto& [m, idx] = flat[j];
      if ((m & conflict) == 0) {
        chosen.push_back({origin_of[j], entries_[idx].key, m});
        if (self(self, j + 1, need - 1, conflict | m)) return true;
        chosen.pop_back();
      }
      return self(self, j + 1, need, conflict);
    };
    found = rec(rec, 0, k, 0);
  }

  if (!found) return std::nullopt;
  return chosen;
}

std::optional<std::vector<uint32_t>> pack_masks(const std::vector<NodeMask>& cands, int k) {
  if (k <= 0) return std::vector<uint32_t>{};
  std::vector<std::pair<NodeMask, uint32_t>> sorted;
  sorted.reserve(cands.size());
  for (uint32_t i = 0; i < cands.size(); ++i) sorted.push_back({cands[i], i});
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    int pa = std::popcount(a.first), pb = std::popcount(b.first);
    if (pa != pb) return pa < pb;
    return a.second < b.second;
  });
  std::vector<std::pair<NodeMask, uint32_t>> minimal;
  for (const auto& c : sorted) {
    bool dominated = false;
    for (const auto& kept : minimal)
      if ((kept.first & c.first) == kept.first) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(c);
  }
  std::vector<uint32_t> chosen;
  auto rec = [&](auto&& self, size_t j, int need, NodeMask conflict) -> bool {
    if (need == 0) return true;
    if (minimal.size() - j < (size_t)need) return false;
    if ((minimal[j].first & conflict) == 0) {
      chosen.push_back(minimal[j].second);
      if (self(self, j + 1, need - 1, conflict | minimal[j].first)) return true;
      chosen.pop_back();
    }
    return self(self, j + 1, need, conflict);
  };
  if (!rec(rec, 0, k, 0)) return std::nullopt;
  return chosen;
}

}  // namespace lbc
