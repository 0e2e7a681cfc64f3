#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "flat_hash.hpp"
#include "graph.hpp"
#include "wire.hpp"

namespace lbc {

// Per-node, per-phase record of one flooding instance. Values are opaque
// 32-bit ids: flood/decision bits, or blob ids for report bundles.
//
// Recorded keys are the paths values traveled: carried path plus the
// attested sender, origin first, never including the owning node itself.
// The owner's own value sits under the single-node key (self).
class FloodTable {
 public:
  FloodTable() = default;
  FloodTable(const Graph* g, int self) : g_(g), self_(self) {}

  void reset();
  void record_self(uint32_t value);

  // Flooding rules, applied in order:
  //   (i) discard unless carried+sender is a path of g
  //   (ii) discard if (sender, carried) was already accepted this phase
  //   (iii) discard if the carried path already contains this node
  //   (iv) record value along carried+sender
  // Returns the recorded path (the payload to forward) on acceptance.
  std::optional<PackedPath> offer(int sender, uint32_t value, const PackedPath& carried);

  // Exact-key lookup; key includes the origin and ends at a neighbor (or is
  // the single-node self key).
  std::optional<uint32_t> value_along(const PackedPath& key) const;

  struct Member {
    int origin = 0;
    PackedPath key;       // representative recorded path
    NodeMask internals = 0;
  };

  // k recorded paths with value `value`, pairwise node-disjoint except at the
  // owning node, internals avoiding `forbidden`. distinct_origins additionally
  // requires one path per origin and no path passing through another's origin
  // (single-origin mode instead fixes every origin and only separates
  // internals). Deterministic; exact over the recorded table.
  std::optional<std::vector<Member>> find_family(int k, uint32_t value, NodeMask allowed_origins,
                                                 NodeMask forbidden, bool distinct_origins) const;

  size_t entry_count() const { return entries_.size(); }

  struct Entry {
    PackedPath key;
    uint32_t value;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  struct Group {
    std::vector<std::pair<NodeMask, uint32_t>> cands;  // (internals, entry idx)
    mutable std::vector<std::pair<NodeMask, uint32_t>> minimal;
    mutable bool clean = false;
  };

  const Graph* g_ = nullptr;
  int self_ = -1;
  FlatSet64 seen_;
  FlatMap64 by_key_;
  std::vector<Entry> entries_;
  std::unordered_map<uint64_t, Group> groups_;  // (origin, value) -> candidates

  // Mask of the carried path when carried+sender is a path of g, else absent.
  std::optional<NodeMask> path_mask_checked(const PackedPath& carried, int sender) const;
  const std::vector<std::pair<NodeMask, uint32_t>>& minimal_of(const Group& g) const;
};

// Exact search for k pairwise-disjoint masks; returns indices into cands
// (first family in minimal-mask order), or nullopt.
std::optional<std::vector<uint32_t>> pack_masks(const std::vector<NodeMask>& cands, int k);

}  // namespace lbc
