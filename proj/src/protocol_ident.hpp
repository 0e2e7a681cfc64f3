#pragma once

#include <functional>
#include <map>
#include <memory>
#include <unordered_map>

#include "flood.hpp"
#include "graph.hpp"
#include "netsim.hpp"

namespace lbc {

struct ReliableReceipt {
  int source = 0;
  int value = 0;
  int clause = 0;  // 1 = self, 2 = neighbor, 3 = disjoint path families
};

// Fault-identification consensus for 2f-connected graphs, three phases of n
// rounds each: flood inputs, flood per-neighbor hearing reports, then flood
// decisions. Nodes that identify exactly f faulty nodes (type A) adopt a
// decision arriving clean of identified nodes; everyone else (type B) decides
// by majority over reliably received values at the start of phase 3.
class IdentProgram : public NodeProgram {
 public:
  IdentProgram(const Graph* g, int self, int f, int input, BlobStore* blobs);

  std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) override;
  std::optional<int> decided() const override { return decision_; }

  const std::vector<ReliableReceipt>& receipts() const { return receipts_; }
  NodeMask identified() const { return identified_; }
  bool type_a() const { return type_a_; }
  const FloodTable& floods() const { return floods_; }

  // Definition-1 style receipt for one source over the phase-1 table.
  static std::optional<ReliableReceipt> reliable_receive(const Graph& g, int v,
                                                         const FloodTable& table, int source,
                                                         int f);

 private:
  const Graph* g_;
  int self_, f_, n_;
  int input_;
  BlobStore* blobs_;

  FloodTable floods_;                             // phase 1 values
  std::vector<std::vector<ReportItem>> heard_;    // phase-1 deliveries per neighbor
  std::vector<Payload> sent_;                     // own phase-1 broadcasts
  std::map<std::pair<int, int>, FloodTable> bundles_;  // (reporter, subject) instances
  std::map<int, FloodTable> decisions_;                // decision floods per origin

  std::vector<ReliableReceipt> receipts_;
  NodeMask identified_ = 0;
  bool type_a_ = false;
  std::optional<int> decision_;

  // 2f disjoint u-w path families, canonical (min,max) orientation.
  std::unordered_map<uint64_t, std::vector<Path>> path_cache_;
  // Claim verdict cache per examined node; key packs claim path and bit.
  std::vector<std::unordered_map<uint64_t, uint8_t>> claim_cache_;
  // Per subject: flood payload key -> masks of bundle entries whose blob
  // carries that payload, built once when identification starts.
  std::vector<std::optional<std::unordered_map<uint64_t, std::vector<NodeMask>>>> claim_index_;

  const std::vector<Path>& paths_between(int u, int w);
  bool claim_received(int z, const Payload& claim);
  void evaluate_receipts();
  void identify_faulty();
  int majority_decision() const;
  int accept_decision() const;
};

struct IdentRunConfig {
  const Graph* g = nullptr;
  int f = 0;
  std::vector<int> inputs;
  NodeMask faulty = 0;
  // Faulty node programs; the store is shared by the whole run.
  std::function<std::unique_ptr<NodeProgram>(int node, BlobStore* blobs)> faulty_program;
  int max_rounds = 0;  // 0 = 3n
};

struct IdentRunResult {
  RunTrace trace;
  std::shared_ptr<BlobStore> blobs;
  std::vector<int> outputs;         // -1 for faulty
  std::vector<NodeMask> identified; // per node, 0 for faulty
  std::vector<int> type_a;          // 1, 0, or -1 for faulty
};

IdentRunResult run_algorithm2(const IdentRunConfig& cfg);

}  // namespace lbc
