#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "wire.hpp"

namespace lbc {

// Directed hearing structure the engine runs on. For ordinary graphs the
// engine nodes coincide with protocol nodes; doubled networks map several
// engine nodes onto one protocol id. Engine ids must be ordered so that
// proto ids are non-decreasing (delivery order then matches proto order).
struct DeliveryNet {
  int n = 0;
  std::vector<int> proto;          // protocol id per engine node
  std::vector<NodeMask> hearers;   // engine nodes receiving this node's broadcasts

  static DeliveryNet from_graph(const Graph& g);
};

struct Emission {
  Payload payload;
  int target = -1;  // engine node id, -1 = broadcast
};

// Points at the transmission payload owned by the run trace; valid for the
// lifetime of the trace. Programs that keep payloads across rounds copy them.
struct Delivery {
  int from = 0;  // protocol id of the sender
  const Payload* payload = nullptr;
};

// Deterministic per-node state machine driven once per round.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) = 0;
  virtual std::optional<int> decided() const { return std::nullopt; }
};

class SilentProgram : public NodeProgram {
 public:
  std::vector<Emission> on_round(int, const std::vector<Delivery>&) override { return {}; }
};

struct Transmission {
  int round = 0;
  int sender = 0;       // engine id
  int target = -1;      // engine id, -1 = broadcast
  NodeMask receivers = 0;
  Payload payload;
};

struct Decision {
  int bit = 0;
  int round = 0;
};

enum class RunStatus { decided, budget_exhausted, infeasible };

struct RunTrace {
  std::deque<Transmission> tx;  // deque keeps payload references stable
  std::vector<std::optional<Decision>> decisions;  // per engine node
  int round_count = 0;  // highest transmission round + 1
  RunStatus status = RunStatus::decided;
  int error_node = -1;
  int error_round = -1;
  std::string error;
};

struct RunSetup {
  DeliveryNet net;
  std::vector<std::unique_ptr<NodeProgram>> programs;  // one per engine node
  NodeMask tracked = 0;       // run ends once every tracked node has decided
  NodeMask equivocators = 0;  // only these may emit targeted payloads
  int max_rounds = 0;
};

RunTrace run_synchronous(RunSetup& setup);

// Inbox of `node` at `round`, reconstructed from the trace alone.
std::vector<Delivery> deliveries_of(const RunTrace& trace, const DeliveryNet& net, int node,
                                    int round);

// Line format: `round sender B|T<target> <hex of payload text> <receivers...>`,
// then `DECIDE node bit round` per decided node, then an ERROR line when the
// run did not finish cleanly.
std::string serialize_trace(const RunTrace& trace, const BlobStore& blobs);

}  // namespace lbc
