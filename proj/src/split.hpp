#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "netsim.hpp"

namespace lbc {

enum class SplitKind { degree, connectivity, hybrid_degree, hybrid_connectivity };

std::string split_kind_name(SplitKind k);
SplitKind parse_split_kind(const std::string& s);

// Partition data for one duplicated-network construction. The degree kind
// splits the neighborhood of a low-degree node z; the connectivity kinds
// split a small vertex cut separating A from B; the hybrid kinds add the
// equivocation-bounded parts R and T around a small set S or inside the cut.
struct SplitSpec {
  SplitKind kind = SplitKind::degree;
  int f = 0;
  int t = 0;
  int z = -1;      // degree center
  NodeMask S = 0;  // hybrid-degree center set
  NodeMask F1 = 0, F2 = 0, R = 0, T = 0;
  NodeMask A = 0, B = 0, C1 = 0, C2 = 0, C3 = 0;
};

// Throws InputError when the partition does not cover V, overlaps, exceeds
// its size bounds, or misses a mandated non-empty part.
void validate_split_spec(const Graph& g, const SplitSpec& s);

// Doubled hearing network: one engine node per single-copy graph node, two
// per duplicated node, with the construction's undirected and one-way edges
// baked into the hearer masks.
struct SplitNetwork {
  Graph g;
  SplitSpec spec;
  DeliveryNet net;
  std::vector<int> copy0;   // engine id per graph node
  std::vector<int> copy1;   // second engine id, -1 for single copies
  std::vector<int> inputs;  // construction inputs per engine node
};

SplitNetwork build_split_network(const Graph& g, const SplitSpec& spec);

// One line per violation of the hearing property: every copy of u hears
// exactly one copy of each neighbor of u and nothing from anyone else.
std::vector<std::string> check_hearing(const SplitNetwork& sn);

// First partition in deterministic enumeration order whose invariants hold,
// or absent when the graph offers none (conforming graphs).
std::optional<SplitSpec> find_split_spec(const Graph& g, SplitKind kind, int f, int t);

struct DemoExecution {
  std::string name;  // E1 | E2 | E3
  NodeMask faulty = 0;
  NodeMask equivocators = 0;
  std::vector<int> inputs;   // per graph node; faulty entries mirror their images
  std::string expect;        // all-0 | agreement | all-1
  std::string script;        // replay script driving the faulty nodes
  std::string trace;         // serialized run on the original graph
  std::string status;        // decided | infeasible | budget
  std::vector<int> outputs;  // -1 for faulty or undecided
  bool projection_ok = false;  // non-faulty transmissions match their images
  bool expect_ok = false;
};

struct NecessityDemo {
  SplitSpec spec;
  std::string doubled_trace;
  std::string doubled_status;
  std::vector<DemoExecution> execs;
  std::string verdict;
  // True when the triple exhibits an agreement or validity violation or the
  // protocol aborts infeasibly; false means the bound went undemonstrated.
  bool demonstrated = false;
};

// Builds the network, runs the protocol on it (Algorithm 1, or Algorithm 3
// for the hybrid kinds), projects the three executions onto the original
// graph as scripted replays, and judges them.
NecessityDemo demo_necessity(const Graph& g, SplitKind kind, int f, int t,
                             const SplitSpec* forced = nullptr);

}  // namespace lbc
