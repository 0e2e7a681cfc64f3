#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>

#include "feasibility.hpp"
#include "flood.hpp"
#include "graph.hpp"
#include "netsim.hpp"

namespace lbc {

// One phase hypothesis: F = suspected broadcast-faulty set, T = suspected
// equivocator set (empty outside the hybrid protocol), phi = f - |T|.
struct PhaseConfig {
  NodeMask F = 0;
  NodeMask T = 0;
  int phi = 0;
};

// t = 0 yields the local-broadcast schedule: all F with |F| <= f ordered by
// size then lexicographically. t > 0 additionally enumerates T by (size, lex)
// outer, F subset of V-T with |F| <= f-|T| inner.
std::vector<PhaseConfig> phase_schedule(int n, int f, int t);

struct Partition {
  NodeMask Z = 0;  // tagged faulty (value 0 on the chosen path)
  NodeMask N = 0;  // tagged non-faulty
};

using PexclCache = std::unordered_map<uint64_t, std::optional<Path>>;

// Step (b): classify every u in V-T by the value recorded along the
// deterministic u->v path avoiding F∪T internally; value 0 puts u in Z,
// anything else (including no recorded entry) in N; v classifies by its own
// gamma. No such path existing in the graph raises ProtocolInfeasible.
Partition compute_partition(const Graph& g, int v, int gamma, const FloodTable& table, NodeMask F,
                            NodeMask T, PexclCache* cache = nullptr);

struct CaseChoice {
  int number = 0;  // 1..4
  NodeMask A = 0;
  NodeMask B = 0;
};

CaseChoice step_c_case_select(const Partition& p, NodeMask F, int f, int phi);

using FamilyCache = std::unordered_map<uint64_t, bool>;

// Step (c): if v is in B and f+1 node-disjoint paths from distinct A-origins,
// internally avoiding F∪T, all recorded the same delta, adopt delta (delta=0
// first). On conforming graphs the graph-level family must exist whenever v
// is in B; its absence is an internal error.
int step_c_update(const Graph& g, int v, int gamma, const FloodTable& table, const CaseChoice& cc,
                  NodeMask F, NodeMask T, int f, bool conforming, FamilyCache* fcache = nullptr);

// Honest participant in Algorithm 1 (t = 0) or Algorithm 3.
class PhaseProgram : public NodeProgram {
 public:
  PhaseProgram(const Graph* g, int self, int f, int t, int input,
               const std::vector<PhaseConfig>* schedule, bool conforming);

  std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) override;
  std::optional<int> decided() const override { return decision_; }

  int gamma() const { return gamma_; }
  // gamma at the start of each phase, then the final value.
  const std::vector<int>& gamma_history() const { return history_; }

 private:
  const Graph* g_;
  int self_, f_, t_, n_;
  int gamma_;
  const std::vector<PhaseConfig>* sched_;
  bool conforming_;
  FloodTable table_;
  std::optional<int> decision_;
  std::vector<int> history_;
  PexclCache pexcl_cache_;
  FamilyCache family_cache_;

  std::vector<Emission> process_inbox(const std::vector<Delivery>& inbox);
};

struct PhaseRunConfig {
  const Graph* g = nullptr;
  int f = 0;
  int t = 0;
  std::vector<int> inputs;  // one bit per node, including faulty nodes
  NodeMask faulty = 0;
  NodeMask equivocators = 0;  // subset of faulty allowed targeted sends (t > 0 only)
  // Builds the program for each faulty node, given the schedule the run will
  // use; a null function or null program means silent.
  std::function<std::unique_ptr<NodeProgram>(int node, const std::vector<PhaseConfig>* schedule)>
      faulty_program;
  int max_rounds = 0;  // 0 = exact schedule length
  bool conforming = true;
};

struct PhaseRunResult {
  RunTrace trace;
  std::vector<PhaseConfig> schedule;
  int rounds_per_phase = 0;
  // Indexed by node; faulty nodes have empty history and output -1.
  std::vector<std::vector<int>> gamma_history;
  std::vector<int> outputs;
};

PhaseRunResult run_phase_protocol(const PhaseRunConfig& cfg);

// Spec'd entry points; algorithm 1 is the t = 0 instantiation.
PhaseRunResult run_algorithm1(const PhaseRunConfig& cfg);
PhaseRunResult run_algorithm3(const PhaseRunConfig& cfg);

}  // namespace lbc
