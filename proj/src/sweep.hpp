#pragma once

#include <string>
#include <vector>

#include "graph.hpp"
#include "protocol_ident.hpp"
#include "protocol_phase.hpp"

namespace lbc {

enum class ProtocolId { alg1, alg2, alg3 };

std::string protocol_name(ProtocolId p);
ProtocolId parse_protocol(const std::string& s);

// One fully pinned execution. Every field that influences the trace is part
// of the serialized key, so replaying a key reproduces the run byte-exactly.
struct RunKey {
  Graph g;
  ProtocolId proto = ProtocolId::alg1;
  int f = 0;
  int t = 0;
  std::vector<int> inputs;     // one bit per node
  NodeMask faulty = 0;
  NodeMask equivocators = 0;   // subset of faulty, alg3 only
  std::string strategy;        // empty when no node is faulty
  int budget = 0;              // max rounds, 0 = protocol default
};

// `v1|g=<n>:<u-v,...>|proto=<id>|f=|t=|in=<bits>|faulty=<ids|->|eq=<ids|->|strat=<text|->|budget=`
std::string serialize_key(const RunKey& k);
RunKey parse_key(const std::string& text);

struct RunOutcome {
  bool pass = false;
  std::string verdict;       // pass | agreement | validity | termination | infeasible
  std::string detail;        // failure specifics, empty on pass
  int rounds = 0;            // trace round count
  std::vector<int> outputs;  // -1 for faulty nodes
};

RunOutcome execute_key(const RunKey& k);

struct RunArtifacts {
  RunOutcome outcome;
  std::string trace_text;
};

// Runs the key and serializes the trace (replay, golden files).
RunArtifacts execute_key_with_trace(const RunKey& k);

struct SweepSpec {
  Graph g;
  ProtocolId proto = ProtocolId::alg1;
  int f = 0;
  int t = 0;

  bool exhaustive_inputs = true;               // all 2^n vectors, refused past n = 16
  std::vector<std::vector<int>> input_list;    // used when not exhaustive

  enum class Placement { up_to_f, exactly_f, listed };
  Placement placement = Placement::up_to_f;
  std::vector<NodeMask> faulty_list;

  // Applied to each non-empty faulty set; the empty set runs once without a
  // strategy. Equivocate programs go to designated equivocators only, other
  // faulty nodes stay silent under that strategy.
  std::vector<std::string> strategies;
  int designated_equivocators = 0;  // lowest ids of each faulty set register as equivocators

  int budget = 0;
  bool check_invariants = false;  // phase protocols only: trace checks per run
};

struct SweepReport {
  int total = 0;
  int passed = 0;
  std::vector<std::string> lines;          // `run=<i> key=<key> verdict=<v> rounds=<r> decided=<bits>`
  std::vector<std::string> failing_keys;
  bool checked_invariants = false;
  int invariant_violations = 0;
  std::vector<std::string> invariant_samples;  // first few, each prefixed with its key
  int max_rounds_seen = 0;

  std::string to_text() const;  // lines, then totals, then invariant count if checked
};

// Deterministic order: faulty sets by (size, mask value), then strategies in
// listed order, then inputs ascending as little-endian bit vectors.
SweepReport run_sweep(const SweepSpec& spec);

}  // namespace lbc
