#pragma once

#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

#include "netsim.hpp"
#include "protocol_phase.hpp"

namespace lbc {

enum class StrategyKind { silent, constant, input_flip, alternate, tamper, equivocate, scripted };

struct TamperRule {
  enum class Scope { all, origin, via, first_hop } scope = Scope::all;
  int node = -1;
};

// Parsed form of one adversary spec string:
//   silent | constant:<b> | input-flip | alternate:<b> |
//   tamper:all | tamper:origin=<id> | tamper:via=<id> | tamper:first-hop=<id> |
//   equivocate:<nbr>=<b>,... | equivocate:alternate | script:<file>
struct StrategySpec {
  StrategyKind kind = StrategyKind::silent;
  int bit = 0;
  TamperRule rule;
  std::map<int, int> targets;   // equivocate explicit map
  bool auto_alternate = false;  // equivocate:alternate (even neighbor rank 0, odd 1)
  std::string script_path;
  std::string text;  // original string, echoed in reports
};

StrategySpec parse_strategy(const std::string& text);

// Splits a comma-separated strategy list; commas inside an equivocate map do
// not split (a new element must start with a known kind name).
std::vector<std::string> split_strategy_list(const std::string& text);

bool tamper_matches(const TamperRule& rule, const PackedPath& carried);

// Per-node replay table: emissions[round] for each scripted node.
using ScriptSet = std::map<int, std::vector<std::vector<Emission>>>;

// Line format: `<round> <node> B <payload-text>` or
// `<round> <node> T <target> <payload-text>`; `#` starts a comment.
ScriptSet parse_script(std::istream& in, BlobStore& blobs);
std::string serialize_script(const ScriptSet& s, const BlobStore& blobs);

class ScriptedProgram : public NodeProgram {
 public:
  explicit ScriptedProgram(std::vector<std::vector<Emission>> by_round)
      : by_round_(std::move(by_round)) {}
  std::vector<Emission> on_round(int round, const std::vector<Delivery>&) override {
    if (round < 0 || round >= (int)by_round_.size()) return {};
    return by_round_[round];
  }

 private:
  std::vector<std::vector<Emission>> by_round_;
};

// Faulty participant in a phase protocol that floods a chosen value each
// phase (broadcast or per-neighbor targeted) and otherwise relays honestly,
// including the default substitution. Runs no decision steps.
class FloodRelayProgram : public NodeProgram {
 public:
  struct InitPlan {
    bool broadcast = false;
    int bit = 0;
    std::vector<std::pair<int, int>> targeted;  // (neighbor, bit), ascending
  };

  FloodRelayProgram(const Graph* g, int self, int rounds_per_phase, int phase_count,
                    std::function<InitPlan(int)> plan);

  std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) override;

 private:
  const Graph* g_;
  int self_, n_, phases_;
  std::function<InitPlan(int)> plan_;
  FloodTable table_;

  std::vector<Emission> process_inbox(const std::vector<Delivery>& inbox);
};

// Wraps an honest program and flips flood / decision bits on outgoing
// forwards whose carried path matches the rule; bundle payloads get every
// contained flood or decision bit flipped. Initiations (empty path) pass
// unchanged.
class TamperProgram : public NodeProgram {
 public:
  TamperProgram(std::unique_ptr<NodeProgram> inner, TamperRule rule, BlobStore* blobs = nullptr)
      : inner_(std::move(inner)), rule_(rule), blobs_(blobs) {}

  std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) override;

 private:
  std::unique_ptr<NodeProgram> inner_;
  TamperRule rule_;
  BlobStore* blobs_;
  // Flipping a bundle depends only on its content, and relays repeat the
  // same few blobs many times, so the flipped id is cached per source id.
  std::unordered_map<uint32_t, uint32_t> blob_flips_;
};

using PhaseAdversaryFactory =
    std::function<std::unique_ptr<NodeProgram>(int, const std::vector<PhaseConfig>*)>;

// Program factory for faulty nodes in Algorithm 1/3 runs; the runner supplies
// its schedule when instantiating.
PhaseAdversaryFactory make_phase_adversary(const Graph* g, const StrategySpec& spec,
                                           const std::vector<int>& inputs, int f, int t,
                                           bool conforming, BlobStore* blobs = nullptr);

// Factory replaying a parsed script; nodes absent from the set stay silent.
PhaseAdversaryFactory make_scripted_factory(ScriptSet scripts);

using IdentAdversaryFactory =
    std::function<std::unique_ptr<NodeProgram>(int node, BlobStore* blobs)>;

// Program factory for faulty nodes in Algorithm 2 runs. Strategies with
// per-phase init plans collapse to a single forced input here (the protocol
// initiates once): constant and alternate force their bit, input-flip forces
// the negated input. Equivocation is rejected.
IdentAdversaryFactory make_ident_adversary(const Graph* g, const StrategySpec& spec,
                                           const std::vector<int>& inputs, int f,
                                           ScriptSet scripts = {});

}  // namespace lbc
