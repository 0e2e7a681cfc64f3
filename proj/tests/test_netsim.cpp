#include <memory>

#include "../src/netsim.hpp"
#include "../vendor/doctest.h"

using namespace lbc;

namespace {

Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return make_graph(n, e);
}

// Decides its node id's parity at round 0 and never transmits.
class InstantProgram : public NodeProgram {
 public:
  explicit InstantProgram(int bit) : bit_(bit) {}
  std::vector<Emission> on_round(int, const std::vector<Delivery>&) override {
    done_ = true;
    return {};
  }
  std::optional<int> decided() const override {
    return done_ ? std::optional<int>(bit_) : std::nullopt;
  }

 private:
  int bit_;
  bool done_ = false;
};

// Broadcasts one raw payload at round 0, then echoes everything it heard the
// next round and decides.
class EchoProgram : public NodeProgram {
 public:
  explicit EchoProgram(std::string tag) : tag_(std::move(tag)) {}
  std::vector<Emission> on_round(int round, const std::vector<Delivery>& inbox) override {
    std::vector<Emission> out;
    if (round == 0) {
      out.push_back({Payload::raw_msg(tag_), -1});
    } else if (round == 1) {
      heard_ = inbox;
      decision_ = (int)inbox.size() % 2;
    }
    return out;
  }
  std::optional<int> decided() const override { return decision_; }
  const std::vector<Delivery>& heard() const { return heard_; }

 private:
  std::string tag_;
  std::vector<Delivery> heard_;
  std::optional<int> decision_;
};

class TargetedProgram : public NodeProgram {
 public:
  explicit TargetedProgram(int target) : target_(target) {}
  std::vector<Emission> on_round(int round, const std::vector<Delivery>&) override {
    if (round == 0) return {{Payload::raw_msg("aa"), target_}};
    return {};
  }

 private:
  int target_;
};

class ThrowingProgram : public NodeProgram {
 public:
  std::vector<Emission> on_round(int round, const std::vector<Delivery>&) override {
    if (round == 2) throw ProtocolInfeasible("no usable path");
    return {};
  }
};

}  // namespace

TEST_CASE("instant decisions produce an empty trace with round_count zero") {
  Graph g = cycle(5);
  RunSetup s;
  s.net = DeliveryNet::from_graph(g);
  for (int v = 0; v < 5; ++v) {
    s.programs.push_back(std::make_unique<InstantProgram>(v % 2));
    s.tracked |= bit(v);
  }
  s.max_rounds = 10;
  RunTrace t = run_synchronous(s);
  CHECK(t.status == RunStatus::decided);
  CHECK(t.tx.empty());
  CHECK(t.round_count == 0);
  for (int v = 0; v < 5; ++v) {
    REQUIRE(t.decisions[v].has_value());
    CHECK(t.decisions[v]->bit == v % 2);
    CHECK(t.decisions[v]->round == 0);
  }
}

TEST_CASE("broadcasts reach exactly the neighbors, sender ascending") {
  Graph g = cycle(5);
  RunSetup s;
  s.net = DeliveryNet::from_graph(g);
  std::vector<EchoProgram*> progs;
  for (int v = 0; v < 5; ++v) {
    auto p = std::make_unique<EchoProgram>(std::string(1, char('a' + v)) + "0");
    progs.push_back(p.get());
    s.programs.push_back(std::move(p));
    s.tracked |= bit(v);
  }
  s.max_rounds = 10;
  RunTrace t = run_synchronous(s);
  CHECK(t.status == RunStatus::decided);

  // Node 0 hears exactly its cycle neighbors 1 and 4, in that order.
  REQUIRE(progs[0]->heard().size() == 2);
  CHECK(progs[0]->heard()[0].from == 1);
  CHECK(progs[0]->heard()[1].from == 4);
  CHECK(progs[0]->heard()[0].payload->raw == "b0");
  CHECK(progs[0]->heard()[1].payload->raw == "e0");

  // deliveries_of reconstructs the same inbox from the trace.
  auto inbox = deliveries_of(t, s.net, 0, 1);
  REQUIRE(inbox.size() == 2);
  CHECK(inbox[0].from == 1);
  CHECK(inbox[1].from == 4);
  CHECK(*inbox[0].payload == *progs[0]->heard()[0].payload);

  // Round 0 saw five broadcasts; each names its two neighbors as receivers.
  int round0 = 0;
  for (const auto& tx : t.tx)
    if (tx.round == 0) {
      ++round0;
      CHECK(tx.receivers == g.adj[tx.sender]);
      CHECK(tx.target == -1);
    }
  CHECK(round0 == 5);
}

TEST_CASE("targeted sends are gated by the equivocator mask") {
  Graph g = cycle(5);

  auto build = [&](NodeMask equiv, int target) {
    RunSetup s;
    s.net = DeliveryNet::from_graph(g);
    s.programs.push_back(std::make_unique<TargetedProgram>(target));
    for (int v = 1; v < 5; ++v) s.programs.push_back(std::make_unique<SilentProgram>());
    s.equivocators = equiv;
    s.max_rounds = 2;
    return s;
  };

  RunSetup plain = build(0, 1);
  CHECK_THROWS_AS(run_synchronous(plain), InputError);

  RunSetup nonhearer = build(bit(0), 2);  // 2 is not a neighbor of 0
  CHECK_THROWS_AS(run_synchronous(nonhearer), InputError);

  RunSetup ok = build(bit(0), 1);
  RunTrace t = run_synchronous(ok);
  REQUIRE(t.tx.size() == 1);
  CHECK(t.tx[0].target == 1);
  CHECK(t.tx[0].receivers == bit(1));
  auto inbox1 = deliveries_of(t, ok.net, 1, 1);
  REQUIRE(inbox1.size() == 1);
  auto inbox4 = deliveries_of(t, ok.net, 4, 1);
  CHECK(inbox4.empty());
}

TEST_CASE("budget exhaustion and infeasibility are reported") {
  Graph g = cycle(5);

  RunSetup s;
  s.net = DeliveryNet::from_graph(g);
  for (int v = 0; v < 5; ++v) s.programs.push_back(std::make_unique<SilentProgram>());
  s.tracked = bit(0);
  s.max_rounds = 7;
  RunTrace t = run_synchronous(s);
  CHECK(t.status == RunStatus::budget_exhausted);
  CHECK(t.round_count == 0);

  RunSetup s2;
  s2.net = DeliveryNet::from_graph(g);
  s2.programs.push_back(std::make_unique<ThrowingProgram>());
  for (int v = 1; v < 5; ++v) s2.programs.push_back(std::make_unique<SilentProgram>());
  s2.tracked = bit(0);
  s2.max_rounds = 10;
  RunTrace t2 = run_synchronous(s2);
  CHECK(t2.status == RunStatus::infeasible);
  CHECK(t2.error_node == 0);
  CHECK(t2.error_round == 2);
  CHECK(t2.error == "no usable path");
}

TEST_CASE("untracked runs execute the full budget") {
  Graph g = cycle(3);
  RunSetup s;
  s.net = DeliveryNet::from_graph(g);
  for (int v = 0; v < 3; ++v) s.programs.push_back(std::make_unique<SilentProgram>());
  s.max_rounds = 4;
  RunTrace t = run_synchronous(s);
  CHECK(t.status == RunStatus::decided);
  CHECK(t.tx.empty());
}

TEST_CASE("trace serialization is stable and deterministic") {
  Graph g = make_graph(3, {{0, 1}, {1, 2}});
  auto run_once = [&]() {
    RunSetup s;
    s.net = DeliveryNet::from_graph(g);
    s.programs.push_back(std::make_unique<EchoProgram>("aa"));
    s.programs.push_back(std::make_unique<EchoProgram>("bb"));
    s.programs.push_back(std::make_unique<EchoProgram>("cc"));
    s.tracked = 0b111;
    s.max_rounds = 5;
    return run_synchronous(s);
  };
  BlobStore blobs;
  std::string a = serialize_trace(run_once(), blobs);
  std::string b = serialize_trace(run_once(), blobs);
  CHECK(a == b);
  // Raw payload "aa" from node 0 reaches only node 1 on the path graph.
  std::string hex_aa = to_hex(serialize_payload(Payload::raw_msg("aa"), blobs));
  CHECK(a.find("0 0 B " + hex_aa + " 1\n") != std::string::npos);
  CHECK(a.find("DECIDE 0 1 1\n") != std::string::npos);  // one delivery, parity 1
}
