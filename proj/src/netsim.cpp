#include "netsim.hpp"

#include <algorithm>

namespace lbc {

DeliveryNet DeliveryNet::from_graph(const Graph& g) {
  DeliveryNet net;
  net.n = g.n;
  net.proto.resize(g.n);
  for (int v = 0; v < g.n; ++v) net.proto[v] = v;
  net.hearers = g.adj;
  return net;
}

RunTrace run_synchronous(RunSetup& setup) {
  const DeliveryNet& net = setup.net;
  if ((int)setup.programs.size() != net.n)
    throw InputError("run_synchronous: need one program per engine node");
  for (int v = 1; v < net.n; ++v)
    if (net.proto[v] < net.proto[v - 1])
      throw InputError("run_synchronous: engine ids must be sorted by protocol id");

  RunTrace trace;
  trace.decisions.assign(net.n, std::nullopt);
  std::vector<std::vector<Delivery>> inbox(net.n), next(net.n);

  for (int round = 0; round < setup.max_rounds; ++round) {
    for (auto& q : next) q.clear();
    for (int v = 0; v < net.n; ++v) {
      std::vector<Emission> emissions;
      try {
        emissions = setup.programs[v]->on_round(round, inbox[v]);
      } catch (const ProtocolInfeasible& e) {
        trace.status = RunStatus::infeasible;
        trace.error_node = v;
        trace.error_round = round;
        trace.error = e.what();
        trace.round_count = trace.tx.empty() ? 0 : trace.tx.back().round + 1;
        return trace;
      }
      for (auto& em : emissions) {
        Transmission t;
        t.round = round;
        t.sender = v;
        t.target = em.target;
        t.payload = std::move(em.payload);
        if (em.target >= 0) {
          if (!has(setup.equivocators, v))
            throw InputError("targeted send by non-equivocator node " + std::to_string(v));
          if (em.target >= net.n || !has(net.hearers[v], em.target))
            throw InputError("targeted send to non-hearer " + std::to_string(em.target));
          t.receivers = bit(em.target);
        } else {
          t.receivers = net.hearers[v];
        }
        trace.tx.push_back(std::move(t));
        const Transmission& stored = trace.tx.back();
        for_bits(stored.receivers, [&](int r) {
          next[r].push_back(Delivery{net.proto[v], &stored.payload});
        });
      }
      if (!trace.decisions[v].has_value()) {
        if (auto d = setup.programs[v]->decided())
          trace.decisions[v] = Decision{*d, round};
      }
    }
    inbox.swap(next);
    if (setup.tracked != 0) {
      bool all_done = true;
      for_bits(setup.tracked, [&](int v) {
        if (!trace.decisions[v].has_value()) all_done = false;
      });
      if (all_done) {
        trace.status = RunStatus::decided;
        trace.round_count = trace.tx.empty() ? 0 : trace.tx.back().round + 1;
        return trace;
      }
    }
  }
  // With nothing tracked the budget is the intended run length.
  if (setup.tracked == 0) {
    trace.status = RunStatus::decided;
  } else {
    trace.status = RunStatus::budget_exhausted;
    trace.error = "round budget of " + std::to_string(setup.max_rounds) + " exhausted";
  }
  trace.round_count = trace.tx.empty() ? 0 : trace.tx.back().round + 1;
  return trace;
}

std::vector<Delivery> deliveries_of(const RunTrace& trace, const DeliveryNet& net, int node,
                                    int round) {
  std::vector<Delivery> out;
  if (round <= 0) return out;
  for (const auto& t : trace.tx) {
    if (t.round != round - 1 || !has(t.receivers, node)) continue;
    out.push_back(Delivery{net.proto[t.sender], &t.payload});
  }
  // Trace order is already (sender ascending, emission order) per round.
  return out;
}

std::string serialize_trace(const RunTrace& trace, const BlobStore& blobs) {
  std::string out;
  for (const auto& t : trace.tx) {
    out += std::to_string(t.round) + " " + std::to_string(t.sender) + " ";
    out += t.target < 0 ? "B" : "T" + std::to_string(t.target);
    out += " " + to_hex(serialize_payload(t.payload, blobs));
    for_bits(t.receivers, [&](int r) { out += " " + std::to_string(r); });
    out += "\n";
  }
  for (size_t v = 0; v < trace.decisions.size(); ++v)
    if (trace.decisions[v])
      out += "DECIDE " + std::to_string(v) + " " + std::to_string(trace.decisions[v]->bit) + " " +
             std::to_string(trace.decisions[v]->round) + "\n";
  if (trace.status == RunStatus::infeasible)
    out += "ERROR infeasible " + std::to_string(trace.error_node) + " " +
           std::to_string(trace.error_round) + " " + trace.error + "\n";
  else if (trace.status == RunStatus::budget_exhausted)
    out += "ERROR budget " + trace.error + "\n";
  return out;
}

}  // namespace lbc
