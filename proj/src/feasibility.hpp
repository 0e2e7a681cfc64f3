#pragma once

#include <string>
#include <vector>

#include "graph.hpp"

namespace lbc {

enum class ModelKind { local_broadcast, hybrid, point_to_point };

std::string model_name(ModelKind k);
ModelKind parse_model(const std::string& s);

// f = total faulty bound, t = equivocating-faulty bound (t <= f).
// local_broadcast fixes t = 0; point_to_point fixes t = f.
struct FaultModel {
  ModelKind kind = ModelKind::local_broadcast;
  int f = 0;
  int t = 0;
};

FaultModel make_fault_model(ModelKind kind, int f, int t);

int required_connectivity(ModelKind kind, int f, int t);

struct CheckItem {
  std::string name;
  int required = 0;
  int actual = 0;
  bool pass = false;
};

struct FeasibilityReport {
  bool achievable = false;
  std::vector<CheckItem> checks;
  std::vector<int> witness_cut;   // a separating set, when a connectivity check fails
  int witness_node = -1;          // a minimum-degree node, when a degree check fails
  std::vector<int> witness_set;   // a small set with too few neighbors (hybrid)
  std::string summary() const;    // line-oriented, machine-parseable
};

FeasibilityReport check_lb(const Graph& g, int f);
FeasibilityReport check_hybrid(const Graph& g, int f, int t);
FeasibilityReport check_p2p(const Graph& g, int f);
FeasibilityReport check_model(const Graph& g, const FaultModel& m);

}  // namespace lbc
