#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../src/adversary.hpp"
#include "../src/feasibility.hpp"
#include "../src/gen.hpp"
#include "../src/graph.hpp"
#include "../src/split.hpp"
#include "../src/sweep.hpp"
#include "../vendor/CLI11.hpp"

using namespace lbc;

namespace {

std::vector<int> parse_bits(const std::string& s, int n) {
  if ((int)s.size() != n)
    throw InputError("input vector '" + s + "' needs one bit per node (" + std::to_string(n) + ")");
  std::vector<int> bits(n);
  for (int i = 0; i < n; ++i) {
    if (s[i] != '0' && s[i] != '1') throw InputError("input vector must be over {0,1}");
    bits[i] = s[i] - '0';
  }
  return bits;
}

NodeMask parse_ids(const std::string& s, int n) {
  NodeMask m = 0;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = std::stoi(item);
    if (v < 0 || v >= n) throw InputError("node id " + item + " out of range");
    m |= bit(v);
  }
  return m;
}

std::string decided_string(const std::vector<int>& outputs, NodeMask faulty) {
  std::string s;
  for (size_t i = 0; i < outputs.size(); ++i) {
    if (has(faulty, (int)i))
      s += '-';
    else if (outputs[i] < 0)
      s += 'x';
    else
      s += char('0' + outputs[i]);
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Graph load_graph_arg(const std::string& arg) {
  // A family spec doubles as a graph source so demos need no temp files.
  if (std::filesystem::exists(arg)) return load_graph_file(arg);
  return graph_from_family(arg, 0);
}

int cmd_check(const std::string& graph, const std::string& model, int f, int t) {
  Graph g = load_graph_arg(graph);
  FaultModel m = make_fault_model(parse_model(model), f, t);
  FeasibilityReport rep = check_model(g, m);
  std::cout << rep.summary();
  return rep.achievable ? 0 : 1;
}

RunKey key_from_flags(const std::string& graph, const std::string& proto, int f, int t,
                      const std::string& inputs, const std::string& faulty,
                      const std::string& eq, const std::string& strategy, int budget) {
  RunKey k;
  k.g = load_graph_arg(graph);
  k.proto = parse_protocol(proto);
  k.f = f;
  k.t = t;
  k.inputs = parse_bits(inputs, k.g.n);
  if (!faulty.empty()) k.faulty = parse_ids(faulty, k.g.n);
  if (!eq.empty()) k.equivocators = parse_ids(eq, k.g.n);
  k.strategy = strategy;
  k.budget = budget;
  return k;
}

int report_run(const RunKey& k, const std::string& out_dir, const std::string& stem) {
  RunArtifacts art = execute_key_with_trace(k);
  std::cout << "key=" << serialize_key(k) << "\n";
  std::cout << "verdict=" << art.outcome.verdict << " rounds=" << art.outcome.rounds
            << " decided=" << decided_string(art.outcome.outputs, k.faulty);
  if (!art.outcome.detail.empty()) std::cout << " detail=" << art.outcome.detail;
  std::cout << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / (stem + ".trace"), art.trace_text);
  } else {
    std::cout << art.trace_text;
  }
  return art.outcome.pass ? 0 : 1;
}

int cmd_sweep(const std::string& graph, const std::string& proto, int f, int t,
              const std::string& inputs, const std::string& faulty, const std::string& strategy,
              int budget, bool invariants, int designated, const std::string& out_dir) {
  SweepSpec spec;
  spec.g = load_graph_arg(graph);
  spec.proto = parse_protocol(proto);
  spec.f = f;
  spec.t = t;
  spec.budget = budget;
  spec.check_invariants = invariants;
  spec.designated_equivocators = designated;

  if (inputs == "exhaustive") {
    spec.exhaustive_inputs = true;
  } else {
    spec.exhaustive_inputs = false;
    std::stringstream ss(inputs);
    std::string item;
    while (std::getline(ss, item, ','))
      spec.input_list.push_back(parse_bits(item, spec.g.n));
  }
  if (faulty == "exhaustive") {
    spec.placement = SweepSpec::Placement::up_to_f;
  } else if (faulty == "exact") {
    spec.placement = SweepSpec::Placement::exactly_f;
  } else {
    spec.placement = SweepSpec::Placement::listed;
    std::stringstream ss(faulty);
    std::string item;
    while (std::getline(ss, item, ';'))
      spec.faulty_list.push_back(item == "none" ? 0 : parse_ids(item, spec.g.n));
  }
  if (!strategy.empty()) spec.strategies = split_strategy_list(strategy);

  SweepReport rep = run_sweep(spec);
  std::string text = rep.to_text();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "report.txt", text);
    std::cout << "total=" << rep.total << " passed=" << rep.passed
              << " failed=" << (rep.total - rep.passed) << "\n";
    if (rep.checked_invariants)
      std::cout << "invariant_violations=" << rep.invariant_violations << "\n";
  } else {
    std::cout << text;
  }
  bool ok = rep.passed == rep.total && rep.invariant_violations == 0;
  return ok ? 0 : 1;
}

int cmd_replay(const std::string& key_text, const std::string& out_dir) {
  RunKey k = parse_key(key_text);
  return report_run(k, out_dir, "replay");
}

int cmd_demo(const std::string& graph, int f, int t, const std::string& construction,
             const std::string& out_dir) {
  Graph g = load_graph_arg(graph);
  NecessityDemo demo = demo_necessity(g, parse_split_kind(construction), f, t);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "doubled.trace", demo.doubled_trace);
    for (const auto& ex : demo.execs) {
      write_file(std::filesystem::path(out_dir) / (ex.name + ".script"), ex.script);
      write_file(std::filesystem::path(out_dir) / (ex.name + ".trace"), ex.trace);
    }
  }
  for (const auto& ex : demo.execs) {
    std::cout << ex.name << ": faulty=" << join_ids(ids_of(ex.faulty), ",");
    if (ex.equivocators != 0)
      std::cout << " equivocators=" << join_ids(ids_of(ex.equivocators), ",");
    std::cout << " expect=" << ex.expect << " status=" << ex.status
              << " decided=" << decided_string(ex.outputs, ex.faulty)
              << " projection=" << (ex.projection_ok ? "ok" : "MISMATCH") << "\n";
  }
  std::cout << "verdict: " << demo.verdict << "\n";
  return demo.demonstrated ? 0 : 1;
}

int cmd_gen(const std::string& family, uint64_t seed, const std::string& out) {
  Graph g = graph_from_family(family, seed);
  std::string text = format_graph(g);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine consensus workbench: feasibility checks, simulations, sweeps, and necessity demos"};
  app.require_subcommand(1);

  std::string graph, model = "lb", proto = "alg1", inputs, faulty, eq, strategy, key, out,
              construction, family;
  int f = 1, t = 0, budget = 0, designated = 1;
  uint64_t seed = 0;
  bool invariants = false;

  auto* check = app.add_subcommand("check", "Report whether consensus is achievable");
  check->add_option("--graph", graph, "graph file or family spec")->required();
  check->add_option("--model", model, "lb | hybrid | p2p");
  check->add_option("--f", f, "total fault bound")->required();
  check->add_option("--t", t, "equivocating fault bound (hybrid)");

  auto* run = app.add_subcommand("run", "Execute one run and print its verdict");
  run->add_option("--key", key, "replay key; overrides the other flags");
  run->add_option("--graph", graph, "graph file or family spec");
  run->add_option("--protocol", proto, "alg1 | alg2 | alg3");
  run->add_option("--f", f, "total fault bound");
  run->add_option("--t", t, "equivocating fault bound (alg3)");
  run->add_option("--inputs", inputs, "bit per node, e.g. 10101");
  run->add_option("--faulty", faulty, "comma-separated node ids");
  run->add_option("--equivocators", eq, "comma-separated ids, subset of --faulty");
  run->add_option("--strategy", strategy, "adversary strategy spec");
  run->add_option("--budget", budget, "round budget, 0 = protocol default");
  run->add_option("--out", out, "directory for the trace file");

  auto* sweep = app.add_subcommand("sweep", "Run a full verification sweep");
  sweep->add_option("--graph", graph, "graph file or family spec")->required();
  sweep->add_option("--protocol", proto, "alg1 | alg2 | alg3");
  sweep->add_option("--f", f, "total fault bound")->required();
  sweep->add_option("--t", t, "equivocating fault bound (alg3)");
  sweep->add_option("--inputs", inputs, "'exhaustive' or comma-separated bit vectors")->required();
  sweep->add_option("--faulty", faulty, "'exhaustive', 'exact', or ;-separated id lists")
      ->required();
  sweep->add_option("--strategy", strategy, "comma-separated strategy specs");
  sweep->add_option("--budget", budget, "round budget per run");
  sweep->add_flag("--invariants", invariants, "check per-trace invariants (alg1/alg3)");
  sweep->add_option("--designated-equivocators", designated,
                    "equivocator count per faulty set under equivocate strategies");
  sweep->add_option("--out", out, "directory for report.txt");

  auto* replay = app.add_subcommand("replay", "Reproduce a run from its key");
  replay->add_option("--key", key, "key from a report line")->required();
  replay->add_option("--out", out, "directory for the trace file");

  auto* demo = app.add_subcommand("demo-necessity", "Demonstrate a lower-bound construction");
  demo->add_option("--graph", graph, "graph file or family spec")->required();
  demo->add_option("--f", f, "total fault bound")->required();
  demo->add_option("--t", t, "equivocating fault bound (hybrid constructions)");
  demo->add_option("--construction", construction,
                   "degree | connectivity | hybrid-degree | hybrid-connectivity")
      ->required();
  demo->add_option("--out", out, "directory for scripts and traces");

  auto* gen = app.add_subcommand("gen-graph", "Emit a graph from a family spec");
  gen->add_option("--family", family,
                  "cycle:n | path:n | complete:n | biclique:a,b | fig1b | random-k-connected:n,k")
      ->required();
  gen->add_option("--seed", seed, "random family seed");
  gen->add_option("--out", out, "output file, default stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(graph, model, f, t);
    if (run->parsed()) {
      RunKey k = key.empty()
                     ? key_from_flags(graph, proto, f, t, inputs, faulty, eq, strategy, budget)
                     : parse_key(key);
      return report_run(k, out, "run");
    }
    if (sweep->parsed())
      return cmd_sweep(graph, proto, f, t, inputs, faulty, strategy, budget, invariants,
                       designated, out);
    if (replay->parsed()) return cmd_replay(key, out);
    if (demo->parsed()) return cmd_demo(graph, f, t, construction, out);
    if (gen->parsed()) return cmd_gen(family, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
