#include "sweep.hpp"

#include <algorithm>
#include <fstream>

#include "adversary.hpp"
#include "checks.hpp"
#include "feasibility.hpp"

namespace lbc {

std::string protocol_name(ProtocolId p) {
  switch (p) {
    case ProtocolId::alg1: return "alg1";
    case ProtocolId::alg2: return "alg2";
    case ProtocolId::alg3: return "alg3";
  }
  return "?";
}

ProtocolId parse_protocol(const std::string& s) {
  if (s == "alg1") return ProtocolId::alg1;
  if (s == "alg2") return ProtocolId::alg2;
  if (s == "alg3") return ProtocolId::alg3;
  throw InputError("unknown protocol '" + s + "'");
}

namespace {

void validate_key(const RunKey& k) {
  const Graph& g = k.g;
  if (g.n < 1) throw InputError("key graph is empty");
  if ((int)k.inputs.size() != g.n) throw InputError("inputs length does not match n");
  for (int b : k.inputs)
    if (b != 0 && b != 1) throw InputError("inputs must be bits");
  if (k.f < 0 || k.f >= g.n) throw InputError("f out of range");
  if (k.t < 0 || k.t > k.f) throw InputError("t out of range");
  if (k.proto != ProtocolId::alg3 && k.t != 0)
    throw InputError("t > 0 requires alg3");
  if (k.faulty & ~full_mask(g.n)) throw InputError("faulty ids out of range");
  if (popcount(k.faulty) > k.f) throw InputError("more faulty nodes than f");
  if (k.equivocators & ~k.faulty) throw InputError("equivocators must be faulty");
  if (popcount(k.equivocators) > k.t) throw InputError("more equivocators than t");
  if ((k.faulty == 0) != k.strategy.empty())
    throw InputError("strategy must be given exactly when faulty nodes exist");
  if (k.budget < 0) throw InputError("budget must be nonnegative");
}

std::string outputs_string(const std::vector<int>& outputs, NodeMask faulty, int n) {
  std::string s;
  for (int v = 0; v < n; ++v) {
    if (has(faulty, v)) s += '-';
    else if (v >= (int)outputs.size() || outputs[v] < 0) s += 'x';
    else s += char('0' + outputs[v]);
  }
  return s;
}

RunOutcome judge(NodeMask faulty, const std::vector<int>& inputs,
                 const std::vector<int>& outputs, const RunTrace& trace, int n) {
  RunOutcome o;
  o.rounds = trace.round_count;
  o.outputs = outputs;
  if (trace.status == RunStatus::infeasible) {
    o.verdict = "infeasible";
    o.detail = trace.error;
    return o;
  }
  if (trace.status == RunStatus::budget_exhausted) {
    o.verdict = "termination";
    o.detail = trace.error;
    return o;
  }
  int agreed = -1;
  for (int v = 0; v < n; ++v) {
    if (has(faulty, v)) continue;
    if (outputs[v] < 0) {
      o.verdict = "termination";
      o.detail = "node " + std::to_string(v) + " never decided";
      return o;
    }
    if (agreed == -1) agreed = outputs[v];
    if (outputs[v] != agreed) {
      o.verdict = "agreement";
      o.detail = "outputs " + outputs_string(outputs, faulty, n);
      return o;
    }
  }
  bool valid = false;
  for (int v = 0; v < n; ++v)
    if (!has(faulty, v) && inputs[v] == agreed) valid = true;
  if (!valid) {
    o.verdict = "validity";
    o.detail = "output " + std::to_string(agreed) + " matches no non-faulty input";
    return o;
  }
  o.pass = true;
  o.verdict = "pass";
  return o;
}

ScriptSet load_script(const std::string& path, BlobStore& blobs) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open script '" + path + "'");
  return parse_script(in, blobs);
}

struct PhaseExec {
  PhaseRunResult res;
  RunOutcome out;
};

PhaseExec exec_phase(const RunKey& k) {
  validate_key(k);
  bool hybrid = k.proto == ProtocolId::alg3;
  bool conforming =
      hybrid ? check_hybrid(k.g, k.f, k.t).achievable : check_lb(k.g, k.f).achievable;

  PhaseRunConfig cfg;
  cfg.g = &k.g;
  cfg.f = k.f;
  cfg.t = hybrid ? k.t : 0;
  cfg.inputs = k.inputs;
  cfg.faulty = k.faulty;
  cfg.equivocators = k.equivocators;
  cfg.max_rounds = k.budget;
  cfg.conforming = conforming;

  BlobStore script_blobs;
  if (k.faulty) {
    StrategySpec spec = parse_strategy(k.strategy);
    if (spec.kind == StrategyKind::equivocate && (k.equivocators & k.faulty) == 0)
      throw InputError("equivocate requires registered equivocators");
    PhaseAdversaryFactory base;
    if (spec.kind == StrategyKind::scripted)
      base = make_scripted_factory(load_script(spec.script_path, script_blobs));
    else
      base = make_phase_adversary(&k.g, spec, k.inputs, k.f, cfg.t, conforming, nullptr);
    bool equiv_only = spec.kind == StrategyKind::equivocate;
    NodeMask eq = k.equivocators;
    cfg.faulty_program = [base, equiv_only, eq](int node, const std::vector<PhaseConfig>* sched)
        -> std::unique_ptr<NodeProgram> {
      if (equiv_only && !has(eq, node)) return std::make_unique<SilentProgram>();
      return base(node, sched);
    };
  }

  PhaseExec ex;
  ex.res = hybrid ? run_algorithm3(cfg) : run_algorithm1(cfg);
  ex.out = judge(k.faulty, k.inputs, ex.res.outputs, ex.res.trace, k.g.n);
  return ex;
}

struct IdentExec {
  IdentRunResult res;
  RunOutcome out;
};

IdentExec exec_ident(const RunKey& k) {
  validate_key(k);
  IdentRunConfig cfg;
  cfg.g = &k.g;
  cfg.f = k.f;
  cfg.inputs = k.inputs;
  cfg.faulty = k.faulty;
  cfg.max_rounds = k.budget;

  BlobStore script_blobs;
  if (k.faulty) {
    StrategySpec spec = parse_strategy(k.strategy);
    ScriptSet scripts;
    if (spec.kind == StrategyKind::scripted) scripts = load_script(spec.script_path, script_blobs);
    cfg.faulty_program = make_ident_adversary(&k.g, spec, k.inputs, k.f, std::move(scripts));
  }

  IdentExec ex;
  ex.res = run_algorithm2(cfg);
  ex.out = judge(k.faulty, k.inputs, ex.res.outputs, ex.res.trace, k.g.n);
  return ex;
}

std::string mask_field(NodeMask m) { return m ? join_ids(ids_of(m), ",") : "-"; }

NodeMask parse_mask_field(const std::string& s, const std::string& what) {
  if (s == "-") return 0;
  NodeMask m = 0;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 0 || v > 31) throw InputError("");
      m |= bit(v);
    } catch (const std::exception&) {
      throw InputError(what + ": bad node id '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return m;
}

std::string take_field(const std::vector<std::string>& fields, size_t i, const std::string& name) {
  if (i >= fields.size()) throw InputError("key missing field '" + name + "'");
  const std::string& f = fields[i];
  if (f.compare(0, name.size(), name) != 0 || f.size() <= name.size() || f[name.size()] != '=')
    throw InputError("key field " + std::to_string(i) + " is not '" + name + "='");
  return f.substr(name.size() + 1);
}

int parse_int_field(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError(what + ": bad integer '" + s + "'");
  }
}

}  // namespace

std::string serialize_key(const RunKey& k) {
  std::string s = "v1|g=" + std::to_string(k.g.n) + ":";
  bool first = true;
  for (int u = 0; u < k.g.n; ++u)
    for (int v : k.g.nbrs[u]) {
      if (v <= u) continue;
      if (!first) s += ",";
      s += std::to_string(u) + "-" + std::to_string(v);
      first = false;
    }
  s += "|proto=" + protocol_name(k.proto);
  s += "|f=" + std::to_string(k.f);
  s += "|t=" + std::to_string(k.t);
  s += "|in=";
  for (int b : k.inputs) s += char('0' + (b & 1));
  s += "|faulty=" + mask_field(k.faulty);
  s += "|eq=" + mask_field(k.equivocators);
  s += "|strat=" + (k.strategy.empty() ? "-" : k.strategy);
  s += "|budget=" + std::to_string(k.budget);
  return s;
}

RunKey parse_key(const std::string& text) {
  std::vector<std::string> fields;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t bar = text.find('|', pos);
    fields.push_back(text.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos));
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  if (fields.empty() || fields[0] != "v1") throw InputError("unsupported key version");

  RunKey k;
  std::string gfield = take_field(fields, 1, "g");
  size_t colon = gfield.find(':');
  if (colon == std::string::npos) throw InputError("key graph needs '<n>:<edges>'");
  int n = parse_int_field(gfield.substr(0, colon), "key graph n");
  std::vector<std::pair<int, int>> edges;
  std::string etext = gfield.substr(colon + 1);
  size_t epos = 0;
  while (epos < etext.size()) {
    size_t comma = etext.find(',', epos);
    std::string tok =
        etext.substr(epos, comma == std::string::npos ? std::string::npos : comma - epos);
    size_t dash = tok.find('-');
    if (dash == std::string::npos) throw InputError("key edge '" + tok + "' needs 'u-v'");
    edges.push_back({parse_int_field(tok.substr(0, dash), "key edge"),
                     parse_int_field(tok.substr(dash + 1), "key edge")});
    if (comma == std::string::npos) break;
    epos = comma + 1;
  }
  k.g = make_graph(n, edges);
  k.proto = parse_protocol(take_field(fields, 2, "proto"));
  k.f = parse_int_field(take_field(fields, 3, "f"), "key f");
  k.t = parse_int_field(take_field(fields, 4, "t"), "key t");
  std::string in = take_field(fields, 5, "in");
  if ((int)in.size() != n) throw InputError("key inputs length does not match n");
  for (char c : in) {
    if (c != '0' && c != '1') throw InputError("key inputs must be bits");
    k.inputs.push_back(c - '0');
  }
  k.faulty = parse_mask_field(take_field(fields, 6, "faulty"), "key faulty");
  k.equivocators = parse_mask_field(take_field(fields, 7, "eq"), "key eq");
  std::string strat = take_field(fields, 8, "strat");
  k.strategy = strat == "-" ? "" : strat;
  k.budget = parse_int_field(take_field(fields, 9, "budget"), "key budget");
  if (fields.size() > 10) throw InputError("key has trailing fields");
  validate_key(k);
  return k;
}

RunOutcome execute_key(const RunKey& k) {
  if (k.proto == ProtocolId::alg2) return exec_ident(k).out;
  return exec_phase(k).out;
}

RunArtifacts execute_key_with_trace(const RunKey& k) {
  RunArtifacts a;
  if (k.proto == ProtocolId::alg2) {
    IdentExec ex = exec_ident(k);
    a.outcome = std::move(ex.out);
    a.trace_text = serialize_trace(ex.res.trace, *ex.res.blobs);
  } else {
    PhaseExec ex = exec_phase(k);
    a.outcome = std::move(ex.out);
    BlobStore blobs;
    a.trace_text = serialize_trace(ex.res.trace, blobs);
  }
  return a;
}

std::string SweepReport::to_text() const {
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  out += "total=" + std::to_string(total) + " passed=" + std::to_string(passed) +
         " failed=" + std::to_string(total - passed) + "\n";
  if (checked_invariants)
    out += "invariant_violations=" + std::to_string(invariant_violations) + "\n";
  return out;
}

SweepReport run_sweep(const SweepSpec& spec) {
  const Graph& g = spec.g;
  const int n = g.n;
  if (spec.exhaustive_inputs && n > 16)
    throw InputError("exhaustive inputs refused past n = 16");

  std::vector<NodeMask> placements;
  if (spec.placement == SweepSpec::Placement::listed) {
    placements = spec.faulty_list;
  } else {
    for (NodeMask m = 0; m < bit(n); ++m) {
      int c = popcount(m);
      bool keep = spec.placement == SweepSpec::Placement::up_to_f ? c <= spec.f : c == spec.f;
      if (keep) placements.push_back(m);
    }
    std::stable_sort(placements.begin(), placements.end(),
                     [](NodeMask a, NodeMask b) {
                       return std::pair(popcount(a), a) < std::pair(popcount(b), b);
                     });
  }

  size_t input_count =
      spec.exhaustive_inputs ? (size_t)1 << n : spec.input_list.size();
  auto input_vec = [&](size_t i) {
    if (!spec.exhaustive_inputs) return spec.input_list[i];
    std::vector<int> in(n);
    for (int v = 0; v < n; ++v) in[v] = (int)((i >> v) & 1);
    return in;
  };

  SweepReport rep;
  rep.checked_invariants = spec.check_invariants;
  int idx = 0;
  for (NodeMask fs : placements) {
    std::vector<std::string> strats =
        fs == 0 ? std::vector<std::string>{""} : spec.strategies;
    if (fs != 0 && strats.empty())
      throw InputError("sweep needs strategies for faulty placements");
    NodeMask eq = 0;
    {
      int want = spec.designated_equivocators;
      for_bits(fs, [&](int v) {
        if (want > 0) {
          eq |= bit(v);
          --want;
        }
      });
    }
    for (const std::string& strat : strats) {
      // Only equivocate strategies license targeted sends, so only they get
      // equivocators registered; every other strategy runs all faulty nodes
      // as plain broadcast faults.
      bool equivocating = strat.rfind("equivocate", 0) == 0;
      for (size_t ii = 0; ii < input_count; ++ii) {
        RunKey key;
        key.g = g;
        key.proto = spec.proto;
        key.f = spec.f;
        key.t = spec.t;
        key.inputs = input_vec(ii);
        key.faulty = fs;
        key.equivocators = equivocating ? eq : 0;
        key.strategy = strat;
        key.budget = spec.budget;
        std::string keytext = serialize_key(key);

        RunOutcome out;
        std::vector<std::string> viols;
        try {
          if (spec.proto == ProtocolId::alg2) {
            out = exec_ident(key).out;
          } else {
            PhaseExec ex = exec_phase(key);
            out = std::move(ex.out);
            if (spec.check_invariants)
              viols = check_phase_invariants(g, ex.res, key.faulty, key.equivocators);
          }
        } catch (const InputError& e) {
          out.pass = false;
          out.verdict = "error";
          out.detail = e.what();
        } catch (const ProtocolInfeasible& e) {
          out.pass = false;
          out.verdict = "infeasible";
          out.detail = e.what();
        }

        rep.lines.push_back("run=" + std::to_string(idx) + " key=" + keytext +
                            " verdict=" + out.verdict + " rounds=" + std::to_string(out.rounds) +
                            " decided=" + outputs_string(out.outputs, key.faulty, n));
        rep.total += 1;
        if (out.pass) rep.passed += 1;
        else rep.failing_keys.push_back(keytext);
        rep.max_rounds_seen = std::max(rep.max_rounds_seen, out.rounds);
        rep.invariant_violations += (int)viols.size();
        for (const std::string& v : viols)
          if (rep.invariant_samples.size() < 20)
            rep.invariant_samples.push_back(keytext + " " + v);
        idx += 1;
      }
    }
  }
  return rep;
}

}  // namespace lbc
