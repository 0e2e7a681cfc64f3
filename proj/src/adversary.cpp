#include "adversary.hpp"

#include "protocol_ident.hpp"

#include <algorithm>
#include <sstream>

namespace lbc {

namespace {

int parse_bit(const std::string& s, const std::string& what) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw InputError(what + " must be 0 or 1, got '" + s + "'");
}

int parse_id(const std::string& s, const std::string& what) {
  size_t pos = 0;
  int v;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw InputError(what + ": bad node id '" + s + "'");
  }
  if (pos != s.size() || v < 0 || v > 31) throw InputError(what + ": bad node id '" + s + "'");
  return v;
}

bool starts_with_kind(const std::string& s, size_t pos) {
  static const char* kinds[] = {"silent",      "constant", "input-flip", "alternate",
                                "tamper",      "equivocate", "script"};
  for (const char* k : kinds) {
    size_t n = std::string(k).size();
    if (s.compare(pos, n, k) == 0) {
      char next = pos + n < s.size() ? s[pos + n] : '\0';
      if (next == '\0' || next == ':' || next == ',') return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> split_strategy_list(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ',' && starts_with_kind(text, i + 1)) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  for (auto& s : out)
    if (s.empty()) throw InputError("empty strategy in list '" + text + "'");
  return out;
}

StrategySpec parse_strategy(const std::string& text) {
  StrategySpec spec;
  spec.text = text;
  std::string head = text, arg;
  size_t colon = text.find(':');
  if (colon != std::string::npos) {
    head = text.substr(0, colon);
    arg = text.substr(colon + 1);
  }

  if (head == "silent") {
    if (!arg.empty()) throw InputError("silent takes no argument");
    spec.kind = StrategyKind::silent;
  } else if (head == "constant") {
    spec.kind = StrategyKind::constant;
    spec.bit = parse_bit(arg, "constant");
  } else if (head == "input-flip") {
    if (!arg.empty()) throw InputError("input-flip takes no argument");
    spec.kind = StrategyKind::input_flip;
  } else if (head == "alternate") {
    spec.kind = StrategyKind::alternate;
    spec.bit = parse_bit(arg, "alternate");
  } else if (head == "tamper") {
    spec.kind = StrategyKind::tamper;
    if (arg == "all") {
      spec.rule.scope = TamperRule::Scope::all;
    } else {
      size_t eq = arg.find('=');
      if (eq == std::string::npos) throw InputError("bad tamper rule '" + arg + "'");
      std::string scope = arg.substr(0, eq);
      spec.rule.node = parse_id(arg.substr(eq + 1), "tamper");
      if (scope == "origin")
        spec.rule.scope = TamperRule::Scope::origin;
      else if (scope == "via")
        spec.rule.scope = TamperRule::Scope::via;
      else if (scope == "first-hop")
        spec.rule.scope = TamperRule::Scope::first_hop;
      else
        throw InputError("bad tamper scope '" + scope + "'");
    }
  } else if (head == "equivocate") {
    spec.kind = StrategyKind::equivocate;
    if (arg == "alternate") {
      spec.auto_alternate = true;
    } else if (arg.empty()) {
      throw InputError("equivocate needs a map or 'alternate'");
    } else {
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw InputError("bad equivocate entry '" + item + "'");
        int nbr = parse_id(item.substr(0, eq), "equivocate");
        int b = parse_bit(item.substr(eq + 1), "equivocate");
        if (spec.targets.count(nbr)) throw InputError("duplicate equivocate neighbor");
        spec.targets[nbr] = b;
      }
      if (spec.targets.empty()) throw InputError("equivocate needs a map or 'alternate'");
    }
  } else if (head == "script") {
    spec.kind = StrategyKind::scripted;
    if (arg.empty()) throw InputError("script needs a file path");
    spec.script_path = arg;
  } else {
    throw InputError("unknown strategy '" + text + "'");
  }
  return spec;
}

bool tamper_matches(const TamperRule& rule, const PackedPath& carried) {
  if (carried.empty()) return false;
  switch (rule.scope) {
    case TamperRule::Scope::all:
      return true;
    case TamperRule::Scope::origin:
      return carried.first() == rule.node;
    case TamperRule::Scope::via:
      return carried.contains(rule.node);
    case TamperRule::Scope::first_hop:
      return carried.len >= 2 && carried.at(1) == rule.node;
  }
  return false;
}

ScriptSet parse_script(std::istream& in, BlobStore& blobs) {
  ScriptSet out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    int round, node;
    std::string mode;
    if (!(ls >> round >> node >> mode))
      throw InputError("script line " + std::to_string(lineno) + ": malformed");
    if (round < 0 || node < 0 || node > 31)
      throw InputError("script line " + std::to_string(lineno) + ": bad round or node");
    int target = -1;
    if (mode == "T") {
      if (!(ls >> target) || target < 0)
        throw InputError("script line " + std::to_string(lineno) + ": bad target");
    } else if (mode != "B") {
      throw InputError("script line " + std::to_string(lineno) + ": mode must be B or T");
    }
    std::string payload_text;
    std::getline(ls, payload_text);
    size_t p = payload_text.find_first_not_of(" \t");
    if (p == std::string::npos)
      throw InputError("script line " + std::to_string(lineno) + ": missing payload");
    payload_text = payload_text.substr(p);
    while (!payload_text.empty() && (payload_text.back() == '\r' || payload_text.back() == ' '))
      payload_text.pop_back();
    auto& rounds = out[node];
    if ((int)rounds.size() <= round) rounds.resize(round + 1);
    rounds[round].push_back({parse_payload(payload_text, blobs), target});
  }
  return out;
}

std::string serialize_script(const ScriptSet& s, const BlobStore& blobs) {
  std::string out;
  for (const auto& [node, rounds] : s)
    for (size_t r = 0; r < rounds.size(); ++r)
      for (const auto& em : rounds[r]) {
        out += std::to_string(r) + " " + std::to_string(node) + " ";
        out += em.target < 0 ? "B" : "T " + std::to_string(em.target);
        out += " " + serialize_payload(em.payload, blobs) + "\n";
      }
  return out;
}

FloodRelayProgram::FloodRelayProgram(const Graph* g, int self, int rounds_per_phase,
                                     int phase_count, std::function<InitPlan(int)> plan)
    : g_(g),
      self_(self),
      n_(rounds_per_phase),
      phases_(phase_count),
      plan_(std::move(plan)),
      table_(g, self) {}

std::vector<Emission> FloodRelayProgram::process_inbox(const std::vector<Delivery>& inbox) {
  std::vector<Emission> out;
  for (const auto& d : inbox) {
    if (d.payload->kind != PayloadKind::flood) continue;
    auto rec = table_.offer(d.from, (uint32_t)d.payload->bit, d.payload->path);
    if (rec) out.push_back({Payload::flood_msg(d.payload->bit, *rec), -1});
  }
  return out;
}

std::vector<Emission> FloodRelayProgram::on_round(int round, const std::vector<Delivery>& inbox) {
  if (round >= n_ * phases_) return {};
  int phase = round / n_;
  int pr = round % n_;

  std::vector<Emission> out;
  if (pr == 0) {
    table_.reset();
    InitPlan plan = plan_(phase);
    if (plan.broadcast) out.push_back({Payload::flood_msg(plan.bit, {}), -1});
    for (const auto& [nbr, b] : plan.targeted) out.push_back({Payload::flood_msg(b, {}), nbr});
    auto fwd = process_inbox(inbox);
    out.insert(out.end(), fwd.begin(), fwd.end());
  } else {
    out = process_inbox(inbox);
    if (pr == 1) {
      NodeMask present = 0;
      for (const auto& d : inbox)
        if (d.payload->kind == PayloadKind::flood && d.payload->path.empty()) present |= bit(d.from);
      for (int u : g_->nbrs[self_]) {
        if (has(present, u)) continue;
        auto rec = table_.offer(u, 1, {});
        if (rec) out.push_back({Payload::flood_msg(1, *rec), -1});
      }
    }
  }
  return out;
}

std::vector<Emission> TamperProgram::on_round(int round, const std::vector<Delivery>& inbox) {
  auto out = inner_->on_round(round, inbox);
  for (auto& em : out) {
    Payload& p = em.payload;
    if (!tamper_matches(rule_, p.path)) continue;
    if (p.kind == PayloadKind::flood || p.kind == PayloadKind::decision) {
      p.bit ^= 1;
    } else if (p.kind == PayloadKind::bundle && blobs_) {
      auto [it, fresh] = blob_flips_.try_emplace(p.blob, 0u);
      if (fresh) {
        Blob b = blobs_->get(p.blob);
        for (auto& item : b)
          if (item.payload.kind == PayloadKind::flood || item.payload.kind == PayloadKind::decision)
            item.payload.bit ^= 1;
        it->second = blobs_->intern(b);
      }
      p.blob = it->second;
    }
  }
  return out;
}

PhaseAdversaryFactory make_phase_adversary(const Graph* g, const StrategySpec& spec,
                                           const std::vector<int>& inputs, int f, int t,
                                           bool conforming, BlobStore* blobs) {
  int n = g->n;
  using Sched = const std::vector<PhaseConfig>*;

  switch (spec.kind) {
    case StrategyKind::silent:
      return [](int, Sched) { return std::make_unique<SilentProgram>(); };

    case StrategyKind::constant: {
      int b = spec.bit;
      return [g, n, b](int node, Sched sched) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<FloodRelayProgram>(g, node, n, (int)sched->size(), [b](int) {
          return FloodRelayProgram::InitPlan{true, b, {}};
        });
      };
    }

    case StrategyKind::input_flip: {
      return [g, n, inputs](int node, Sched sched) -> std::unique_ptr<NodeProgram> {
        int b = 1 - inputs[node];
        return std::make_unique<FloodRelayProgram>(g, node, n, (int)sched->size(), [b](int) {
          return FloodRelayProgram::InitPlan{true, b, {}};
        });
      };
    }

    case StrategyKind::alternate: {
      int b = spec.bit;
      return [g, n, b](int node, Sched sched) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<FloodRelayProgram>(g, node, n, (int)sched->size(), [b](int phase) {
          return FloodRelayProgram::InitPlan{true, b ^ (phase & 1), {}};
        });
      };
    }

    case StrategyKind::tamper: {
      TamperRule rule = spec.rule;
      return [g, rule, inputs, f, t, conforming, blobs](int node, Sched sched) {
        auto inner =
            std::make_unique<PhaseProgram>(g, node, f, t, inputs[node], sched, conforming);
        return std::make_unique<TamperProgram>(std::move(inner), rule, blobs);
      };
    }

    case StrategyKind::equivocate: {
      StrategySpec s = spec;
      return [g, n, s](int node, Sched sched) -> std::unique_ptr<NodeProgram> {
        std::vector<std::pair<int, int>> targeted;
        if (s.auto_alternate) {
          int rank = 0;
          for (int nbr : g->nbrs[node]) targeted.push_back({nbr, rank++ & 1});
        } else {
          for (const auto& [nbr, b] : s.targets) {
            if (!has(g->adj[node], nbr))
              throw InputError("equivocate target " + std::to_string(nbr) +
                               " is not a neighbor of node " + std::to_string(node));
            targeted.push_back({nbr, b});
          }
        }
        return std::make_unique<FloodRelayProgram>(g, node, n, (int)sched->size(),
                                                   [targeted](int) {
                                                     return FloodRelayProgram::InitPlan{
                                                         false, 0, targeted};
                                                   });
      };
    }

    case StrategyKind::scripted:
      throw InputError("scripted strategies need a parsed script; use make_scripted_factory");
  }
  throw InputError("unreachable strategy kind");
}

PhaseAdversaryFactory make_scripted_factory(ScriptSet scripts) {
  auto shared = std::make_shared<ScriptSet>(std::move(scripts));
  return [shared](int node, const std::vector<PhaseConfig>*) -> std::unique_ptr<NodeProgram> {
    auto it = shared->find(node);
    if (it == shared->end()) return std::make_unique<SilentProgram>();
    return std::make_unique<ScriptedProgram>(it->second);
  };
}

IdentAdversaryFactory make_ident_adversary(const Graph* g, const StrategySpec& spec,
                                           const std::vector<int>& inputs, int f,
                                           ScriptSet scripts) {
  switch (spec.kind) {
    case StrategyKind::silent:
      return [](int, BlobStore*) { return std::make_unique<SilentProgram>(); };

    case StrategyKind::constant:
    case StrategyKind::alternate: {
      int b = spec.bit;
      return [g, f, b](int node, BlobStore* blobs) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<IdentProgram>(g, node, f, b, blobs);
      };
    }

    case StrategyKind::input_flip:
      return [g, f, inputs](int node, BlobStore* blobs) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<IdentProgram>(g, node, f, 1 - inputs[node], blobs);
      };

    case StrategyKind::tamper: {
      TamperRule rule = spec.rule;
      return [g, f, inputs, rule](int node, BlobStore* blobs) -> std::unique_ptr<NodeProgram> {
        auto inner = std::make_unique<IdentProgram>(g, node, f, inputs[node], blobs);
        return std::make_unique<TamperProgram>(std::move(inner), rule, blobs);
      };
    }

    case StrategyKind::equivocate:
      throw InputError("equivocation is not available in this protocol");

    case StrategyKind::scripted: {
      auto shared = std::make_shared<ScriptSet>(std::move(scripts));
      return [shared](int node, BlobStore*) -> std::unique_ptr<NodeProgram> {
        auto it = shared->find(node);
        if (it == shared->end()) return std::make_unique<SilentProgram>();
        return std::make_unique<ScriptedProgram>(it->second);
      };
    }
  }
  throw InputError("unreachable strategy kind");
}

}  // namespace lbc
