#include "graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lbc {

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1 || n > 32) throw InputError("graph: n must be in [1,32], got " + std::to_string(n));
  Graph g;
  g.n = n;
  g.adj.assign(n, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw InputError("graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") out of range");
    if (u == v) throw InputError("graph: self loop at " + std::to_string(u));
    if (g.has_edge(u, v))
      throw InputError("graph: duplicate edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ")");
    g.adj[u] |= bit(v);
    g.adj[v] |= bit(u);
  }
  g.nbrs.assign(n, {});
  for (int v = 0; v < n; ++v) g.nbrs[v] = ids_of(g.adj[v]);
  return g;
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_n = false;
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> n))
        throw InputError("graph line " + std::to_string(lineno) + ": expected node count");
      std::string extra;
      if (ls >> extra)
        throw InputError("graph line " + std::to_string(lineno) + ": trailing token '" + extra +
                         "'");
      have_n = true;
      continue;
    }
    int u, v;
    if (!(ls >> u >> v))
      throw InputError("graph line " + std::to_string(lineno) + ": expected 'u v'");
    std::string extra;
    if (ls >> extra)
      throw InputError("graph line " + std::to_string(lineno) + ": trailing token '" + extra +
                       "'");
    if (u >= v)
      throw InputError("graph line " + std::to_string(lineno) + ": edges must satisfy u < v");
    edges.emplace_back(u, v);
  }
  if (!have_n) throw InputError("graph: missing node count line");
  return make_graph(n, edges);
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.n) + "\n";
  for (int u = 0; u < g.n; ++u)
    for (int v : g.nbrs[u])
      if (u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

int min_degree(const Graph& g) {
  int d = g.n;
  for (int v = 0; v < g.n; ++v) d = std::min(d, g.degree(v));
  return d;
}

std::vector<int> neighbors_of_set(const Graph& g, const std::vector<int>& s) {
  NodeMask sm = 0;
  for (int v : s) {
    if (!g.valid_node(v)) throw InputError("neighbors_of_set: node " + std::to_string(v) +
                                           " out of range");
    sm |= bit(v);
  }
  NodeMask nb = 0;
  for_bits(sm, [&](int v) { nb |= g.adj[v]; });
  return ids_of(nb & ~sm);
}

bool is_path_in_graph(const Graph& g, const Path& p) {
  if (p.empty()) return false;
  NodeMask seen = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (!g.valid_node(p[i]) || has(seen, p[i])) return false;
    seen |= bit(p[i]);
    if (i > 0 && !g.has_edge(p[i - 1], p[i])) return false;
  }
  return true;
}

namespace {

// Unit-capacity digraph for vertex-disjoint path computations via node
// splitting: in(i)=2i, out(i)=2i+1, optional supersource 2n.
struct FlowNet {
  struct Arc {
    int to;
    int cap;
    int rev;  // index of reverse arc in arcs[to]
  };
  std::vector<std::vector<Arc>> arcs;

  explicit FlowNet(int vertices) : arcs(vertices) {}

  void add(int a, int b, int cap) {
    arcs[a].push_back({b, cap, (int)arcs[b].size()});
    arcs[b].push_back({a, 0, (int)arcs[a].size() - 1});
  }

  // One Edmonds-Karp augmentation, scanning arcs in insertion order so the
  // chosen augmenting path is deterministic. Returns false if sink unreachable.
  bool augment(int s, int t) {
    std::vector<std::pair<int, int>> parent(arcs.size(), {-1, -1});  // (node, arc idx)
    std::vector<int> q{s};
    parent[s] = {s, 0};
    for (size_t qi = 0; qi < q.size() && parent[t].first < 0; ++qi) {
      int a = q[qi];
      for (size_t i = 0; i < arcs[a].size(); ++i) {
        const Arc& arc = arcs[a][i];
        if (arc.cap <= 0 || parent[arc.to].first >= 0) continue;
        parent[arc.to] = {a, (int)i};
        if (arc.to == t) break;
        q.push_back(arc.to);
      }
    }
    if (parent[t].first < 0) return false;
    for (int v = t; v != s;) {
      auto [pa, pi] = parent[v];
      Arc& fwd = arcs[pa][pi];
      fwd.cap -= 1;
      arcs[v][fwd.rev].cap += 1;
      v = pa;
    }
    return true;
  }

  // Residual reachability from s (cap > 0 arcs).
  std::vector<char> reachable(int s) const {
    std::vector<char> vis(arcs.size(), 0);
    std::vector<int> q{s};
    vis[s] = 1;
    for (size_t qi = 0; qi < q.size(); ++qi)
      for (const Arc& a : arcs[q[qi]])
        if (a.cap > 0 && !vis[a.to]) {
          vis[a.to] = 1;
          q.push_back(a.to);
        }
    return vis;
  }
};

int in_node(int i) { return 2 * i; }
int out_node(int i) { return 2 * i + 1; }

// Flow units consumed on original arcs out(i)->in(j); returns per-node chosen
// successor lists for path decomposition.
std::vector<Path> decompose(const Graph& g, FlowNet& net, const std::vector<int>& starts,
                            int target) {
  // flow on out(i)->in(j) equals the reverse arc's cap gained at in(j).
  std::vector<std::vector<int>> succ(g.n);
  for (int i = 0; i < g.n; ++i)
    for (const auto& a : net.arcs[out_node(i)]) {
      if (a.to == in_node(i) || a.to >= 2 * g.n) continue;
      int j = a.to / 2;
      if (a.to == in_node(j) && a.cap == 0 && g.has_edge(i, j)) succ[i].push_back(j);
    }
  for (auto& s : succ) std::sort(s.begin(), s.end());
  std::vector<Path> paths;
  for (int s : starts) {
    // Each start carries at most one unit here (enforced by construction).
    Path p{s};
    int cur = s;
    while (cur != target) {
      if (succ[cur].empty()) break;
      int nxt = succ[cur].front();
      succ[cur].erase(succ[cur].begin());
      p.push_back(nxt);
      cur = nxt;
    }
    if (cur == target && (p.size() > 1 || s == target)) paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace

int vertex_connectivity(const Graph& g) { return vertex_connectivity_with_cut(g).value; }

ConnectivityWitness vertex_connectivity_with_cut(const Graph& g) {
  ConnectivityWitness best;
  best.value = g.n - 1;
  bool complete = true;
  for (int u = 0; u < g.n && complete; ++u)
    if (g.degree(u) != g.n - 1) complete = false;
  if (complete) return best;

  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      if (g.has_edge(u, v)) continue;
      FlowNet net(2 * g.n);
      for (int i = 0; i < g.n; ++i)
        if (i != u && i != v) net.add(in_node(i), out_node(i), 1);
      // Edge arcs get capacity n so every min cut consists of split arcs only.
      for (int a = 0; a < g.n; ++a)
        for (int b : g.nbrs[a])
          net.add(out_node(a), in_node(b), g.n);
      int flow = 0;
      while (flow < best.value && net.augment(out_node(u), in_node(v))) ++flow;
      if (flow < best.value) {
        best.value = flow;
        auto vis = net.reachable(out_node(u));
        best.cut.clear();
        for (int i = 0; i < g.n; ++i)
          if (i != u && i != v && vis[in_node(i)] && !vis[out_node(i)]) best.cut.push_back(i);
      }
      if (best.value == 0) return best;  // disconnected; no smaller cut exists
    }
  }
  return best;
}

std::optional<std::vector<Path>> disjoint_uv_paths(const Graph& g, int u, int v, int k) {
  if (!g.valid_node(u) || !g.valid_node(v)) throw InputError("disjoint_uv_paths: node out of range");
  if (u == v) throw InputError("disjoint_uv_paths: u == v");
  if (k < 0) throw InputError("disjoint_uv_paths: k < 0");
  if (k == 0) return std::vector<Path>{};
  FlowNet net(2 * g.n);
  for (int i = 0; i < g.n; ++i)
    if (i != u && i != v) net.add(in_node(i), out_node(i), 1);
  for (int a = 0; a < g.n; ++a)
    for (int b : g.nbrs[a])
      net.add(out_node(a), in_node(b), 1);
  int flow = 0;
  while (flow < k && net.augment(out_node(u), in_node(v))) ++flow;
  if (flow < k) return std::nullopt;
  // Starts are u's chosen first hops; rebuild paths from u.
  std::vector<Path> paths;
  std::vector<std::vector<int>> succ(g.n);
  for (int i = 0; i < g.n; ++i)
    for (const auto& a : net.arcs[out_node(i)]) {
      if (a.to >= 2 * g.n || a.to == in_node(i)) continue;
      int j = a.to / 2;
      if (a.to == in_node(j) && a.cap == 0 && g.has_edge(i, j)) succ[i].push_back(j);
    }
  for (auto& s : succ) std::sort(s.begin(), s.end());
  for (int pi = 0; pi < k; ++pi) {
    Path p{u};
    int cur = u;
    do {
      if (succ[cur].empty()) throw InputError("disjoint_uv_paths: internal decomposition error");
      int nxt = succ[cur].front();
      succ[cur].erase(succ[cur].begin());
      p.push_back(nxt);
      cur = nxt;
    } while (cur != v);
    paths.push_back(std::move(p));
  }
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return paths;
}

static std::optional<std::vector<Path>> set_paths_impl(const Graph& g,
                                                       const std::vector<int>& sources, int v,
                                                       int k, NodeMask excluded) {
  if (!g.valid_node(v)) throw InputError("disjoint_set_paths: node out of range");
  NodeMask src = 0;
  for (int s : sources) {
    if (!g.valid_node(s)) throw InputError("disjoint_set_paths: source out of range");
    src |= bit(s);
  }
  if (k < 0) throw InputError("disjoint_set_paths: k < 0");
  std::vector<Path> trivial;
  if (has(src, v) && k > 0) {
    trivial.push_back(Path{v});
    src &= ~bit(v);
  }
  int need = k - (int)trivial.size();
  if (need <= 0) return trivial;
  k = need;
  int super = 2 * g.n;
  FlowNet net(2 * g.n + 1);
  for (int i = 0; i < g.n; ++i)
    if (i != v) net.add(in_node(i), out_node(i), 1);
  for_bits(src, [&](int s) { net.add(super, in_node(s), 1); });
  for (int a = 0; a < g.n; ++a)
    for (int b : g.nbrs[a]) {
      // Excluded nodes are unreachable as internals: no arcs into them.
      if (has(excluded, b) && b != v) continue;
      net.add(out_node(a), in_node(b), 1);
    }
  int flow = 0;
  while (flow < k && net.augment(super, in_node(v))) ++flow;
  if (flow < k) return std::nullopt;
  std::vector<int> starts;
  for (const auto& a : net.arcs[super])
    if (a.cap == 0 && a.to < 2 * g.n) starts.push_back(a.to / 2);
  std::sort(starts.begin(), starts.end());
  auto paths = decompose(g, net, starts, v);
  if ((int)paths.size() != k) throw InputError("disjoint_set_paths: internal decomposition error");
  std::vector<Path> out = std::move(trivial);
  for (auto& p : paths) out.push_back(std::move(p));
  return out;
}

std::optional<std::vector<Path>> disjoint_set_paths(const Graph& g,
                                                    const std::vector<int>& sources, int v,
                                                    int k) {
  return set_paths_impl(g, sources, v, k, 0);
}

std::optional<std::vector<Path>> disjoint_set_paths_excluding(const Graph& g,
                                                              const std::vector<int>& sources,
                                                              int v, int k,
                                                              const std::vector<int>& excluded) {
  NodeMask ex = 0;
  for (int e : excluded) {
    if (!g.valid_node(e)) throw InputError("disjoint_set_paths_excluding: node out of range");
    ex |= bit(e);
  }
  return set_paths_impl(g, sources, v, k, ex);
}

std::optional<Path> path_excluding(const Graph& g, int u, int v,
                                   const std::vector<int>& excluded) {
  if (!g.valid_node(u) || !g.valid_node(v)) throw InputError("path_excluding: node out of range");
  NodeMask ex = 0;
  for (int e : excluded) {
    if (!g.valid_node(e)) throw InputError("path_excluding: excluded node out of range");
    ex |= bit(e);
  }
  ex &= ~(bit(u) | bit(v));  // endpoints exempt
  if (u == v) return Path{u};
  // Distance-to-v over allowed nodes, then a greedy smallest-id descent gives
  // the lexicographically least shortest path.
  std::vector<int> dist(g.n, -1);
  std::vector<int> q{v};
  dist[v] = 0;
  for (size_t qi = 0; qi < q.size(); ++qi) {
    int a = q[qi];
    for (int b : g.nbrs[a]) {
      if (has(ex, b) || dist[b] >= 0) continue;
      dist[b] = dist[a] + 1;
      q.push_back(b);
    }
  }
  if (dist[u] < 0) return std::nullopt;
  Path p{u};
  int cur = u;
  while (cur != v) {
    for (int b : g.nbrs[cur]) {
      if (has(ex, b) || dist[b] != dist[cur] - 1) continue;
      p.push_back(b);
      cur = b;
      break;
    }
  }
  return p;
}

}  // namespace lbc
