#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace lbc {

// Undirected simple graph on nodes 0..n-1, n <= 32.
struct Graph {
  int n = 0;
  std::vector<NodeMask> adj;            // adjacency mask per node
  std::vector<std::vector<int>> nbrs;   // ascending neighbor lists

  bool has_edge(int u, int v) const { return has(adj[u], v); }
  int degree(int v) const { return popcount(adj[v]); }
  bool valid_node(int v) const { return v >= 0 && v < n; }
};

using Path = std::vector<int>;  // node sequence, consecutive entries adjacent

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

// Text format: first non-comment line is n, then one "u v" line per edge with
// u < v. '#' starts a comment; blank lines are ignored.
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);
Graph load_graph_file(const std::string& path);

int min_degree(const Graph& g);

// Nodes outside s adjacent to at least one member of s, ascending.
std::vector<int> neighbors_of_set(const Graph& g, const std::vector<int>& s);

// n-1 for complete graphs (including K1), 0 for disconnected graphs.
int vertex_connectivity(const Graph& g);

struct ConnectivityWitness {
  int value = 0;
  std::vector<int> cut;  // empty when the graph is complete or disconnected
};
ConnectivityWitness vertex_connectivity_with_cut(const Graph& g);

// k pairwise internally-disjoint u-v paths, or absent if fewer exist.
// Deterministic: augmenting searches and decompositions scan ascending ids.
std::optional<std::vector<Path>> disjoint_uv_paths(const Graph& g, int u, int v, int k);

// k paths from k distinct sources to v, pairwise node-disjoint except at v.
// If v itself is in sources, the single-node path (v) may be one member.
std::optional<std::vector<Path>> disjoint_set_paths(const Graph& g,
                                                   const std::vector<int>& sources, int v,
                                                   int k);

// Lexicographically least among the shortest u-v paths whose internal nodes
// avoid `excluded` (endpoints are exempt from the exclusion).
std::optional<Path> path_excluding(const Graph& g, int u, int v,
                                   const std::vector<int>& excluded);

// disjoint_set_paths with internal nodes avoiding `excluded` (endpoints exempt).
std::optional<std::vector<Path>> disjoint_set_paths_excluding(const Graph& g,
                                                              const std::vector<int>& sources,
                                                              int v, int k,
                                                              const std::vector<int>& excluded);

bool is_path_in_graph(const Graph& g, const Path& p);

}  // namespace lbc
