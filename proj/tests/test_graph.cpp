#include <algorithm>
#include <set>

#include "doctest.h"
#include "graph.hpp"
#include "oracles.hpp"

using namespace lbc;

namespace {

Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return make_graph(n, e);
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return make_graph(n, e);
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

// 8 nodes, sides {0,1,2,3} and {4,5,6,7}, all 16 cross edges.
Graph biclique44() {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < 4; ++u)
    for (int v = 4; v < 8; ++v) e.emplace_back(u, v);
  return make_graph(8, e);
}

bool family_ok(const Graph& g, const std::vector<Path>& fam, int v) {
  NodeMask used = 0;
  std::set<int> starts;
  for (const auto& p : fam) {
    if (p.empty() || p.back() != v) return false;
    if (p.size() > 1 && !is_path_in_graph(g, p)) return false;
    if (!starts.insert(p.front()).second) return false;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      if (has(used, p[i])) return false;
      used |= bit(p[i]);
    }
  }
  return true;
}

}  // namespace

TEST_CASE("graph parse and format round trip") {
  std::string text = "5\n# a comment\n0 1\n1 2\n2 3\n\n3 4\n0 4  # inline\n";
  Graph g = parse_graph(text);
  CHECK(g.n == 5);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 4));
  CHECK(!g.has_edge(0, 2));
  CHECK(format_graph(g) == "5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
  Graph g2 = parse_graph(format_graph(g));
  CHECK(format_graph(g2) == format_graph(g));
}

TEST_CASE("graph parse errors") {
  CHECK_THROWS_AS(parse_graph(""), InputError);
  CHECK_THROWS_AS(parse_graph("3\n1 0\n"), InputError);   // u >= v
  CHECK_THROWS_AS(parse_graph("3\n1 1\n"), InputError);   // self loop via u >= v
  CHECK_THROWS_AS(parse_graph("3\n0 3\n"), InputError);   // out of range
  CHECK_THROWS_AS(parse_graph("3\n0 1\n0 1\n"), InputError);
  CHECK_THROWS_AS(parse_graph("3\n0 1 2\n"), InputError);
  CHECK_THROWS_AS(parse_graph("x\n"), InputError);
  CHECK_THROWS_AS(make_graph(0, {}), InputError);
  CHECK_THROWS_AS(make_graph(33, {}), InputError);
}

TEST_CASE("degrees and set neighborhoods") {
  Graph c5 = cycle(5);
  CHECK(min_degree(c5) == 2);
  CHECK(min_degree(biclique44()) == 4);
  CHECK(min_degree(path_graph(4)) == 1);
  CHECK(neighbors_of_set(c5, {0}) == std::vector<int>{1, 4});
  CHECK(neighbors_of_set(c5, {0, 1}) == std::vector<int>{2, 4});
  CHECK(neighbors_of_set(c5, {}) == std::vector<int>{});
  CHECK(neighbors_of_set(c5, {0, 1, 2, 3, 4}) == std::vector<int>{});
  CHECK_THROWS_AS(neighbors_of_set(c5, {7}), InputError);
}

TEST_CASE("vertex connectivity on known graphs") {
  CHECK(vertex_connectivity(cycle(5)) == 2);
  CHECK(vertex_connectivity(complete(3)) == 2);
  CHECK(vertex_connectivity(complete(5)) == 4);
  CHECK(vertex_connectivity(complete(1)) == 0);
  CHECK(vertex_connectivity(path_graph(4)) == 1);
  CHECK(vertex_connectivity(biclique44()) == 4);
  CHECK(vertex_connectivity(make_graph(2, {})) == 0);
  CHECK(vertex_connectivity(make_graph(2, {{0, 1}})) == 1);
}

TEST_CASE("connectivity witness cut disconnects the graph") {
  auto w = vertex_connectivity_with_cut(cycle(5));
  CHECK(w.value == 2);
  REQUIRE(w.cut.size() == 2);
  NodeMask keep = full_mask(5) & ~mask_of(w.cut);
  CHECK(!oracle::induced_connected(cycle(5), keep));

  auto wp = vertex_connectivity_with_cut(path_graph(5));
  CHECK(wp.value == 1);
  REQUIRE(wp.cut.size() == 1);
  CHECK(!oracle::induced_connected(path_graph(5), full_mask(5) & ~mask_of(wp.cut)));

  CHECK(vertex_connectivity_with_cut(complete(4)).cut.empty());
}

TEST_CASE("disjoint uv paths on the 5-cycle") {
  Graph c5 = cycle(5);
  auto fam = disjoint_uv_paths(c5, 0, 2, 2);
  REQUIRE(fam.has_value());
  CHECK(*fam == std::vector<Path>{{0, 1, 2}, {0, 4, 3, 2}});
  CHECK(!disjoint_uv_paths(c5, 0, 2, 3).has_value());
  // Deterministic across calls.
  CHECK(*disjoint_uv_paths(c5, 0, 2, 2) == *fam);
}

TEST_CASE("disjoint uv paths between biclique outer nodes") {
  Graph g = biclique44();
  auto fam = disjoint_uv_paths(g, 0, 1, 4);
  REQUIRE(fam.has_value());
  CHECK(fam->size() == 4);
  NodeMask mids = 0;
  for (const auto& p : *fam) {
    REQUIRE(p.size() == 3);
    CHECK(p.front() == 0);
    CHECK(p.back() == 1);
    CHECK(is_path_in_graph(g, p));
    CHECK(!has(mids, p[1]));
    mids |= bit(p[1]);
  }
  CHECK(!disjoint_uv_paths(g, 0, 1, 5).has_value());
}

TEST_CASE("disjoint set paths examples") {
  Graph c5 = cycle(5);
  auto near = disjoint_set_paths(c5, {1, 4}, 0, 2);
  REQUIRE(near.has_value());
  CHECK(*near == std::vector<Path>{{1, 0}, {4, 0}});

  auto far = disjoint_set_paths(c5, {2, 3}, 0, 2);
  REQUIRE(far.has_value());
  CHECK(*far == std::vector<Path>{{2, 1, 0}, {3, 4, 0}});

  CHECK(!disjoint_set_paths(c5, {2}, 0, 2).has_value());
  CHECK(disjoint_set_paths(c5, {2}, 0, 0)->empty());
}

TEST_CASE("disjoint set paths with exclusions") {
  Graph c5 = cycle(5);
  // Excluded ids may still appear as path endpoints.
  auto fam = disjoint_set_paths_excluding(c5, {2, 3}, 0, 2, {3});
  REQUIRE(fam.has_value());
  CHECK(*fam == std::vector<Path>{{2, 1, 0}, {3, 4, 0}});
  CHECK(!disjoint_set_paths_excluding(c5, {2, 3}, 0, 2, {4}).has_value());
}

TEST_CASE("path excluding") {
  Graph c5 = cycle(5);
  CHECK(*path_excluding(c5, 0, 2, {}) == Path{0, 1, 2});
  CHECK(*path_excluding(c5, 0, 2, {1}) == Path{0, 4, 3, 2});
  CHECK(*path_excluding(c5, 0, 2, {0, 1, 2}) == Path{0, 4, 3, 2});  // endpoints exempt
  CHECK(!path_excluding(c5, 0, 2, {1, 3}).has_value());
  CHECK(*path_excluding(complete(4), 0, 3, {1, 2}) == Path{0, 3});
  CHECK(*path_excluding(c5, 2, 2, {0}) == Path{2});
}

TEST_CASE("connectivity matches brute force on all graphs up to n=5") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<int, int>> all_edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) all_edges.emplace_back(u, v);
    for (uint32_t sel = 0; sel < (1u << all_edges.size()); ++sel) {
      std::vector<std::pair<int, int>> edges;
      for (size_t i = 0; i < all_edges.size(); ++i)
        if ((sel >> i) & 1) edges.push_back(all_edges[i]);
      Graph g = make_graph(n, edges);
      CAPTURE(n);
      CAPTURE(sel);
      REQUIRE(vertex_connectivity(g) == oracle::brute_connectivity(g));
    }
  }
}

TEST_CASE("uv path families match Menger bound on all graphs with n=4,5") {
  for (int n = 4; n <= 5; ++n) {
    std::vector<std::pair<int, int>> all_edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) all_edges.emplace_back(u, v);
    for (uint32_t sel = 0; sel < (1u << all_edges.size()); ++sel) {
      std::vector<std::pair<int, int>> edges;
      for (size_t i = 0; i < all_edges.size(); ++i)
        if ((sel >> i) & 1) edges.push_back(all_edges[i]);
      Graph g = make_graph(n, edges);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          if (g.has_edge(u, v)) continue;
          int bound = oracle::brute_min_uv_cut(g, u, v);
          if (bound >= g.n) bound = 0;  // unreachable pair: no separator, no path
          for (int k = 0; k <= bound + 1; ++k) {
            auto fam = disjoint_uv_paths(g, u, v, k);
            CAPTURE(n);
            CAPTURE(sel);
            CAPTURE(u);
            CAPTURE(v);
            CAPTURE(k);
            // Menger: k internally-disjoint paths exist iff k <= min separator.
            REQUIRE(fam.has_value() == (k <= bound));
            if (fam) {
              REQUIRE(fam->size() == (size_t)k);
              NodeMask internals = 0;
              for (const auto& p : *fam) {
                REQUIRE(is_path_in_graph(g, p));
                REQUIRE(p.front() == u);
                REQUIRE(p.back() == v);
                for (size_t i = 1; i + 1 < p.size(); ++i) {
                  REQUIRE(!has(internals, p[i]));
                  internals |= bit(p[i]);
                }
              }
            }
          }
        }
    }
  }
}

TEST_CASE("set path families match brute packing on all graphs with n=4") {
  std::vector<std::pair<int, int>> all_edges;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) all_edges.emplace_back(u, v);
  for (uint32_t sel = 0; sel < (1u << all_edges.size()); ++sel) {
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < all_edges.size(); ++i)
      if ((sel >> i) & 1) edges.push_back(all_edges[i]);
    Graph g = make_graph(4, edges);
    for (int v = 0; v < 4; ++v) {
      for (NodeMask src = 1; src < 16; ++src) {
        int max_pack = oracle::brute_set_packing(g, src, v, 0);
        auto sources = ids_of(src);
        for (int k = 0; k <= max_pack + 1; ++k) {
          auto fam = disjoint_set_paths(g, sources, v, k);
          CAPTURE(sel);
          CAPTURE(v);
          CAPTURE(src);
          CAPTURE(k);
          REQUIRE(fam.has_value() == (k <= max_pack));
          if (fam) REQUIRE(family_ok(g, *fam, v));
        }
      }
    }
  }
}
