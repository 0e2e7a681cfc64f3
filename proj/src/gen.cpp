#include "gen.hpp"

#include <random>

namespace lbc {

namespace {

std::vector<long> parse_args(const std::string& s) {
  std::vector<long> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stol(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("graph family: bad numeric argument '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Graph biclique(int a, int b) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) e.emplace_back(u, v);
  return make_graph(a + b, e);
}

}  // namespace

Graph graph_from_family(const std::string& family, uint64_t seed) {
  std::string kind = family;
  std::string args;
  auto colon = family.find(':');
  if (colon != std::string::npos) {
    kind = family.substr(0, colon);
    args = family.substr(colon + 1);
  }
  auto a = parse_args(args.empty() ? std::string() : args);

  if (kind == "fig1b") {
    if (!a.empty()) throw InputError("graph family fig1b takes no arguments");
    return biclique(4, 4);
  }
  if (kind == "cycle" || kind == "path" || kind == "complete") {
    if (a.size() != 1) throw InputError("graph family " + kind + " needs one argument");
    int n = (int)a[0];
    std::vector<std::pair<int, int>> e;
    if (kind == "cycle") {
      if (n < 3) throw InputError("cycle needs n >= 3");
      for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
      e.emplace_back(0, n - 1);
    } else if (kind == "path") {
      for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    } else {
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    }
    std::sort(e.begin(), e.end());
    return make_graph(n, e);
  }
  if (kind == "biclique") {
    if (a.size() != 2) throw InputError("graph family biclique needs two arguments");
    if (a[0] < 1 || a[1] < 1) throw InputError("biclique sides must be >= 1");
    return biclique((int)a[0], (int)a[1]);
  }
  if (kind == "random-k-connected") {
    if (a.size() != 2 && a.size() != 3)
      throw InputError("graph family random-k-connected needs n,k[,p]");
    int n = (int)a[0], k = (int)a[1];
    int p = a.size() == 3 ? (int)a[2] : 50;
    if (n < 2 || n > 32) throw InputError("random-k-connected: n must be in [2,32]");
    if (k < 1 || k >= n) throw InputError("random-k-connected: need 1 <= k < n");
    if (p < 1 || p > 100) throw InputError("random-k-connected: p must be in [1,100]");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 20000; ++attempt) {
      std::vector<std::pair<int, int>> e;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if ((int)(rng() % 100) < p) e.emplace_back(u, v);
      Graph g = make_graph(n, e);
      if (vertex_connectivity(g) >= k) return g;
    }
    throw InputError("random-k-connected: no graph found after 20000 attempts (raise p?)");
  }
  throw InputError("unknown graph family '" + kind + "'");
}

}  // namespace lbc
