#pragma once

#include <cstdint>
#include <string>

#include "graph.hpp"

namespace lbc {

// Families: cycle:n | path:n | complete:n | biclique:a,b | fig1b |
// random-k-connected:n,k[,p] with edge probability p percent (default 50).
// fig1b is biclique:4,4 (sides {0..3} and {4..7}).
// The seed only affects random-k-connected.
Graph graph_from_family(const std::string& family, uint64_t seed);

}  // namespace lbc
