#pragma once

#include <string>
#include <vector>

#include "graph.hpp"
#include "protocol_phase.hpp"

namespace lbc {

// Trace-level invariant checks for phase-protocol runs. Each violation adds
// one line; an empty result is a clean pass.
//   - phase validity: every non-faulty gamma at a phase end equals some
//     non-faulty gamma at that phase start
//   - covering agreement: a phase whose (F, T) covers the actual fault sets
//     ends with all non-faulty gammas equal
//   - path consistency: a value a non-faulty node forwards along a relay path
//     with no faulty relays matches the origin's initiating broadcast, or the
//     default 1 when a faulty origin never initiated
//   - quiescence: every flood a non-faulty node emits sits at the phase round
//     equal to its carried path length, and the path plus sender is a path of
//     the graph
std::vector<std::string> check_phase_invariants(const Graph& g, const PhaseRunResult& r,
                                                NodeMask faulty, NodeMask equivocators);

}  // namespace lbc
