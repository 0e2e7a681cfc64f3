#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbc {

// Thrown on malformed inputs, contract violations, and unparseable files.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by a node program when the protocol cannot continue on this graph
// (e.g. a required relay path does not exist). The engine attaches node/round.
struct ProtocolInfeasible : std::runtime_error {
  explicit ProtocolInfeasible(const std::string& msg) : std::runtime_error(msg) {}
};

using NodeMask = uint32_t;

inline constexpr NodeMask bit(int i) { return NodeMask{1} << i; }
inline bool has(NodeMask m, int i) { return (m >> i) & 1u; }
inline int popcount(NodeMask m) { return std::popcount(m); }
inline NodeMask full_mask(int n) { return n >= 32 ? ~NodeMask{0} : (NodeMask{1} << n) - 1; }

// Calls fn(i) for each set bit of m, ascending.
template <typename Fn>
inline void for_bits(NodeMask m, Fn&& fn) {
  while (m) {
    int i = std::countr_zero(m);
    fn(i);
    m &= m - 1;
  }
}

inline NodeMask mask_of(const std::vector<int>& ids) {
  NodeMask m = 0;
  for (int v : ids) m |= bit(v);
  return m;
}

inline std::vector<int> ids_of(NodeMask m) {
  std::vector<int> out;
  for_bits(m, [&](int i) { out.push_back(i); });
  return out;
}

inline std::string join_ids(const std::vector<int>& ids, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace lbc
