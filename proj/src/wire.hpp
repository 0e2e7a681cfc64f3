#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace lbc {

// Node sequence packed 4 bits per entry (stored as id+1), capacity 15 nodes.
// This caps protocol graphs at n = 15; the empty path doubles as the "no
// relay path yet" token in flood messages.
struct PackedPath {
  uint64_t packed = 0;
  uint8_t len = 0;

  static constexpr int max_len = 15;

  void push(int v) {
    if (len >= max_len) throw InputError("path longer than 15 nodes");
    packed |= (uint64_t)(v + 1) << (4 * len);
    len += 1;
  }
  int at(int i) const { return (int)((packed >> (4 * i)) & 0xF) - 1; }
  int first() const { return at(0); }
  int last() const { return at(len - 1); }
  bool empty() const { return len == 0; }
  bool contains(int v) const { return has(mask(), v); }
  NodeMask mask() const {
    NodeMask m = 0;
    for (int i = 0; i < len; ++i) m |= bit(at(i));
    return m;
  }
  uint64_t key() const { return packed | ((uint64_t)len << 60); }

  PackedPath appended(int v) const {
    PackedPath p = *this;
    p.push(v);
    return p;
  }

  std::vector<int> to_vector() const {
    std::vector<int> out(len);
    for (int i = 0; i < len; ++i) out[i] = at(i);
    return out;
  }
  static PackedPath from_vector(const std::vector<int>& v) {
    PackedPath p;
    for (int x : v) {
      if (x < 0 || x > 14) throw InputError("path node out of packed range");
      p.push(x);
    }
    return p;
  }

  bool operator==(const PackedPath& o) const { return packed == o.packed && len == o.len; }
  bool operator<(const PackedPath& o) const { return key() < o.key(); }
};

enum class PayloadKind : uint8_t { flood, bundle, decision, raw };

// One message body. Bundles reference their report list through a BlobStore
// id so identical bundles compare and hash as integers.
struct Payload {
  PayloadKind kind = PayloadKind::flood;
  uint8_t bit = 0;        // flood / decision value
  PackedPath path;        // carried relay path (excludes the sender)
  uint8_t subject = 0;    // bundle: node the report is about
  uint32_t blob = 0;      // bundle: BlobStore id
  std::string raw;        // raw kind only

  bool operator==(const Payload& o) const {
    return kind == o.kind && bit == o.bit && path == o.path && subject == o.subject &&
           blob == o.blob && raw == o.raw;
  }

  static Payload flood_msg(int b, PackedPath p) {
    Payload m;
    m.kind = PayloadKind::flood;
    m.bit = (uint8_t)(b ? 1 : 0);
    m.path = p;
    return m;
  }
  static Payload decision_msg(int b, PackedPath p) {
    Payload m;
    m.kind = PayloadKind::decision;
    m.bit = (uint8_t)(b ? 1 : 0);
    m.path = p;
    return m;
  }
  static Payload bundle_msg(int subject, PackedPath p, uint32_t blob_id) {
    Payload m;
    m.kind = PayloadKind::bundle;
    m.subject = (uint8_t)subject;
    m.path = p;
    m.blob = blob_id;
    return m;
  }
  static Payload raw_msg(std::string hex_free_text) {
    Payload m;
    m.kind = PayloadKind::raw;
    m.raw = std::move(hex_free_text);
    return m;
  }
};

struct ReportItem {
  uint16_t round = 0;  // phase-1 round the reporter heard this payload
  Payload payload;
  bool operator==(const ReportItem& o) const { return round == o.round && payload == o.payload; }
};

using Blob = std::vector<ReportItem>;

// Deduplicating arena for bundle contents; ids are stable per run.
class BlobStore {
 public:
  uint32_t intern(const Blob& b);
  const Blob& get(uint32_t id) const;
  uint32_t size() const { return (uint32_t)blobs_.size(); }

 private:
  std::vector<Blob> blobs_;
  std::map<std::string, uint32_t> index_;
  friend std::string serialize_blob(const Blob&, const BlobStore&);
};

// Canonical text forms:
//   flood     F <bit> <path|_>
//   bundle    B <subject> <path|_> <R <subject> <round> <inner>[;...]|_>
//   decision  D <bit> <path|_>
//   raw       X <hex>
// Paths are dash-joined node ids; `_` is the empty-path token.
std::string serialize_path(const PackedPath& p);
std::string serialize_payload(const Payload& p, const BlobStore& blobs);
Payload parse_payload(const std::string& text, BlobStore& blobs);

std::string serialize_blob(const Blob& b, const BlobStore& blobs);

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex);

}  // namespace lbc
