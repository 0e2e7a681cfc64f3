#include "wire.hpp"

#include <sstream>

namespace lbc {

// Content key for interning; nested bundle ids are stable within one store.
std::string serialize_blob(const Blob& b, const BlobStore& blobs) {
  std::string out;
  for (const auto& it : b)
    out += std::to_string(it.round) + "|" + serialize_payload(it.payload, blobs) + "\n";
  return out;
}

uint32_t BlobStore::intern(const Blob& b) {
  std::string key = serialize_blob(b, *this);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  uint32_t id = (uint32_t)blobs_.size();
  blobs_.push_back(b);
  index_.emplace(std::move(key), id);
  return id;
}

const Blob& BlobStore::get(uint32_t id) const {
  if (id >= blobs_.size()) throw InputError("blob id out of range");
  return blobs_[id];
}

std::string serialize_path(const PackedPath& p) {
  if (p.empty()) return "_";
  std::string out;
  for (int i = 0; i < p.len; ++i) {
    if (i) out += "-";
    out += std::to_string(p.at(i));
  }
  return out;
}

static PackedPath parse_path(const std::string& tok) {
  PackedPath p;
  if (tok == "_") return p;
  size_t pos = 0;
  while (pos <= tok.size()) {
    size_t dash = tok.find('-', pos);
    std::string part = tok.substr(pos, dash == std::string::npos ? std::string::npos : dash - pos);
    try {
      size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      p.push(v);
    } catch (const std::exception&) {
      throw InputError("bad path token '" + tok + "'");
    }
    if (dash == std::string::npos) break;
    pos = dash + 1;
  }
  return p;
}

std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 0xF];
  }
  return out;
}

std::string from_hex(const std::string& hex) {
  if (hex.size() % 2) throw InputError("odd-length hex string");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw InputError("bad hex digit");
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2)
    out += (char)((nib(hex[i]) << 4) | nib(hex[i + 1]));
  return out;
}

std::string serialize_payload(const Payload& p, const BlobStore& blobs) {
  switch (p.kind) {
    case PayloadKind::flood:
      return "F " + std::to_string(p.bit) + " " + serialize_path(p.path);
    case PayloadKind::decision:
      return "D " + std::to_string(p.bit) + " " + serialize_path(p.path);
    case PayloadKind::raw:
      return "X " + to_hex(p.raw);
    case PayloadKind::bundle: {
      std::string out = "B " + std::to_string(p.subject) + " " + serialize_path(p.path) + " ";
      const Blob& b = blobs.get(p.blob);
      if (b.empty()) return out + "_";
      for (size_t i = 0; i < b.size(); ++i) {
        if (i) out += ";";
        out += "R " + std::to_string(p.subject) + " " + std::to_string(b[i].round) + " " +
               serialize_payload(b[i].payload, blobs);
      }
      return out;
    }
  }
  throw InputError("bad payload kind");
}

Payload parse_payload(const std::string& text, BlobStore& blobs) {
  std::istringstream in(text);
  std::string tag;
  if (!(in >> tag)) throw InputError("empty payload text");
  Payload p;
  if (tag == "F" || tag == "D") {
    p.kind = tag == "F" ? PayloadKind::flood : PayloadKind::decision;
    int b;
    std::string path;
    if (!(in >> b >> path) || (b != 0 && b != 1))
      throw InputError("bad flood payload '" + text + "'");
    std::string extra;
    if (in >> extra) throw InputError("trailing token in payload '" + text + "'");
    p.bit = (uint8_t)b;
    p.path = parse_path(path);
    return p;
  }
  if (tag == "X") {
    p.kind = PayloadKind::raw;
    std::string hex;
    in >> hex;
    p.raw = from_hex(hex);
    return p;
  }
  if (tag == "B") {
    p.kind = PayloadKind::bundle;
    int subject;
    std::string path;
    if (!(in >> subject >> path)) throw InputError("bad bundle payload '" + text + "'");
    p.subject = (uint8_t)subject;
    p.path = parse_path(path);
    std::string rest;
    std::getline(in, rest);
    size_t start = rest.find_first_not_of(' ');
    rest = start == std::string::npos ? std::string() : rest.substr(start);
    Blob blob;
    if (rest != "_" && !rest.empty()) {
      size_t pos = 0;
      while (pos < rest.size()) {
        size_t semi = rest.find(';', pos);
        std::string item =
            rest.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        std::istringstream is(item);
        std::string rtag;
        int origin, round;
        if (!(is >> rtag >> origin >> round) || rtag != "R")
          throw InputError("bad report item '" + item + "'");
        if (origin != subject) throw InputError("report item subject mismatch");
        std::string inner;
        std::getline(is, inner);
        size_t istart = inner.find_first_not_of(' ');
        if (istart == std::string::npos) throw InputError("report item missing inner payload");
        ReportItem ri;
        ri.round = (uint16_t)round;
        ri.payload = parse_payload(inner.substr(istart), blobs);
        blob.push_back(ri);
        if (semi == std::string::npos) break;
        pos = semi + 1;
      }
    }
    p.blob = blobs.intern(blob);
    return p;
  }
  throw InputError("unknown payload tag '" + tag + "'");
}

}  // namespace lbc
