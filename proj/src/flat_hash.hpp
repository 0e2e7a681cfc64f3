#pragma once

#include <cstdint>
#include <vector>

namespace lbc {

// Minimal open-addressing set/map for dense 64-bit keys on hot paths.
// Slots store key+1 so 0 can mark empty; capacity is a power of two.

inline size_t hash64_slot(uint64_t x, size_t mask) {
  return (size_t)((x * 0x9E3779B97F4A7C15ull) >> 32) & mask;
}

class FlatSet64 {
 public:
  // Returns true when the key was absent and has now been added.
  bool insert(uint64_t raw) {
    if (slots_.empty() || count_ * 10 >= slots_.size() * 7) grow();
    uint64_t stored = raw + 1;
    size_t mask = slots_.size() - 1;
    size_t i = hash64_slot(stored, mask);
    while (slots_[i] != 0) {
      if (slots_[i] == stored) return false;
      i = (i + 1) & mask;
    }
    slots_[i] = stored;
    ++count_;
    return true;
  }

  bool contains(uint64_t raw) const {
    if (slots_.empty()) return false;
    uint64_t stored = raw + 1;
    size_t mask = slots_.size() - 1;
    size_t i = hash64_slot(stored, mask);
    while (slots_[i] != 0) {
      if (slots_[i] == stored) return true;
      i = (i + 1) & mask;
    }
    return false;
  }

  void clear() {
    std::fill(slots_.begin(), slots_.end(), 0);
    count_ = 0;
  }

  size_t size() const { return count_; }

 private:
  void grow() {
    std::vector<uint64_t> old = std::move(slots_);
    slots_.assign(old.empty() ? 64 : old.size() * 2, 0);
    size_t mask = slots_.size() - 1;
    for (uint64_t s : old) {
      if (s == 0) continue;
      size_t i = hash64_slot(s, mask);
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = s;
    }
  }

  std::vector<uint64_t> slots_;
  size_t count_ = 0;
};

class FlatMap64 {
 public:
  void insert(uint64_t raw, uint32_t value) {
    if (slots_.empty() || count_ * 10 >= slots_.size() * 7) grow();
    uint64_t stored = raw + 1;
    size_t mask = slots_.size() - 1;
    size_t i = hash64_slot(stored, mask);
    while (slots_[i].first != 0) {
      if (slots_[i].first == stored) return;  // first value wins
      i = (i + 1) & mask;
    }
    slots_[i] = {stored, value};
    ++count_;
  }

  const uint32_t* find(uint64_t raw) const {
    if (slots_.empty()) return nullptr;
    uint64_t stored = raw + 1;
    size_t mask = slots_.size() - 1;
    size_t i = hash64_slot(stored, mask);
    while (slots_[i].first != 0) {
      if (slots_[i].first == stored) return &slots_[i].second;
      i = (i + 1) & mask;
    }
    return nullptr;
  }

  void clear() {
    std::fill(slots_.begin(), slots_.end(), std::pair<uint64_t, uint32_t>{0, 0});
    count_ = 0;
  }

  size_t size() const { return count_; }

 private:
  void grow() {
    std::vector<std::pair<uint64_t, uint32_t>> old = std::move(slots_);
    slots_.assign(old.empty() ? 64 : old.size() * 2, {0, 0});
    size_t mask = slots_.size() - 1;
    for (const auto& s : old) {
      if (s.first == 0) continue;
      size_t i = hash64_slot(s.first, mask);
      while (slots_[i].first != 0) i = (i + 1) & mask;
      slots_[i] = s;
    }
  }

  std::vector<std::pair<uint64_t, uint32_t>> slots_;
  size_t count_ = 0;
};

}  // namespace lbc
