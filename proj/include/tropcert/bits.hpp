#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace tropcert {

// Growable bitset for zero sets of generators over constraint lists.
class Bits {
 public:
  void set(size_t i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] |= uint64_t{1} << (i % 64);
  }
  bool test(size_t i) const { return i / 64 < w_.size() && (w_[i / 64] >> (i % 64)) & 1; }

  size_t count() const {
    size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t other = i < o.w_.size() ? o.w_[i] : 0;
      if (w_[i] & ~other) return false;
    }
    return true;
  }

  friend Bits operator&(const Bits& a, const Bits& b) {
    Bits r;
    size_t n = std::min(a.w_.size(), b.w_.size());
    r.w_.resize(n);
    for (size_t i = 0; i < n; ++i) r.w_[i] = a.w_[i] & b.w_[i];
    return r;
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    size_t n = std::max(a.w_.size(), b.w_.size());
    for (size_t i = 0; i < n; ++i) {
      uint64_t x = i < a.w_.size() ? a.w_[i] : 0;
      uint64_t y = i < b.w_.size() ? b.w_[i] : 0;
      if (x != y) return false;
    }
    return true;
  }

 private:
  std::vector<uint64_t> w_;
};

}  // namespace tropcert
