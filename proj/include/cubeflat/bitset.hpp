#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cubeflat {

// Fixed-length bit vector sized at runtime. Used for hyperplane signatures
// and wall orientations, where set bit = right side.
class DynamicBitset {
 public:
  DynamicBitset() = default;
  explicit DynamicBitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  // Number of positions where the two vectors differ.
  std::size_t hamming(const DynamicBitset& other) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    }
    return n;
  }

  static DynamicBitset majority(const DynamicBitset& a, const DynamicBitset& b,
                                const DynamicBitset& c) {
    DynamicBitset out(a.size_);
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
      const auto x = a.words_[i], y = b.words_[i], z = c.words_[i];
      out.words_[i] = (x & y) | (y & z) | (x & z);
    }
    return out;
  }

  bool any() const {
    for (auto w : words_) {
      if (w != 0) return true;
    }
    return false;
  }

  DynamicBitset& operator&=(const DynamicBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  DynamicBitset& operator|=(const DynamicBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  DynamicBitset& operator^=(const DynamicBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) { return a &= b; }
  friend DynamicBitset operator|(DynamicBitset a, const DynamicBitset& b) { return a |= b; }
  friend DynamicBitset operator^(DynamicBitset a, const DynamicBitset& b) { return a ^= b; }

  // All bits set in the first `size()` positions.
  static DynamicBitset ones(std::size_t size) {
    DynamicBitset b(size);
    for (std::size_t i = 0; i < size; ++i) b.set(i);
    return b;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const DynamicBitset&, const DynamicBitset&) = default;
  friend auto operator<=>(const DynamicBitset& a, const DynamicBitset& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct DynamicBitsetHash {
  std::size_t operator()(const DynamicBitset& b) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ b.size();
    for (auto w : b.words()) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace cubeflat
