#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kronrank {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Mask of the valid bits in the last word of a row of `bits` bits.
constexpr Word tail_mask(std::size_t bits) {
  const std::size_t r = bits % kWordBits;
  return r == 0 ? ~Word{0} : (Word{1} << r) - 1;
}

// Calls f(index) for every set bit, in increasing order.
template <typename F>
void for_each_bit(std::span<const Word> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    Word x = words[w];
    while (x) {
      const int b = std::countr_zero(x);
      f(w * kWordBits + static_cast<std::size_t>(b));
      x &= x - 1;
    }
  }
}

inline bool words_subset(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

inline bool words_any(std::span<const Word> a) {
  for (Word w : a)
    if (w) return true;
  return false;
}

inline std::size_t words_popcount(std::span<const Word> a) {
  std::size_t n = 0;
  for (Word w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// Fixed-size dynamic bitset. Bits past size() are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : size_(n), words_(words_for(n), 0) {}

  std::size_t size() const noexcept { return size_; }
  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void set_all() {
    for (auto& w : words_) w = ~Word{0};
    if (!words_.empty()) words_.back() &= tail_mask(size_);
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const { return words_popcount(words_); }
  bool any() const { return words_any(words_); }
  bool none() const { return !any(); }
  bool all() const { return count() == size_; }

  bool subset_of(const BitVector& other) const { return words_subset(words_, other.words_); }

  BitVector& operator|=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for_each_bit(words(), [&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace kronrank
