#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace sharplab {

/// Fixed-width bit vector backed by 64-bit words. Width is set at
/// construction; all circuit inputs, graph edge indicators and clause
/// indicators in this library are Bits values.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t width)
      : width_(width), words_((width + 63) / 64, 0) {}

  static Bits from_mask(std::uint64_t mask, std::size_t width) {
    Bits b(width);
    if (!b.words_.empty()) b.words_[0] = mask;
    return b;
  }

  static Bits from_ones(std::span<const std::uint32_t> ones, std::size_t width) {
    Bits b(width);
    for (auto i : ones) b.set(i);
    return b;
  }

  std::size_t size() const { return width_; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  void clear() { std::memset(words_.data(), 0, words_.size() * 8); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  std::vector<std::uint32_t> ones() const {
    std::vector<std::uint32_t> out;
    out.reserve(popcount());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        out.push_back(std::uint32_t(wi * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  bool operator==(const Bits& o) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sharplab
