#pragma once

// Vectors over Z_2 indexed by facet ids, with xor as addition.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace forge {

struct Z2Vector {
  int32_t size = 0;
  std::vector<uint64_t> bits;

  Z2Vector() = default;
  explicit Z2Vector(int32_t n) : size(n), bits(((size_t)n + 63) / 64, 0) {}

  static Z2Vector chi(int32_t n, int32_t f) {
    Z2Vector v(n);
    v.set(f, true);
    return v;
  }

  bool test(int32_t i) const {
    if (i < 0 || i >= size) throw std::out_of_range("Z2Vector::test");
    return (bits[(size_t)i / 64] >> (i % 64)) & 1;
  }
  void set(int32_t i, bool b) {
    if (i < 0 || i >= size) throw std::out_of_range("Z2Vector::set");
    uint64_t m = 1ull << (i % 64);
    if (b)
      bits[(size_t)i / 64] |= m;
    else
      bits[(size_t)i / 64] &= ~m;
  }
  void flip(int32_t i) { set(i, !test(i)); }

  Z2Vector& operator^=(const Z2Vector& o) {
    if (size != o.size) throw std::invalid_argument("Z2Vector: size mismatch");
    for (size_t w = 0; w < bits.size(); ++w) bits[w] ^= o.bits[w];
    return *this;
  }
  friend Z2Vector operator^(Z2Vector a, const Z2Vector& b) { return a ^= b; }

  bool operator==(const Z2Vector& o) const = default;
  bool operator<(const Z2Vector& o) const {
    if (size != o.size) return size < o.size;
    // compare by lowest index first so supp order matches
    for (size_t w = 0; w < bits.size(); ++w) {
      uint64_t ra = reverse_word(bits[w]), rb = reverse_word(o.bits[w]);
      if (ra != rb) return ra > rb;
    }
    return false;
  }

  bool is_zero() const {
    for (uint64_t w : bits)
      if (w) return false;
    return true;
  }
  int32_t popcount() const {
    int32_t n = 0;
    for (uint64_t w : bits) n += __builtin_popcountll(w);
    return n;
  }
  std::vector<int32_t> supp() const {
    std::vector<int32_t> out;
    for (int32_t i = 0; i < size; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  // value view for sizes up to 64, handy as a dense flag-block index
  uint64_t value() const {
    if (size > 64) throw std::out_of_range("Z2Vector::value: too wide");
    return bits.empty() ? 0 : bits[0];
  }
  static Z2Vector from_value(int32_t n, uint64_t v) {
    if (n > 64) throw std::out_of_range("Z2Vector::from_value: too wide");
    Z2Vector out(n);
    if (!out.bits.empty()) out.bits[0] = n == 64 ? v : (v & ((1ull << n) - 1));
    return out;
  }

 private:
  static uint64_t reverse_word(uint64_t w) {
    w = ((w >> 1) & 0x5555555555555555ull) | ((w & 0x5555555555555555ull) << 1);
    w = ((w >> 2) & 0x3333333333333333ull) | ((w & 0x3333333333333333ull) << 2);
    w = ((w >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((w & 0x0F0F0F0F0F0F0F0Full) << 4);
    w = ((w >> 8) & 0x00FF00FF00FF00FFull) | ((w & 0x00FF00FF00FF00FFull) << 8);
    w = ((w >> 16) & 0x0000FFFF0000FFFFull) | ((w & 0x0000FFFF0000FFFFull) << 16);
    return (w >> 32) | (w << 32);
  }
};

struct Z2VectorHash {
  size_t operator()(const Z2Vector& v) const {
    size_t h = std::hash<int32_t>()(v.size);
    for (uint64_t w : v.bits) h = h * 1099511628211ull + std::hash<uint64_t>()(w);
    return h;
  }
};

}  // namespace forge
