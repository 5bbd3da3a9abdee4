#pragma once

// Permutations with an optional central involution bit.
//
// Convention used throughout: permutations act on the right, so the product
// a*b means "apply a, then b" and compose() implements exactly that.  The
// s bit is central and XORs under composition.

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace forge {

using Json = nlohmann::ordered_json;

// thrown when a computation refuses to proceed rather than approximate
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroupElement {
  std::vector<int32_t> perm;  // perm[i] = image of point i
  uint8_t s_bit = 0;

  GroupElement() = default;
  explicit GroupElement(std::vector<int32_t> p, uint8_t s = 0)
      : perm(std::move(p)), s_bit(s) {}

  static GroupElement identity(size_t degree) {
    GroupElement e;
    e.perm.resize(degree);
    std::iota(e.perm.begin(), e.perm.end(), 0);
    return e;
  }

  size_t degree() const { return perm.size(); }

  int32_t apply(int32_t point) const { return perm[point]; }

  bool is_identity() const {
    if (s_bit) return false;
    for (size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != (int32_t)i) return false;
    return true;
  }

  bool operator==(const GroupElement& o) const {
    return s_bit == o.s_bit && perm == o.perm;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
  bool operator<(const GroupElement& o) const {
    if (perm != o.perm) return perm < o.perm;
    return s_bit < o.s_bit;
  }
};

// apply a, then b
inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (a.degree() != b.degree())
    throw std::invalid_argument("compose: degree mismatch");
  GroupElement r;
  r.perm.resize(a.degree());
  for (size_t i = 0; i < a.perm.size(); ++i) r.perm[i] = b.perm[a.perm[i]];
  r.s_bit = a.s_bit ^ b.s_bit;
  return r;
}

inline GroupElement inverse(const GroupElement& g) {
  GroupElement r;
  r.perm.resize(g.degree());
  for (size_t i = 0; i < g.perm.size(); ++i) r.perm[g.perm[i]] = (int32_t)i;
  r.s_bit = g.s_bit;
  return r;
}

// order exactly 2
inline bool is_involution(const GroupElement& g) {
  return !g.is_identity() && compose(g, g).is_identity();
}

// perm must be a bijection of [0, degree)
inline bool is_valid_permutation(const GroupElement& g) {
  std::vector<char> seen(g.degree(), 0);
  for (int32_t v : g.perm) {
    if (v < 0 || v >= (int32_t)g.degree() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline size_t hash_value(const GroupElement& g) {
  size_t h = g.s_bit ? 0x9e3779b97f4a7c15ull : 0;
  for (int32_t v : g.perm) h = h * 1099511628211ull + (size_t)(v + 1);
  return h;
}

struct GroupElementHash {
  size_t operator()(const GroupElement& g) const { return hash_value(g); }
};

inline Json group_element_to_json(const GroupElement& g) {
  Json j;
  j["perm"] = g.perm;
  j["s"] = (int)g.s_bit;
  return j;
}

inline GroupElement group_element_from_json(const Json& j) {
  GroupElement g;
  g.perm = j.at("perm").get<std::vector<int32_t>>();
  g.s_bit = (uint8_t)j.value("s", 0);
  if (!is_valid_permutation(g))
    throw std::runtime_error("group element: perm is not a permutation");
  return g;
}

}  // namespace forge
