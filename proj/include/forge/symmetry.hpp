#pragma once

// Automorphisms (flag permutations commuting with every color map), flag
// orbits, and symmetry type graphs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/maniplex.hpp"
#include "forge/perm.hpp"
#include "forge/premaniplex.hpp"

namespace forge {

// Complete automorphism list by anchored propagation: fix the image of
// flag 0 and push it along every color; connectivity settles the rest.
// The identity is always first; the rest are ordered by the image of
// flag 0.
inline std::vector<GroupElement> automorphisms(const Maniplex& m,
                                               int32_t max_flags = 200000) {
  {
    auto rep = validate_maniplex(m);
    if (!rep.ok())
      throw std::invalid_argument("automorphisms: " + rep.issues.front().describe());
  }
  if (m.num_flags > max_flags)
    throw InfeasibleError("automorphisms: " + std::to_string(m.num_flags) +
                          " flags exceed the propagation budget");
  std::vector<GroupElement> out;
  std::vector<int32_t> img((size_t)m.num_flags);
  std::vector<int32_t> stack;
  for (int32_t target = 0; target < m.num_flags; ++target) {
    std::fill(img.begin(), img.end(), (int32_t)-1);
    img[0] = target;
    stack.assign(1, 0);
    bool good = true;
    while (good && !stack.empty()) {
      int32_t f = stack.back();
      stack.pop_back();
      for (int c = 0; c < m.rank && good; ++c) {
        int32_t g = m.adj[c][f];
        int32_t want = m.adj[c][img[f]];
        if (img[g] == -1) {
          img[g] = want;
          stack.push_back(g);
        } else if (img[g] != want) {
          good = false;
        }
      }
    }
    if (!good) continue;
    GroupElement a(img);
    if (!is_valid_permutation(a)) continue;
    out.push_back(std::move(a));
  }
  // sanity: the action is free and the order divides the flag count
  for (const GroupElement& a : out) {
    if (a.is_identity()) continue;
    for (int32_t f = 0; f < m.num_flags; ++f)
      if (a.perm[f] == f)
        throw std::logic_error("automorphisms: non-identity element fixes a flag");
  }
  if (m.num_flags % (int32_t)out.size() != 0)
    throw std::logic_error("automorphisms: order does not divide the flag count");
  return out;
}

// orbit index per flag, numbered by first appearance
inline std::vector<int32_t> flag_orbits(const Maniplex& m,
                                        const std::vector<GroupElement>& auts) {
  std::vector<int32_t> orbit((size_t)m.num_flags, -1);
  int32_t next = 0;
  for (int32_t f = 0; f < m.num_flags; ++f) {
    if (orbit[f] != -1) continue;
    for (const GroupElement& a : auts) orbit[a.perm[f]] = next;
    ++next;
  }
  return orbit;
}

inline int32_t orbit_count(const std::vector<int32_t>& orbits) {
  int32_t k = 0;
  for (int32_t o : orbits) k = std::max(k, o + 1);
  return k;
}

inline bool is_regular(const Maniplex& m) {
  auto auts = automorphisms(m);
  return orbit_count(flag_orbits(m, auts)) == 1;
}

// quotient by the automorphism group; vertex v, color c gets dart v*rank+c
inline Premaniplex symmetry_type_graph(const Maniplex& m,
                                       const std::vector<GroupElement>& auts) {
  std::vector<int32_t> orbit = flag_orbits(m, auts);
  int32_t k = orbit_count(orbit);
  // orbit adjacency must be well defined: every flag of an orbit agrees
  std::vector<std::vector<int32_t>> to((size_t)k, std::vector<int32_t>(m.rank, -1));
  for (int32_t f = 0; f < m.num_flags; ++f)
    for (int c = 0; c < m.rank; ++c) {
      int32_t img = orbit[m.adj[c][f]];
      int32_t& slot = to[orbit[f]][c];
      if (slot == -1)
        slot = img;
      else if (slot != img)
        throw std::logic_error("symmetry_type_graph: quotient is not a covering");
    }
  Premaniplex x;
  x.rank = m.rank;
  x.num_vertices = k;
  x.darts.resize((size_t)k * m.rank);
  for (int32_t v = 0; v < k; ++v)
    for (int c = 0; c < m.rank; ++c) {
      Dart d;
      d.id = v * m.rank + c;
      d.color = c;
      d.from = v;
      d.to = to[v][c];
      d.inv = d.to * m.rank + c;
      x.darts[d.id] = d;
    }
  auto rep = validate_premaniplex(x);
  if (!rep.ok())
    throw std::logic_error("symmetry_type_graph: " + rep.issues.front().what);
  return x;
}

inline Premaniplex symmetry_type_graph(const Maniplex& m) {
  return symmetry_type_graph(m, automorphisms(m));
}

}  // namespace forge
