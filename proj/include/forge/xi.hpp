#pragma once

// Voltage assignments on the two-vertex premaniplexes: the facet-scattering
// monodromy eta, base edges, the per-facet reflections rho0, and the xi /
// xi-prime case tables.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/constructions.hpp"
#include "forge/maniplex.hpp"
#include "forge/perm.hpp"
#include "forge/premaniplex.hpp"
#include "forge/symmetry.hpp"
#include "forge/voltage.hpp"
#include "forge/z2vector.hpp"

namespace forge {

// r_2 r_1 r_0 r_1 r_2 r_1 r_2 r_1 on the 8x8 torus quadrangulation, applied
// left to right.  Sends the flags of each square to the squares a knight
// reaches from it.
inline GroupElement eta_knight(const Maniplex& m) {
  if (m.num_flags != 512 || !is_isomorphic(m, torus_map_44(8)))
    throw std::invalid_argument("eta_knight: base is not the 8x8 torus quadrangulation");
  const std::vector<int> word{2, 1, 0, 1, 2, 1, 2, 1};
  std::vector<int32_t> perm(m.num_flags);
  for (int32_t f = 0; f < m.num_flags; ++f) perm[f] = apply_word(m, word, f);
  GroupElement eta(perm);
  if (!is_involution(eta)) throw std::logic_error("eta_knight: not an involution");
  auto facet = face_of_flag(m, 2);
  std::vector<std::vector<int32_t>> images(64);
  for (int32_t f = 0; f < m.num_flags; ++f) {
    int32_t g = facet[eta.perm[f]];
    if (g == facet[f]) throw std::logic_error("eta_knight: a flag stays in its facet");
    images[facet[f]].push_back(g);
  }
  for (auto& v : images) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw std::logic_error("eta_knight: two flags of a facet land in the same facet");
  }
  return eta;
}

// eta for a doubled maniplex: (psi, x) -> (psi, x ^ mask[psi])
struct EtaTable {
  std::vector<Z2Vector> mask;
};

// The flag coordinate is untouched, so the square is the identity by shape;
// the content is in the masks: mask[psi] covers S gamma_psi, the image of S
// under the automorphism taking the base flag to psi.
inline EtaTable eta_from_S(const Hat2Maniplex& h, const std::vector<int32_t>& S) {
  const Maniplex& m = h.base;
  auto auts = automorphisms(m);
  if ((int32_t)auts.size() != m.num_flags)
    throw std::invalid_argument("eta_from_S: base is not regular");
  for (int32_t F : S)
    if (F < 0 || F >= h.num_facets)
      throw std::invalid_argument("eta_from_S: bad facet id");
  std::vector<std::vector<int32_t>> actions;
  for (const GroupElement& a : auts) actions.push_back(facet_action(h, a));
  std::vector<char> in_S(h.num_facets, 0);
  for (int32_t F : S) in_S[F] = 1;
  for (size_t i = 0; i < auts.size(); ++i) {
    if (auts[i].is_identity()) continue;
    bool fixes = true;
    for (int32_t F : S)
      if (!in_S[actions[i][F]]) {
        fixes = false;
        break;
      }
    if (fixes)
      throw std::invalid_argument("eta_from_S: facet set is invariant under a non-trivial automorphism");
  }
  // regular action: gamma_psi is the one automorphism taking flag 0 to psi
  std::vector<int32_t> gamma_of(m.num_flags, -1);
  for (size_t i = 0; i < auts.size(); ++i) gamma_of[auts[i].perm[0]] = (int32_t)i;
  EtaTable t;
  t.mask.resize(m.num_flags, Z2Vector(h.num_facets));
  for (int32_t psi = 0; psi < m.num_flags; ++psi) {
    const auto& pi = actions[gamma_of[psi]];
    for (int32_t F : S) t.mask[psi].flip(pi[F]);
  }
  // cross-check against the flag-wise formula: walk the base flag to a fixed
  // flag of each F in S, replay the word from psi, and read off the facet
  {
    std::vector<int32_t> parent_flag(m.num_flags, -1), parent_color(m.num_flags, -1);
    std::vector<int32_t> order{0};
    for (size_t q = 0; q < order.size(); ++q)
      for (int c = 0; c < m.rank; ++c) {
        int32_t g = m.adj[c][order[q]];
        if (g != 0 && parent_flag[g] == -1) {
          parent_flag[g] = order[q];
          parent_color[g] = c;
          order.push_back(g);
        }
      }
    auto word_to = [&](int32_t flag) {
      std::vector<int> w;
      for (int32_t f = flag; f != 0; f = parent_flag[f]) w.push_back(parent_color[f]);
      std::reverse(w.begin(), w.end());
      return w;
    };
    std::vector<int32_t> first(h.num_facets, -1);
    for (int32_t f = 0; f < m.num_flags; ++f)
      if (first[h.facet[f]] == -1) first[h.facet[f]] = f;
    for (int32_t F : S) {
      std::vector<int> w = word_to(first[F]);
      for (int32_t psi = 0; psi < m.num_flags; ++psi) {
        int32_t landed = h.facet[apply_word(m, w, psi)];
        if (landed != actions[gamma_of[psi]][F])
          throw std::logic_error("eta_from_S: automorphism route disagrees with the word route");
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// base edges for a doubled maniplex

// Edge id of the base flag for every facet vector: the one fixed edge e
// unless supp(x) is a copy S*gamma, which forces e*gamma instead.
struct BaseEdgeTable {
  int32_t e = -1;
  int32_t base_flag = 0;
  std::unordered_map<Z2Vector, int32_t, Z2VectorHash> copy_edge;

  int32_t query(const Z2Vector& x) const {
    auto it = copy_edge.find(x);
    return it == copy_edge.end() ? e : it->second;
  }
};

inline BaseEdgeTable base_edges(const Hat2Maniplex& h, const std::vector<int32_t>& S,
                                const EtaTable& eta) {
  const Maniplex& m = h.base;
  auto edge_of = face_of_flag(m, 1);
  BaseEdgeTable t;
  t.base_flag = 0;
  t.e = edge_of[0];
  auto auts = automorphisms(m);
  for (const GroupElement& a : auts) {
    Z2Vector key(h.num_facets);
    auto pi = facet_action(h, a);
    for (int32_t F : S) key.flip(pi[F]);
    int32_t val = edge_of[a.perm[t.base_flag]];
    auto [it, inserted] = t.copy_edge.emplace(key, val);
    if (!inserted)
      throw std::logic_error("base_edges: two automorphisms give the same copy of S");
  }
  // the eta-forced facets already obey the table: for black psi in the base
  // facet, the facet at eta(psi, 0) must base its edge on psi's edge
  auto fc = two_coloring(m, {0});
  if (!fc) throw std::logic_error("base_edges: base admits no flip-0 coloring");
  for (int32_t psi : fc->black_flags)
    if (t.query(eta.mask[psi]) != edge_of[psi])
      throw std::logic_error("base_edges: table contradicts an eta-forced base edge");
  return t;
}

// ---------------------------------------------------------------------------
// reflections

// Automorphism of the facet subgraph (all colors below the top) sending the
// anchor to its 0-adjacent flag; writes images only inside the facet.
inline void facet_reflection_into(const Maniplex& m, int32_t anchor,
                                  std::vector<int32_t>& img) {
  std::vector<int32_t> stack{anchor};
  if (img[anchor] != -1) throw std::logic_error("facet_reflection: anchor already set");
  img[anchor] = m.adj[0][anchor];
  while (!stack.empty()) {
    int32_t f = stack.back();
    stack.pop_back();
    for (int c = 0; c + 1 < m.rank; ++c) {
      int32_t g = m.adj[c][f];
      int32_t want = m.adj[c][img[f]];
      if (img[g] == -1) {
        img[g] = want;
        stack.push_back(g);
      } else if (img[g] != want) {
        throw std::logic_error("facet_reflection: propagation inconsistent");
      }
    }
  }
}

// One reflection per facet, anchored on the flags of the chosen base edges.
inline GroupElement facet_reflections(const Maniplex& m,
                                      const std::vector<int32_t>& facet_of,
                                      const std::vector<int32_t>& edge_of,
                                      const std::vector<int32_t>& base_edge) {
  int32_t nf = 1 + *std::max_element(facet_of.begin(), facet_of.end());
  if ((int32_t)base_edge.size() != nf)
    throw std::invalid_argument("facet_reflections: one base edge per facet required");
  std::vector<int32_t> anchor(nf, -1);
  for (int32_t f = 0; f < m.num_flags; ++f)
    if (anchor[facet_of[f]] == -1 && edge_of[f] == base_edge[facet_of[f]])
      anchor[facet_of[f]] = f;
  std::vector<int32_t> img(m.num_flags, -1);
  for (int32_t F = 0; F < nf; ++F) {
    if (anchor[F] == -1)
      throw std::invalid_argument("facet_reflections: base edge misses its facet");
    facet_reflection_into(m, anchor[F], img);
  }
  for (int32_t f = 0; f < m.num_flags; ++f)
    if (img[f] == -1) throw std::logic_error("facet_reflections: a flag was never reached");
  return GroupElement(img);
}

// Global automorphism anchored the same way; exists whenever the maniplex is
// reflexible across that edge.  Used for the facets of an implicit doubling,
// which are copies of the whole base.
inline GroupElement reflection_through(const Maniplex& m, int32_t anchor) {
  std::vector<int32_t> img(m.num_flags, -1);
  img[anchor] = m.adj[0][anchor];
  std::vector<int32_t> stack{anchor};
  while (!stack.empty()) {
    int32_t f = stack.back();
    stack.pop_back();
    for (int c = 0; c < m.rank; ++c) {
      int32_t g = m.adj[c][f];
      int32_t want = m.adj[c][img[f]];
      if (img[g] == -1) {
        img[g] = want;
        stack.push_back(g);
      } else if (img[g] != want) {
        throw std::logic_error("reflection_through: no automorphism swaps that edge");
      }
    }
  }
  GroupElement out(img);
  if (!is_involution(out)) throw std::logic_error("reflection_through: not an involution");
  return out;
}

// ---------------------------------------------------------------------------
// the rank-4 pipeline over the 8x8 torus

struct TorusPipeline {
  Maniplex m;  // torus_map_44(8)
  GroupElement eta;
  std::vector<int32_t> facet_of, edge_of;
  int32_t base_facet = -1;
  std::vector<int32_t> base_edge;  // per facet
  std::vector<char> eta_forced;    // per facet
  GroupElement rho0;
  GroupElement r(int c) const { return GroupElement(m.adj[c]); }
};

// Base edges: flag 0 anchors the base facet; the four facets reached by
// r0-eta-r0 from the white flags of the base facet take the forced edge; all
// other facets copy the base choice through the grid translation, realized by
// reusing the local flag index inside each square block.
inline TorusPipeline build_torus_pipeline() {
  TorusPipeline t;
  t.m = torus_map_44(8);
  t.eta = eta_knight(t.m);
  t.facet_of = face_of_flag(t.m, 2);
  t.edge_of = face_of_flag(t.m, 1);
  const int32_t nf = 64;
  t.base_facet = t.facet_of[0];
  t.base_edge.assign(nf, -1);
  t.eta_forced.assign(nf, 0);
  for (int32_t F = 0; F < nf; ++F) {
    if (t.facet_of[8 * F] != F)
      throw std::logic_error("build_torus_pipeline: block layout broken");
    t.base_edge[F] = t.edge_of[8 * F];
  }
  auto fc = two_coloring(t.m, {0});
  if (!fc) throw std::logic_error("build_torus_pipeline: no flip-0 coloring");
  for (int32_t psi : fc->white_flags) {
    if (t.facet_of[psi] != t.base_facet) continue;
    int32_t g = t.m.adj[0][t.eta.perm[t.m.adj[0][psi]]];
    int32_t F = t.facet_of[g];
    if (F == t.base_facet)
      throw std::logic_error("build_torus_pipeline: eta forced the base facet");
    if (t.eta_forced[F])
      throw std::logic_error("build_torus_pipeline: facet forced twice");
    t.eta_forced[F] = 1;
    t.base_edge[F] = t.edge_of[g];
  }
  t.rho0 = facet_reflections(t.m, t.facet_of, t.edge_of, t.base_edge);
  return t;
}

// ---------------------------------------------------------------------------
// xi and xi-prime

enum class XiVariant { Xi, XiPrime };

struct XiResult {
  VoltageAssignment xi;
  FlagColoring coloring;            // over the base flags
  std::vector<int32_t> white_index; // base flag -> white ordinal, -1 for black
};

namespace detail {
inline GroupElement restrict_to_white(const GroupElement& g, const FlagColoring& fc,
                                      const std::vector<int32_t>& widx) {
  std::vector<int32_t> perm(fc.white_flags.size());
  for (size_t i = 0; i < fc.white_flags.size(); ++i) {
    int32_t img = g.perm[fc.white_flags[i]];
    if (widx[img] == -1)
      throw std::logic_error("xi_assignment: a voltage does not preserve the coloring");
    perm[i] = widx[img];
  }
  GroupElement out(perm, g.s_bit);
  return out;
}
}  // namespace detail

// Case table on the two-vertex premaniplex with semi-edge colors I: identity
// on color 0, r_i / r0 r_i r0 on the white / black semi-edges, r0 r_i and
// r_i r0 on the links, and y = rho0 r0 on the top color (with the extra
// central bit set for the primed variant).
inline XiResult xi_assignment(const Premaniplex& x, const Maniplex& m,
                              const GroupElement& rho0, XiVariant variant) {
  const int n = x.rank - 1;
  if (m.rank != n)
    throw std::invalid_argument("xi_assignment: base rank must be one below the premaniplex rank");
  if (x.num_vertices != 2)
    throw std::invalid_argument("xi_assignment: expected the two-vertex premaniplex");
  auto semi_at = [&](int c, int32_t v) {
    return x.darts[x.dart_at(v, c)].is_semi_edge();
  };
  if (semi_at(0, 0) || semi_at(n, 0))
    throw std::invalid_argument("xi_assignment: colors 0 and n must be links");
  std::vector<int> flips;
  for (int c = 0; c < n; ++c)
    if (!semi_at(c, 0)) flips.push_back(c);
  auto fc = two_coloring(m, flips);
  if (!fc)
    throw std::invalid_argument(
        "xi_assignment: base does not cover the quotient: no two-coloring flips "
        "exactly the link colors");
  std::vector<int32_t> widx(m.num_flags, -1);
  for (size_t i = 0; i < fc->white_flags.size(); ++i) widx[fc->white_flags[i]] = (int32_t)i;

  std::vector<GroupElement> r;
  for (int c = 0; c < n; ++c) r.push_back(GroupElement(m.adj[c]));
  GroupElement y = compose(rho0, r[0]);
  if (variant == XiVariant::XiPrime) y.s_bit = 1;

  XiResult out;
  out.coloring = *fc;
  out.white_index = widx;
  out.xi.degree = (int)fc->white_flags.size();
  out.xi.xi.assign(x.darts.size(), GroupElement::identity(out.xi.degree));
  auto put = [&](int32_t dart, const GroupElement& g) {
    out.xi.xi[dart] = detail::restrict_to_white(g, *fc, widx);
  };
  for (const Dart& d : x.darts) {
    if (d.color == 0) {
      put(d.id, GroupElement::identity(m.num_flags));
    } else if (d.color == n) {
      put(d.id, y);
    } else if (d.is_semi_edge()) {
      put(d.id, d.from == 0 ? r[d.color] : compose(compose(r[0], r[d.color]), r[0]));
    } else {
      put(d.id, d.from == 0 ? compose(r[0], r[d.color]) : compose(r[d.color], r[0]));
    }
  }
  auto rep = validate_voltage(x, out.xi);
  if (!rep.ok())
    throw std::logic_error("xi_assignment: " + rep.issues.front().what);
  return out;
}

// ---------------------------------------------------------------------------

// All I whose complement has one or two elements or is an interval; these are
// the symmetry classes the doubling pipeline is known to reach.
inline std::vector<std::vector<int>> enumerate_covered_classes(int n) {
  if (n < 3) throw std::invalid_argument("enumerate_covered_classes: rank below 3");
  if (n > 30) throw std::invalid_argument("enumerate_covered_classes: rank too large");
  std::vector<uint32_t> masks;
  const uint32_t full = (n == 32 ? ~0u : (1u << n) - 1);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      uint32_t interval = 0;
      for (int c = a; c <= b; ++c) interval |= 1u << c;
      masks.push_back(full & ~interval);  // complement is the interval [a,b]
    }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) masks.push_back(full & ~(1u << a) & ~(1u << b));
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::vector<int>> out;
  for (uint32_t mask : masks) {
    std::vector<int> I;
    for (int c = 0; c < n; ++c)
      if ((mask >> c) & 1) I.push_back(c);
    out.push_back(std::move(I));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace forge
