#pragma once

// Concrete flag-graph builders: the square, torus quadrangulations
// {4,4}_(s,0), the facet-doubling M -> 2^M with its lifted symmetries, and
// the search for facet sets that break every symmetry.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/maniplex.hpp"
#include "forge/perm.hpp"
#include "forge/poset.hpp"
#include "forge/symmetry.hpp"
#include "forge/z2vector.hpp"

namespace forge {

inline Maniplex square_flag_graph() {
  Maniplex m;
  m.rank = 2;
  m.num_flags = 8;
  m.adj.assign(2, std::vector<int32_t>(8));
  for (int32_t f = 0; f < 8; ++f) {
    m.adj[0][f] = f ^ 1;
    m.adj[1][f] = (f % 2 == 1) ? (f + 1) % 8 : (f + 7) % 8;
  }
  return m;
}

// {4,4}_(s,0): s*s squares on the torus Z_s x Z_s.  Flag id 8*Q + 2*c + e
// where Q = qy*s + qx, c walks the corners SW,SE,NE,NW and e picks the
// horizontal (0) or vertical (1) edge at that corner.
inline Maniplex torus_map_44(int s) {
  if (s < 2) throw std::invalid_argument("torus_map_44: s must be at least 2");
  Maniplex m;
  m.rank = 3;
  m.num_flags = 8 * s * s;
  m.adj.assign(3, std::vector<int32_t>(m.num_flags));
  auto id = [&](int qx, int qy, int c, int e) {
    qx = (qx % s + s) % s;
    qy = (qy % s + s) % s;
    return 8 * (qy * s + qx) + 2 * c + e;
  };
  for (int qy = 0; qy < s; ++qy)
    for (int qx = 0; qx < s; ++qx)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 2; ++e) {
          int32_t f = id(qx, qy, c, e);
          m.adj[0][f] = id(qx, qy, e == 0 ? c ^ 1 : 3 - c, e);
          m.adj[1][f] = id(qx, qy, c, e ^ 1);
          if (e == 0)
            m.adj[2][f] = id(qx, qy + (c < 2 ? -1 : 1), 3 - c, 0);
          else
            m.adj[2][f] = id(qx + (c == 1 || c == 2 ? 1 : -1), qy, c ^ 1, 1);
        }
  return m;
}

// ---------------------------------------------------------------------------
// facet doubling

// 2^M with flags (phi, x) kept implicit: x ranges over facet-set vectors,
// colors below the base rank act on phi, the new top color adds chi_{Fac(phi)}.
struct Hat2Maniplex {
  Maniplex base;
  std::vector<int32_t> facet;  // facet id per base flag
  int32_t num_facets = 0;

  int rank() const { return base.rank + 1; }
  int64_t num_flags() const {
    return num_facets < 63 ? (int64_t)base.num_flags << num_facets : -1;
  }
};

inline Hat2Maniplex hat2_context(const Maniplex& m) {
  auto rep = validate_maniplex(m);
  if (!rep.ok())
    throw std::invalid_argument("hat2: " + rep.issues.front().describe());
  Hat2Maniplex h;
  h.base = m;
  h.facet = face_of_flag(m, m.rank - 1);
  h.num_facets = 1 + *std::max_element(h.facet.begin(), h.facet.end());
  return h;
}

constexpr int64_t kHat2FlagCap = (int64_t)1 << 24;

// materialized 2^M; flag id = x.value() * |F(M)| + phi
inline Maniplex hat2(const Maniplex& m, int64_t max_flags = kHat2FlagCap) {
  Hat2Maniplex h = hat2_context(m);
  if (h.num_facets > 40 || h.num_flags() > max_flags)
    throw InfeasibleError("hat2: " + std::to_string(m.num_flags) + " flags * 2^" +
                          std::to_string(h.num_facets) + " exceeds the cap");
  const int32_t n = m.num_flags;
  const int64_t blocks = (int64_t)1 << h.num_facets;
  Maniplex out;
  out.rank = m.rank + 1;
  out.num_flags = (int32_t)(blocks * n);
  out.adj.assign(out.rank, std::vector<int32_t>(out.num_flags));
  for (int64_t v = 0; v < blocks; ++v)
    for (int32_t f = 0; f < n; ++f) {
      int32_t flag = (int32_t)(v * n + f);
      for (int c = 0; c < m.rank; ++c) out.adj[c][flag] = (int32_t)(v * n) + m.adj[c][f];
      out.adj[m.rank][flag] = (int32_t)((v ^ (1ll << h.facet[f])) * n + f);
    }
  auto orep = validate_maniplex(out);
  if (!orep.ok())
    throw std::logic_error("hat2: output invalid: " + orep.issues.front().describe());
  return out;
}

// permutation the automorphism induces on facet ids
inline std::vector<int32_t> facet_action(const Hat2Maniplex& h, const GroupElement& sigma) {
  std::vector<int32_t> first(h.num_facets, -1);
  for (int32_t f = 0; f < h.base.num_flags; ++f)
    if (first[h.facet[f]] == -1) first[h.facet[f]] = f;
  std::vector<int32_t> pi(h.num_facets);
  for (int32_t F = 0; F < h.num_facets; ++F) pi[F] = h.facet[sigma.perm[first[F]]];
  return pi;
}

// supp(sigma^{-1} x) = supp(x) sigma
inline Z2Vector apply_facet_action(const std::vector<int32_t>& pi, const Z2Vector& x) {
  Z2Vector out((int32_t)pi.size());
  for (int32_t F = 0; F < x.size; ++F)
    if (x.test(F)) out.set(pi[F], true);
  return out;
}

// (phi, x) sigma = (phi sigma, sigma^{-1} x), on materialized flag ids
inline GroupElement lift_automorphism(const Hat2Maniplex& h, const GroupElement& sigma) {
  if (h.num_facets > 24) throw InfeasibleError("lift_automorphism: too many facets");
  {
    // sigma must commute with every color map of the base
    for (int c = 0; c < h.base.rank; ++c)
      for (int32_t f = 0; f < h.base.num_flags; ++f)
        if (sigma.perm[h.base.adj[c][f]] != h.base.adj[c][sigma.perm[f]])
          throw std::invalid_argument("lift_automorphism: not an automorphism");
  }
  auto pi = facet_action(h, sigma);
  const int32_t n = h.base.num_flags;
  const int64_t blocks = (int64_t)1 << h.num_facets;
  std::vector<int32_t> perm((size_t)(blocks * n));
  for (int64_t v = 0; v < blocks; ++v) {
    int64_t w = 0;
    for (int32_t F = 0; F < h.num_facets; ++F)
      if ((v >> F) & 1) w |= 1ll << pi[F];
    for (int32_t f = 0; f < n; ++f) perm[(size_t)(v * n + f)] = (int32_t)(w * n + sigma.perm[f]);
  }
  return GroupElement(perm);
}

// T_y: (phi, x) -> (phi, x + y)
inline GroupElement lift_translation(const Hat2Maniplex& h, const Z2Vector& y) {
  if (h.num_facets > 24) throw InfeasibleError("lift_translation: too many facets");
  if (y.size != h.num_facets)
    throw std::invalid_argument("lift_translation: vector size mismatch");
  const int32_t n = h.base.num_flags;
  const int64_t blocks = (int64_t)1 << h.num_facets;
  const int64_t yv = (int64_t)y.value();
  std::vector<int32_t> perm((size_t)(blocks * n));
  for (int64_t v = 0; v < blocks; ++v)
    for (int32_t f = 0; f < n; ++f) perm[(size_t)(v * n + f)] = (int32_t)((v ^ yv) * n + f);
  return GroupElement(perm);
}

// ---------------------------------------------------------------------------
// symmetry-breaking facet sets

// Smallest facet set (sorted ids, shortlex) that no non-trivial automorphism
// fixes setwise and that no union of two face closures contains.  nullopt when
// every candidate fails, as happens for the square.
inline std::optional<std::vector<int32_t>> find_separating_facet_set(const Maniplex& m) {
  FacePoset p = build_poset(m);
  const int32_t nf = p.counts[p.n];
  if (nf > 24)
    throw InfeasibleError("find_separating_facet_set: 2^" + std::to_string(nf) +
                          " subsets is out of reach");
  // closure masks for every proper face, then only the maximal pair unions
  std::vector<uint32_t> closures;
  for (int l = 1; l <= p.n; ++l)
    for (int32_t face = 0; face < p.counts[l]; ++face) {
      uint32_t mask = 0;
      for (int32_t F : closure(p, l - 1, face)) mask |= 1u << F;
      closures.push_back(mask);
    }
  std::vector<uint32_t> unions;
  for (size_t a = 0; a < closures.size(); ++a)
    for (size_t b = a; b < closures.size(); ++b) unions.push_back(closures[a] | closures[b]);
  std::sort(unions.begin(), unions.end());
  unions.erase(std::unique(unions.begin(), unions.end()), unions.end());
  std::vector<uint32_t> maximal;
  for (uint32_t u : unions) {
    bool dominated = false;
    for (uint32_t v : unions)
      if (v != u && (u & ~v) == 0) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(u);
  }
  // facet action of each non-trivial automorphism
  auto auts = automorphisms(m);
  std::vector<int32_t> first(nf, -1);
  for (int32_t f = 0; f < m.num_flags; ++f)
    if (first[p.flag_face[p.n][f]] == -1) first[p.flag_face[p.n][f]] = f;
  std::vector<std::vector<int32_t>> actions;
  for (const GroupElement& a : auts) {
    if (a.is_identity()) continue;
    std::vector<int32_t> pi(nf);
    for (int32_t F = 0; F < nf; ++F) pi[F] = p.flag_face[p.n][a.perm[first[F]]];
    actions.push_back(std::move(pi));
  }
  std::optional<std::vector<int32_t>> best;
  for (uint32_t S = 1; S < (1u << nf); ++S) {
    bool covered = false;
    for (uint32_t u : maximal)
      if ((S & ~u) == 0) {
        covered = true;
        break;
      }
    if (covered) continue;
    bool invariant = false;
    for (const auto& pi : actions) {
      uint32_t img = 0;
      for (int32_t F = 0; F < nf; ++F)
        if ((S >> F) & 1) img |= 1u << pi[F];
      if (img == S) {
        invariant = true;
        break;
      }
    }
    if (invariant) continue;
    std::vector<int32_t> ids;
    for (int32_t F = 0; F < nf; ++F)
      if ((S >> F) & 1) ids.push_back(F);
    if (!best || ids < *best) best = std::move(ids);
  }
  return best;
}

inline std::vector<int32_t> find_S3(const Maniplex& m3) {
  if (m3.num_flags != 128 || !is_isomorphic(m3, torus_map_44(4)))
    throw std::invalid_argument("find_S3: base is not the 4x4 torus quadrangulation");
  auto s = find_separating_facet_set(m3);
  if (!s) throw std::logic_error("find_S3: exhaustive search found nothing");
  return *s;
}

// facet-set vectors {chi_F | F in S} plus the zero vector
inline std::vector<Z2Vector> hat_S(int32_t num_facets, const std::vector<int32_t>& S) {
  std::vector<Z2Vector> out;
  for (int32_t F : S) out.push_back(Z2Vector::chi(num_facets, F));
  out.push_back(Z2Vector(num_facets));
  return out;
}

}  // namespace forge
