#pragma once

// Face posets of maniplexes and the direct polytopality oracle.
//
// A FacePoset stores faces by rank -1..n with the covering relation between
// consecutive ranks; the order relation is the transitive closure of the
// covering pairs.  Levels index ranks shifted by one: level l = rank l-1.
// Flags double as maximal chains: flag_face[l][f] is the face of flag f at
// level l.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/maniplex.hpp"

namespace forge {

// row-major boolean matrix over 64-bit words
struct BitMatrix {
  int32_t rows = 0, cols = 0;
  size_t wpr = 0;
  std::vector<uint64_t> bits;

  BitMatrix() = default;
  BitMatrix(int32_t r, int32_t c)
      : rows(r), cols(c), wpr(((size_t)c + 63) / 64), bits((size_t)r * wpr, 0) {}
  void set(int32_t r, int32_t c) {
    bits[(size_t)r * wpr + (size_t)c / 64] |= 1ull << (c % 64);
  }
  bool get(int32_t r, int32_t c) const {
    return (bits[(size_t)r * wpr + (size_t)c / 64] >> (c % 64)) & 1;
  }
  const uint64_t* row(int32_t r) const { return &bits[(size_t)r * wpr]; }
  uint64_t* row(int32_t r) { return &bits[(size_t)r * wpr]; }
  bool operator==(const BitMatrix& o) const {
    return rows == o.rows && cols == o.cols && bits == o.bits;
  }
};

inline BitMatrix bm_product(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows, b.cols);
  for (int32_t r = 0; r < a.rows; ++r) {
    uint64_t* orow = out.row(r);
    const uint64_t* arow = a.row(r);
    for (int32_t k = 0; k < a.cols; ++k)
      if ((arow[k / 64] >> (k % 64)) & 1) {
        const uint64_t* brow = b.row(k);
        for (size_t w = 0; w < b.wpr; ++w) orow[w] |= brow[w];
      }
  }
  return out;
}

inline BitMatrix bm_transpose(const BitMatrix& a) {
  BitMatrix out(a.cols, a.rows);
  for (int32_t r = 0; r < a.rows; ++r)
    for (int32_t c = 0; c < a.cols; ++c)
      if (a.get(r, c)) out.set(c, r);
  return out;
}

inline int popcount_and(const uint64_t* a, const uint64_t* b, size_t words) {
  int n = 0;
  for (size_t w = 0; w < words; ++w) n += __builtin_popcountll(a[w] & b[w]);
  return n;
}

struct FacePoset {
  int n = 0;                    // rank: proper faces live at ranks 0..n-1
  std::vector<int32_t> counts;  // counts[l] = number of faces at level l
  // covering[l] = pairs (id at level l-1, id at level l), for l in 1..n+1
  std::vector<std::vector<std::pair<int32_t, int32_t>>> covering;
  // flag_face[l][f] = face of flag f at level l; empty until built/derived
  std::vector<std::vector<int32_t>> flag_face;

  int levels() const { return n + 2; }
  int32_t num_flags() const {
    return flag_face.empty() ? 0 : (int32_t)flag_face[0].size();
  }
};

inline FacePoset build_poset(const Maniplex& m) {
  FacePoset p;
  p.n = m.rank;
  p.counts.assign(p.levels(), 0);
  p.counts[0] = 1;
  p.counts[p.n + 1] = 1;
  p.flag_face.assign(p.levels(), std::vector<int32_t>(m.num_flags, 0));
  for (int i = 0; i < m.rank; ++i) {
    auto fav = face_of_flag(m, i);
    p.counts[i + 1] = 1 + *std::max_element(fav.begin(), fav.end());
    p.flag_face[i + 1] = std::move(fav);
  }
  p.covering.assign(p.levels(), {});
  for (int l = 1; l <= p.n + 1; ++l) {
    std::vector<std::pair<int32_t, int32_t>> pairs((size_t)m.num_flags);
    for (int32_t f = 0; f < m.num_flags; ++f)
      pairs[f] = {p.flag_face[l - 1][f], p.flag_face[l][f]};
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    p.covering[l] = std::move(pairs);
  }
  return p;
}

inline BitMatrix covering_matrix(const FacePoset& p, int l) {
  BitMatrix m(p.counts[l - 1], p.counts[l]);
  for (auto [a, b] : p.covering[l]) m.set(a, b);
  return m;
}

// strict order between levels la < lb, as the closure of covering steps
inline BitMatrix order_matrix(const FacePoset& p, int la, int lb) {
  BitMatrix acc = covering_matrix(p, la + 1);
  for (int l = la + 2; l <= lb; ++l) acc = bm_product(acc, covering_matrix(p, l));
  return acc;
}

struct DiamondViolation {
  int rank_low;
  int32_t low;
  int rank_high;
  int32_t high;
  int32_t middle_count;
};

struct DiamondReport {
  std::vector<DiamondViolation> violations;
  bool ok() const { return violations.empty(); }
};

// every incident pair with rank gap 2 must have exactly two faces between
inline DiamondReport check_diamond(const FacePoset& p) {
  DiamondReport rep;
  for (int la = 0; la + 2 <= p.n + 1; ++la) {
    int lb = la + 2;
    BitMatrix lo = covering_matrix(p, la + 1);
    BitMatrix hi = covering_matrix(p, lb);
    BitMatrix hiT = bm_transpose(hi);
    BitMatrix gap = bm_product(lo, hi);
    for (int32_t f = 0; f < p.counts[la]; ++f)
      for (int32_t g = 0; g < p.counts[lb]; ++g) {
        if (!gap.get(f, g)) continue;
        int c = popcount_and(lo.row(f), hiT.row(g), lo.wpr);
        if (c != 2) rep.violations.push_back({la - 1, f, lb - 1, g, (int32_t)c});
      }
  }
  return rep;
}

struct ChainDerivation {
  bool flagged = true;  // every maximal chain reached the top level
  bool capped = false;
  size_t count = 0;
};

// Enumerate maximal chains bottom-up through the covering relation and store
// them as the poset's flags.  Chains that get stuck before the top level are
// flaggedness violations; past cap the result is marked capped and nothing
// is stored.
inline ChainDerivation derive_chains(FacePoset& p, size_t cap) {
  std::vector<std::vector<std::vector<int32_t>>> succ(p.levels() - 1);
  for (int l = 1; l <= p.n + 1; ++l) {
    succ[l - 1].assign(p.counts[l - 1], {});
    for (auto [a, b] : p.covering[l]) succ[l - 1][a].push_back(b);
  }
  ChainDerivation rep;
  std::vector<std::vector<int32_t>> chains;
  std::vector<int32_t> cur(p.levels(), 0);
  std::function<bool(int)> rec = [&](int l) -> bool {
    if (l == p.levels()) {
      if (chains.size() >= cap) {
        rep.capped = true;
        return false;
      }
      chains.push_back(cur);
      return true;
    }
    const auto& ss = succ[l - 1][cur[l - 1]];
    if (ss.empty()) {
      rep.flagged = false;  // maximal chain shorter than n+2
      return true;
    }
    for (int32_t nxt : ss) {
      cur[l] = nxt;
      if (!rec(l + 1)) return false;
    }
    return true;
  };
  rec(1);
  rep.count = chains.size();
  if (rep.capped || !rep.flagged) return rep;
  p.flag_face.assign(p.levels(), std::vector<int32_t>(chains.size()));
  for (size_t f = 0; f < chains.size(); ++f)
    for (int l = 0; l < p.levels(); ++l) p.flag_face[l][f] = chains[f][l];
  return rep;
}

// For each proper rank i, the unique other flag sharing every face except the
// rank-i one.  nullopt when some group does not have exactly two members.
inline std::optional<std::vector<std::vector<int32_t>>> chain_partners(
    const FacePoset& p) {
  const int32_t K = p.num_flags();
  if (K == 0) return std::nullopt;
  std::vector<std::vector<int32_t>> partner(p.n, std::vector<int32_t>(K, -1));
  std::vector<int32_t> idx(K);
  for (int i = 0; i < p.n; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    auto key_less = [&](int32_t x, int32_t y) {
      for (int l = 1; l <= p.n; ++l) {
        if (l == i + 1) continue;
        if (p.flag_face[l][x] != p.flag_face[l][y])
          return p.flag_face[l][x] < p.flag_face[l][y];
      }
      return false;
    };
    auto key_eq = [&](int32_t x, int32_t y) {
      return !key_less(x, y) && !key_less(y, x);
    };
    std::sort(idx.begin(), idx.end(), key_less);
    for (int32_t k = 0; k < K;) {
      int32_t j = k;
      while (j < K && key_eq(idx[k], idx[j])) ++j;
      if (j - k != 2) return std::nullopt;
      partner[i][idx[k]] = idx[k + 1];
      partner[i][idx[k + 1]] = idx[k];
      k = j;
    }
  }
  return partner;
}

struct FlagConnReport {
  std::vector<std::pair<int32_t, int32_t>> failing_pairs;
  bool ok() const { return failing_pairs.empty(); }
};

// Strong flag-connectedness on the flag graph: flags Phi, Psi must be joined
// by adjacencies using only the ranks where they differ.  Components are
// precomputed per rank subset, so the pair sweep is O(N^2 * n).
inline FlagConnReport check_strong_flag_connected(const FacePoset& p) {
  if (!check_diamond(p).ok())
    throw std::invalid_argument(
        "check_strong_flag_connected: diamond condition violated");
  auto partner = chain_partners(p);
  if (!partner)
    throw std::invalid_argument(
        "check_strong_flag_connected: rank-i adjacency is not well-defined");
  const int32_t K = p.num_flags();
  const int n = p.n;
  std::vector<std::vector<int32_t>> comp((size_t)1 << n);
  std::vector<int32_t> dsu(K);
  std::function<int32_t(int32_t)> find = [&](int32_t x) -> int32_t {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  for (uint32_t mask = 0; mask < (uint32_t)1 << n; ++mask) {
    std::iota(dsu.begin(), dsu.end(), 0);
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int32_t f = 0; f < K; ++f) {
        int32_t a = find(f), b = find((*partner)[i][f]);
        if (a != b) dsu[a] = b;
      }
    }
    comp[mask].resize(K);
    for (int32_t f = 0; f < K; ++f) comp[mask][f] = find(f);
  }
  FlagConnReport rep;
  for (int32_t x = 0; x < K && rep.failing_pairs.size() < 16; ++x)
    for (int32_t y = x + 1; y < K; ++y) {
      uint32_t mask = 0;
      for (int i = 0; i < n; ++i)
        if (p.flag_face[i + 1][x] != p.flag_face[i + 1][y]) mask |= 1u << i;
      if (comp[mask][x] != comp[mask][y]) {
        rep.failing_pairs.push_back({x, y});
        break;
      }
    }
  return rep;
}

enum class OracleVerdict { Polytopal, NotPolytopal, Infeasible };

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Infeasible;
  std::string detail;

  bool feasible() const { return verdict != OracleVerdict::Infeasible; }
  // strict boolean view; refuses to coerce an unverified instance
  bool value() const {
    if (!feasible())
      throw std::runtime_error("polytopality oracle infeasible: " + detail);
    return verdict == OracleVerdict::Polytopal;
  }
};

struct OracleOptions {
  size_t flag_cap = 4096;
  size_t chain_cap_factor = 10;  // chain enumeration cap = factor * num_flags
};

// Direct polytopality decision from the face poset: incidence must be the
// closure of consecutive covering steps, diamond and strong flag-connectivity
// must hold, and the flag graph rebuilt from maximal chains must be
// isomorphic to the input.
inline OracleResult is_polytope(const Maniplex& m, const OracleOptions& opt = {}) {
  auto val = validate_maniplex(m);
  if (!val.ok())
    return {OracleVerdict::NotPolytopal,
            "not a maniplex: " + val.issues.front().describe()};
  if ((size_t)m.num_flags > opt.flag_cap)
    return {OracleVerdict::Infeasible,
            "flag count " + std::to_string(m.num_flags) + " exceeds oracle cap " +
                std::to_string(opt.flag_cap)};
  FacePoset p = build_poset(m);
  for (int la = 1; la <= p.n; ++la)
    for (int lb = la + 1; lb <= p.n; ++lb) {
      BitMatrix direct(p.counts[la], p.counts[lb]);
      for (int32_t f = 0; f < m.num_flags; ++f)
        direct.set(p.flag_face[la][f], p.flag_face[lb][f]);
      if (!(order_matrix(p, la, lb) == direct))
        return {OracleVerdict::NotPolytopal,
                "incidence between ranks " + std::to_string(la - 1) + " and " +
                    std::to_string(lb - 1) +
                    " is not the closure of consecutive coverings"};
    }
  auto dia = check_diamond(p);
  if (!dia.ok()) {
    const auto& v = dia.violations.front();
    return {OracleVerdict::NotPolytopal,
            "diamond violated between rank " + std::to_string(v.rank_low) +
                " face " + std::to_string(v.low) + " and rank " +
                std::to_string(v.rank_high) + " face " + std::to_string(v.high) +
                ": " + std::to_string(v.middle_count) + " faces between"};
  }
  FacePoset q = p;
  q.flag_face.clear();
  auto chains = derive_chains(q, opt.chain_cap_factor * (size_t)m.num_flags);
  if (chains.capped)
    return {OracleVerdict::Infeasible,
            "more than " + std::to_string(opt.chain_cap_factor * (size_t)m.num_flags) +
                " maximal chains"};
  if (!chains.flagged)
    return {OracleVerdict::NotPolytopal, "a maximal chain misses some rank"};
  if (chains.count != (size_t)m.num_flags)
    return {OracleVerdict::NotPolytopal,
            "poset has " + std::to_string(chains.count) + " maximal chains for " +
                std::to_string(m.num_flags) + " flags"};
  auto partner = chain_partners(q);
  if (!partner)
    return {OracleVerdict::NotPolytopal,
            "some chain pair with one differing rank is not a 2-group"};
  auto conn = check_strong_flag_connected(q);
  if (!conn.ok()) {
    auto [a, b] = conn.failing_pairs.front();
    return {OracleVerdict::NotPolytopal,
            "chains " + std::to_string(a) + " and " + std::to_string(b) +
                " admit no connecting path within their differing ranks"};
  }
  Maniplex rebuilt;
  rebuilt.rank = m.rank;
  rebuilt.num_flags = (int32_t)chains.count;
  rebuilt.adj = *partner;
  if (!validate_maniplex(rebuilt).ok())
    return {OracleVerdict::NotPolytopal,
            "flag graph rebuilt from chains is not a maniplex"};
  if (!is_isomorphic(rebuilt, m))
    return {OracleVerdict::NotPolytopal,
            "flag graph rebuilt from chains differs from the input"};
  return {OracleVerdict::Polytopal, ""};
}

// facet ids above the given face; every facet for the least face, none for
// the greatest (both degenerate calls)
inline std::vector<int32_t> closure(const FacePoset& p, int rank, int32_t face) {
  int l = rank + 1;
  if (l < 0 || l > p.n + 1 || face < 0 || face >= p.counts[l])
    throw std::invalid_argument("closure: no such face");
  std::vector<int32_t> out;
  if (l == p.n + 1) return out;
  if (l == p.n) {
    out.push_back(face);
    return out;
  }
  BitMatrix up = order_matrix(p, l, p.n);
  for (int32_t g = 0; g < p.counts[p.n]; ++g)
    if (up.get(face, g)) out.push_back(g);
  return out;
}

struct LatticeWitness {
  std::string kind;  // "join" or "meet"
  int rank_a;
  int32_t a;
  int rank_b;
  int32_t b;
  // the competing minimal upper bounds / maximal lower bounds
  std::vector<std::pair<int, int32_t>> bounds;
};

struct LatticeReport {
  bool is_lattice = true;
  std::optional<LatticeWitness> witness;
};

// every pair of faces needs a least upper bound and a greatest lower bound
inline LatticeReport lattice_check(const FacePoset& p) {
  std::vector<int32_t> offset(p.levels() + 1, 0);
  for (int l = 0; l < p.levels(); ++l) offset[l + 1] = offset[l] + p.counts[l];
  int32_t total = offset[p.levels()];
  size_t words = ((size_t)total + 63) / 64;
  // reflexive up/down sets over global face ids
  std::vector<uint64_t> up((size_t)total * words, 0), down((size_t)total * words, 0);
  auto setbit = [&](std::vector<uint64_t>& v, int32_t r, int32_t c) {
    v[(size_t)r * words + (size_t)c / 64] |= 1ull << (c % 64);
  };
  for (int32_t g = 0; g < total; ++g) {
    setbit(up, g, g);
    setbit(down, g, g);
  }
  for (int la = 0; la < p.levels(); ++la)
    for (int lb = la + 1; lb < p.levels(); ++lb) {
      BitMatrix o = order_matrix(p, la, lb);
      for (int32_t x = 0; x < p.counts[la]; ++x)
        for (int32_t y = 0; y < p.counts[lb]; ++y)
          if (o.get(x, y)) {
            setbit(up, offset[la] + x, offset[lb] + y);
            setbit(down, offset[lb] + y, offset[la] + x);
          }
    }
  auto level_of = [&](int32_t g) {
    int l = 0;
    while (offset[l + 1] <= g) ++l;
    return l;
  };
  // least (resp. greatest) element of the bound set, or the frontier of
  // competing extremal bounds
  auto analyze = [&](const std::vector<uint64_t>& dir, int32_t ga, int32_t gb,
                     bool least) -> std::optional<std::vector<int32_t>> {
    std::vector<uint64_t> bound(words);
    for (size_t w = 0; w < words; ++w)
      bound[w] = dir[(size_t)ga * words + w] & dir[(size_t)gb * words + w];
    // candidate: extremal-level member
    int32_t cand = -1;
    if (least) {
      for (int32_t g = 0; g < total; ++g)
        if ((bound[(size_t)g / 64] >> (g % 64)) & 1) {
          cand = g;
          break;
        }
    } else {
      for (int32_t g = total - 1; g >= 0; --g)
        if ((bound[(size_t)g / 64] >> (g % 64)) & 1) {
          cand = g;
          break;
        }
    }
    if (cand < 0) return std::vector<int32_t>{};  // no bound at all
    // cand must relate to every bound
    const uint64_t* cone = &(least ? up : down)[(size_t)cand * words];
    bool good = true;
    for (size_t w = 0; w < words && good; ++w)
      if (bound[w] & ~cone[w]) good = false;
    if (good) return std::nullopt;
    // collect extremal bounds as the witness frontier
    std::vector<int32_t> frontier;
    for (int32_t g = 0; g < total; ++g) {
      if (!((bound[(size_t)g / 64] >> (g % 64)) & 1)) continue;
      const uint64_t* gc = &(least ? down : up)[(size_t)g * words];
      bool extremal = true;
      for (int32_t h = 0; h < total && extremal; ++h)
        if (h != g && ((bound[(size_t)h / 64] >> (h % 64)) & 1) &&
            ((gc[(size_t)h / 64] >> (h % 64)) & 1))
          extremal = false;
      if (extremal) frontier.push_back(g);
    }
    return frontier;
  };
  LatticeReport rep;
  for (int32_t ga = 0; ga < total && rep.is_lattice; ++ga)
    for (int32_t gb = ga + 1; gb < total; ++gb) {
      for (bool join : {true, false}) {
        auto frontier = analyze(join ? up : down, ga, gb, join);
        if (!frontier) continue;
        LatticeWitness w;
        w.kind = join ? "join" : "meet";
        int la = level_of(ga), lb = level_of(gb);
        w.rank_a = la - 1;
        w.a = ga - offset[la];
        w.rank_b = lb - 1;
        w.b = gb - offset[lb];
        for (int32_t g : *frontier) {
          int l = level_of(g);
          w.bounds.push_back({l - 1, g - offset[l]});
        }
        rep.is_lattice = false;
        rep.witness = std::move(w);
        break;
      }
      if (!rep.is_lattice) break;
    }
  return rep;
}

inline Json poset_to_json(const FacePoset& p) {
  Json j;
  j["rank"] = p.n;
  Json counts = Json::object();
  for (int l = 0; l < p.levels(); ++l)
    counts[std::to_string(l - 1)] = p.counts[l];
  j["counts"] = counts;
  Json cov = Json::object();
  for (int l = 1; l <= p.n + 1; ++l) {
    Json arr = Json::array();
    for (auto [a, b] : p.covering[l]) arr.push_back(Json::array({a, b}));
    cov[std::to_string(l - 1)] = arr;
  }
  j["covering"] = cov;
  return j;
}

}  // namespace forge
