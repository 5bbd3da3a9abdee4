#pragma once

// Stabilizer-chain permutation groups (deterministic Schreier-Sims), cosets,
// and coset intersection.
//
// The s bit of a GroupElement is carried by two virtual points appended to
// the acting domain, so membership and orders account for it exactly.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "forge/perm.hpp"

namespace forge {

using u128 = unsigned __int128;

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back((char)('0' + (int)(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

class PermGroup {
 public:
  PermGroup() : degree_(0) {}

  // degree = number of real points; generators may carry s bits
  explicit PermGroup(size_t degree, std::vector<GroupElement> generators = {})
      : degree_(degree), gens_(std::move(generators)) {
    for (const auto& g : gens_) {
      if (g.degree() != degree_)
        throw std::invalid_argument("PermGroup: generator degree mismatch");
      if (!is_valid_permutation(g))
        throw std::invalid_argument("PermGroup: generator not a permutation");
    }
  }

  size_t degree() const { return degree_; }
  const std::vector<GroupElement>& generators() const { return gens_; }

  // Saturates at the u128 maximum; callers compare against caps far below
  // that, so the saturated value never changes a decision.
  u128 order() const {
    ensure_chain();
    u128 o = 1;
    for (const auto& lv : levels_) {
      u128 k = (u128)lv.orbit_count;
      if (k != 0 && o > (u128)-1 / k) return (u128)-1;
      o *= k;
    }
    return o;
  }

  bool order_saturated() const {
    ensure_chain();
    u128 o = 1;
    for (const auto& lv : levels_) {
      u128 k = (u128)lv.orbit_count;
      if (k != 0 && o > (u128)-1 / k) return true;
      o *= k;
    }
    return false;
  }

  // Exact order as prime -> exponent; transversal sizes are at most
  // degree+2 so trial division is cheap.
  std::map<int64_t, int> order_factorization() const {
    ensure_chain();
    std::map<int64_t, int> out;
    for (const auto& lv : levels_) {
      int64_t k = (int64_t)lv.orbit_count;
      for (int64_t p = 2; p * p <= k; ++p) {
        while (k % p == 0) {
          ++out[p];
          k /= p;
        }
      }
      if (k > 1) ++out[k];
    }
    return out;
  }

  std::string order_desc() const {
    if (!order_saturated()) return u128_to_string(order());
    std::string s;
    for (const auto& [p, e] : order_factorization()) {
      if (!s.empty()) s += "*";
      s += std::to_string(p);
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
  }

  bool contains(const GroupElement& g) const {
    if (g.degree() != degree_) return false;
    if (!is_valid_permutation(g)) return false;
    ensure_chain();
    return pidentity(strip(0, extend(g)));
  }

  bool contains_subgroup(const PermGroup& other) const {
    for (const auto& g : other.generators())
      if (!contains(g)) return false;
    return true;
  }

  bool same_group(const PermGroup& other) const {
    return degree_ == other.degree_ && contains_subgroup(other) &&
           other.contains_subgroup(*this);
  }

  // All elements, sorted, or nullopt if the group is larger than cap.
  std::optional<std::vector<GroupElement>> enumerate(size_t cap) const {
    if (order() > (u128)cap) return std::nullopt;
    std::vector<GroupElement> out;
    std::unordered_set<GroupElement, GroupElementHash> seen;
    GroupElement id = GroupElement::identity(degree_);
    out.push_back(id);
    seen.insert(id);
    for (size_t head = 0; head < out.size(); ++head) {
      GroupElement cur = out[head];  // copy: out may reallocate
      for (const auto& g : gens_) {
        GroupElement nxt = compose(cur, g);
        if (seen.insert(nxt).second) {
          if (out.size() >= cap) return std::nullopt;
          out.push_back(std::move(nxt));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  // One stabilizer-chain level acting on degree_+2 extended points.  A strong
  // generator stored at level l fixes the bases of all levels before l, so
  // the generating set effective at level l is the union of gens over all
  // levels >= l.
  struct Level {
    int32_t base = -1;
    std::vector<std::vector<int32_t>> gens;
    // transversal[p] = perm mapping base to p (empty vector if p not in orbit)
    std::vector<std::vector<int32_t>> transversal;
    size_t orbit_count = 0;
  };

  size_t degree_;
  std::vector<GroupElement> gens_;
  mutable std::vector<Level> levels_;
  mutable bool built_ = false;

  size_t ext_degree() const { return degree_ + 2; }

  std::vector<int32_t> extend(const GroupElement& g) const {
    std::vector<int32_t> p(ext_degree());
    for (size_t i = 0; i < degree_; ++i) p[i] = g.perm[i];
    int32_t a = (int32_t)degree_, b = (int32_t)degree_ + 1;
    if (g.s_bit) {
      p[a] = b;
      p[b] = a;
    } else {
      p[a] = a;
      p[b] = b;
    }
    return p;
  }

  static std::vector<int32_t> pcompose(const std::vector<int32_t>& a,
                                       const std::vector<int32_t>& b) {
    std::vector<int32_t> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
    return r;
  }

  static std::vector<int32_t> pinverse(const std::vector<int32_t>& a) {
    std::vector<int32_t> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[a[i]] = (int32_t)i;
    return r;
  }

  static bool pidentity(const std::vector<int32_t>& a) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != (int32_t)i) return false;
    return true;
  }

  std::vector<const std::vector<int32_t>*> gens_from(size_t l) const {
    std::vector<const std::vector<int32_t>*> out;
    for (size_t m = l; m < levels_.size(); ++m)
      for (const auto& g : levels_[m].gens) out.push_back(&g);
    return out;
  }

  // store a nonidentity strong generator at the first level whose base it
  // moves, creating a new level when it fixes every existing base
  void place(const std::vector<int32_t>& g) const {
    size_t l = 0;
    while (l < levels_.size() && g[levels_[l].base] == levels_[l].base) ++l;
    if (l == levels_.size()) {
      Level lv;
      for (size_t i = 0; i < g.size(); ++i)
        if (g[i] != (int32_t)i) {
          lv.base = (int32_t)i;
          break;
        }
      lv.transversal.assign(ext_degree(), {});
      levels_.push_back(std::move(lv));
    }
    levels_[l].gens.push_back(g);
  }

  void rebuild_orbit(size_t l) const {
    Level& lv = levels_[l];
    auto gens = gens_from(l);
    lv.transversal.assign(ext_degree(), {});
    std::vector<int32_t> idp(ext_degree());
    for (size_t i = 0; i < idp.size(); ++i) idp[i] = (int32_t)i;
    lv.transversal[lv.base] = std::move(idp);
    std::vector<int32_t> queue{lv.base};
    for (size_t head = 0; head < queue.size(); ++head) {
      int32_t beta = queue[head];
      for (const auto* s : gens) {
        int32_t gamma = (*s)[beta];
        if (lv.transversal[gamma].empty()) {
          lv.transversal[gamma] = pcompose(lv.transversal[beta], *s);
          queue.push_back(gamma);
        }
      }
    }
    lv.orbit_count = queue.size();
  }

  // strip through levels >= l; identity result means membership at that depth
  std::vector<int32_t> strip(size_t l, std::vector<int32_t> g) const {
    for (size_t m = l; m < levels_.size(); ++m) {
      int32_t beta = g[levels_[m].base];
      if (beta == levels_[m].base) continue;
      if (levels_[m].transversal[beta].empty()) return g;
      g = pcompose(g, pinverse(levels_[m].transversal[beta]));
    }
    return g;
  }

  // first Schreier generator of level l that fails to strip through the
  // deeper levels; empty when the level is closed
  std::optional<std::vector<int32_t>> closure_failure(size_t l) const {
    const Level& lv = levels_[l];
    auto gens = gens_from(l);
    for (int32_t beta = 0; beta < (int32_t)ext_degree(); ++beta) {
      if (lv.transversal[beta].empty()) continue;
      for (const auto* s : gens) {
        std::vector<int32_t> w = pcompose(lv.transversal[beta], *s);
        std::vector<int32_t> schreier =
            pcompose(w, pinverse(lv.transversal[(*s)[beta]]));
        if (pidentity(schreier)) continue;
        std::vector<int32_t> r = strip(l + 1, std::move(schreier));
        if (!pidentity(r)) return r;
      }
    }
    return std::nullopt;
  }

  // Fixpoint Schreier-Sims: rebuild every orbit, then hunt for a Schreier
  // generator that does not strip; each placement strictly grows an orbit or
  // adds a level, so this terminates.
  void ensure_chain() const {
    if (built_) return;
    levels_.clear();
    for (const auto& g : gens_) {
      std::vector<int32_t> p = extend(g);
      if (!pidentity(p)) place(p);
    }
    for (size_t l = 0; l < levels_.size(); ++l) rebuild_orbit(l);
    while (true) {
      bool placed = false;
      for (size_t li = levels_.size(); li-- > 0;) {
        if (auto r = closure_failure(li)) {
          place(*r);
          for (size_t m = 0; m < levels_.size(); ++m) rebuild_orbit(m);
          placed = true;
          break;
        }
      }
      if (!placed) break;
    }
    built_ = true;
  }
};

inline uint64_t group_order(const PermGroup& g) {
  u128 o = g.order();
  if (o > (u128)UINT64_MAX)
    throw std::overflow_error("group order exceeds uint64");
  return (uint64_t)o;
}

inline bool contains(const PermGroup& g, const GroupElement& e) {
  return g.contains(e);
}

// the set {rep * h : h in sub} ("rep then h" products)
struct Coset {
  GroupElement rep;
  std::shared_ptr<const PermGroup> sub;

  bool contains(const GroupElement& g) const {
    return sub->contains(compose(inverse(rep), g));
  }
  u128 size() const { return sub->order(); }
};

inline bool same_coset(const Coset& a, const Coset& b) {
  return a.sub->same_group(*b.sub) && a.contains(b.rep);
}

struct CosetIntersection {
  enum class Status { Empty, Found, Infeasible };
  Status status = Status::Empty;
  // sorted, filled only when the generic enumeration path ran (containment
  // shortcuts return the coset alone)
  std::vector<GroupElement> elements;
  std::optional<Coset> coset;  // rep + (H_A intersect H_B), iff Found

  bool empty() const { return status == Status::Empty; }
  bool found() const { return status == Status::Found; }
  bool infeasible() const { return status == Status::Infeasible; }
};

// Exact intersection of two cosets.  Containment shortcut first, then
// enumerate the smaller side and filter; if neither side is enumerable
// under cap the result is Infeasible, never an approximation.
inline CosetIntersection coset_intersection(const Coset& a, const Coset& b,
                                            size_t enumeration_cap) {
  CosetIntersection out;
  auto finish_with = [&](std::vector<GroupElement> elems) {
    if (elems.empty()) {
      out.status = CosetIntersection::Status::Empty;
      return;
    }
    std::sort(elems.begin(), elems.end());
    GroupElement rep = elems.front();
    GroupElement rep_inv = inverse(rep);
    std::vector<GroupElement> hgens;
    for (const auto& e : elems) {
      GroupElement h = compose(rep_inv, e);
      if (!h.is_identity()) hgens.push_back(h);
    }
    out.status = CosetIntersection::Status::Found;
    out.coset = Coset{rep, std::make_shared<PermGroup>(rep.degree(), hgens)};
    out.elements = std::move(elems);
  };

  // Containment shortcuts: the contained coset is the exact intersection,
  // so no enumeration happens (the contained side may be huge).
  if (b.sub->contains_subgroup(*a.sub)) {
    if (b.contains(a.rep)) {
      out.status = CosetIntersection::Status::Found;
      out.coset = a;
      return out;
    }
    // H_A <= H_B and rep_a not in B: rep_a*h in B would force rep_a in B
    out.status = CosetIntersection::Status::Empty;
    return out;
  }
  if (a.sub->contains_subgroup(*b.sub)) {
    if (a.contains(b.rep)) {
      out.status = CosetIntersection::Status::Found;
      out.coset = b;
      return out;
    }
    out.status = CosetIntersection::Status::Empty;
    return out;
  }

  const Coset* small = &a;
  const Coset* big = &b;
  if (b.sub->order() < a.sub->order()) std::swap(small, big);
  auto elems = small->sub->enumerate(enumeration_cap);
  if (!elems) {
    auto elems2 = big->sub->enumerate(enumeration_cap);
    if (!elems2) {
      out.status = CosetIntersection::Status::Infeasible;
      return out;
    }
    std::swap(small, big);
    elems = std::move(elems2);
  }
  std::vector<GroupElement> hits;
  for (const auto& h : *elems) {
    GroupElement x = compose(small->rep, h);
    if (big->contains(x)) hits.push_back(std::move(x));
  }
  finish_with(std::move(hits));
  return out;
}

}  // namespace forge
