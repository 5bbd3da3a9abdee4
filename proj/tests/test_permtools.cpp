#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "forge/perm.hpp"
#include "forge/permgroup.hpp"

using namespace forge;

namespace {

// Independent oracle: plain BFS closure under composition, no stabilizer
// chain involved.  Returns all elements or nullopt past cap.
std::optional<std::vector<GroupElement>> closure_oracle(
    size_t degree, const std::vector<GroupElement>& gens, size_t cap) {
  std::set<GroupElement> seen;
  std::vector<GroupElement> queue{GroupElement::identity(degree)};
  seen.insert(queue[0]);
  for (size_t head = 0; head < queue.size(); ++head) {
    GroupElement cur = queue[head];
    for (const auto& g : gens) {
      GroupElement nxt = compose(cur, g);
      if (seen.insert(nxt).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(std::move(nxt));
      }
    }
  }
  return std::vector<GroupElement>(seen.begin(), seen.end());
}

GroupElement ge(std::vector<int32_t> p, uint8_t s = 0) {
  return GroupElement(std::move(p), s);
}

GroupElement random_element(std::mt19937& rng, size_t degree, bool with_s) {
  std::vector<int32_t> p(degree);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  uint8_t s = with_s ? (uint8_t)(rng() & 1) : 0;
  return GroupElement(std::move(p), s);
}

}  // namespace

TEST_CASE("composition applies left factor first") {
  GroupElement a = ge({1, 0, 2});  // swaps 0,1
  GroupElement b = ge({0, 2, 1});  // swaps 1,2
  GroupElement ab = compose(a, b);
  // 0 -> a -> 1 -> b -> 2
  CHECK(ab.apply(0) == 2);
  CHECK(ab.apply(1) == 0);
  CHECK(ab.apply(2) == 1);
  GroupElement ba = compose(b, a);
  CHECK(ba.apply(0) == 1);
  CHECK(ba.apply(2) == 0);
  CHECK(ab != ba);
}

TEST_CASE("identity, inverse, involution") {
  GroupElement id = GroupElement::identity(4);
  CHECK(id.is_identity());
  GroupElement c = ge({1, 2, 3, 0});
  CHECK(compose(c, id) == c);
  CHECK(compose(id, c) == c);
  CHECK(compose(c, inverse(c)).is_identity());
  CHECK(compose(inverse(c), c).is_identity());
  CHECK_FALSE(is_involution(c));
  CHECK(is_involution(ge({1, 0, 3, 2})));
  CHECK_FALSE(is_involution(id));  // fixed-point-free involutions only
  GroupElement with_s = ge({0, 1, 2, 3}, 1);
  CHECK_FALSE(with_s.is_identity());
  CHECK(compose(with_s, with_s).is_identity());
}

TEST_CASE("s bit xors under composition") {
  GroupElement a = ge({1, 0}, 1);
  GroupElement b = ge({1, 0}, 0);
  CHECK(compose(a, b).s_bit == 1);
  CHECK(compose(a, a).s_bit == 0);
  CHECK(inverse(a).s_bit == 1);
}

TEST_CASE("group element json round trip") {
  GroupElement g = ge({2, 0, 1}, 1);
  Json j = group_element_to_json(g);
  CHECK(j["perm"] == Json::array({2, 0, 1}));
  CHECK(j["s"] == 1);
  CHECK(group_element_from_json(j) == g);
  GroupElement h = ge({0, 1});
  CHECK(group_element_from_json(group_element_to_json(h)) == h);
}

TEST_CASE("orders of known small groups") {
  CHECK(PermGroup(4).order() == 1);
  CHECK(group_order(PermGroup(3, {ge({1, 0, 2})})) == 2);
  // symmetric group on 4 points
  PermGroup s4(4, {ge({1, 0, 2, 3}), ge({1, 2, 3, 0})});
  CHECK(group_order(s4) == 24);
  // dihedral group of the square
  PermGroup d4(4, {ge({1, 2, 3, 0}), ge({3, 2, 1, 0})});
  CHECK(group_order(d4) == 8);
  // alternating group
  PermGroup a4(4, {ge({1, 2, 0, 3}), ge({0, 2, 3, 1})});
  CHECK(group_order(a4) == 12);
  // Klein four group
  PermGroup v4(4, {ge({1, 0, 3, 2}), ge({2, 3, 0, 1})});
  CHECK(group_order(v4) == 4);
}

TEST_CASE("generators stored at deeper levels still extend shallow orbits") {
  // (1 2) fixes point 0 yet the orbit of 0 under the whole group is {0,1,2}
  PermGroup s3(3, {ge({1, 0, 2}), ge({0, 2, 1})});
  CHECK(group_order(s3) == 6);
  CHECK(s3.contains(ge({2, 1, 0})));  // (0 2), a product of the two gens
}

TEST_CASE("s bit contributes to order and membership") {
  PermGroup c2(3, {ge({0, 1, 2}, 1)});
  CHECK(group_order(c2) == 2);
  PermGroup c6(3, {ge({1, 2, 0}, 1)});  // 3-cycle paired with the flip
  CHECK(group_order(c6) == 6);
  CHECK(c6.contains(ge({1, 2, 0}, 0)));   // square of the generator... cubed flip
  CHECK_FALSE(c6.contains(ge({1, 0, 2}, 0)));
  CHECK(c6.contains(ge({0, 1, 2}, 1)));  // generator cubed
}

TEST_CASE("membership in known groups") {
  PermGroup a4(4, {ge({1, 2, 0, 3}), ge({0, 2, 3, 1})});
  CHECK(a4.contains(ge({1, 0, 3, 2})));        // double transposition is even
  CHECK_FALSE(a4.contains(ge({1, 0, 2, 3})));  // single transposition is odd
  CHECK_FALSE(a4.contains(ge({1, 2, 0, 3}, 1)));  // no s bit in this group
  CHECK_FALSE(a4.contains(ge({1, 0, 2})));        // degree mismatch
}

TEST_CASE("subgroup and equality checks") {
  PermGroup s4(4, {ge({1, 0, 2, 3}), ge({1, 2, 3, 0})});
  PermGroup a4(4, {ge({1, 2, 0, 3}), ge({0, 2, 3, 1})});
  PermGroup v4(4, {ge({1, 0, 3, 2}), ge({2, 3, 0, 1})});
  CHECK(s4.contains_subgroup(a4));
  CHECK(a4.contains_subgroup(v4));
  CHECK_FALSE(v4.contains_subgroup(a4));
  PermGroup s4_other(4, {ge({0, 2, 1, 3}), ge({3, 0, 1, 2})});
  CHECK(s4.same_group(s4_other));
  CHECK_FALSE(s4.same_group(a4));
}

TEST_CASE("enumerate matches the closure oracle") {
  std::vector<GroupElement> gens{ge({1, 0, 2, 3}), ge({1, 2, 3, 0})};
  PermGroup s4(4, gens);
  auto got = s4.enumerate(24);
  REQUIRE(got.has_value());
  auto want = closure_oracle(4, gens, 100);
  REQUIRE(want.has_value());
  CHECK(*got == *want);
  CHECK(got->size() == 24);
  CHECK(std::is_sorted(got->begin(), got->end()));
  CHECK_FALSE(s4.enumerate(23).has_value());
}

TEST_CASE("random groups agree with the closure oracle") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 12; ++trial) {
    size_t degree = 4 + (size_t)(rng() % 3);
    bool with_s = (trial % 2) == 1;
    std::vector<GroupElement> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(random_element(rng, degree, with_s));
    auto want = closure_oracle(degree, gens, 100000);
    REQUIRE(want.has_value());
    PermGroup g(degree, gens);
    INFO("trial " << trial << " degree " << degree);
    CHECK(g.order() == (u128)want->size());
    auto got = g.enumerate(want->size());
    REQUIRE(got.has_value());
    CHECK(*got == *want);
    // membership agrees both ways
    for (int k = 0; k < 20; ++k) {
      GroupElement probe = random_element(rng, degree, with_s);
      bool in_oracle = std::binary_search(want->begin(), want->end(), probe);
      CHECK(g.contains(probe) == in_oracle);
    }
    // closure under products
    for (int k = 0; k < 10; ++k) {
      const auto& x = (*want)[rng() % want->size()];
      const auto& y = (*want)[rng() % want->size()];
      CHECK(g.contains(compose(x, y)));
    }
  }
}

TEST_CASE("coset membership and equality") {
  auto h = std::make_shared<PermGroup>(3, std::vector<GroupElement>{ge({1, 0, 2})});
  Coset c{ge({0, 2, 1}), h};  // (1 2) * {id, (0 1)}
  CHECK(c.size() == 2);
  CHECK(c.contains(ge({0, 2, 1})));
  CHECK(c.contains(compose(ge({0, 2, 1}), ge({1, 0, 2}))));
  CHECK_FALSE(c.contains(ge({1, 0, 2})));
  CHECK_FALSE(c.contains(GroupElement::identity(3)));
  Coset c2{compose(ge({0, 2, 1}), ge({1, 0, 2})), h};
  CHECK(same_coset(c, c2));
  Coset c3{GroupElement::identity(3), h};
  CHECK_FALSE(same_coset(c, c3));
}

TEST_CASE("coset intersection basic cases") {
  auto h01 = std::make_shared<PermGroup>(3, std::vector<GroupElement>{ge({1, 0, 2})});
  auto h12 = std::make_shared<PermGroup>(3, std::vector<GroupElement>{ge({0, 2, 1})});
  GroupElement id = GroupElement::identity(3);

  SECTION("identity cosets meet in the intersection subgroup") {
    auto r = coset_intersection({id, h01}, {id, h12}, 1000);
    REQUIRE(r.found());
    REQUIRE(r.elements.size() == 1);
    CHECK(r.elements[0].is_identity());
    CHECK(r.coset->size() == 1);
  }
  SECTION("translated cosets") {
    GroupElement t = ge({2, 1, 0});  // (0 2)
    auto r = coset_intersection({compose(t, ge({1, 0, 2})), h01}, {t, h12}, 1000);
    REQUIRE(r.found());
    REQUIRE(r.elements.size() == 1);
    CHECK(r.elements[0] == t);
  }
  SECTION("disjoint cosets of one subgroup") {
    auto r = coset_intersection({id, h01}, {ge({0, 2, 1}), h01}, 1000);
    CHECK(r.empty());
  }
  SECTION("same coset twice") {
    GroupElement rep = ge({1, 0, 2});
    auto r = coset_intersection({rep, h01}, {id, h01}, 1000);
    REQUIRE(r.found());
    CHECK(r.coset->size() == 2);
    CHECK(r.coset->sub->same_group(*h01));
    CHECK(r.coset->contains(rep));
    CHECK(r.coset->contains(id));
  }
}

TEST_CASE("coset intersection containment shortcut") {
  auto v4 = std::make_shared<PermGroup>(
      4, std::vector<GroupElement>{ge({1, 0, 3, 2}), ge({2, 3, 0, 1})});
  auto a4 = std::make_shared<PermGroup>(
      4, std::vector<GroupElement>{ge({1, 2, 0, 3}), ge({0, 2, 3, 1})});
  GroupElement id = GroupElement::identity(4);
  SECTION("subgroup inside supergroup") {
    auto r = coset_intersection({id, v4}, {id, a4}, 1000);
    REQUIRE(r.found());
    CHECK(r.elements.empty());  // containment answers without enumerating
    CHECK(r.coset->size() == 4);
    CHECK(r.coset->sub->same_group(*v4));
  }
  SECTION("odd translate misses the even supergroup") {
    GroupElement odd = ge({1, 0, 2, 3});
    auto r = coset_intersection({odd, v4}, {id, a4}, 1000);
    CHECK(r.empty());
  }
  SECTION("matching translate keeps the small side") {
    GroupElement even = ge({1, 2, 0, 3});
    auto r = coset_intersection({even, v4}, {id, a4}, 1000);
    REQUIRE(r.found());
    CHECK(r.coset->contains(even));
    CHECK(r.coset->sub->same_group(*v4));
    auto el = r.coset->sub->enumerate(100);
    REQUIRE(el);
    for (const auto& h : *el) CHECK(a4->contains(compose(even, h)));
  }
}

TEST_CASE("coset intersection refuses rather than guesses") {
  auto h01 = std::make_shared<PermGroup>(3, std::vector<GroupElement>{ge({1, 0, 2})});
  auto h12 = std::make_shared<PermGroup>(3, std::vector<GroupElement>{ge({0, 2, 1})});
  GroupElement id = GroupElement::identity(3);
  auto r = coset_intersection({id, h01}, {id, h12}, 1);
  CHECK(r.infeasible());
}

TEST_CASE("coset intersection agrees with brute force on random instances") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 8; ++trial) {
    size_t degree = 5;
    std::vector<GroupElement> ga{random_element(rng, degree, false)};
    std::vector<GroupElement> gb{random_element(rng, degree, false),
                                 random_element(rng, degree, false)};
    auto ha = std::make_shared<PermGroup>(degree, ga);
    auto hb = std::make_shared<PermGroup>(degree, gb);
    GroupElement ra = random_element(rng, degree, false);
    GroupElement rb = random_element(rng, degree, false);
    Coset a{ra, ha}, b{rb, hb};
    auto ea = closure_oracle(degree, ga, 100000);
    auto eb = closure_oracle(degree, gb, 100000);
    REQUIRE(ea);
    REQUIRE(eb);
    std::set<GroupElement> sb;
    for (const auto& h : *eb) sb.insert(compose(rb, h));
    std::vector<GroupElement> want;
    for (const auto& h : *ea) {
      GroupElement x = compose(ra, h);
      if (sb.count(x)) want.push_back(x);
    }
    std::sort(want.begin(), want.end());
    auto r = coset_intersection(a, b, 200000);
    INFO("trial " << trial);
    REQUIRE_FALSE(r.infeasible());
    if (want.empty()) {
      CHECK(r.empty());
    } else {
      REQUIRE(r.found());
      if (!r.elements.empty()) CHECK(r.elements == want);
      for (const auto& e : want) CHECK(r.coset->contains(e));
      CHECK(r.coset->size() == (u128)want.size());
    }
  }
}
