#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "forge/voltage.hpp"

#include "fixtures.hpp"

using namespace forge;

namespace {

using fixtures::polygon;

GroupElement ge(std::vector<int32_t> p, uint8_t s = 0) {
  return GroupElement(std::move(p), s);
}

// fixed-point-free pairing of [0, deg), so order exactly 2
GroupElement random_involution(std::mt19937& rng, size_t deg) {
  std::vector<int32_t> pts(deg);
  std::iota(pts.begin(), pts.end(), 0);
  std::shuffle(pts.begin(), pts.end(), rng);
  GroupElement g = GroupElement::identity(deg);
  for (size_t i = 0; i + 1 < deg; i += 2) {
    g.perm[pts[i]] = pts[i + 1];
    g.perm[pts[i + 1]] = pts[i];
  }
  return g;
}

GroupElement random_element(std::mt19937& rng, size_t deg) {
  GroupElement g = GroupElement::identity(deg);
  std::shuffle(g.perm.begin(), g.perm.end(), rng);
  return g;
}

// consistent random voltages: involutions on semi-edges, inverse pairs on
// links
VoltageAssignment random_voltage(std::mt19937& rng, const Premaniplex& x,
                                 size_t deg) {
  VoltageAssignment v;
  v.degree = (int)deg;
  v.xi.resize(x.darts.size());
  for (const Dart& d : x.darts) {
    if (d.is_semi_edge())
      v.xi[d.id] = random_involution(rng, deg);
    else if (d.inv > d.id) {
      v.xi[d.id] = random_element(rng, deg);
      v.xi[d.inv] = inverse(v.xi[d.id]);
    }
  }
  return v;
}

// random closed walk: wander within the colors, then come home on the tree
Path random_closed_walk(std::mt19937& rng, const Premaniplex& x, int32_t base,
                        const std::vector<int>& colors, int steps) {
  auto table = dart_table(x);
  Path w;
  w.start = base;
  std::vector<int32_t> raw;
  int32_t at = base;
  std::uniform_int_distribution<size_t> pick(0, colors.size() - 1);
  for (int i = 0; i < steps; ++i) {
    int32_t d = table[at][colors[pick(rng)]];
    raw.push_back(d);
    at = x.darts[d].to;
  }
  SpanningTree t = restricted_spanning_tree(x, base, colors);
  Path home = path_reverse(x, tree_path(x, t, at));
  raw.insert(raw.end(), home.darts.begin(), home.darts.end());
  w.darts = std::move(raw);
  return w;
}

// the two-vertex graph with semi-edges on I: white = 0, black = 1
const std::vector<int> kAll4 = {0, 1, 2, 3};

}  // namespace

TEST_CASE("two vertex family has the expected darts") {
  Premaniplex x = build_2nI(4, {1, 2});
  CHECK(x.rank == 4);
  CHECK(x.num_vertices == 2);
  CHECK(x.darts.size() == 8);
  CHECK(validate_premaniplex(x).ok());
  for (int c : {1, 2}) {
    CHECK(x.darts[2 * c].is_semi_edge());
    CHECK(x.darts[2 * c + 1].is_semi_edge());
  }
  for (int c : {0, 3}) {
    CHECK(x.darts[2 * c].to == 1);
    CHECK(x.darts[2 * c].inv == 2 * c + 1);
  }
  CHECK(x.vertex_labels[0] == "white");

  Premaniplex links = build_2nI(3, {});
  CHECK(links.darts.size() == 6);
  for (const Dart& d : links.darts) CHECK_FALSE(d.is_semi_edge());
  CHECK(validate_premaniplex(links).ok());

  CHECK_THROWS_AS(build_2nI(3, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(build_2nI(2, {5}), std::invalid_argument);
}

TEST_CASE("flag graphs embed as premaniplexes") {
  Premaniplex x = premaniplex_from_maniplex(polygon(4));
  CHECK(x.num_vertices == 8);
  CHECK(x.darts.size() == 16);
  CHECK(validate_premaniplex(x).ok());
  for (const Dart& d : x.darts) CHECK_FALSE(d.is_semi_edge());
}

TEST_CASE("validation rejects broken structures") {
  // two darts of one color at a vertex
  Premaniplex x = build_2nI(3, {1});
  x.darts[0].color = 2;
  CHECK_FALSE(validate_premaniplex(x).ok());

  // mismatched inverses
  Premaniplex y = build_2nI(3, {1});
  y.darts[0].inv = 0;
  CHECK_FALSE(validate_premaniplex(y).ok());

  // hexagon alternating colors 0 and 2: the 0,2 squares do not close
  Premaniplex h;
  h.rank = 3;
  h.num_vertices = 6;
  h.darts.resize(18);
  for (int32_t v = 0; v < 6; ++v) {
    int c = (v % 2 == 0) ? 0 : 2;       // edge v -- v+1
    int cb = (v % 2 == 0) ? 2 : 0;      // edge v-1 -- v seen from v
    Dart fwd{3 * v, c, v, (v + 1) % 6, 3 * ((v + 1) % 6) + 1};
    Dart bwd{3 * v + 1, cb, v, (v + 5) % 6, 3 * ((v + 5) % 6)};
    Dart semi{3 * v + 2, 1, v, v, 3 * v + 2};
    h.darts[fwd.id] = fwd;
    h.darts[bwd.id] = bwd;
    h.darts[semi.id] = semi;
  }
  auto rep = validate_premaniplex(h);
  REQUIRE_FALSE(rep.ok());
  bool commute_issue = false;
  for (const auto& is : rep.issues)
    if (is.what.find("commute") != std::string::npos) commute_issue = true;
  CHECK(commute_issue);
}

TEST_CASE("paths reduce and reverse") {
  Premaniplex x = build_2nI(4, {1, 2});
  Path w;
  w.start = 0;
  path_append(x, w, 0);  // white -> black
  path_append(x, w, 3);  // semi at black
  CHECK(path_end(x, w) == 1);
  path_append(x, w, 3);  // same semi cancels
  CHECK(w.darts == std::vector<int32_t>{0});
  path_append(x, w, 1);  // back over the same link cancels
  CHECK(w.empty());
  CHECK(path_end(x, w) == 0);

  path_append(x, w, 0);
  path_append(x, w, 7);
  Path r = path_reverse(x, w);
  CHECK(r.start == 0);
  CHECK(r.darts == std::vector<int32_t>{6, 1});
  CHECK(path_concat(x, w, r).empty());

  // w ends at white; the black semi-edge does not attach there
  CHECK_THROWS_AS(path_append(x, w, 3), std::invalid_argument);
}

TEST_CASE("empty and cancelling paths carry the identity") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(11);
  VoltageAssignment v = random_voltage(rng, x, 6);
  REQUIRE(validate_voltage(x, v).ok());

  Path e;
  e.start = 1;
  CHECK(path_voltage(x, v, e).is_identity());

  Path w;
  w.start = 0;
  path_append(x, w, 0);
  path_append(x, w, 1);
  CHECK(path_voltage(x, v, w).is_identity());

  Path bad;
  bad.start = 0;
  bad.darts = {0, 0};  // second dart starts at black
  CHECK_THROWS_AS(path_voltage(x, v, bad), std::invalid_argument);
}

TEST_CASE("path voltage is multiplicative over concatenation") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(12);
  VoltageAssignment v = random_voltage(rng, x, 7);
  for (int trial = 0; trial < 30; ++trial) {
    Path a = random_closed_walk(rng, x, 0, kAll4, 9);
    Path b = random_closed_walk(rng, x, 0, kAll4, 7);
    GroupElement lhs = path_voltage(x, v, path_concat(x, a, b));
    GroupElement rhs = compose(path_voltage(x, v, a), path_voltage(x, v, b));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("voltage is invariant under inserting a backtrack") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(13);
  VoltageAssignment v = random_voltage(rng, x, 6);
  auto table = dart_table(x);
  for (int trial = 0; trial < 40; ++trial) {
    Path w = random_closed_walk(rng, x, 0, kAll4, 8);
    GroupElement before = path_voltage(x, v, w);
    // splice d, d^-1 at a random position
    std::uniform_int_distribution<size_t> at(0, w.darts.size());
    size_t pos = at(rng);
    int32_t here = 0;
    {
      Path prefix;
      prefix.start = w.start;
      prefix.darts.assign(w.darts.begin(), w.darts.begin() + pos);
      here = path_end(x, prefix);
    }
    std::uniform_int_distribution<int> color(0, 3);
    int32_t d = table[here][color(rng)];
    std::vector<int32_t> spliced(w.darts.begin(), w.darts.begin() + pos);
    spliced.push_back(d);
    spliced.push_back(x.darts[d].inv);
    spliced.insert(spliced.end(), w.darts.begin() + pos, w.darts.end());
    Path w2;
    w2.start = w.start;
    w2.darts = std::move(spliced);
    REQUIRE(path_voltage(x, v, w2) == before);
  }
}

TEST_CASE("validation rejects inconsistent voltages") {
  Premaniplex x = build_2nI(3, {1});
  std::mt19937 rng(14);
  VoltageAssignment v = random_voltage(rng, x, 5);
  REQUIRE(validate_voltage(x, v).ok());

  VoltageAssignment bad = v;
  bad.xi[1] = compose(bad.xi[1], ge({1, 0, 2, 3, 4}));
  CHECK_FALSE(validate_voltage(x, bad).ok());

  VoltageAssignment wrong_size = v;
  wrong_size.xi.pop_back();
  CHECK_FALSE(validate_voltage(x, wrong_size).ok());
}

TEST_CASE("spanning tree generators are deterministic") {
  Premaniplex x = build_2nI(4, {1, 2});
  auto gens = fundamental_generators(x, 0, kAll4);
  REQUIRE(gens.size() == 6);
  CHECK(gens[0].darts == std::vector<int32_t>{2});
  CHECK(gens[1].darts == std::vector<int32_t>{0, 3, 1});
  CHECK(gens[2].darts == std::vector<int32_t>{4});
  CHECK(gens[3].darts == std::vector<int32_t>{0, 5, 1});
  CHECK(gens[4].darts == std::vector<int32_t>{6, 1});
  CHECK(gens[5].darts == std::vector<int32_t>{0, 7});
  for (const Path& w : gens) {
    CHECK(w.start == 0);
    CHECK(path_end(x, w) == 0);
  }

  // restricted to semi-edge colors the black vertex is unreachable
  auto semi_only = fundamental_generators(x, 0, {1, 2});
  REQUIRE(semi_only.size() == 2);
  CHECK(semi_only[0].darts == std::vector<int32_t>{2});
  CHECK(semi_only[1].darts == std::vector<int32_t>{4});

  CHECK(fundamental_generators(x, 0, {}).empty());
}

TEST_CASE("restricted group contains every closed walk voltage") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(15);
  VoltageAssignment v = random_voltage(rng, x, 6);
  std::vector<std::vector<int>> color_sets = {{0, 1, 2, 3}, {0, 1}, {1, 2}, {2, 3}};
  for (const auto& colors : color_sets) {
    PermGroup g = restricted_voltage_group(x, v, 0, colors);
    for (int trial = 0; trial < 25; ++trial) {
      Path w = random_closed_walk(rng, x, 0, colors, 10);
      REQUIRE(g.contains(path_voltage(x, v, w)));
    }
  }
}

TEST_CASE("restricted groups grow with the color set") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(16);
  VoltageAssignment v = random_voltage(rng, x, 6);
  std::vector<int> small = {1, 3};
  std::vector<int> big = {0, 1, 3};
  PermGroup gs = restricted_voltage_group(x, v, 0, small);
  PermGroup gb = restricted_voltage_group(x, v, 0, big);
  PermGroup gall = restricted_voltage_group(x, v, 0, kAll4);
  CHECK(gb.contains_subgroup(gs));
  CHECK(gall.contains_subgroup(gb));
}

TEST_CASE("connecting cosets collect path voltages") {
  Premaniplex x = build_2nI(4, {1, 2});
  std::mt19937 rng(17);
  VoltageAssignment v = random_voltage(rng, x, 6);

  CHECK_FALSE(restricted_voltage_coset(x, v, 0, 1, {1, 2}).has_value());

  auto single = restricted_voltage_coset(x, v, 0, 1, {0});
  REQUIRE(single.has_value());
  CHECK(single->sub->order() == 1);
  CHECK(single->contains(v.xi[0]));

  auto coset = restricted_voltage_coset(x, v, 0, 1, {0, 1, 3});
  REQUIRE(coset.has_value());
  auto table = dart_table(x);
  std::vector<int> colors = {0, 1, 3};
  for (int trial = 0; trial < 25; ++trial) {
    // random white -> black walk
    Path w;
    w.start = 0;
    int32_t at = 0;
    std::uniform_int_distribution<size_t> pick(0, colors.size() - 1);
    for (int i = 0; i < 11 || at != 1; ++i) {
      int32_t d = table[at][colors[pick(rng)]];
      w.darts.push_back(d);
      at = x.darts[d].to;
      if (i > 60) break;
    }
    if (at != 1) continue;
    REQUIRE(coset->contains(path_voltage(x, v, w)));
  }
}

TEST_CASE("derived graph of monodromy voltages rebuilds the square") {
  // one vertex, two semi-edges carrying the square's flag permutations
  Premaniplex x;
  x.rank = 2;
  x.num_vertices = 1;
  x.darts = {Dart{0, 0, 0, 0, 0}, Dart{1, 1, 0, 0, 1}};
  REQUIRE(validate_premaniplex(x).ok());

  Maniplex sq = polygon(4);
  VoltageAssignment v;
  v.degree = 8;
  v.xi = {ge({1, 0, 3, 2, 5, 4, 7, 6}),
          ge({7, 2, 1, 4, 3, 6, 5, 0})};
  REQUIRE(validate_voltage(x, v).ok());
  REQUIRE(v.xi[0] == GroupElement(sq.adj[0]));
  REQUIRE(v.xi[1] == GroupElement(sq.adj[1]));

  auto rep = check_derived_is_maniplex(x, v);
  CHECK(rep.ok());
  CHECK_FALSE(rep.normalized);

  Maniplex derived = derived_graph(x, v);
  CHECK(derived.num_flags == 8);
  CHECK(is_isomorphic(derived, sq).has_value());
}

TEST_CASE("derived graph over the trivial group rebuilds the base") {
  Premaniplex x = premaniplex_from_maniplex(polygon(5));
  VoltageAssignment v;
  v.degree = 3;
  v.xi.assign(x.darts.size(), GroupElement::identity(3));
  Maniplex derived = derived_graph(x, v);
  CHECK(derived.num_flags == 10);
  CHECK(is_isomorphic(derived, polygon(5)).has_value());
}

TEST_CASE("derived check accepts a good two vertex assignment") {
  Premaniplex x = build_2nI(3, {1});
  VoltageAssignment v;
  v.degree = 4;
  GroupElement id4 = GroupElement::identity(4);
  GroupElement t = ge({1, 0, 3, 2});
  GroupElement sw = ge({2, 3, 0, 1});
  GroupElement sb = ge({3, 2, 1, 0});
  // darts: 0,1 color-0 links; 2,3 color-1 semis; 4,5 color-2 links
  v.xi = {id4, id4, sw, sb, t, t};
  REQUIRE(validate_voltage(x, v).ok());

  auto rep = check_derived_is_maniplex(x, v);
  CHECK(rep.generation.pass);
  CHECK(rep.semi_edge_orders.pass);
  CHECK(rep.parallel_distinct.pass);
  CHECK(rep.commuting_squares.pass);
  REQUIRE(rep.ok());

  Maniplex derived = derived_graph(x, v);
  CHECK(derived.num_flags == 8);
  CHECK(validate_maniplex(derived).ok());

  SECTION("identity on a semi-edge breaks the order condition") {
    VoltageAssignment bad = v;
    bad.xi[2] = id4;
    REQUIRE(validate_voltage(x, bad).ok());
    auto r = check_derived_is_maniplex(x, bad);
    CHECK_FALSE(r.semi_edge_orders.pass);
    CHECK(r.commuting_squares.pass);
  }

  SECTION("equal voltages on parallel links break simplicity") {
    VoltageAssignment bad = v;
    bad.xi[4] = id4;
    bad.xi[5] = id4;
    REQUIRE(validate_voltage(x, bad).ok());
    auto r = check_derived_is_maniplex(x, bad);
    CHECK_FALSE(r.parallel_distinct.pass);
    CHECK(r.semi_edge_orders.pass);
    CHECK(r.commuting_squares.pass);
    CHECK_THROWS(derived_graph(x, bad));
  }

  SECTION("non involutory square of far colors is caught") {
    VoltageAssignment bad = v;
    bad.xi[4] = ge({1, 2, 0, 3});
    bad.xi[5] = inverse(bad.xi[4]);
    REQUIRE(validate_voltage(x, bad).ok());
    auto r = check_derived_is_maniplex(x, bad);
    CHECK_FALSE(r.commuting_squares.pass);
    CHECK(r.parallel_distinct.pass);
  }

  SECTION("explicit target group must match the generated one") {
    PermGroup bigger(4, {ge({1, 0, 2, 3}), ge({1, 2, 3, 0})});
    auto r = check_derived_is_maniplex(x, v, &bigger);
    CHECK_FALSE(r.generation.pass);

    std::vector<GroupElement> gens(v.xi.begin(), v.xi.end());
    PermGroup exact(4, gens);
    auto r2 = check_derived_is_maniplex(x, v, &exact);
    CHECK(r2.generation.pass);
  }
}

TEST_CASE("gauge shifts are undone before checking") {
  Premaniplex x = build_2nI(3, {1});
  VoltageAssignment v;
  v.degree = 4;
  GroupElement id4 = GroupElement::identity(4);
  GroupElement t = ge({1, 0, 3, 2});
  v.xi = {id4, id4, ge({2, 3, 0, 1}), ge({3, 2, 1, 0}), t, t};
  REQUIRE(check_derived_is_maniplex(x, v).ok());

  // shift by a potential that is trivial at white and stays inside the
  // voltage group; a potential outside it would genuinely enlarge the
  // group the darts generate and disconnect the derived graph
  GroupElement p = t;
  std::vector<GroupElement> pot = {id4, p};
  VoltageAssignment shifted;
  shifted.degree = 4;
  shifted.xi.resize(6);
  for (const Dart& d : x.darts)
    shifted.xi[d.id] =
        compose(compose(inverse(pot[d.from]), v.xi[d.id]), pot[d.to]);
  REQUIRE(validate_voltage(x, shifted).ok());
  REQUIRE_FALSE(shifted.xi[0].is_identity());

  auto rep = check_derived_is_maniplex(x, shifted);
  CHECK(rep.normalized);
  CHECK(rep.ok());
  CHECK(rep.checked.xi[0].is_identity());
  CHECK(rep.checked.xi[1].is_identity());

  // closed walk voltages at white agree with the unshifted assignment
  PermGroup before = restricted_voltage_group(x, v, 0, {0, 1, 2});
  PermGroup after = restricted_voltage_group(x, shifted, 0, {0, 1, 2});
  CHECK(before.same_group(after));
}

TEST_CASE("derived graph refuses infeasible enumerations") {
  Premaniplex x;
  x.rank = 2;
  x.num_vertices = 1;
  x.darts = {Dart{0, 0, 0, 0, 0}, Dart{1, 1, 0, 0, 1}};
  VoltageAssignment v;
  v.degree = 16;
  // two involutions generating a dihedral group of order 32
  GroupElement a = GroupElement::identity(16);
  GroupElement b = GroupElement::identity(16);
  for (int i = 0; i < 16; ++i) {
    a.perm[i] = (16 - i) % 16;
    b.perm[i] = (17 - i) % 16;
  }
  v.xi = {a, b};
  REQUIRE(validate_voltage(x, v).ok());
  CHECK_THROWS_AS(derived_graph(x, v, 8), InfeasibleError);
  CHECK(derived_graph(x, v, 64).num_flags == 32);
}

TEST_CASE("premaniplex json and dot round trips") {
  Premaniplex x = build_2nI(4, {1, 2});
  Json j = premaniplex_to_json(x);
  CHECK(j["vertices"] == 2);
  CHECK(j["darts"].size() == 8);
  Premaniplex back = premaniplex_from_json(j);
  CHECK(back.rank == x.rank);
  CHECK(back.num_vertices == x.num_vertices);
  for (size_t i = 0; i < x.darts.size(); ++i) {
    CHECK(back.darts[i].color == x.darts[i].color);
    CHECK(back.darts[i].inv == x.darts[i].inv);
  }
  CHECK(validate_premaniplex(back).ok());

  std::string dot = premaniplex_to_dot(x);
  CHECK(dot.find("semi") != std::string::npos);
  CHECK(dot.find("v0 -- v1") != std::string::npos);

  std::mt19937 rng(18);
  VoltageAssignment v = random_voltage(rng, x, 5);
  Json vj = voltage_to_json(v);
  VoltageAssignment vback = voltage_from_json(vj);
  CHECK(vback.degree == v.degree);
  REQUIRE(vback.xi.size() == v.xi.size());
  for (size_t i = 0; i < v.xi.size(); ++i) CHECK(vback.xi[i] == v.xi[i]);
  CHECK(validate_voltage(x, vback).ok());
}
