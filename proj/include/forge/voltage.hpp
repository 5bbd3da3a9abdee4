#pragma once

// Voltage assignments on premaniplexes and the derived flag graph.
//
// Walking a dart d extends the group coordinate on the right:
// (x, g) -> (to(d), compose(g, xi(d))).  path_voltage folds the same way,
// so a path ending where another starts satisfies
// pv(concat(W, W')) == compose(pv(W), pv(W')).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/maniplex.hpp"
#include "forge/perm.hpp"
#include "forge/permgroup.hpp"
#include "forge/premaniplex.hpp"

namespace forge {

struct VoltageAssignment {
  int degree = 0;                 // points the voltages permute
  std::vector<GroupElement> xi;   // indexed by dart id

  const GroupElement& at(int32_t dart) const { return xi.at((size_t)dart); }
};

struct VoltageIssue {
  std::string what;
};

struct VoltageReport {
  std::vector<VoltageIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline VoltageReport validate_voltage(const Premaniplex& x,
                                      const VoltageAssignment& v) {
  VoltageReport rep;
  auto fail = [&](std::string s) { rep.issues.push_back({std::move(s)}); };
  if (v.xi.size() != x.darts.size()) {
    fail("voltage table covers " + std::to_string(v.xi.size()) + " darts, graph has " +
         std::to_string(x.darts.size()));
    return rep;
  }
  for (const Dart& d : x.darts) {
    const GroupElement& g = v.xi[d.id];
    if ((int)g.degree() != v.degree || !is_valid_permutation(g)) {
      fail("dart " + std::to_string(d.id) + " carries an invalid element");
      continue;
    }
    if (d.inv >= d.id && v.xi[d.inv] != inverse(g))
      fail("darts " + std::to_string(d.id) + "," + std::to_string(d.inv) +
           " do not carry inverse voltages");
  }
  return rep;
}

inline GroupElement path_voltage(const Premaniplex& x, const VoltageAssignment& v,
                                 const Path& w) {
  if (!path_is_valid(x, w))
    throw std::invalid_argument("path_voltage: dart sequence does not compose");
  GroupElement g = GroupElement::identity((size_t)v.degree);
  for (int32_t d : w.darts) g = compose(g, v.xi[d]);
  return g;
}

// Spanning tree of the subgraph with the given colors, grown breadth-first;
// at each vertex darts are tried by ascending color, which fixes the tree.
struct SpanningTree {
  int32_t base = 0;
  std::vector<int32_t> parent_dart;  // dart ending at v, -1 at base/unreached
  std::vector<char> reached;
  std::vector<char> tree_dart;  // both orientations of tree edges
};

inline SpanningTree restricted_spanning_tree(const Premaniplex& x, int32_t base,
                                             const std::vector<int>& colors) {
  if (base < 0 || base >= x.num_vertices)
    throw std::invalid_argument("spanning tree: base out of range");
  std::set<int> cset(colors.begin(), colors.end());
  auto table = dart_table(x);
  SpanningTree t;
  t.base = base;
  t.parent_dart.assign((size_t)x.num_vertices, -1);
  t.reached.assign((size_t)x.num_vertices, 0);
  t.tree_dart.assign(x.darts.size(), 0);
  std::queue<int32_t> q;
  q.push(base);
  t.reached[base] = 1;
  while (!q.empty()) {
    int32_t at = q.front();
    q.pop();
    for (int c : cset) {
      if (c < 0 || c >= x.rank)
        throw std::invalid_argument("spanning tree: color out of range");
      int32_t d = table[at][c];
      if (d < 0) throw std::invalid_argument("spanning tree: missing dart");
      int32_t to = x.darts[d].to;
      if (t.reached[to]) continue;
      t.reached[to] = 1;
      t.parent_dart[to] = d;
      t.tree_dart[d] = 1;
      t.tree_dart[x.darts[d].inv] = 1;
      q.push(to);
    }
  }
  return t;
}

inline std::vector<int> all_colors(const Premaniplex& x) {
  std::vector<int> c(x.rank);
  for (int i = 0; i < x.rank; ++i) c[i] = i;
  return c;
}

inline Path tree_path(const Premaniplex& x, const SpanningTree& t, int32_t v) {
  if (!t.reached[v])
    throw std::invalid_argument("tree_path: vertex not in the tree");
  std::vector<int32_t> back;
  for (int32_t at = v; at != t.base; at = x.darts[t.parent_dart[at]].from)
    back.push_back(t.parent_dart[at]);
  Path w;
  w.start = t.base;
  w.darts.assign(back.rbegin(), back.rend());
  return w;
}

// One closed path per non-tree dart of the chosen colors, ordered by dart id:
// tree path to the dart's tail, the dart, tree path back from its head.
// Darts outside the base's component contribute nothing.
inline std::vector<Path> fundamental_generators(const Premaniplex& x, int32_t base,
                                                const std::vector<int>& colors) {
  SpanningTree t = restricted_spanning_tree(x, base, colors);
  std::set<int> cset(colors.begin(), colors.end());
  std::vector<Path> out;
  for (const Dart& d : x.darts) {
    if (!cset.count(d.color) || t.tree_dart[d.id] || !t.reached[d.from]) continue;
    Path w = tree_path(x, t, d.from);
    path_append(x, w, d.id);
    Path back = path_reverse(x, tree_path(x, t, d.to));
    w = path_concat(x, w, back);
    out.push_back(std::move(w));
  }
  return out;
}

// voltages of closed paths at `base` using only the chosen colors
inline PermGroup restricted_voltage_group(const Premaniplex& x,
                                          const VoltageAssignment& v, int32_t base,
                                          const std::vector<int>& colors) {
  std::vector<GroupElement> gens;
  for (const Path& w : fundamental_generators(x, base, colors))
    gens.push_back(path_voltage(x, v, w));
  return PermGroup((size_t)v.degree, std::move(gens));
}

// voltages of paths a -> b using only the chosen colors; nullopt when no
// such path exists.  The set is one connecting voltage composed with every
// closed-path voltage at b.
inline std::optional<Coset> restricted_voltage_coset(const Premaniplex& x,
                                                     const VoltageAssignment& v,
                                                     int32_t a, int32_t b,
                                                     const std::vector<int>& colors) {
  SpanningTree t = restricted_spanning_tree(x, a, colors);
  if (b < 0 || b >= x.num_vertices)
    throw std::invalid_argument("restricted_voltage_coset: vertex out of range");
  if (!t.reached[b]) return std::nullopt;
  GroupElement rep = path_voltage(x, v, tree_path(x, t, b));
  auto sub = std::make_shared<PermGroup>(restricted_voltage_group(x, v, b, colors));
  return Coset{std::move(rep), std::move(sub)};
}

struct BulletResult {
  bool pass = true;
  std::string detail;
};

struct DerivedCheckReport {
  bool normalized = false;           // a gauge shift was needed first
  VoltageAssignment checked;         // the assignment the bullets ran on
  BulletResult generation;           // dart voltages generate the whole group
  BulletResult semi_edge_orders;     // semi-edge voltages have order exactly 2
  BulletResult parallel_distinct;    // parallel darts carry distinct voltages
  BulletResult commuting_squares;    // non-consecutive color 4-paths are trivial

  bool ok() const {
    return generation.pass && semi_edge_orders.pass && parallel_distinct.pass &&
           commuting_squares.pass;
  }
};

// shift voltages so every tree dart carries the identity; closed-path
// voltages at the tree base are unchanged
inline VoltageAssignment gauge_normalize(const Premaniplex& x,
                                         const VoltageAssignment& v,
                                         const SpanningTree& t) {
  std::vector<GroupElement> pot((size_t)x.num_vertices);
  for (int32_t u = 0; u < x.num_vertices; ++u)
    pot[u] = t.reached[u] ? path_voltage(x, v, tree_path(x, t, u))
                          : GroupElement::identity((size_t)v.degree);
  VoltageAssignment out;
  out.degree = v.degree;
  out.xi.resize(v.xi.size());
  for (const Dart& d : x.darts)
    out.xi[d.id] = compose(compose(pot[d.from], v.xi[d.id]), inverse(pot[d.to]));
  return out;
}

// Decides whether the derived graph is a maniplex, one verdict per
// obstruction.  When `target` is given, generation is tested against it;
// otherwise against the group the raw voltages generate.
inline DerivedCheckReport check_derived_is_maniplex(const Premaniplex& x,
                                                    const VoltageAssignment& v,
                                                    const PermGroup* target = nullptr) {
  {
    auto pr = validate_premaniplex(x);
    if (!pr.ok())
      throw std::invalid_argument("check_derived: " + pr.issues.front().what);
    auto vr = validate_voltage(x, v);
    if (!vr.ok())
      throw std::invalid_argument("check_derived: " + vr.issues.front().what);
  }
  DerivedCheckReport rep;
  SpanningTree t = restricted_spanning_tree(x, 0, all_colors(x));
  bool trivial_tree = true;
  for (size_t d = 0; d < x.darts.size(); ++d)
    if (t.tree_dart[d] && !v.xi[d].is_identity()) trivial_tree = false;
  rep.normalized = !trivial_tree;
  rep.checked = trivial_tree ? v : gauge_normalize(x, v, t);
  const VoltageAssignment& w = rep.checked;

  std::vector<GroupElement> all(v.xi.begin(), v.xi.end());
  PermGroup whole((size_t)v.degree, all);
  if (target) {
    if (!whole.same_group(*target)) {
      rep.generation.pass = false;
      rep.generation.detail = "dart voltages generate a group of order " +
                              u128_to_string(whole.order()) + ", target has order " +
                              u128_to_string(target->order());
    }
  } else {
    std::vector<GroupElement> nontree;
    for (const Dart& d : x.darts)
      if (!t.tree_dart[d.id]) nontree.push_back(w.xi[d.id]);
    PermGroup reduced((size_t)v.degree, std::move(nontree));
    if (!reduced.same_group(whole)) {
      rep.generation.pass = false;
      rep.generation.detail = "non-tree voltages do not generate the full group";
    }
  }

  for (const Dart& d : x.darts) {
    if (!d.is_semi_edge()) continue;
    if (!is_involution(w.xi[d.id])) {
      rep.semi_edge_orders.pass = false;
      rep.semi_edge_orders.detail =
          "semi-edge dart " + std::to_string(d.id) + " has order != 2";
      break;
    }
  }

  for (size_t i = 0; i < x.darts.size() && rep.parallel_distinct.pass; ++i)
    for (size_t j = i + 1; j < x.darts.size(); ++j) {
      const Dart &a = x.darts[i], &b = x.darts[j];
      if (a.from != b.from || a.to != b.to) continue;
      if (w.xi[a.id] == w.xi[b.id]) {
        rep.parallel_distinct.pass = false;
        rep.parallel_distinct.detail = "parallel darts " + std::to_string(a.id) +
                                       "," + std::to_string(b.id) +
                                       " carry equal voltages";
        break;
      }
    }

  auto table = dart_table(x);
  for (int32_t vx = 0; vx < x.num_vertices && rep.commuting_squares.pass; ++vx)
    for (int i = 0; i < x.rank && rep.commuting_squares.pass; ++i)
      for (int j = i + 2; j < x.rank; ++j) {
        Path sq;
        sq.start = vx;
        int colors[4] = {i, j, i, j};
        int32_t at = vx;
        for (int step = 0; step < 4; ++step) {
          int32_t d = table[at][colors[step]];
          sq.darts.push_back(d);
          at = x.darts[d].to;
        }
        if (at != vx || !path_voltage(x, w, sq).is_identity()) {
          rep.commuting_squares.pass = false;
          rep.commuting_squares.detail =
              "colors " + std::to_string(i) + "," + std::to_string(j) +
              " square at vertex " + std::to_string(vx) + " is not trivial";
          break;
        }
      }
  return rep;
}

// Flag graph on vertices x group elements; flag (x, g) has id g_index *
// num_vertices + x with the group enumerated in sorted order.  Refuses when
// the group does not enumerate within max_flags.
inline Maniplex derived_graph(const Premaniplex& x, const VoltageAssignment& v,
                              size_t max_flags = (size_t)1 << 24) {
  {
    auto pr = validate_premaniplex(x);
    if (!pr.ok())
      throw std::invalid_argument("derived_graph: " + pr.issues.front().what);
    auto vr = validate_voltage(x, v);
    if (!vr.ok())
      throw std::invalid_argument("derived_graph: " + vr.issues.front().what);
  }
  std::vector<GroupElement> all(v.xi.begin(), v.xi.end());
  PermGroup gamma((size_t)v.degree, std::move(all));
  size_t cap = max_flags / (size_t)x.num_vertices;
  auto elems = gamma.enumerate(cap);
  if (!elems)
    throw InfeasibleError("derived_graph: voltage group order " +
                          u128_to_string(gamma.order()) + " exceeds " +
                          std::to_string(cap) + " elements");
  std::unordered_map<GroupElement, int32_t, GroupElementHash> index;
  for (size_t i = 0; i < elems->size(); ++i) index[(*elems)[i]] = (int32_t)i;

  auto table = dart_table(x);
  Maniplex m;
  m.rank = x.rank;
  m.num_flags = (int32_t)(elems->size() * (size_t)x.num_vertices);
  m.adj.assign((size_t)m.rank, std::vector<int32_t>((size_t)m.num_flags, -1));
  for (size_t gi = 0; gi < elems->size(); ++gi)
    for (int32_t vx = 0; vx < x.num_vertices; ++vx) {
      int32_t flag = (int32_t)gi * x.num_vertices + vx;
      for (int c = 0; c < x.rank; ++c) {
        const Dart& d = x.darts[table[vx][c]];
        GroupElement g2 = compose((*elems)[gi], v.xi[d.id]);
        auto it = index.find(g2);
        if (it == index.end())
          throw std::logic_error("derived_graph: voltage left the group");
        m.adj[c][flag] = it->second * x.num_vertices + d.to;
      }
    }
  auto check = validate_maniplex(m);
  if (!check.ok())
    throw std::runtime_error("derived_graph: result is not a maniplex: " +
                             check.issues.front().describe());
  return m;
}

inline Json voltage_to_json(const VoltageAssignment& v) {
  Json j = Json::object();
  for (size_t d = 0; d < v.xi.size(); ++d)
    j[std::to_string(d)] = group_element_to_json(v.xi[d]);
  return j;
}

inline VoltageAssignment voltage_from_json(const Json& j) {
  VoltageAssignment v;
  int32_t max_id = -1;
  for (auto it = j.begin(); it != j.end(); ++it)
    max_id = std::max(max_id, (int32_t)std::stol(it.key()));
  v.xi.assign((size_t)max_id + 1, GroupElement{});
  for (auto it = j.begin(); it != j.end(); ++it) {
    GroupElement g = group_element_from_json(it.value());
    v.degree = (int)g.degree();
    v.xi[(size_t)std::stol(it.key())] = std::move(g);
  }
  return v;
}

}  // namespace forge
