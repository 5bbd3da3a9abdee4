#pragma once

// Hand-built flag graphs shared across test binaries.  These are written
// from first principles (cycle layouts, products) so they can serve as
// independent references for the construction code.

#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "forge/maniplex.hpp"

namespace fixtures {

// flag graph of a p-gon: a 2p-cycle with colors alternating 0,1,0,1,...
inline forge::Maniplex polygon(int p) {
  forge::Maniplex m;
  m.rank = 2;
  m.num_flags = 2 * p;
  m.adj.assign(2, std::vector<int32_t>(m.num_flags));
  for (int32_t f = 0; f < m.num_flags; ++f) {
    m.adj[0][f] = f ^ 1;  // pairs (0,1),(2,3),...
    m.adj[1][f] = (f % 2 == 1) ? (f + 1) % m.num_flags
                               : (f + m.num_flags - 1) % m.num_flags;
  }
  return m;
}

// two p-gon faces glued edge to edge: flag (q, s), q a polygon flag, s the face
inline forge::Maniplex dihedron(int p) {
  forge::Maniplex poly = polygon(p);
  forge::Maniplex m;
  m.rank = 3;
  m.num_flags = 2 * poly.num_flags;
  m.adj.assign(3, std::vector<int32_t>(m.num_flags));
  for (int32_t q = 0; q < poly.num_flags; ++q)
    for (int32_t s = 0; s < 2; ++s) {
      int32_t f = 2 * q + s;
      m.adj[0][f] = 2 * poly.adj[0][q] + s;
      m.adj[1][f] = 2 * poly.adj[1][q] + s;
      m.adj[2][f] = f ^ 1;
    }
  return m;
}

// Flag graph of a map on a surface given by its face cycles.  Every edge
// must lie on exactly two face slots.  Flag (F, i, s) sits on the edge
// faces[F][i]..faces[F][i+1], at the first endpoint when s = 0.
inline forge::Maniplex map_from_faces(int num_vertices,
                                      const std::vector<std::vector<int>>& faces) {
  std::vector<int32_t> offset;
  int32_t total = 0;
  for (const auto& f : faces) {
    if (f.size() < 2) throw std::invalid_argument("map_from_faces: face too small");
    offset.push_back(total);
    total += 2 * (int32_t)f.size();
  }
  auto flag_id = [&](int F, int i, int s) { return offset[F] + 2 * i + s; };
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_slots;
  for (int F = 0; F < (int)faces.size(); ++F) {
    int k = (int)faces[F].size();
    for (int i = 0; i < k; ++i) {
      int u = faces[F][i], v = faces[F][(i + 1) % k];
      if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices || u == v)
        throw std::invalid_argument("map_from_faces: bad face cycle");
      edge_slots[{std::min(u, v), std::max(u, v)}].push_back({F, i});
    }
  }
  for (const auto& [e, slots] : edge_slots)
    if (slots.size() != 2)
      throw std::invalid_argument("map_from_faces: edge not on two faces");
  forge::Maniplex m;
  m.rank = 3;
  m.num_flags = total;
  m.adj.assign(3, std::vector<int32_t>(total));
  for (int F = 0; F < (int)faces.size(); ++F) {
    int k = (int)faces[F].size();
    for (int i = 0; i < k; ++i)
      for (int s = 0; s < 2; ++s) {
        int32_t f = flag_id(F, i, s);
        m.adj[0][f] = flag_id(F, i, s ^ 1);
        m.adj[1][f] = s == 0 ? flag_id(F, (i + k - 1) % k, 1)
                             : flag_id(F, (i + 1) % k, 0);
        int u = faces[F][i], v = faces[F][(i + 1) % k];
        const auto& slots = edge_slots.at({std::min(u, v), std::max(u, v)});
        auto [G, j] = slots[0] == std::make_pair(F, i) ? slots[1] : slots[0];
        int vertex = s == 0 ? u : v;
        int t = faces[G][j] == vertex ? 0 : 1;
        m.adj[2][f] = flag_id(G, j, t);
      }
  }
  return m;
}

// cuboctahedron: 12 vertices (+-1,+-1,0) up to axis choice, 6 squares in the
// coordinate planes, 8 triangles in the octants
inline forge::Maniplex cuboctahedron() {
  std::vector<std::array<int, 3>> verts;
  for (int a = 0; a < 3; ++a)
    for (int s0 : {1, -1})
      for (int s1 : {1, -1}) {
        std::array<int, 3> v{0, 0, 0};
        v[(a + 1) % 3] = s0;
        v[(a + 2) % 3] = s1;
        verts.push_back(v);
      }
  auto index_of = [&](std::array<int, 3> v) {
    for (int i = 0; i < (int)verts.size(); ++i)
      if (verts[i] == v) return i;
    throw std::logic_error("cuboctahedron: vertex lookup");
  };
  std::vector<std::vector<int>> faces;
  for (int a = 0; a < 3; ++a)
    for (int s : {1, -1}) {
      int b = (a + 1) % 3, c = (a + 2) % 3;
      std::vector<int> sq;
      for (auto [pb, pc] : {std::pair{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) {
        std::array<int, 3> v{0, 0, 0};
        v[a] = s, v[b] = pb, v[c] = pc;
        sq.push_back(index_of(v));
      }
      faces.push_back(sq);
    }
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1})
        faces.push_back({index_of({sx, sy, 0}), index_of({sx, 0, sz}),
                         index_of({0, sy, sz})});
  return map_from_faces(12, faces);
}

// hexagon split by the diagonals 0-2 and 2-5: the unique degree-4 vertex and
// the uneven diagonal placement kill every symmetry
inline forge::Maniplex squashed_hexagon() {
  return map_from_faces(
      6, {{0, 1, 2, 3, 4, 5}, {0, 1, 2}, {2, 3, 4, 5}, {0, 2, 5}});
}

}  // namespace fixtures
