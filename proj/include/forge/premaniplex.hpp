#pragma once

// Premaniplexes: edge-colored graphs where every vertex meets exactly one
// dart of each color; semi-edges are self-inverse darts.  Includes the
// two-vertex family 2^n_I and reduced path handling.

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/maniplex.hpp"
#include "forge/perm.hpp"

namespace forge {

struct Dart {
  int32_t id = -1;
  int color = -1;
  int32_t from = -1;
  int32_t to = -1;
  int32_t inv = -1;  // dart id; equal to id for a semi-edge

  bool is_semi_edge() const { return inv == id; }
};

struct Premaniplex {
  int rank = 0;  // colors 0..rank-1
  int32_t num_vertices = 0;
  std::vector<Dart> darts;  // dart id == index
  std::vector<std::string> vertex_labels;

  // dart of the given color starting at v
  int32_t dart_at(int32_t v, int color) const {
    for (const Dart& d : darts)
      if (d.from == v && d.color == color) return d.id;
    return -1;
  }
};

struct PremaniplexIssue {
  std::string what;
};

struct PremaniplexReport {
  std::vector<PremaniplexIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline PremaniplexReport validate_premaniplex(const Premaniplex& x) {
  PremaniplexReport rep;
  auto fail = [&](std::string s) { rep.issues.push_back({std::move(s)}); };
  if (x.rank < 1 || x.num_vertices < 1) {
    fail("rank and vertex count must be positive");
    return rep;
  }
  for (size_t i = 0; i < x.darts.size(); ++i) {
    const Dart& d = x.darts[i];
    if (d.id != (int32_t)i) fail("dart " + std::to_string(i) + " has mismatched id");
    if (d.color < 0 || d.color >= x.rank)
      fail("dart " + std::to_string(i) + " has color out of range");
    if (d.from < 0 || d.from >= x.num_vertices || d.to < 0 || d.to >= x.num_vertices)
      fail("dart " + std::to_string(i) + " has endpoint out of range");
    if (d.inv < 0 || d.inv >= (int32_t)x.darts.size()) {
      fail("dart " + std::to_string(i) + " has bad inverse");
      continue;
    }
    const Dart& e = x.darts[d.inv];
    if (e.inv != d.id || e.color != d.color || e.from != d.to || e.to != d.from)
      fail("darts " + std::to_string(d.id) + "," + std::to_string(d.inv) +
           " are not mutually inverse");
    if (d.is_semi_edge() && d.from != d.to)
      fail("semi-edge dart " + std::to_string(i) + " with distinct endpoints");
  }
  if (!rep.ok()) return rep;
  // one dart of each color at each vertex
  std::vector<std::vector<int32_t>> out((size_t)x.num_vertices,
                                        std::vector<int32_t>(x.rank, -1));
  for (const Dart& d : x.darts) {
    if (out[d.from][d.color] != -1)
      fail("vertex " + std::to_string(d.from) + " has two darts of color " +
           std::to_string(d.color));
    out[d.from][d.color] = d.id;
  }
  for (int32_t v = 0; v < x.num_vertices; ++v)
    for (int c = 0; c < x.rank; ++c)
      if (out[v][c] == -1)
        fail("vertex " + std::to_string(v) + " misses color " + std::to_string(c));
  if (!rep.ok()) return rep;
  // alternating 4-paths of non-consecutive colors are closed
  auto step = [&](int32_t v, int c) { return x.darts[out[v][c]].to; };
  for (int32_t v = 0; v < x.num_vertices; ++v)
    for (int i = 0; i < x.rank; ++i)
      for (int j = i + 2; j < x.rank; ++j)
        if (step(step(step(step(v, i), j), i), j) != v)
          fail("colors " + std::to_string(i) + "," + std::to_string(j) +
               " do not commute at vertex " + std::to_string(v));
  // connectivity
  std::vector<char> vis((size_t)x.num_vertices, 0);
  std::vector<int32_t> stack{0};
  vis[0] = 1;
  int32_t seen = 1;
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    for (int c = 0; c < x.rank; ++c) {
      int32_t w = step(v, c);
      if (!vis[w]) {
        vis[w] = 1;
        ++seen;
        stack.push_back(w);
      }
    }
  }
  if (seen != x.num_vertices) fail("premaniplex is disconnected");
  return rep;
}

// fast per-vertex color lookup table
inline std::vector<std::vector<int32_t>> dart_table(const Premaniplex& x) {
  std::vector<std::vector<int32_t>> out((size_t)x.num_vertices,
                                        std::vector<int32_t>(x.rank, -1));
  for (const Dart& d : x.darts) out[d.from][d.color] = d.id;
  return out;
}

// Two vertices (0 = white "a", 1 = black "b"); colors in I become semi-edges
// at both vertices, the others become links.  Dart ids: 2*color + vertex.
inline Premaniplex build_2nI(int n, const std::vector<int>& I) {
  if (n < 1) throw std::invalid_argument("build_2nI: rank must be positive");
  std::set<int> semi(I.begin(), I.end());
  for (int c : semi)
    if (c < 0 || c >= n) throw std::invalid_argument("build_2nI: color out of range");
  if ((int)semi.size() >= n)
    throw std::invalid_argument(
        "build_2nI: I must be a proper subset of the colors");
  Premaniplex x;
  x.rank = n;
  x.num_vertices = 2;
  x.vertex_labels = {"white", "black"};
  x.darts.resize((size_t)2 * n);
  for (int c = 0; c < n; ++c)
    for (int32_t v = 0; v < 2; ++v) {
      Dart d;
      d.id = 2 * c + v;
      d.color = c;
      d.from = v;
      if (semi.count(c)) {
        d.to = v;
        d.inv = d.id;
      } else {
        d.to = 1 - v;
        d.inv = 2 * c + (1 - v);
      }
      x.darts[d.id] = d;
    }
  return x;
}

// every flag graph is a premaniplex: one dart per flag per color, no
// semi-edges
inline Premaniplex premaniplex_from_maniplex(const Maniplex& m) {
  Premaniplex x;
  x.rank = m.rank;
  x.num_vertices = m.num_flags;
  x.darts.resize((size_t)m.rank * (size_t)m.num_flags);
  for (int c = 0; c < m.rank; ++c)
    for (int32_t f = 0; f < m.num_flags; ++f) {
      Dart d;
      d.id = c * m.num_flags + f;
      d.color = c;
      d.from = f;
      d.to = m.adj[(size_t)c][(size_t)f];
      d.inv = c * m.num_flags + d.to;
      x.darts[(size_t)d.id] = d;
    }
  return x;
}

struct Path {
  int32_t start = 0;
  std::vector<int32_t> darts;

  bool empty() const { return darts.empty(); }
};

inline int32_t path_end(const Premaniplex& x, const Path& w) {
  return w.darts.empty() ? w.start : x.darts[w.darts.back()].to;
}

// append one dart, cancelling an immediate backtrack (reduced representative);
// a repeated semi-edge also cancels, as its own inverse
inline void path_append(const Premaniplex& x, Path& w, int32_t dart) {
  if (x.darts[dart].from != path_end(x, w))
    throw std::invalid_argument("path_append: dart does not compose");
  if (!w.darts.empty() && x.darts[w.darts.back()].inv == dart)
    w.darts.pop_back();
  else
    w.darts.push_back(dart);
}

inline Path path_concat(const Premaniplex& x, const Path& a, const Path& b) {
  if (path_end(x, a) != b.start)
    throw std::invalid_argument("path_concat: endpoints do not match");
  Path out = a;
  for (int32_t d : b.darts) path_append(x, out, d);
  return out;
}

inline Path path_reverse(const Premaniplex& x, const Path& w) {
  Path out;
  out.start = path_end(x, w);
  for (auto it = w.darts.rbegin(); it != w.darts.rend(); ++it)
    out.darts.push_back(x.darts[*it].inv);
  return out;
}

inline bool path_is_valid(const Premaniplex& x, const Path& w) {
  int32_t at = w.start;
  if (at < 0 || at >= x.num_vertices) return false;
  for (int32_t d : w.darts) {
    if (d < 0 || d >= (int32_t)x.darts.size() || x.darts[d].from != at) return false;
    at = x.darts[d].to;
  }
  return true;
}

inline Json premaniplex_to_json(const Premaniplex& x) {
  Json j;
  j["vertices"] = x.num_vertices;
  Json darr = Json::array();
  for (const Dart& d : x.darts) {
    Json dj;
    dj["id"] = d.id;
    dj["color"] = d.color;
    dj["from"] = d.from;
    dj["to"] = d.to;
    dj["inv"] = d.inv;
    darr.push_back(dj);
  }
  j["darts"] = darr;
  if (!x.vertex_labels.empty()) j["labels"] = x.vertex_labels;
  return j;
}

inline Premaniplex premaniplex_from_json(const Json& j) {
  Premaniplex x;
  x.num_vertices = j.at("vertices").get<int32_t>();
  int max_color = -1;
  for (const auto& dj : j.at("darts")) {
    Dart d;
    d.id = dj.at("id").get<int32_t>();
    d.color = dj.at("color").get<int>();
    d.from = dj.at("from").get<int32_t>();
    d.to = dj.at("to").get<int32_t>();
    d.inv = dj.at("inv").get<int32_t>();
    max_color = std::max(max_color, d.color);
    if ((int32_t)x.darts.size() <= d.id) x.darts.resize((size_t)d.id + 1);
    x.darts[d.id] = d;
  }
  x.rank = max_color + 1;
  if (j.contains("labels"))
    x.vertex_labels = j.at("labels").get<std::vector<std::string>>();
  return x;
}

// undirected rendering; one edge per dart pair, semi-edges as "semi" loops
inline std::string premaniplex_to_dot(const Premaniplex& x) {
  std::ostringstream os;
  os << "graph premaniplex {\n";
  for (int32_t v = 0; v < x.num_vertices; ++v) {
    os << "  v" << v;
    if ((size_t)v < x.vertex_labels.size())
      os << " [label=\"" << x.vertex_labels[v] << "\"]";
    os << ";\n";
  }
  for (const Dart& d : x.darts) {
    if (d.inv < d.id) continue;  // one line per edge
    os << "  v" << d.from << " -- v" << d.to << " [label=\"" << d.color;
    if (d.is_semi_edge()) os << " semi";
    os << "\"";
    if (d.is_semi_edge()) os << " style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace forge
