#pragma once

// Maniplexes as edge-colored flag graphs: n involutory flag permutations,
// one per color, satisfying simplicity, the commuting condition for
// non-consecutive colors, and connectivity.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/perm.hpp"

namespace forge {

struct Maniplex {
  int rank = 0;
  int32_t num_flags = 0;
  // adj[i][f] = flag reached from f along the color-i edge
  std::vector<std::vector<int32_t>> adj;
  std::vector<std::string> labels;  // optional, empty unless set

  int32_t a(int color, int32_t flag) const { return adj[color][flag]; }
};

enum class ManiplexViolation {
  BadRank,
  AdjNotPermutation,
  NotInvolution,
  FixedPoint,
  MultiEdge,
  NonCommuting,
  Disconnected,
};

struct ValidationIssue {
  ManiplexViolation kind;
  int color_a = -1;
  int color_b = -1;
  int32_t flag = -1;
  std::string describe() const {
    switch (kind) {
      case ManiplexViolation::BadRank:
        return "rank must be >= 1 with one adjacency list per color";
      case ManiplexViolation::AdjNotPermutation:
        return "adj[" + std::to_string(color_a) + "] is not a permutation";
      case ManiplexViolation::NotInvolution:
        return "adj[" + std::to_string(color_a) + "] is not an involution at flag " +
               std::to_string(flag);
      case ManiplexViolation::FixedPoint:
        return "adj[" + std::to_string(color_a) + "] fixes flag " + std::to_string(flag);
      case ManiplexViolation::MultiEdge:
        return "colors " + std::to_string(color_a) + "," + std::to_string(color_b) +
               " give the same edge at flag " + std::to_string(flag);
      case ManiplexViolation::NonCommuting:
        return "colors " + std::to_string(color_a) + "," + std::to_string(color_b) +
               " fail to commute at flag " + std::to_string(flag);
      case ManiplexViolation::Disconnected:
        return "flag graph is disconnected (flag " + std::to_string(flag) +
               " unreachable from 0)";
    }
    return "unknown";
  }
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate_maniplex(const Maniplex& m) {
  ValidationReport rep;
  if (m.rank < 1 || (int)m.adj.size() != m.rank || m.num_flags <= 0) {
    rep.issues.push_back({ManiplexViolation::BadRank});
    return rep;
  }
  for (int i = 0; i < m.rank; ++i) {
    if ((int32_t)m.adj[i].size() != m.num_flags) {
      rep.issues.push_back({ManiplexViolation::AdjNotPermutation, i});
      return rep;
    }
    std::vector<char> seen(m.num_flags, 0);
    bool bad = false;
    for (int32_t f = 0; f < m.num_flags; ++f) {
      int32_t v = m.adj[i][f];
      if (v < 0 || v >= m.num_flags || seen[v]) {
        bad = true;
        break;
      }
      seen[v] = 1;
    }
    if (bad) {
      rep.issues.push_back({ManiplexViolation::AdjNotPermutation, i});
      return rep;  // structural: later checks would read garbage
    }
  }
  for (int i = 0; i < m.rank; ++i) {
    for (int32_t f = 0; f < m.num_flags; ++f) {
      if (m.adj[i][f] == f) {
        rep.issues.push_back({ManiplexViolation::FixedPoint, i, -1, f});
        break;
      }
    }
    for (int32_t f = 0; f < m.num_flags; ++f) {
      if (m.adj[i][m.adj[i][f]] != f) {
        rep.issues.push_back({ManiplexViolation::NotInvolution, i, -1, f});
        break;
      }
    }
  }
  for (int i = 0; i < m.rank; ++i)
    for (int j = i + 1; j < m.rank; ++j) {
      for (int32_t f = 0; f < m.num_flags; ++f)
        if (m.adj[i][f] == m.adj[j][f]) {
          rep.issues.push_back({ManiplexViolation::MultiEdge, i, j, f});
          break;
        }
      if (j - i > 1) {
        for (int32_t f = 0; f < m.num_flags; ++f)
          if (m.adj[i][m.adj[j][f]] != m.adj[j][m.adj[i][f]]) {
            rep.issues.push_back({ManiplexViolation::NonCommuting, i, j, f});
            break;
          }
      }
    }
  // connectivity
  std::vector<char> vis(m.num_flags, 0);
  std::vector<int32_t> stack{0};
  vis[0] = 1;
  int32_t count = 1;
  while (!stack.empty()) {
    int32_t f = stack.back();
    stack.pop_back();
    for (int i = 0; i < m.rank; ++i) {
      int32_t g = m.adj[i][f];
      if (g >= 0 && g < m.num_flags && !vis[g]) {
        vis[g] = 1;
        ++count;
        stack.push_back(g);
      }
    }
  }
  if (count != m.num_flags) {
    int32_t missing = 0;
    while (vis[missing]) ++missing;
    rep.issues.push_back({ManiplexViolation::Disconnected, -1, -1, missing});
  }
  return rep;
}

inline Maniplex dual(const Maniplex& m) {
  Maniplex d;
  d.rank = m.rank;
  d.num_flags = m.num_flags;
  d.adj.resize(m.rank);
  for (int i = 0; i < m.rank; ++i) d.adj[i] = m.adj[m.rank - 1 - i];
  return d;
}

struct Face {
  int rank;
  int32_t id;                  // index within its rank, by smallest flag
  std::vector<int32_t> flags;  // sorted
};

// Connected components of the subgraph using all colors except i.
// Face ids are assigned in order of their smallest flag.
inline std::vector<Face> i_faces(const Maniplex& m, int i) {
  if (i < 0 || i >= m.rank) throw std::invalid_argument("i_faces: bad rank");
  std::vector<int32_t> comp(m.num_flags, -1);
  std::vector<Face> faces;
  for (int32_t start = 0; start < m.num_flags; ++start) {
    if (comp[start] >= 0) continue;
    Face face;
    face.rank = i;
    face.id = (int32_t)faces.size();
    std::vector<int32_t> stack{start};
    comp[start] = face.id;
    while (!stack.empty()) {
      int32_t f = stack.back();
      stack.pop_back();
      face.flags.push_back(f);
      for (int c = 0; c < m.rank; ++c) {
        if (c == i) continue;
        int32_t g = m.adj[c][f];
        if (comp[g] < 0) {
          comp[g] = face.id;
          stack.push_back(g);
        }
      }
    }
    std::sort(face.flags.begin(), face.flags.end());
    faces.push_back(std::move(face));
  }
  return faces;
}

// face id per flag for color i, aligned with i_faces ids
inline std::vector<int32_t> face_of_flag(const Maniplex& m, int i) {
  std::vector<int32_t> out(m.num_flags, -1);
  auto faces = i_faces(m, i);
  for (const auto& f : faces)
    for (int32_t fl : f.flags) out[fl] = f.id;
  return out;
}

struct FlagColoring {
  std::vector<uint8_t> color;  // 0 = white (flag 0 is white), 1 = black
  std::vector<int32_t> white_flags;
  std::vector<int32_t> black_flags;
};

// Two-coloring where colors flip exactly along the given colors.
// Returns nullopt when no consistent coloring exists.
inline std::optional<FlagColoring> two_coloring(const Maniplex& m,
                                                const std::vector<int>& flip_colors) {
  std::vector<char> flips(m.rank, 0);
  for (int c : flip_colors) {
    if (c < 0 || c >= m.rank) throw std::invalid_argument("two_coloring: bad color");
    flips[c] = 1;
  }
  FlagColoring fc;
  fc.color.assign(m.num_flags, 2);
  std::vector<int32_t> stack{0};
  fc.color[0] = 0;
  while (!stack.empty()) {
    int32_t f = stack.back();
    stack.pop_back();
    for (int c = 0; c < m.rank; ++c) {
      int32_t g = m.adj[c][f];
      uint8_t want = fc.color[f] ^ flips[c];
      if (fc.color[g] == 2) {
        fc.color[g] = want;
        stack.push_back(g);
      } else if (fc.color[g] != want) {
        return std::nullopt;
      }
    }
  }
  for (int32_t f = 0; f < m.num_flags; ++f) {
    if (fc.color[f] == 2) return std::nullopt;  // disconnected input
    (fc.color[f] ? fc.black_flags : fc.white_flags).push_back(f);
  }
  return fc;
}

// Color-respecting bijection determined by anchoring flag 0 of a onto each
// candidate flag of b and propagating; nullopt when none exists.
inline std::optional<std::vector<int32_t>> is_isomorphic(const Maniplex& a,
                                                         const Maniplex& b) {
  if (a.rank != b.rank || a.num_flags != b.num_flags) return std::nullopt;
  const int32_t n = a.num_flags;
  for (int32_t anchor = 0; anchor < n; ++anchor) {
    std::vector<int32_t> img(n, -1);
    img[0] = anchor;
    std::vector<int32_t> stack{0};
    bool ok = true;
    while (ok && !stack.empty()) {
      int32_t f = stack.back();
      stack.pop_back();
      for (int c = 0; c < a.rank; ++c) {
        int32_t fa = a.adj[c][f];
        int32_t fb = b.adj[c][img[f]];
        if (img[fa] == -1) {
          img[fa] = fb;
          stack.push_back(fa);
        } else if (img[fa] != fb) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    std::vector<char> hit(n, 0);
    bool bij = true;
    for (int32_t f = 0; f < n; ++f) {
      if (img[f] < 0 || hit[img[f]]) {
        bij = false;
        break;
      }
      hit[img[f]] = 1;
    }
    if (bij) return img;
  }
  return std::nullopt;
}

inline int32_t apply_word(const Maniplex& m, const std::vector<int>& word,
                          int32_t flag) {
  for (int c : word) {
    if (c < 0 || c >= m.rank) throw std::invalid_argument("apply_word: bad color");
    flag = m.adj[c][flag];
  }
  return flag;
}

inline Json maniplex_to_json(const Maniplex& m) {
  Json j;
  j["rank"] = m.rank;
  j["num_flags"] = m.num_flags;
  j["adj"] = m.adj;
  if (!m.labels.empty()) j["labels"] = m.labels;
  return j;
}

inline Maniplex maniplex_from_json(const Json& j) {
  Maniplex m;
  m.rank = j.at("rank").get<int>();
  m.num_flags = j.at("num_flags").get<int32_t>();
  m.adj = j.at("adj").get<std::vector<std::vector<int32_t>>>();
  if (j.contains("labels")) m.labels = j.at("labels").get<std::vector<std::string>>();
  return m;
}

}  // namespace forge
