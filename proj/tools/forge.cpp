// forge: build named flag-graph objects, run verification suites, export DOT.
//
// Exit codes: 0 success/verified, 1 verdict negative, 2 infeasible under the
// configured caps, 3 input or usage error.

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "forge/constructions.hpp"
#include "forge/polytopality.hpp"
#include "forge/poset.hpp"
#include "forge/symmetry.hpp"
#include "forge/xi.hpp"

using namespace forge;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInfeasible = 2;
constexpr int kUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  size_t materialization_cap = (size_t)1 << 24;  // flags in any derived/hat object
  size_t enumeration_cap = 10'000'000;           // coset elements per intersection
  size_t oracle_cap = 4096;                      // flags the poset oracle accepts
  uint32_t seed = 1;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": not a non-negative integer: '" + s + "'");
  }
}

void load_config(const std::string& path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "materialization_cap")
      cfg.materialization_cap = parse_u64(value, key);
    else if (key == "enumeration_cap")
      cfg.enumeration_cap = parse_u64(value, key);
    else if (key == "oracle_cap")
      cfg.oracle_cap = parse_u64(value, key);
    else if (key == "seed")
      cfg.seed = (uint32_t)parse_u64(value, key);
    else
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

void note(const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); }

// ---------------------------------------------------------------------------
// object grammar shared by build and export: square, torus44:<s>, hat2:<name>

Maniplex build_named_maniplex(const std::string& name, const Config& cfg) {
  if (name == "square") return square_flag_graph();
  if (name.rfind("torus44:", 0) == 0) {
    uint64_t s = parse_u64(name.substr(8), "torus44 side");
    return torus_map_44((int)s);
  }
  if (name.rfind("hat2:", 0) == 0)
    return hat2(build_named_maniplex(name.substr(5), cfg), (int64_t)cfg.materialization_cap);
  throw UsageError("unknown object '" + name + "' (expected square, torus44:<s> or hat2:<name>)");
}

std::vector<int> parse_colors(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back((int)parse_u64(item, "color"));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string colors_to_string(const std::vector<int>& I) {
  std::string s = "{";
  for (size_t i = 0; i < I.size(); ++i) s += (i ? "," : "") + std::to_string(I[i]);
  return s + "}";
}

XiVariant parse_variant(const std::string& v) {
  if (v == "xi") return XiVariant::Xi;
  if (v == "xiprime") return XiVariant::XiPrime;
  throw UsageError("unknown variant '" + v + "'");
}

// The voltage case table keeps the bottom and top colors on links, so the
// buildable premaniplexes are exactly those classes.
void require_xi_scope(int rank, const std::vector<int>& I) {
  if (rank != 4)
    throw UsageError("voltage assignments are wired for the rank-4 torus base only");
  for (int c : I)
    if (c <= 0 || c >= rank - 1)
      throw UsageError("semi-edge colors must lie strictly between 0 and " +
                       std::to_string(rank - 1));
}

// ---------------------------------------------------------------------------
// DOT

std::string dot_name(const std::string& raw) {
  std::string s;
  for (char c : raw) s += (std::isalnum((unsigned char)c) ? c : '_');
  if (s.empty() || std::isdigit((unsigned char)s[0])) s.insert(s.begin(), 'g');
  return s;
}

// Semi-edges render as dashed self-loops, links and loops as solid edges;
// darts in id order so identical inputs give identical bytes.
std::string premaniplex_to_dot(const Premaniplex& x, const std::string& name) {
  std::ostringstream os;
  os << "graph " << dot_name(name) << " {\n";
  for (int32_t v = 0; v < x.num_vertices; ++v) {
    os << "  v" << v;
    if ((size_t)v < x.vertex_labels.size() && !x.vertex_labels[v].empty())
      os << " [label=\"" << x.vertex_labels[v] << "\"]";
    os << ";\n";
  }
  for (const Dart& d : x.darts) {
    if (d.is_semi_edge())
      os << "  v" << d.from << " -- v" << d.to << " [label=\"" << d.color
         << "\", style=dashed];\n";
    else if (d.id < d.inv)
      os << "  v" << d.from << " -- v" << d.to << " [label=\"" << d.color << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

Premaniplex one_vertex_all_semi(int rank) {
  Premaniplex s;
  s.num_vertices = 1;
  s.rank = rank;
  for (int c = 0; c < rank; ++c) {
    Dart d;
    d.id = c;
    d.color = c;
    d.from = 0;
    d.to = 0;
    d.inv = c;
    s.darts.push_back(d);
  }
  return s;
}

// ---------------------------------------------------------------------------
// build

Json build_s3_artifact() {
  Maniplex m3 = hat2(square_flag_graph());
  std::vector<int32_t> S = find_S3(m3);

  // independent replay of the two defining checks, with counts
  FacePoset p = build_poset(m3);
  const int32_t nf = p.counts[p.n];
  uint32_t smask = 0;
  for (int32_t F : S) smask |= 1u << F;

  auto auts = automorphisms(m3);
  std::vector<int32_t> first(nf, -1);
  for (int32_t f = 0; f < m3.num_flags; ++f)
    if (first[p.flag_face[p.n][f]] == -1) first[p.flag_face[p.n][f]] = f;
  int fixing = 0;
  for (const GroupElement& a : auts) {
    if (a.is_identity()) continue;
    uint32_t img = 0;
    for (int32_t F = 0; F < nf; ++F)
      if ((smask >> F) & 1) img |= 1u << p.flag_face[p.n][a.perm[first[F]]];
    if (img == smask) ++fixing;
  }

  std::vector<uint32_t> closures;
  for (int l = 1; l <= p.n; ++l)
    for (int32_t face = 0; face < p.counts[l]; ++face) {
      uint32_t mask = 0;
      for (int32_t F : closure(p, l - 1, face)) mask |= 1u << F;
      closures.push_back(mask);
    }
  int64_t pairs = 0, containing = 0;
  for (size_t a = 0; a < closures.size(); ++a)
    for (size_t b = a; b < closures.size(); ++b) {
      ++pairs;
      if ((smask & ~(closures[a] | closures[b])) == 0) ++containing;
    }

  Json j;
  j["object"] = "s3";
  j["base"] = "hat2:square";
  j["facets"] = S;
  Json t;
  t["automorphisms"] = auts.size();
  t["nontrivial_fixing_setwise"] = fixing;
  t["closure_pairs"] = pairs;
  t["pairs_containing_set"] = containing;
  j["transcript"] = t;
  if (fixing != 0 || containing != 0)
    throw std::logic_error("s3: replay of the defining checks failed");
  return j;
}

Json build_eta_artifact() {
  Maniplex m = torus_map_44(8);
  GroupElement eta = eta_knight(m);
  auto facet = face_of_flag(m, 2);
  int32_t nf = 1 + *std::max_element(facet.begin(), facet.end());
  bool distinct = true;
  for (int32_t F = 0; F < nf && distinct; ++F) {
    std::vector<int32_t> images;
    for (int32_t f = 0; f < m.num_flags; ++f)
      if (facet[f] == F) images.push_back(facet[eta.perm[f]]);
    std::sort(images.begin(), images.end());
    distinct = std::unique(images.begin(), images.end()) == images.end();
  }
  Json j;
  j["object"] = "eta";
  j["base"] = "torus44:8";
  j["perm"] = eta.perm;
  Json t;
  t["involution"] = is_involution(eta);
  t["facets"] = nf;
  t["facet_images_distinct"] = distinct;
  j["transcript"] = t;
  return j;
}

int cmd_build(const std::string& object, int rank, const std::string& icsv,
              const std::string& variant, const std::string& out, const Config& cfg) {
  if (object == "s3") {
    write_json(out, build_s3_artifact());
    note("s3: separating facet set written");
    return kOk;
  }
  if (object == "eta") {
    write_json(out, build_eta_artifact());
    note("eta: knight pairing written");
    return kOk;
  }
  if (object == "xi") {
    std::vector<int> I = icsv.empty() ? std::vector<int>{1, 2} : parse_colors(icsv);
    require_xi_scope(rank, I);
    TorusPipeline t = build_torus_pipeline();
    Premaniplex x = build_2nI(rank, I);
    XiResult xr = xi_assignment(x, t.m, t.rho0, parse_variant(variant));
    Json px = premaniplex_to_json(x);
    Json vj = voltage_to_json(xr.xi);
    if (out.empty()) {
      Json both;
      both["premaniplex"] = px;
      both["voltage"] = vj;
      write_json("", both);
    } else {
      std::string stem = out;
      if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
        stem.resize(stem.size() - 5);
      write_json(stem + ".premaniplex.json", px);
      write_json(stem + ".voltage.json", vj);
      note("xi: wrote " + stem + ".premaniplex.json and " + stem + ".voltage.json");
    }
    return kOk;
  }
  Maniplex m = build_named_maniplex(object, cfg);
  write_json(out, maniplex_to_json(m));
  note(object + ": " + std::to_string(m.num_flags) + " flags, rank " +
       std::to_string(m.rank));
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

int verdict_exit(PolyVerdict v) {
  switch (v) {
    case PolyVerdict::Polytopal: return kOk;
    case PolyVerdict::Infeasible: return kInfeasible;
    default: return kNegative;
  }
}

Json bullet_json(const BulletResult& b) {
  Json j;
  j["pass"] = b.pass;
  if (!b.detail.empty()) j["detail"] = b.detail;
  return j;
}

int cmd_verify_voltage(const std::string& px_path, const std::string& v_path,
                       bool oracle, const std::string& out, const Config& cfg) {
  Premaniplex x = premaniplex_from_json(read_json(px_path));
  if (auto rep = validate_premaniplex(x); !rep.ok())
    throw UsageError(px_path + ": " + rep.issues.front().what);
  VoltageAssignment v = voltage_from_json(read_json(v_path));
  if (auto rep = validate_voltage(x, v); !rep.ok())
    throw UsageError(v_path + ": " + rep.issues.front().what);

  IntersectionOptions io;
  io.enumeration_cap = cfg.enumeration_cap;
  PolytopalityResult pr = verify_polytopal(x, v, io);

  Json j;
  j["command"] = "verify";
  j["mode"] = "voltage";
  j["verdict"] = to_string(pr.verdict);
  j["detail"] = pr.detail;
  Json bullets;
  bullets["generation"] = bullet_json(pr.derived.generation);
  bullets["semi_edge_orders"] = bullet_json(pr.derived.semi_edge_orders);
  bullets["parallel_distinct"] = bullet_json(pr.derived.parallel_distinct);
  bullets["commuting_squares"] = bullet_json(pr.derived.commuting_squares);
  j["bullets"] = bullets;
  j["tuples"] = pr.intersection.tuples.size();
  if (const TupleCheck* f = pr.intersection.first_failure()) {
    Json ff;
    ff["k"] = f->k;
    ff["m"] = f->m;
    ff["a"] = f->a;
    ff["b"] = f->b;
    ff["detail"] = f->detail;
    j["first_failure"] = ff;
  }

  int code = verdict_exit(pr.verdict);
  if (oracle) {
    CrossValidation cv = cross_validate(x, v, io, cfg.oracle_cap);
    Json cj;
    cj["ran"] = cv.ran;
    cj["agree"] = cv.agree;
    cj["oracle_polytopal"] = cv.oracle_polytopal;
    cj["detail"] = cv.detail;
    j["cross_validation"] = cj;
    if (cv.ran && !cv.agree) code = kNegative;
  }
  write_json(out, j);
  note("verdict: " + std::string(to_string(pr.verdict)) + " (" + pr.detail + ")");
  return code;
}

int cmd_verify_maniplex(const std::string& m_path, bool oracle,
                        const std::string& out, const Config& cfg) {
  Maniplex m = maniplex_from_json(read_json(m_path));
  auto val = validate_maniplex(m);
  Json j;
  j["command"] = "verify";
  j["mode"] = "maniplex";
  j["valid"] = val.ok();
  int code = val.ok() ? kOk : kNegative;
  if (!val.ok()) {
    j["detail"] = val.issues.front().describe();
    note("not a maniplex: " + val.issues.front().describe());
  } else if (oracle) {
    OracleOptions oo;
    oo.flag_cap = cfg.oracle_cap;
    OracleResult res = is_polytope(m, oo);
    Json oj;
    oj["verdict"] = !res.feasible() ? "infeasible"
                    : res.value()   ? "polytopal"
                                    : "not-polytopal";
    oj["detail"] = res.detail;
    j["oracle"] = oj;
    code = !res.feasible() ? kInfeasible : (res.value() ? kOk : kNegative);
    note("oracle: " + oj["verdict"].get<std::string>() + " (" + res.detail + ")");
  } else {
    note("maniplex valid: " + std::to_string(m.num_flags) + " flags, rank " +
         std::to_string(m.rank));
  }
  write_json(out, j);
  return code;
}

struct SuiteLine {
  bool pass = true;
  bool infeasible = false;
  std::string text;
};

void print_lines(const std::vector<SuiteLine>& lines) {
  for (const SuiteLine& l : lines)
    std::printf("[%s] %s\n", l.pass ? "pass" : (l.infeasible ? "skip" : "FAIL"),
                l.text.c_str());
  std::fflush(stdout);
}

// Full rank-4 run: both voltage assignments over the two-semi-edge class,
// then the high-interval tuples over every class whose end colors are links.
std::vector<SuiteLine> run_variant_checks(const TorusPipeline& t, XiVariant var,
                                          const Config& cfg) {
  std::vector<SuiteLine> lines;
  const std::string tag = var == XiVariant::Xi ? "xi" : "xiprime";
  IntersectionOptions io;
  io.enumeration_cap = cfg.enumeration_cap;

  Premaniplex x = build_2nI(4, {1, 2});
  XiResult xr = xi_assignment(x, t.m, t.rho0, var);
  PolytopalityResult pr = verify_polytopal(x, xr.xi, io);

  SuiteLine b;
  b.pass = pr.derived.ok();
  b.text = tag + ": derived-graph conditions (generation, semi-edge orders, "
                 "parallel darts, commuting squares)";
  if (!b.pass) b.text += " | " + pr.detail;
  lines.push_back(b);

  SuiteLine tu;
  tu.pass = pr.verdict == PolyVerdict::Polytopal;
  tu.infeasible = pr.verdict == PolyVerdict::Infeasible;
  tu.text = tag + ": interval tuples over I={1,2}, " +
            std::to_string(pr.intersection.tuples.size()) +
            " checks across both vertex pairs";
  if (!tu.pass) tu.text += " | " + pr.detail;
  lines.push_back(tu);

  IntersectionOptions hi = io;
  hi.min_k = 2;
  for (const std::vector<int>& I :
       {std::vector<int>{}, std::vector<int>{1}, std::vector<int>{2},
        std::vector<int>{1, 2}}) {
    Premaniplex xI = build_2nI(4, I);
    XiResult xrI = xi_assignment(xI, t.m, t.rho0, var);
    IntersectionReport rep = check_intersection_properties(xI, xrI.xi, hi);
    SuiteLine l;
    l.pass = rep.all_pass();
    l.text = tag + ": k>1 tuples for I=" + colors_to_string(I) + ", " +
             std::to_string(rep.tuples.size()) + " checks";
    if (!l.pass) {
      if (const TupleCheck* f = rep.first_failure())
        l.text += " | k=" + std::to_string(f->k) + " m=" + std::to_string(f->m) +
                  ": " + f->detail;
      else {
        l.infeasible = true;
        l.text += " | infeasible under the enumeration cap";
      }
    }
    lines.push_back(l);
  }
  return lines;
}

int cmd_suite_paper_main(const Config& cfg, int jobs, const std::string& out) {
  note("building the torus pipeline...");
  TorusPipeline t = build_torus_pipeline();
  std::vector<SuiteLine> lines;
  lines.push_back({true, false,
                   "base: torus map on " + std::to_string(t.m.num_flags) +
                       " flags, facet pairing and reflections in place"});

  std::vector<SuiteLine> lx, lp;
  if (jobs >= 2) {
    std::exception_ptr ex, ep;
    std::thread a([&] {
      try {
        lx = run_variant_checks(t, XiVariant::Xi, cfg);
      } catch (...) {
        ex = std::current_exception();
      }
    });
    std::thread b([&] {
      try {
        lp = run_variant_checks(t, XiVariant::XiPrime, cfg);
      } catch (...) {
        ep = std::current_exception();
      }
    });
    a.join();
    b.join();
    if (ex) std::rethrow_exception(ex);
    if (ep) std::rethrow_exception(ep);
  } else {
    lx = run_variant_checks(t, XiVariant::Xi, cfg);
    lp = run_variant_checks(t, XiVariant::XiPrime, cfg);
  }
  lines.insert(lines.end(), lx.begin(), lx.end());
  lines.insert(lines.end(), lp.begin(), lp.end());
  print_lines(lines);

  bool fail = false, infeasible = false;
  for (const SuiteLine& l : lines) {
    fail |= !l.pass && !l.infeasible;
    infeasible |= l.infeasible;
  }
  if (!out.empty()) {
    Json j;
    j["command"] = "verify";
    j["suite"] = "paper-main";
    Json arr = Json::array();
    for (const SuiteLine& l : lines) {
      Json s;
      s["pass"] = l.pass;
      s["text"] = l.text;
      arr.push_back(s);
    }
    j["stages"] = arr;
    j["pass"] = !fail && !infeasible;
    write_json(out, j);
  }
  return fail ? kNegative : (infeasible ? kInfeasible : kOk);
}

int cmd_suite_lemmas(const Config& cfg, const std::string& out) {
  note("building the torus pipeline...");
  TorusPipeline t = build_torus_pipeline();
  K1SupportReport rep = verify_k1_support_lemmas(t, cfg.seed);
  std::vector<SuiteLine> lines;
  lines.push_back({rep.generators_match, false,
                   "middle-color voltage group has the stated generating set"});
  lines.push_back({rep.low_reflections_fixed, false,
                   "facet reflection fixes the low base reflections"});
  lines.push_back({rep.open_paths_empty, false,
                   "open-path voltage cosets of the two color intervals never meet"});
  lines.push_back({rep.y_escapes_monodromy, false,
                   "top voltage times the middle group avoids the monodromy group (" +
                       std::to_string(rep.omega_samples) + " samples)"});
  lines.push_back({rep.formula_holds, false,
                   "path-voltage formula on " + std::to_string(rep.formula_paths) +
                       " sampled paths avoiding the split colors"});
  lines.push_back({rep.vertex_fixing.ok(), false,
                   "vertex-fixing words: " + rep.vertex_fixing.detail});
  print_lines(lines);
  note("seed: " + std::to_string(rep.seed));
  if (!out.empty()) {
    Json j;
    j["command"] = "verify";
    j["suite"] = "lemmas";
    j["seed"] = rep.seed;
    Json arr = Json::array();
    for (const SuiteLine& l : lines) {
      Json s;
      s["pass"] = l.pass;
      s["text"] = l.text;
      arr.push_back(s);
    }
    j["stages"] = arr;
    j["pass"] = rep.ok();
    write_json(out, j);
  }
  return rep.ok() ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const std::string& kind, const std::string& object, int rank,
               const std::string& icsv, const std::string& variant,
               const std::string& out, const Config& cfg) {
  if (kind == "premaniplex") {
    if (rank <= 0) throw UsageError("export premaniplex needs --rank");
    Premaniplex x = build_2nI(rank, parse_colors(icsv));
    write_text(out, premaniplex_to_dot(x, "two_" + std::to_string(rank) + "_I"));
    return kOk;
  }
  if (kind == "stg") {
    if (object.empty()) throw UsageError("export stg needs an object name");
    Maniplex m = build_named_maniplex(object, cfg);
    Premaniplex stg = symmetry_type_graph(m);
    write_text(out, premaniplex_to_dot(stg, "stg_" + object));
    note("stg: " + std::to_string(stg.num_vertices) + " orbit(s)");
    return kOk;
  }
  if (kind == "derived-stg") {
    std::vector<int> I = icsv.empty() ? std::vector<int>{1, 2} : parse_colors(icsv);
    require_xi_scope(rank, I);
    TorusPipeline t = build_torus_pipeline();
    Premaniplex x = build_2nI(rank, I);
    XiResult xr = xi_assignment(x, t.m, t.rho0, parse_variant(variant));
    OrbitAnalysis oa = orbit_analysis(x, xr.xi, cfg.seed);
    if (!oa.action_ok) throw std::logic_error("derived-stg: deck action check failed");
    // one flag orbit collapses the symmetry type to a point
    Premaniplex stg = oa.orbit_count == 1 ? one_vertex_all_semi(rank) : x;
    write_text(out, premaniplex_to_dot(stg, "derived_stg"));
    note("derived object has " + std::to_string(oa.orbit_count) +
         " flag orbit(s); voltage group order " + oa.group_order);
    return kOk;
  }
  throw UsageError("unknown export kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flag-graph toolkit: build voltage artifacts, verify polytopality, export DOT"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key=value file for caps and seed");
  std::optional<uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "PRNG seed for sampled checks");
  int jobs = (int)std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--jobs", jobs, "parallel workers for suites")->check(CLI::PositiveNumber);

  std::string b_object, b_icsv, b_variant = "xi", b_out;
  int b_rank = 4;
  CLI::App* b = app.add_subcommand("build", "construct a named object, write JSON");
  b->fallthrough();
  b->add_option("object", b_object, "square | torus44:<s> | hat2:<name> | s3 | eta | xi")
      ->required();
  b->add_option("--rank", b_rank, "premaniplex rank for xi");
  b->add_option("--I", b_icsv, "semi-edge colors, comma separated");
  b->add_option("--variant", b_variant, "xi | xiprime")
      ->check(CLI::IsMember({"xi", "xiprime"}));
  b->add_option("--out", b_out, "output path (stem for xi); stdout when absent");

  std::string v_px, v_v, v_m, v_suite, v_out;
  bool v_oracle = false;
  CLI::App* v = app.add_subcommand("verify", "run a verification, exit by verdict");
  v->fallthrough();
  v->add_option("--premaniplex", v_px, "premaniplex JSON path");
  v->add_option("--voltage", v_v, "voltage JSON path");
  v->add_option("--maniplex", v_m, "maniplex JSON path");
  v->add_flag("--oracle", v_oracle, "also run the face-poset oracle");
  v->add_option("--suite", v_suite, "paper-main | lemmas")
      ->check(CLI::IsMember({"paper-main", "lemmas"}));
  v->add_option("--out", v_out, "write the verdict JSON here too");

  std::string e_kind, e_object, e_icsv, e_variant = "xi", e_out;
  int e_rank = 0;
  CLI::App* e = app.add_subcommand("export", "write DOT renderings");
  e->fallthrough();
  e->add_option("kind", e_kind, "stg | derived-stg | premaniplex")->required();
  e->add_option("object", e_object, "object name for stg");
  e->add_option("--rank", e_rank, "premaniplex rank");
  e->add_option("--I", e_icsv, "semi-edge colors, comma separated");
  e->add_option("--variant", e_variant, "xi | xiprime")
      ->check(CLI::IsMember({"xi", "xiprime"}));
  e->add_option("--out", e_out, "output path; stdout when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    Config cfg;
    if (!config_path.empty()) load_config(config_path, cfg);
    if (seed_flag) cfg.seed = (uint32_t)*seed_flag;
    if (const char* env = std::getenv("FORGE_SEED"))
      cfg.seed = (uint32_t)parse_u64(env, "FORGE_SEED");

    if (b->parsed()) return cmd_build(b_object, b_rank, b_icsv, b_variant, b_out, cfg);

    if (v->parsed()) {
      int modes = (!v_suite.empty()) + (!v_m.empty()) + (!v_px.empty() || !v_v.empty());
      if (modes != 1)
        throw UsageError("verify needs exactly one of --suite, --maniplex, or "
                         "--premaniplex with --voltage");
      if (!v_suite.empty()) {
        if (v_suite == "paper-main") return cmd_suite_paper_main(cfg, jobs, v_out);
        return cmd_suite_lemmas(cfg, v_out);
      }
      if (!v_m.empty()) return cmd_verify_maniplex(v_m, v_oracle, v_out, cfg);
      if (v_px.empty() || v_v.empty())
        throw UsageError("verify needs both --premaniplex and --voltage");
      return cmd_verify_voltage(v_px, v_v, v_oracle, v_out, cfg);
    }

    if (e->parsed())
      return cmd_export(e_kind, e_object, e_rank, e_icsv, e_variant, e_out, cfg);
  } catch (const UsageError& err) {
    note(std::string("error: ") + err.what());
    return kUsage;
  } catch (const std::invalid_argument& err) {
    note(std::string("error: ") + err.what());
    return kUsage;
  } catch (const InfeasibleError& err) {
    note(std::string("infeasible: ") + err.what());
    return kInfeasible;
  } catch (const std::exception& err) {
    note(std::string("failed: ") + err.what());
    return kNegative;
  }
  return kUsage;
}
