// Text formats: point CSV, line-oriented graph files, audit JSONL.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "rhg/audits.hpp"
#include "rhg/builder.hpp"

namespace rhg {

/// Raised for unreadable/unwritable paths and malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that round-trips.
inline std::string fmt_shortest(double x) {
  char buf[64];
  if (std::fabs(x) < 1e15 && x == std::trunc(x))
    return std::to_string(static_cast<long long>(x));
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// 17 significant digits.
inline std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

/// `id,r,theta` with 17 significant digits.
inline void write_points_csv(std::ostream& out, const PointSet& ps) {
  out << "id,r,theta\n";
  for (std::size_t i = 0; i < ps.count(); ++i)
    out << i << ',' << fmt_g17(ps[i].r) << ',' << fmt_g17(ps[i].theta) << '\n';
}

/// Header `p rhg <vertices> <edges> <alpha> <nu> <R> <seed>`, then
/// `v <id> <r> <theta>` per vertex and `e <u> <v>` (u < v) per edge.
inline void write_graph(std::ostream& out, const HypGraph& g) {
  const ModelParams& p = g.params();
  out << "p rhg " << g.vertex_count() << ' ' << g.edge_count() << ' ' << fmt_shortest(p.alpha) << ' '
      << fmt_shortest(p.nu) << ' ' << fmt_g17(p.R) << ' ' << p.seed << '\n';
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    out << "v " << i << ' ' << fmt_g17(g.points()[i].r) << ' ' << fmt_g17(g.points()[i].theta) << '\n';
  for (const auto& [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

/// Inverse of write_graph. n is recovered as nu e^{R/2}.
inline HypGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw IoError("graph file line " + std::to_string(lineno) + ": " + why);
  };

  std::size_t nv = 0, ne = 0;
  ModelParams params;
  bool header = false;
  std::vector<PolarPoint> pts;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    if (tag == 'p') {
      std::string kind;
      double alpha = 0, nu = 0, R = 0;
      std::uint64_t seed = 0;
      if (!(ls >> kind >> nv >> ne >> alpha >> nu >> R >> seed) || kind != "rhg") fail("bad header");
      params = ModelParams::make(alpha, nu, nu * std::exp(0.5 * R), seed);
      params.R = R;  // keep the stored radius bit-exact
      header = true;
      pts.reserve(nv);
      edges.reserve(ne);
    } else if (!header) {
      fail("record before header");
    } else if (tag == 'v') {
      std::size_t id = 0;
      double r = 0, theta = 0;
      if (!(ls >> id >> r >> theta) || id != pts.size()) fail("bad vertex record");
      pts.push_back(PolarPoint{r, theta});
    } else if (tag == 'e') {
      std::size_t u = 0, v = 0;
      if (!(ls >> u >> v) || u >= v || v >= nv) fail("bad edge record");
      edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    } else {
      fail(std::string("unknown record tag '") + tag + "'");
    }
  }
  if (!header) throw IoError("graph file: missing header");
  if (pts.size() != nv || edges.size() != ne) throw IoError("graph file: counts disagree with header");
  return HypGraph(PointSet{params, std::move(pts)}, edges);
}

inline nlohmann::json params_json(const ModelParams& p) {
  return nlohmann::json{{"alpha", p.alpha}, {"nu", p.nu}, {"n", p.n}, {"R", p.R}};
}

/// One JSONL record: {audit, params, violations, samples, seed, ...extra}.
inline std::string audit_jsonl(const AuditReport& rep) {
  nlohmann::ordered_json j;
  j["audit"] = rep.audit;
  j["params"] = params_json(rep.params);
  j["violations"] = rep.violations;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  for (const auto& [k, v] : rep.extra) j[k] = v;
  return j.dump();
}

}  // namespace rhg
