// Experiment sweeps over (n, alpha, nu, trial), record persistence and
// least-squares fits of the L2 growth law.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "rhg/builder.hpp"
#include "rhg/components.hpp"
#include "rhg/io.hpp"
#include "rhg/rng.hpp"
#include "rhg/sampler.hpp"

namespace rhg {

struct TrialRecord {
  double n = 0;
  double alpha = 0;
  double nu = 0;
  std::uint64_t seed = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t L1 = 0;
  std::size_t L2 = 0;
  std::size_t num_components = 0;
  std::vector<std::pair<std::size_t, std::size_t>> count_ge;  // (k, #components of size >= k)
  BuilderKind builder = BuilderKind::banded;
  double ms = 0;
  // size -> multiplicity; kept in memory only
  std::map<std::size_t, std::size_t> histogram;

  std::size_t components_at_least(std::size_t k) const {
    std::size_t c = 0;
    for (auto it = histogram.lower_bound(k); it != histogram.end(); ++it) c += it->second;
    return c;
  }
};

struct ScanConfig {
  std::vector<double> n_grid;
  std::vector<double> alpha_grid;
  std::vector<double> nu_grid;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  BuilderKind builder = BuilderKind::banded;
  std::vector<std::size_t> ge_thresholds;
  unsigned threads = 1;
  double n_cap = 1e6;
  /// Fill the ms column with wall-clock time. Off by default so that output
  /// depends on the master seed alone.
  bool timing = false;
};

/// Seed of trial t; shared by every cell so cells compare on paired seeds.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) { return derive_seed(master, trial); }

inline void validate(const ScanConfig& cfg) {
  if (cfg.n_grid.empty() || cfg.alpha_grid.empty() || cfg.nu_grid.empty())
    throw std::invalid_argument("scan: n, alpha and nu grids must be non-empty");
  if (cfg.trials < 1) throw std::invalid_argument("scan: trials must be >= 1");
  for (double n : cfg.n_grid)
    if (n > cfg.n_cap)
      throw std::invalid_argument("scan: n = " + fmt_shortest(n) + " exceeds cap " + fmt_shortest(cfg.n_cap));
  for (double n : cfg.n_grid)
    for (double a : cfg.alpha_grid)
      for (double nu : cfg.nu_grid) ModelParams::make(a, nu, n);  // throws on invalid cells
}

inline TrialRecord run_trial(const ModelParams& params, BuilderKind builder,
                             const std::vector<std::size_t>& ge, bool timing) {
  const auto t0 = std::chrono::steady_clock::now();
  const PointSet ps = sample(params);
  const HypGraph g = build(ps, builder);
  const ComponentSummary cs = connected_components(g);
  const auto t1 = std::chrono::steady_clock::now();

  TrialRecord rec;
  rec.n = params.n;
  rec.alpha = params.alpha;
  rec.nu = params.nu;
  rec.seed = params.seed;
  rec.vertices = g.vertex_count();
  rec.edges = g.edge_count();
  rec.L1 = cs.L1;
  rec.L2 = second_largest(cs);
  rec.num_components = cs.num_components;
  rec.builder = builder;
  rec.histogram = size_histogram(cs);
  for (std::size_t k : ge) rec.count_ge.emplace_back(k, rec.components_at_least(k));
  rec.ms = timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
  return rec;
}

/// One record per (n, alpha, nu, trial), in that nesting order. Content is
/// independent of cfg.threads.
inline std::vector<TrialRecord> run_scan(const ScanConfig& cfg) {
  validate(cfg);
  struct Job {
    ModelParams params;
  };
  std::vector<Job> jobs;
  for (double n : cfg.n_grid)
    for (double a : cfg.alpha_grid)
      for (double nu : cfg.nu_grid)
        for (std::size_t t = 0; t < cfg.trials; ++t)
          jobs.push_back({ModelParams::make(a, nu, n, trial_seed(cfg.master_seed, t))});

  std::vector<TrialRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      out[i] = run_trial(jobs[i].params, cfg.builder, cfg.ge_thresholds, cfg.timing);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---- presets for alpha = 1/2 and alpha = 1 ----

enum class Preset { half, one };

inline Preset parse_preset(const std::string& s) {
  if (s == "half") return Preset::half;
  if (s == "one") return Preset::one;
  throw std::invalid_argument("unknown preset '" + s + "' (expected half or one)");
}

inline const std::vector<double>& default_n_grid() {
  static const std::vector<double> grid{1e4, 3e4, 1e5, 3e5, 1e6};
  return grid;
}

/// Forces alpha to 1/2 or 1; fills nu = 0.2 and the default n grid when the
/// caller left them empty.
inline ScanConfig preset_config(Preset which, ScanConfig cfg) {
  cfg.alpha_grid = {which == Preset::half ? 0.5 : 1.0};
  if (cfg.nu_grid.empty()) cfg.nu_grid = {0.2};
  if (cfg.n_grid.empty()) cfg.n_grid = default_n_grid();
  return cfg;
}

inline std::vector<TrialRecord> boundary_preset(Preset which, const ScanConfig& cfg) {
  return run_scan(preset_config(which, cfg));
}

// ---- persistence ----

inline std::string csv_header(const std::vector<std::size_t>& ge) {
  std::string h = "n,alpha,nu,seed,vertices,edges,L1,L2,num_components,builder,ms";
  for (auto k : ge) h += ",ge_" + std::to_string(k);
  return h;
}

inline void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& recs,
                              const std::vector<std::size_t>& ge) {
  out << csv_header(ge) << '\n';
  for (const auto& r : recs) {
    out << fmt_shortest(r.n) << ',' << fmt_shortest(r.alpha) << ',' << fmt_shortest(r.nu) << ',' << r.seed << ','
        << r.vertices << ',' << r.edges << ',' << r.L1 << ',' << r.L2 << ',' << r.num_components << ','
        << to_string(r.builder) << ',' << fmt_shortest(r.ms);
    for (const auto& [k, c] : r.count_ge) out << ',' << c;
    out << '\n';
  }
}

inline void write_records_jsonl(std::ostream& out, const std::vector<TrialRecord>& recs) {
  for (const auto& r : recs) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["alpha"] = r.alpha;
    j["nu"] = r.nu;
    j["seed"] = r.seed;
    j["vertices"] = r.vertices;
    j["edges"] = r.edges;
    j["L1"] = r.L1;
    j["L2"] = r.L2;
    j["num_components"] = r.num_components;
    j["builder"] = to_string(r.builder);
    j["ms"] = r.ms;
    for (const auto& [k, c] : r.count_ge) j["ge_" + std::to_string(k)] = c;
    out << j.dump() << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline void fill_field(TrialRecord& r, const std::string& key, const std::string& val) {
  if (key == "n") r.n = std::stod(val);
  else if (key == "alpha") r.alpha = std::stod(val);
  else if (key == "nu") r.nu = std::stod(val);
  else if (key == "seed") r.seed = std::stoull(val);
  else if (key == "vertices") r.vertices = std::stoull(val);
  else if (key == "edges") r.edges = std::stoull(val);
  else if (key == "L1") r.L1 = std::stoull(val);
  else if (key == "L2") r.L2 = std::stoull(val);
  else if (key == "num_components") r.num_components = std::stoull(val);
  else if (key == "builder") r.builder = parse_builder(val);
  else if (key == "ms") r.ms = std::stod(val);
  else if (key.rfind("ge_", 0) == 0) r.count_ge.emplace_back(std::stoull(key.substr(3)), std::stoull(val));
}

}  // namespace detail

/// Reads either format; JSONL is detected by a leading '{'.
inline std::vector<TrialRecord> read_records(std::istream& in) {
  std::vector<TrialRecord> recs;
  std::string line;
  std::vector<std::string> header;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      TrialRecord r;
      if (line[0] == '{') {
        const auto j = nlohmann::json::parse(line);
        for (const auto& [k, v] : j.items())
          detail::fill_field(r, k, v.is_string() ? v.get<std::string>() : v.dump());
      } else if (header.empty()) {
        header = detail::split_csv(line);
        continue;
      } else {
        const auto cells = detail::split_csv(line);
        if (cells.size() != header.size()) throw std::invalid_argument("column count mismatch");
        for (std::size_t c = 0; c < cells.size(); ++c) detail::fill_field(r, header[c], cells[c]);
      }
      recs.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw IoError("records line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return recs;
}

// ---- fitting ----

enum class FitMode { loglog, polynomial };

inline FitMode parse_fit_mode(const std::string& s) {
  if (s == "loglog") return FitMode::loglog;
  if (s == "polynomial") return FitMode::polynomial;
  throw std::invalid_argument("unknown fit mode '" + s + "' (expected loglog or polynomial)");
}

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual = 0;      // root mean square of the fit residuals
  double slope_stderr = 0;  // 0 when exactly three points fit perfectly
  double slope_ci_low = 0;  // lower end of the two-sided 95% interval
  std::vector<std::pair<double, double>> medians;  // (n, median L2)
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Median L2 per n; keys ascending.
inline std::map<double, double> median_l2_by_n(const std::vector<TrialRecord>& recs) {
  std::map<double, std::vector<double>> by_n;
  for (const auto& r : recs) by_n[r.n].push_back(static_cast<double>(r.L2));
  std::map<double, double> out;
  for (auto& [n, v] : by_n) out[n] = median(std::move(v));
  return out;
}

/// Least squares of ln(median L2) on ln ln n (loglog) or ln n (polynomial).
inline FitResult fit_l2_exponent(const std::vector<TrialRecord>& recs, FitMode mode) {
  const auto med = median_l2_by_n(recs);
  if (med.size() < 3) throw std::invalid_argument("fit needs at least 3 distinct n values");
  FitResult fr;
  std::vector<double> xs, ys;
  for (const auto& [n, m] : med) {
    if (!(m > 0.0)) throw std::domain_error("median L2 is 0 at n = " + fmt_shortest(n) + "; cannot take logs");
    xs.push_back(mode == FitMode::loglog ? std::log(std::log(n)) : std::log(n));
    ys.push_back(std::log(m));
    fr.medians.emplace_back(n, m);
  }
  const auto k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fr.slope = sxy / sxx;
  fr.intercept = my - fr.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fr.intercept + fr.slope * xs[i]);
    sse += e * e;
  }
  fr.residual = std::sqrt(sse / k);
  const double dof = k - 2.0;
  fr.slope_stderr = std::sqrt(sse / dof / sxx);
  const boost::math::students_t t(dof);
  fr.slope_ci_low = fr.slope - boost::math::quantile(boost::math::complement(t, 0.025)) * fr.slope_stderr;
  return fr;
}

}  // namespace rhg
