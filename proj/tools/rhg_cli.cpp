// rhg: command-line front end (generate, components, audit, scan, fit).
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhg/rhg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolations = 2;
constexpr int kExitIo = 3;

struct ModelOpts {
  double n = 1e5;
  double alpha = 0.75;
  double nu = 1.0;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--n", n, "expected vertex count")->capture_default_str();
    app->add_option("--alpha", alpha, "radial exponent")->capture_default_str();
    app->add_option("--nu", nu, "density parameter")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
  }
  rhg::ModelParams params() const { return rhg::ModelParams::make(alpha, nu, n, seed); }
};

// Writes to `path`, or stdout when path is empty or "-".
template <class F>
void with_output(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  auto out = rhg::open_out(path);
  body(out);
  out.flush();
  if (!out) throw rhg::IoError("write to '" + path + "' failed");
}

int cmd_generate(const ModelOpts& m, const std::string& builder, const std::string& out,
                 const std::string& points_out) {
  const auto ps = rhg::sample(m.params());
  if (!points_out.empty()) with_output(points_out, [&](std::ostream& os) { rhg::write_points_csv(os, ps); });
  const auto g = rhg::build(ps, rhg::parse_builder(builder));
  with_output(out, [&](std::ostream& os) { rhg::write_graph(os, g); });
  std::cerr << "generated " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
  return kExitOk;
}

int cmd_components(const std::string& in_path, std::size_t top) {
  auto in = rhg::open_in(in_path);
  const auto g = rhg::read_graph(in);
  const auto cs = rhg::connected_components(g);
  std::cout << "vertices " << g.vertex_count() << '\n'
            << "edges " << g.edge_count() << '\n'
            << "components " << cs.num_components << '\n'
            << "L1 " << cs.L1 << '\n'
            << "L2 " << rhg::second_largest(cs) << '\n'
            << "largest";
  for (std::size_t i = 0; i < std::min(top, cs.sizes.size()); ++i) std::cout << ' ' << cs.sizes[i];
  std::cout << '\n';
  return kExitOk;
}

struct AuditOpts {
  std::string name = "all";
  double M = 8.0;
  double beta = 0.1;
  double L = 10.0;
  double Lp = 20.0;
  std::size_t samples = 1000000;
  std::size_t max_violations = 0;
  std::string out;
};

int cmd_audit(const ModelOpts& m, const AuditOpts& a) {
  const auto params = m.params();
  const bool all = a.name == "all";
  static const std::vector<std::string> known{"all", "projection", "wall", "giant", "occupancy", "precomponent"};
  if (std::find(known.begin(), known.end(), a.name) == known.end())
    throw std::invalid_argument("unknown audit '" + a.name + "'");

  std::vector<rhg::AuditReport> reports;
  if (all || a.name == "projection") reports.push_back(rhg::projection_lemma_audit(params, a.samples));
  if (all || a.name == "wall") {
    const auto regions = rhg::build_regions(params, a.M, a.beta);
    reports.push_back(rhg::wall_separation_audit(regions, params, a.samples));
  }
  if (all || a.name == "giant" || a.name == "occupancy" || a.name == "precomponent") {
    const auto g = rhg::build_banded(rhg::sample(params));
    const auto cs = rhg::connected_components(g);
    if (all || a.name == "giant") reports.push_back(rhg::giant_membership_audit(g, cs, a.L));
    if (all || a.name == "occupancy") reports.push_back(rhg::sector_occupancy_audit(g, a.L, a.Lp));
    if (all || a.name == "precomponent") reports.push_back(rhg::precomponent_audit(g, cs, a.M, a.beta));
  }

  bool exceeded = false;
  with_output(a.out, [&](std::ostream& os) {
    for (const auto& r : reports) {
      os << rhg::audit_jsonl(r) << '\n';
      exceeded = exceeded || r.violations > a.max_violations;
    }
  });
  return exceeded ? kExitViolations : kExitOk;
}

struct ScanOpts {
  std::vector<double> n, alpha, nu;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string builder = "banded";
  std::string out;
  std::string format = "csv";
  std::string preset;
  std::vector<std::size_t> ge;
  unsigned threads = 1;
  double n_cap = 1e6;
  bool timing = false;
};

int cmd_scan(const ScanOpts& s) {
  rhg::ScanConfig cfg;
  cfg.n_grid = s.n;
  cfg.alpha_grid = s.alpha;
  cfg.nu_grid = s.nu;
  cfg.trials = s.trials;
  cfg.master_seed = s.seed;
  cfg.builder = rhg::parse_builder(s.builder);
  cfg.ge_thresholds = s.ge;
  cfg.threads = s.threads;
  cfg.n_cap = s.n_cap;
  cfg.timing = s.timing;
  if (s.format != "csv" && s.format != "jsonl") throw std::invalid_argument("format must be csv or jsonl");

  std::vector<rhg::TrialRecord> recs;
  if (!s.preset.empty()) {
    recs = rhg::boundary_preset(rhg::parse_preset(s.preset), cfg);
  } else {
    recs = rhg::run_scan(cfg);
  }
  with_output(s.out, [&](std::ostream& os) {
    if (s.format == "csv")
      rhg::write_records_csv(os, recs, cfg.ge_thresholds);
    else
      rhg::write_records_jsonl(os, recs);
  });
  return kExitOk;
}

int cmd_fit(const std::string& in_path, const std::string& mode) {
  auto in = rhg::open_in(in_path);
  const auto recs = rhg::read_records(in);
  const auto fr = rhg::fit_l2_exponent(recs, rhg::parse_fit_mode(mode));
  std::cout << "mode " << mode << '\n';
  for (const auto& [n, m] : fr.medians) std::cout << "n " << rhg::fmt_shortest(n) << " median_L2 " << m << '\n';
  std::cout << "slope " << fr.slope << '\n'
            << "intercept " << fr.intercept << '\n'
            << "residual " << fr.residual << '\n'
            << "slope_stderr " << fr.slope_stderr << '\n'
            << "slope_ci95_low " << fr.slope_ci_low << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random hyperbolic graphs: sampling, components, audits and scaling scans"};
  app.require_subcommand(1);

  ModelOpts gen_model;
  std::string gen_builder = "banded", gen_out, gen_points;
  auto* gen = app.add_subcommand("generate", "sample a graph and write it to a file");
  gen_model.add(gen);
  gen->add_option("--builder", gen_builder)->check(CLI::IsMember({"naive", "banded"}))->capture_default_str();
  gen->add_option("--out", gen_out, "graph file (default stdout)");
  gen->add_option("--points", gen_points, "also write points as CSV");

  std::string comp_in;
  std::size_t comp_top = 10;
  auto* comp = app.add_subcommand("components", "summarize components of a graph file");
  comp->add_option("graph", comp_in, "graph file")->required();
  comp->add_option("--top", comp_top, "number of largest sizes to list")->capture_default_str();

  ModelOpts audit_model;
  AuditOpts audit_opts;
  auto* aud = app.add_subcommand("audit", "run geometric audits and emit JSONL");
  audit_model.add(aud);
  aud->add_option("--audit", audit_opts.name, "projection|wall|giant|occupancy|precomponent|all")
      ->capture_default_str();
  aud->add_option("--M", audit_opts.M)->capture_default_str();
  aud->add_option("--beta", audit_opts.beta)->capture_default_str();
  aud->add_option("--L", audit_opts.L)->capture_default_str();
  aud->add_option("--Lp", audit_opts.Lp)->capture_default_str();
  aud->add_option("--samples", audit_opts.samples, "Monte Carlo draws")->capture_default_str();
  aud->add_option("--max-violations", audit_opts.max_violations, "exit 2 above this")->capture_default_str();
  aud->add_option("--out", audit_opts.out, "JSONL path (default stdout)");

  ScanOpts scan_opts;
  auto* scan = app.add_subcommand("scan", "run an (n, alpha, nu) sweep");
  scan->add_option("--n", scan_opts.n, "n grid")->delimiter(',');
  scan->add_option("--alpha", scan_opts.alpha, "alpha grid")->delimiter(',');
  scan->add_option("--nu", scan_opts.nu, "nu grid")->delimiter(',');
  scan->add_option("--trials", scan_opts.trials)->capture_default_str();
  scan->add_option("--seed", scan_opts.seed, "master seed")->capture_default_str();
  scan->add_option("--builder", scan_opts.builder)->check(CLI::IsMember({"naive", "banded"}))->capture_default_str();
  scan->add_option("--out", scan_opts.out, "output path (default stdout)");
  scan->add_option("--format", scan_opts.format)->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  scan->add_option("--preset", scan_opts.preset)->check(CLI::IsMember({"half", "one"}));
  scan->add_option("--ge", scan_opts.ge, "component-size thresholds to count")->delimiter(',');
  scan->add_option("--threads", scan_opts.threads)->capture_default_str();
  scan->add_option("--n-cap", scan_opts.n_cap)->capture_default_str();
  scan->add_flag("--timing", scan_opts.timing, "fill the ms column");

  std::string fit_in, fit_mode = "loglog";
  auto* fit = app.add_subcommand("fit", "fit the growth exponent of median L2");
  fit->add_option("records", fit_in, "CSV or JSONL records")->required();
  fit->add_option("--mode", fit_mode)->check(CLI::IsMember({"loglog", "polynomial"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_model, gen_builder, gen_out, gen_points);
    if (*comp) return cmd_components(comp_in, comp_top);
    if (*aud) return cmd_audit(audit_model, audit_opts);
    if (*scan) return cmd_scan(scan_opts);
    if (*fit) return cmd_fit(fit_in, fit_mode);
  } catch (const rhg::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
