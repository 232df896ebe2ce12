#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "rhg/harness.hpp"

using rhg::FitMode;
using rhg::ScanConfig;
using rhg::TrialRecord;

namespace {

ScanConfig small_config() {
  ScanConfig cfg;
  cfg.n_grid = {500, 1000};
  cfg.alpha_grid = {0.6, 0.9};
  cfg.nu_grid = {1.0};
  cfg.trials = 3;
  cfg.master_seed = 5;
  cfg.ge_thresholds = {2, 5};
  return cfg;
}

std::string as_csv(const std::vector<TrialRecord>& recs, const std::vector<std::size_t>& ge) {
  std::ostringstream out;
  rhg::write_records_csv(out, recs, ge);
  return out.str();
}

}  // namespace

TEST(RunScan, OneCellOneTrial) {
  ScanConfig cfg;
  cfg.n_grid = {1000};
  cfg.alpha_grid = {0.75};
  cfg.nu_grid = {1.0};
  const auto recs = rhg::run_scan(cfg);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].seed, rhg::trial_seed(1, 0));
  EXPECT_EQ(recs[0].ms, 0.0);
}

TEST(RunScan, CanonicalOrderAndTotality) {
  const auto cfg = small_config();
  const auto recs = rhg::run_scan(cfg);
  ASSERT_EQ(recs.size(), 2u * 2u * 1u * 3u);
  std::size_t i = 0;
  for (double n : cfg.n_grid)
    for (double a : cfg.alpha_grid)
      for (std::size_t t = 0; t < cfg.trials; ++t, ++i) {
        EXPECT_EQ(recs[i].n, n);
        EXPECT_EQ(recs[i].alpha, a);
        EXPECT_EQ(recs[i].seed, rhg::trial_seed(cfg.master_seed, t));
      }
  for (const auto& r : recs) {
    EXPECT_LE(r.L2, r.L1);
    EXPECT_LE(r.L1, r.vertices);
    if (r.vertices > 0) {
      EXPECT_GE(r.num_components, 1u);
    }
    ASSERT_EQ(r.count_ge.size(), 2u);
    EXPECT_EQ(r.count_ge[0].second, r.components_at_least(2));
  }
}

TEST(RunScan, ByteIdenticalAcrossThreadCounts) {
  auto cfg = small_config();
  cfg.threads = 1;
  const auto a = as_csv(rhg::run_scan(cfg), cfg.ge_thresholds);
  cfg.threads = 4;
  const auto b = as_csv(rhg::run_scan(cfg), cfg.ge_thresholds);
  cfg.threads = 3;
  const auto c = as_csv(rhg::run_scan(cfg), cfg.ge_thresholds);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a, as_csv(rhg::run_scan(cfg), cfg.ge_thresholds));
}

TEST(RunScan, BuilderIndependence) {
  auto cfg = small_config();
  cfg.n_grid = {800, 2000};
  cfg.alpha_grid = {0.5, 0.75, 1.0};
  cfg.builder = rhg::BuilderKind::naive;
  const auto naive = rhg::run_scan(cfg);
  cfg.builder = rhg::BuilderKind::banded;
  const auto banded = rhg::run_scan(cfg);
  ASSERT_EQ(naive.size(), banded.size());
  for (std::size_t i = 0; i < naive.size(); ++i) {
    EXPECT_EQ(naive[i].L1, banded[i].L1);
    EXPECT_EQ(naive[i].L2, banded[i].L2);
    EXPECT_EQ(naive[i].num_components, banded[i].num_components);
    EXPECT_EQ(naive[i].edges, banded[i].edges);
  }
}

TEST(RunScan, RejectsInvalidConfigs) {
  auto cfg = small_config();
  cfg.alpha_grid = {0.7, -1.0};
  EXPECT_THROW(rhg::run_scan(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(rhg::run_scan(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.n_grid.clear();
  EXPECT_THROW(rhg::run_scan(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.n_grid = {2e6};
  EXPECT_THROW(rhg::run_scan(cfg), std::invalid_argument);
  cfg.n_cap = 3e6;
  EXPECT_NO_THROW(rhg::validate(cfg));
  cfg = small_config();
  cfg.nu_grid = {5000.0};
  EXPECT_THROW(rhg::run_scan(cfg), std::invalid_argument);
}

TEST(Presets, ForceAlpha) {
  ScanConfig cfg;
  const auto half = rhg::preset_config(rhg::Preset::half, cfg);
  EXPECT_EQ(half.alpha_grid, std::vector<double>{0.5});
  EXPECT_EQ(half.nu_grid, std::vector<double>{0.2});
  EXPECT_EQ(half.n_grid, rhg::default_n_grid());
  cfg.alpha_grid = {0.7};
  cfg.nu_grid = {4.0};
  cfg.n_grid = {1e3};
  const auto one = rhg::preset_config(rhg::Preset::one, cfg);
  EXPECT_EQ(one.alpha_grid, std::vector<double>{1.0});
  EXPECT_EQ(one.nu_grid, std::vector<double>{4.0});
  EXPECT_EQ(one.n_grid, std::vector<double>{1e3});
  EXPECT_EQ(rhg::parse_preset("one"), rhg::Preset::one);
  EXPECT_THROW(rhg::parse_preset("two"), std::invalid_argument);
  const auto recs = rhg::boundary_preset(rhg::Preset::half, cfg);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].alpha, 0.5);
}

TEST(Records, CsvHeader) {
  EXPECT_EQ(rhg::csv_header({}), "n,alpha,nu,seed,vertices,edges,L1,L2,num_components,builder,ms");
  EXPECT_EQ(rhg::csv_header({3, 10}), "n,alpha,nu,seed,vertices,edges,L1,L2,num_components,builder,ms,ge_3,ge_10");
}

TEST(Records, CsvAndJsonlRoundTrip) {
  const auto cfg = small_config();
  const auto recs = rhg::run_scan(cfg);
  std::ostringstream csv, jsonl;
  rhg::write_records_csv(csv, recs, cfg.ge_thresholds);
  rhg::write_records_jsonl(jsonl, recs);
  for (const std::string& text : {csv.str(), jsonl.str()}) {
    std::istringstream in(text);
    const auto back = rhg::read_records(in);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      EXPECT_EQ(back[i].n, recs[i].n);
      EXPECT_EQ(back[i].alpha, recs[i].alpha);
      EXPECT_EQ(back[i].seed, recs[i].seed);
      EXPECT_EQ(back[i].L1, recs[i].L1);
      EXPECT_EQ(back[i].L2, recs[i].L2);
      EXPECT_EQ(back[i].edges, recs[i].edges);
      EXPECT_EQ(back[i].count_ge, recs[i].count_ge);
      EXPECT_EQ(back[i].builder, recs[i].builder);
    }
  }
  const std::string first = jsonl.str().substr(0, jsonl.str().find('\n'));
  EXPECT_EQ(first.rfind("{\"n\":", 0), 0u);
}

TEST(Records, MalformedCsv) {
  std::istringstream in("n,alpha,L2\n1000,0.7\n");
  EXPECT_THROW(rhg::read_records(in), rhg::IoError);
  std::istringstream bad("{\"n\": 1000, \"L2\": \n");
  EXPECT_THROW(rhg::read_records(bad), rhg::IoError);
}

TEST(Fit, Median) {
  EXPECT_EQ(rhg::median({3, 1, 2}), 2.0);
  EXPECT_EQ(rhg::median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(rhg::median({}), std::invalid_argument);
}

TEST(Fit, SyntheticExactLaws) {
  std::vector<TrialRecord> cube, poly;
  for (double k : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    TrialRecord a;
    a.n = std::exp(k);  // ln n = k, L2 = k^3
    a.L2 = static_cast<std::size_t>(k * k * k);
    cube.push_back(a);
  }
  for (double k : {10.0, 20.0, 30.0, 40.0}) {
    const double n = std::pow(2.0, k * 5.0 / 2.0);  // n^0.4 = 2^k
    TrialRecord b;
    b.n = n;
    b.L2 = static_cast<std::size_t>(std::llround(std::pow(2.0, k)));
    poly.push_back(b);
  }
  const auto fc = rhg::fit_l2_exponent(cube, FitMode::loglog);
  EXPECT_NEAR(fc.slope, 3.0, 1e-9);
  const auto fp = rhg::fit_l2_exponent(poly, FitMode::polynomial);
  EXPECT_NEAR(fp.slope, 0.4, 1e-9);
  EXPECT_NEAR(fp.residual, 0.0, 1e-9);
  EXPECT_GT(fp.slope_ci_low, 0.39);
}

TEST(Fit, ErrorsAndConfidence) {
  std::vector<TrialRecord> two;
  for (double n : {1e3, 1e4}) {
    TrialRecord r;
    r.n = n;
    r.L2 = 5;
    two.push_back(r);
    two.push_back(r);
  }
  EXPECT_THROW(rhg::fit_l2_exponent(two, FitMode::loglog), std::invalid_argument);
  TrialRecord zero;
  zero.n = 1e5;
  zero.L2 = 0;
  two.push_back(zero);
  EXPECT_THROW(rhg::fit_l2_exponent(two, FitMode::loglog), std::domain_error);

  // noisy data: CI lower end below the slope, matching the t quantile
  std::vector<TrialRecord> noisy;
  const double ys[] = {10, 16, 30, 41, 80};
  const double ns[] = {1e3, 1e4, 1e5, 1e6, 1e7};
  for (int i = 0; i < 5; ++i) {
    TrialRecord r;
    r.n = ns[i];
    r.L2 = static_cast<std::size_t>(ys[i]);
    noisy.push_back(r);
  }
  const auto f = rhg::fit_l2_exponent(noisy, FitMode::polynomial);
  EXPECT_GT(f.residual, 0.0);
  EXPECT_NEAR(f.slope_ci_low, f.slope - 3.182446305284263 * f.slope_stderr, 1e-9);
  EXPECT_EQ(f.medians.size(), 5u);
  EXPECT_EQ(rhg::parse_fit_mode("polynomial"), FitMode::polynomial);
  EXPECT_THROW(rhg::parse_fit_mode("linear"), std::invalid_argument);
}
