#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracle/quadrature.hpp"
#include "rhg/builder.hpp"
#include "rhg/sampler.hpp"

using rhg::Edge;
using rhg::kPi;
using rhg::kTwoPi;
using rhg::ModelParams;
using rhg::PolarPoint;

namespace {

std::vector<Edge> brute_edges(const rhg::PointSet& ps) {
  std::vector<Edge> e;
  for (rhg::VertexId u = 0; u < ps.count(); ++u)
    for (rhg::VertexId v = u + 1; v < ps.count(); ++v)
      if (rhg::is_adjacent(ps[u], ps[v], ps.params.R)) e.emplace_back(u, v);
  return e;
}

}  // namespace

TEST(BuildNaive, EmptyAndSingle) {
  const auto p = ModelParams::make(0.75, 1.0, 100.0);
  for (auto kind : {rhg::BuilderKind::naive, rhg::BuilderKind::banded}) {
    const auto g0 = rhg::build(rhg::make_point_set(p, {}), kind);
    EXPECT_EQ(g0.vertex_count(), 0u);
    EXPECT_EQ(g0.edge_count(), 0u);
    EXPECT_THROW(rhg::degree(g0, 0), std::out_of_range);
    const auto g1 = rhg::build(rhg::make_point_set(p, {{3.0, 1.0}}), kind);
    EXPECT_EQ(g1.edge_count(), 0u);
    EXPECT_EQ(rhg::degree(g1, 0), 0u);
  }
}

TEST(BuildNaive, CoincidentPoints) {
  const auto p = ModelParams::make(0.75, 1.0, 1e4);
  const PolarPoint q{p.R - 0.01, 2.0};
  for (auto kind : {rhg::BuilderKind::naive, rhg::BuilderKind::banded}) {
    const auto g = rhg::build(rhg::make_point_set(p, {q, q}), kind);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(rhg::degree(g, 0), 1u);
    EXPECT_EQ(rhg::degree(g, 1), 1u);
  }
}

TEST(BuildNaive, ThreePointExample) {
  ModelParams p = ModelParams::make(0.75, 1.0, std::exp(10.0));
  p.R = 20.0;
  const auto ps = rhg::make_point_set(p, {{2.0, 0.0}, {3.0, 0.0}, {p.R - 0.1, kPi}});
  for (auto kind : {rhg::BuilderKind::naive, rhg::BuilderKind::banded}) {
    const auto g = rhg::build(ps, kind);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
  }
}

TEST(BuildNaive, MatchesDirectAdjacency) {
  const auto ps = rhg::sample(ModelParams::make(0.6, 0.7, 800.0, 4));
  EXPECT_EQ(rhg::build_naive(ps).edges(), brute_edges(ps));
}

TEST(BuildBanded, EquivalentToNaive) {
  std::mt19937_64 eng(2024);
  const double alphas[] = {0.5, 0.55, 0.75, 0.95, 1.0};
  std::uniform_real_distribution<double> nd(50.0, 2000.0), nud(0.2, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = alphas[i % 5];
    const auto p = ModelParams::make(alpha, nud(eng), nd(eng), eng());
    const auto ps = rhg::sample(p);
    ASSERT_EQ(rhg::build_banded(ps).edges(), rhg::build_naive(ps).edges())
        << "alpha " << p.alpha << " nu " << p.nu << " n " << p.n << " seed " << p.seed;
  }
}

TEST(BuildBanded, EquivalentOnBoundaryPlacements) {
  // radii on band boundaries and angles on bucket boundaries
  const auto p = ModelParams::make(0.75, 1.0, 3000.0, 1);
  const auto sampled = rhg::sample(p);
  const rhg::BandGrid grid(sampled);
  std::vector<PolarPoint> pts;
  for (std::size_t k = 0; k < grid.band_count(); ++k) {
    const auto& b = grid.band(k);
    for (std::size_t j = 0; j < std::min<std::size_t>(b.buckets, 40); ++j)
      for (double dr : {0.0, 1e-15, -1e-15})
        for (double dt : {0.0, 1e-15, -1e-15}) {
          const double r = std::clamp(b.inner + dr, 0.0, std::nextafter(p.R, 0.0));
          pts.push_back(PolarPoint::make(r, static_cast<double>(j) * b.bucket_width + dt));
        }
  }
  pts.insert(pts.end(), sampled.points.begin(), sampled.points.end());
  const auto ps = rhg::make_point_set(p, pts);
  EXPECT_EQ(rhg::build_banded(ps).edges(), rhg::build_naive(ps).edges());
}

TEST(BuildBanded, InnerBallIsClique) {
  const auto p = ModelParams::make(0.75, 1.0, 1e4);
  std::mt19937_64 eng(6);
  std::uniform_real_distribution<double> r(0.0, p.R / 2), t(0.0, kTwoPi);
  std::vector<PolarPoint> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({std::nextafter(r(eng), 0.0), t(eng)});
  const auto g = rhg::build_banded(rhg::make_point_set(p, pts));
  EXPECT_EQ(g.edge_count(), 300u * 299u / 2u);
}

TEST(HypGraph, AdjacencyInvariants) {
  const auto g = rhg::build_banded(rhg::sample(ModelParams::make(0.7, 1.0, 1e4, 13)));
  std::size_t degree_sum = 0;
  for (rhg::VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto nb = g.neighbors(v);
    degree_sum += rhg::degree(g, v);
    ASSERT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    ASSERT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
    for (auto u : nb) {
      ASSERT_NE(u, v);
      const auto back = g.neighbors(u);
      ASSERT_TRUE(std::binary_search(back.begin(), back.end(), v));
    }
  }
  EXPECT_EQ(degree_sum, 2 * g.edge_count());
  EXPECT_THROW(g.degree(static_cast<rhg::VertexId>(g.vertex_count())), std::out_of_range);
}

TEST(HypGraph, HandshakeOnRandomInstances) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = rhg::build_banded(rhg::sample(ModelParams::make(0.5 + 0.025 * s, 1.0, 3000.0, s)));
    std::size_t sum = 0;
    for (rhg::VertexId v = 0; v < g.vertex_count(); ++v) sum += rhg::degree(g, v);
    ASSERT_EQ(sum, 2 * g.edge_count());
  }
}

TEST(HypGraph, RejectsBadEdges) {
  const auto ps = rhg::make_point_set(ModelParams::make(0.7, 1.0, 100.0), {{1.0, 0.0}, {2.0, 0.0}});
  EXPECT_THROW(rhg::HypGraph(ps, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(rhg::HypGraph(ps, {{0, 2}}), std::invalid_argument);
}

TEST(BuildBanded, RotationEquivariant) {
  const auto ps = rhg::sample(ModelParams::make(0.75, 1.0, 5000.0, 8));
  const auto base = rhg::build_banded(ps).edges();
  for (double delta : {0.3, 2.0, 5.9}) {
    std::vector<PolarPoint> rot;
    for (const auto& q : ps.points) rot.push_back(PolarPoint::make(q.r, q.theta + delta));
    EXPECT_EQ(rhg::build_banded(rhg::make_point_set(ps.params, rot)).edges(), base) << delta;
  }
}

TEST(BandGrid, CellsPartitionPoints) {
  const auto ps = rhg::sample(ModelParams::make(0.75, 1.0, 2e4, 3));
  const rhg::BandGrid grid(ps);
  std::vector<int> seen(ps.count(), 0);
  for (std::size_t k = 0; k < grid.band_count(); ++k) {
    const auto& b = grid.band(k);
    ASSERT_EQ(b.start.size(), b.buckets + 1);
    ASSERT_EQ(b.entries.size(), b.start.back());
    const double self = grid.pruning_angle(k, k);
    if (b.buckets < b.entries.size()) {
      ASSERT_GE(b.bucket_width, std::min(self, kTwoPi) * (1 - 1e-12));
    }
    for (std::size_t j = 0; j < b.buckets; ++j)
      for (std::size_t e = b.start[j]; e < b.start[j + 1]; ++e) {
        const auto& en = b.entries[e];
        ++seen[en.id];
        ASSERT_EQ(grid.band_of(en.p.r), k);
        ASSERT_EQ(b.bucket_of(en.p.theta), j);
        if (k > 0) {
          ASSERT_GE(en.p.r, b.inner);
        }
        if (k + 1 < grid.band_count()) {
          ASSERT_LT(en.p.r, grid.band(k + 1).inner);
        }
      }
  }
  for (int c : seen) ASSERT_EQ(c, 1);
  EXPECT_EQ(grid.band_of(0.0), 0u);
  EXPECT_EQ(grid.band_of(std::nextafter(ps.params.R, 0.0)), grid.band_count() - 1);
}

TEST(BandGrid, PruningAngleBoundsAdjacentPairs) {
  const auto ps = rhg::sample(ModelParams::make(0.6, 1.0, 3000.0, 5));
  const rhg::BandGrid grid(ps);
  const auto g = rhg::build_naive(ps);
  for (const auto& [u, v] : g.edges()) {
    const double w = grid.pruning_angle(grid.band_of(ps[u].r), grid.band_of(ps[v].r));
    ASSERT_LE(rhg::angular_distance(ps[u].theta, ps[v].theta), w);
  }
}

TEST(Builder, ParseAndName) {
  EXPECT_EQ(rhg::parse_builder("naive"), rhg::BuilderKind::naive);
  EXPECT_EQ(rhg::parse_builder("banded"), rhg::BuilderKind::banded);
  EXPECT_STREQ(rhg::to_string(rhg::BuilderKind::banded), "banded");
  EXPECT_THROW(rhg::parse_builder("grid"), std::invalid_argument);
}

// Mean degree per unit radial bin against the quadrature value of
// n mu(B_v(R) ∩ B_O(R)), and against the leading-order law
// nu (2 alpha / pi) / (alpha - 1/2) e^{(R - r)/2}.
TEST(BuildBanded, ExpectedDegreeByRadius) {
  const auto p = ModelParams::make(0.75, 1.0, 1e5, 77);
  const auto ps = rhg::sample(p);
  const auto g = rhg::build_banded(ps);
  std::map<int, std::pair<double, double>> bins;  // bin -> (sum of degree, count)
  for (rhg::VertexId v = 0; v < g.vertex_count(); ++v) {
    const double r = ps[v].r;
    if (r < p.R / 2 + 2 || r > p.R - 2) continue;
    auto& b = bins[static_cast<int>(std::floor(r))];
    b.first += static_cast<double>(g.degree(v));
    b.second += 1.0;
  }
  ASSERT_GE(bins.size(), 4u);
  for (const auto& [k, b] : bins) {
    if (b.second < 200) continue;
    const double mean = b.first / b.second;
    // average the oracle over the bin with the radial density as weight
    double num = 0.0, den = 0.0, lead = 0.0;
    for (int s = 0; s < 20; ++s) {
      const double r = std::clamp(k + (s + 0.5) / 20.0, p.R / 2 + 2, p.R - 2);
      const double w = std::sinh(p.alpha * r);
      num += w * p.n * oracle::neighbor_measure(r, p);
      lead += w * p.nu * (2 * p.alpha / kPi) / (p.alpha - 0.5) * std::exp(0.5 * (p.R - r));
      den += w;
    }
    const double want = num / den;
    EXPECT_NEAR(mean / want, 1.0, 0.1) << "bin " << k << " mean " << mean << " oracle " << want;
    const double ratio = mean / (lead / den);
    EXPECT_LE(ratio, 1.5) << "bin " << k;
    EXPECT_GE(ratio, 1.0 / 1.5) << "bin " << k;
  }
}
