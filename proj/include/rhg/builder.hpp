// Edge construction for the random hyperbolic graph: a quadratic reference
// builder and a band/bucket builder that prunes candidate pairs by angle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rhg/geometry.hpp"
#include "rhg/sampler.hpp"

namespace rhg {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Points plus symmetric adjacency in compressed sparse rows. Neighbor lists
/// are sorted ascending, without self-loops or duplicates.
class HypGraph {
 public:
  HypGraph() = default;

  /// Build from an undirected edge list with u != v and no repeated pairs.
  HypGraph(PointSet points, const std::vector<Edge>& edges) : points_(std::move(points)) {
    const std::size_t n = points_.count();
    offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n || u == v) throw std::invalid_argument("HypGraph: bad edge");
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    neighbors_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      neighbors_[fill[u]++] = v;
      neighbors_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
    edge_count_ = edges.size();
  }

  const PointSet& points() const { return points_; }
  const ModelParams& params() const { return points_.params; }
  std::size_t vertex_count() const { return points_.count(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    check(v);
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  std::size_t degree(VertexId v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  /// Canonical edge list: u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (VertexId u = 0; u < vertex_count(); ++u)
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k)
        if (u < neighbors_[k]) out.emplace_back(u, neighbors_[k]);
    return out;
  }

 private:
  void check(VertexId v) const {
    if (v >= vertex_count())
      throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  }

  PointSet points_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::size_t edge_count_ = 0;
};

inline std::size_t degree(const HypGraph& g, VertexId v) { return g.degree(v); }

namespace detail {

// Same arithmetic as is_adjacent with sinh(r) precomputed; both builders
// reach identical decisions through this one expression.
inline bool adjacent_pre(const PolarPoint& p, double sinh_p, const PolarPoint& q, double sinh_q,
                         double half_r2, double R) {
  if (p.r + q.r <= R) return true;
  const double radial = std::sinh(0.5 * (p.r - q.r));
  const double angular = std::sin(0.5 * (p.theta - q.theta));
  return radial * radial + sinh_p * sinh_q * angular * angular <= half_r2;
}

}  // namespace detail

/// All-pairs reference construction.
inline HypGraph build_naive(const PointSet& ps) {
  const std::size_t n = ps.count();
  const double R = ps.params.R;
  const double half_r = std::sinh(0.5 * R);
  const double half_r2 = half_r * half_r;
  std::vector<double> sh(n);
  for (std::size_t i = 0; i < n; ++i) sh[i] = std::sinh(ps[i].r);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (detail::adjacent_pre(ps[u], sh[u], ps[v], sh[v], half_r2, R))
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  return HypGraph(ps, edges);
}

/// Unit-width radial bands with per-band angular buckets.
///
/// Band k >= 1 covers [R - floor(R) + k, R - floor(R) + k + 1); band 0 is
/// [0, R - floor(R) + 1) and absorbs the fractional remainder. Buckets
/// partition [0, 2pi) evenly, each at least as wide as the band's self pruning
/// angle; within a band, entries are grouped by bucket.
class BandGrid {
 public:
  struct Entry {
    PolarPoint p;
    double sinh_r;
    VertexId id;
  };

  struct Band {
    double inner = 0.0;
    std::size_t buckets = 1;
    double bucket_width = kTwoPi;
    std::vector<std::size_t> start;  // size buckets + 1
    std::vector<Entry> entries;

    std::size_t bucket_of(double theta) const {
      auto b = static_cast<std::size_t>(theta / bucket_width);
      return std::min(b, buckets - 1);
    }
  };

  /// Lower clamp on radii fed to the pruning angle.
  static constexpr double kMinPruneRadius = 0.1;

  explicit BandGrid(const PointSet& ps) : R_(ps.params.R) {
    const double fl = std::floor(R_);
    frac_ = R_ - fl;
    const std::size_t nb = std::max<std::size_t>(1, static_cast<std::size_t>(fl));
    bands_.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) bands_[k].inner = k == 0 ? 0.0 : frac_ + static_cast<double>(k);

    std::vector<std::size_t> band_count(nb, 0);
    std::vector<std::size_t> band_of_point(ps.count());
    for (std::size_t i = 0; i < ps.count(); ++i) {
      band_of_point[i] = band_of(ps[i].r);
      ++band_count[band_of_point[i]];
    }

    for (std::size_t k = 0; k < nb; ++k) {
      Band& b = bands_[k];
      const double self = pruning_angle(k, k);
      std::size_t buckets = 1;
      if (self < kPi && band_count[k] > 1) {
        const double want = std::max(1.0, std::floor(kTwoPi / self));
        buckets = want >= static_cast<double>(band_count[k]) ? band_count[k]
                                                             : static_cast<std::size_t>(want);
      }
      b.buckets = std::max<std::size_t>(1, buckets);
      b.bucket_width = kTwoPi / static_cast<double>(b.buckets);
      b.start.assign(b.buckets + 1, 0);
    }

    // counting sort by (band, bucket)
    std::vector<std::size_t> bucket_of_point(ps.count());
    for (std::size_t i = 0; i < ps.count(); ++i) {
      Band& b = bands_[band_of_point[i]];
      bucket_of_point[i] = b.bucket_of(ps[i].theta);
      ++b.start[bucket_of_point[i] + 1];
    }
    for (auto& b : bands_) {
      for (std::size_t j = 0; j < b.buckets; ++j) b.start[j + 1] += b.start[j];
      b.entries.resize(b.start[b.buckets]);
    }
    std::vector<std::vector<std::size_t>> fill(nb);
    for (std::size_t k = 0; k < nb; ++k) fill[k].assign(bands_[k].start.begin(), bands_[k].start.end() - 1);
    for (std::size_t i = 0; i < ps.count(); ++i) {
      const std::size_t k = band_of_point[i];
      bands_[k].entries[fill[k][bucket_of_point[i]]++] =
          Entry{ps[i], std::sinh(ps[i].r), static_cast<VertexId>(i)};
    }
  }

  double R() const { return R_; }
  std::size_t band_count() const { return bands_.size(); }
  const Band& band(std::size_t k) const { return bands_[k]; }

  std::size_t band_of(double r) const {
    const double j = std::floor(r - frac_);
    if (j < 1.0) return 0;
    return std::min(static_cast<std::size_t>(j), bands_.size() - 1);
  }

  /// Upper bound on the angular separation of an adjacent pair drawn from
  /// bands a and b: the connection angle at the bands' inner radii.
  double pruning_angle(std::size_t a, std::size_t b) const {
    const double x = std::max(bands_[a].inner, kMinPruneRadius);
    const double y = std::max(bands_[b].inner, kMinPruneRadius);
    const double w = connection_angle(x, y, R_);
    // slack for radii that round just below a band's inner boundary
    return w * (1.0 + 1e-9) + 1e-12;
  }

 private:
  double R_;
  double frac_ = 0.0;
  std::vector<Band> bands_;
};

/// Band-pruned construction; produces exactly the edge set of build_naive.
inline HypGraph build_banded(const PointSet& ps) {
  const BandGrid grid(ps);
  const double R = ps.params.R;
  const double half_r = std::sinh(0.5 * R);
  const double half_r2 = half_r * half_r;
  std::vector<Edge> edges;
  edges.reserve(ps.count() * 4);

  auto test = [&](const BandGrid::Entry& a, const BandGrid::Entry& b) {
    if (detail::adjacent_pre(a.p, a.sinh_r, b.p, b.sinh_r, half_r2, R))
      edges.emplace_back(std::min(a.id, b.id), std::max(a.id, b.id));
  };

  for (std::size_t k = 0; k < grid.band_count(); ++k) {
    const auto& bk = grid.band(k);
    if (bk.entries.empty()) continue;
    for (std::size_t l = k; l < grid.band_count(); ++l) {
      const auto& bl = grid.band(l);
      if (bl.entries.empty()) continue;
      const double w = grid.pruning_angle(k, l);
      const bool same = k == l;

      if (w >= kPi) {
        for (std::size_t i = 0; i < bk.entries.size(); ++i)
          for (std::size_t j = same ? i + 1 : 0; j < bl.entries.size(); ++j)
            test(bk.entries[i], bl.entries[j]);
        continue;
      }

      const auto nb = static_cast<long long>(bl.buckets);
      for (const auto& u : bk.entries) {
        // slack in bucket units absorbs rounding of theta / width near edges
        const auto lo = static_cast<long long>(std::floor((u.p.theta - w) / bl.bucket_width - 1e-6));
        const auto hi = static_cast<long long>(std::floor((u.p.theta + w) / bl.bucket_width + 1e-6));
        if (hi - lo + 1 >= nb) {
          for (const auto& v : bl.entries)
            if (!same || u.id < v.id) test(u, v);
          continue;
        }
        for (long long b = lo; b <= hi; ++b) {
          const auto idx = static_cast<std::size_t>(((b % nb) + nb) % nb);
          for (std::size_t j = bl.start[idx]; j < bl.start[idx + 1]; ++j) {
            const auto& v = bl.entries[j];
            if (!same || u.id < v.id) test(u, v);
          }
        }
      }
    }
  }
  return HypGraph(ps, edges);
}

enum class BuilderKind { naive, banded };

inline const char* to_string(BuilderKind b) { return b == BuilderKind::naive ? "naive" : "banded"; }

inline BuilderKind parse_builder(const std::string& s) {
  if (s == "naive") return BuilderKind::naive;
  if (s == "banded") return BuilderKind::banded;
  throw std::invalid_argument("unknown builder '" + s + "' (expected naive or banded)");
}

inline HypGraph build(const PointSet& ps, BuilderKind kind) {
  return kind == BuilderKind::naive ? build_naive(ps) : build_banded(ps);
}

}  // namespace rhg
