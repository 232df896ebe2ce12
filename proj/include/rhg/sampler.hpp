// Poisson point process on B_O(R) with the model's intensity.
#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "rhg/geometry.hpp"
#include "rhg/rng.hpp"

namespace rhg {

/// Vertex positions of one realization, in generation order.
struct PointSet {
  ModelParams params;
  std::vector<PolarPoint> points;

  std::size_t count() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const PolarPoint& operator[](std::size_t i) const { return points[i]; }
};

/// Radial CDF of the model, F(r) = mu(B_O(r)).
inline double radius_cdf(double r, const ModelParams& params) { return mu_ball(r, params); }

/// Draw V: |V| ~ Poisson(n), angles uniform, radii by inverse CDF. Fully
/// determined by params (including params.seed).
inline PointSet sample(const ModelParams& params) {
  if (!(params.n / params.nu > 1.0) || !(params.alpha > 0.0))
    throw std::invalid_argument("sample: invalid model parameters");
  Engine eng = make_engine(params.seed);
  std::poisson_distribution<long long> count_dist(params.n);
  const auto count = static_cast<std::size_t>(count_dist(eng));

  PointSet ps{params, {}};
  ps.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius_from_uniform(uniform01(eng), params.alpha, params.R);
    double theta = kTwoPi * uniform01(eng);
    if (theta >= kTwoPi) theta = 0.0;
    ps.points.push_back(PolarPoint{r, theta});
  }
  return ps;
}

/// Point set from explicit positions (angles reduced to [0, 2pi)).
inline PointSet make_point_set(const ModelParams& params, const std::vector<PolarPoint>& pts) {
  PointSet ps{params, {}};
  ps.points.reserve(pts.size());
  for (const auto& p : pts) {
    if (!(p.r >= 0.0 && p.r < params.R))
      throw std::invalid_argument("make_point_set: radius outside [0, R)");
    ps.points.push_back(PolarPoint::make(p.r, p.theta));
  }
  return ps;
}

inline std::size_t count_in_region(const PointSet& ps, const SectorAnnulus& region) {
  std::size_t c = 0;
  for (const auto& p : ps.points)
    if (region.contains(p)) ++c;
  return c;
}

}  // namespace rhg
