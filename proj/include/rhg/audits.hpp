// Numerical audits of the structural lemmas behind the L2 bounds: the
// staircase regions used in the lower bound, wall separation, the projection
// property, giant membership of inner vertices and sector occupancy.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rhg/builder.hpp"
#include "rhg/components.hpp"
#include "rhg/geometry.hpp"
#include "rhg/rng.hpp"

namespace rhg {

/// Outcome of one audit run. `extra` carries audit-specific diagnostics.
struct AuditReport {
  std::string audit;
  ModelParams params;
  std::size_t violations = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> extra;

  double get(const std::string& key) const {
    for (const auto& [k, v] : extra)
      if (k == key) return v;
    throw std::out_of_range("AuditReport: no field " + key);
  }
};

namespace detail {

inline void require_intermediate_alpha(double alpha, const char* who) {
  if (!(alpha > 0.5 && alpha < 1.0))
    throw std::invalid_argument(std::string(who) + ": requires 1/2 < alpha < 1");
}

// Radius with the model density conditioned on [lo, hi).
inline double radius_in_range(Engine& eng, double lo, double hi, const ModelParams& params) {
  const double flo = mu_ball(lo, params);
  const double fhi = mu_ball(hi, params);
  double r = radius_from_uniform(flo + uniform01(eng) * (fhi - flo), params.alpha, params.R);
  return std::clamp(r, lo, std::nextafter(hi, lo));
}

// Index into cumulative weights.
inline std::size_t pick(Engine& eng, const std::vector<double>& cumulative) {
  const double x = uniform01(eng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

// Signed angular offset of theta from center, in (-pi, pi].
inline double signed_offset(double theta, double center) {
  double d = std::remainder(theta - center, kTwoPi);
  return d <= -kPi ? d + kTwoPi : d;
}

}  // namespace detail

/// Inner radius below which all vertices are expected in the giant:
/// R - ln R/(1-alpha) - L/(1-alpha), rounded to the nearest integer.
inline double giant_core_radius(const ModelParams& params, double L) {
  const double a = 1.0 - params.alpha;
  return std::round(params.R - std::log(params.R) / a - L / a);
}

/// Staircase regions Upsilon (candidate component) and Xi (its possible
/// neighborhood) around one bisector. Level i in 0..levels covers radii
/// [ell - 1 + i, min(ell + i, R)).
struct LowerBoundRegions {
  ModelParams params;
  double M = 8.0;
  double beta = 0.1;
  double theta_center = 0.0;
  double ell_raw = 0.0;   // R - ln R/(1-alpha) + M/(1-alpha)
  double ell = 0.0;       // rounded, then clamped into [ceil(R/2 + 1), floor(R) - 1]
  bool ell_clamped = false;
  std::size_t levels = 0;  // highest level index
  double phi = 0.0;        // 9 theta_R(ell, ell)
  double psi = 0.0;        // (nu/n)^(1 - beta)
  double xi_sum = 0.0;     // sum_{j < levels} theta_R(ell - 1 + j, ell + j)
  std::vector<double> upsilon;
  std::vector<double> xi;

  static constexpr int kSubsectors = 18;

  double level_lo(std::size_t i) const { return ell - 1.0 + static_cast<double>(i); }
  double level_hi(std::size_t i) const { return std::min(ell + static_cast<double>(i), params.R); }

  std::optional<std::size_t> level_of(double r) const {
    if (r < ell - 1.0 || r >= params.R) return std::nullopt;
    return std::min(static_cast<std::size_t>(std::floor(r - (ell - 1.0))), levels);
  }

  double offset(const PolarPoint& p) const { return angular_distance(p.theta, theta_center); }

  bool in_upsilon(const PolarPoint& p) const {
    auto i = level_of(p.r);
    return i && offset(p) <= upsilon[*i];
  }
  bool in_xi(const PolarPoint& p) const {
    auto i = level_of(p.r);
    return i && offset(p) <= xi[*i];
  }
  bool in_wall(const PolarPoint& p) const { return in_xi(p) && !in_upsilon(p); }
  /// (B_O(R) \ B_O(ell - 1)) \ Xi
  bool outside_xi(const PolarPoint& p) const { return level_of(p.r).has_value() && !in_xi(p); }

  SectorAnnulus upsilon_region(std::size_t i) const {
    return {level_lo(i), level_hi(i), theta_center, upsilon[i]};
  }
  SectorAnnulus xi_region(std::size_t i) const { return {level_lo(i), level_hi(i), theta_center, xi[i]}; }
  /// The two parts of Xi \ Upsilon at level i (counter-clockwise side first).
  std::pair<SectorAnnulus, SectorAnnulus> wall_regions(std::size_t i) const {
    const double mid = 0.5 * (upsilon[i] + xi[i]);
    const double half = 0.5 * (xi[i] - upsilon[i]);
    return {SectorAnnulus{level_lo(i), level_hi(i), reduce_angle(theta_center + mid), half},
            SectorAnnulus{level_lo(i), level_hi(i), reduce_angle(theta_center - mid), half}};
  }

  LowerBoundRegions recentered(double center) const {
    LowerBoundRegions r = *this;
    r.theta_center = reduce_angle(center);
    return r;
  }
};

inline LowerBoundRegions build_regions(const ModelParams& params, double M, double beta,
                                       double theta_center = 0.0) {
  detail::require_intermediate_alpha(params.alpha, "build_regions");
  if (!(M > 0.0) || !(beta > 0.0)) throw std::invalid_argument("build_regions: M and beta must be positive");
  const double R = params.R;
  const double a = 1.0 - params.alpha;

  LowerBoundRegions g;
  g.params = params;
  g.M = M;
  g.beta = beta;
  g.theta_center = reduce_angle(theta_center);
  g.ell_raw = R - std::log(R) / a + M / a;
  const double lo = std::ceil(0.5 * R + 1.0);
  const double hi = std::floor(R) - 1.0;
  if (lo > hi) throw std::invalid_argument("build_regions: R too small for a staircase");
  g.ell = std::round(g.ell_raw);
  if (g.ell < lo || g.ell > hi) {
    g.ell = std::clamp(g.ell, lo, hi);
    g.ell_clamped = true;
  }
  const double ell = g.ell;
  g.levels = static_cast<std::size_t>(std::ceil(R - ell));
  g.phi = 9.0 * theta_approx(ell, ell, R);
  g.psi = std::pow(params.nu / params.n, 1.0 - beta);

  g.upsilon.assign(g.levels + 1, 0.0);
  g.upsilon[0] = 0.5 * g.phi;
  for (std::size_t i = 1; i <= g.levels; ++i) {
    const double j = static_cast<double>(i - 1);
    const double step = theta_approx(ell - 1.0 + j, ell + j, R);
    g.upsilon[i] = g.upsilon[i - 1] + step;
    g.xi_sum += step;
  }
  g.xi.assign(g.levels + 1, 0.0);
  for (std::size_t i = 0; i <= g.levels; ++i) {
    const double s = ell - 1.0 + static_cast<double>(i);
    g.xi[i] = theta_approx(s, s, R) + 0.5 * g.phi + g.xi_sum;
  }
  return g;
}

/// Draws pairs p' in Upsilon and p just outside Xi (angular offset within
/// 2 phi beyond the Xi boundary, both sides) and counts pairs at distance
/// <= R. Radii follow the model density restricted to each level.
inline AuditReport wall_separation_audit(const LowerBoundRegions& regions, const ModelParams& params,
                                         std::size_t samples) {
  AuditReport rep{"wall_separation", params, 0, samples, params.seed, {}};
  Engine eng = make_engine(derive_seed(params.seed, 0x3a11));
  const std::size_t L = regions.levels + 1;
  std::vector<double> cum_inside(L), cum_outside(L);
  double acc_in = 0.0, acc_out = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    const double m = mu_ball(regions.level_hi(i), params) - mu_ball(regions.level_lo(i), params);
    acc_in += m * regions.upsilon[i];
    acc_out += m;
    cum_inside[i] = acc_in;
    cum_outside[i] = acc_out;
  }
  const double span = 2.0 * regions.phi;
  const double c = regions.theta_center;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t ii = detail::pick(eng, cum_inside);
    const double r_in = detail::radius_in_range(eng, regions.level_lo(ii), regions.level_hi(ii), params);
    const double off_in = (2.0 * uniform01(eng) - 1.0) * regions.upsilon[ii];
    const PolarPoint inside = PolarPoint::make(r_in, c + off_in);

    const std::size_t io = detail::pick(eng, cum_outside);
    const double r_out = detail::radius_in_range(eng, regions.level_lo(io), regions.level_hi(io), params);
    const double mag = regions.xi[io] + (1.0 - uniform01(eng)) * span;  // in (xi, xi + span]
    const double side = uniform01(eng) < 0.5 ? -1.0 : 1.0;
    const PolarPoint outside = PolarPoint::make(r_out, c + side * mag);

    if (!regions.outside_xi(outside) || !regions.in_upsilon(inside)) {
      // rounding pushed a draw across a boundary; not a valid pair
      --rep.samples;
      continue;
    }
    if (is_adjacent(outside, inside, params.R)) ++rep.violations;
  }
  rep.extra = {{"ell", regions.ell}, {"ell_raw", regions.ell_raw}, {"ell_clamped", regions.ell_clamped ? 1.0 : 0.0},
               {"M", regions.M}, {"phi", regions.phi}};
  return rep;
}

/// Triples p, p', p'' with theta_p <= theta_p' <= theta_p'' (counter-clockwise
/// within the short arc), d_h(p, p'') <= R and r_p' <= min(r_p, r_p''); counts
/// triples where p' fails to be adjacent to both ends.
inline AuditReport projection_lemma_audit(const ModelParams& params, std::size_t triples) {
  AuditReport rep{"projection_lemma", params, 0, triples, params.seed, {}};
  Engine eng = make_engine(derive_seed(params.seed, 0x9e0f));
  const double R = params.R;
  std::size_t done = 0;
  while (done < triples) {
    // alternate model-density radii with uniform radii to cover the interior
    const bool model = (done & 1U) == 0;
    auto draw_r = [&] {
      return model ? radius_from_uniform(uniform01(eng), params.alpha, R) : uniform01(eng) * R;
    };
    const double rp = draw_r();
    const double rpp = draw_r();
    const double t0 = kTwoPi * uniform01(eng);
    const double delta = uniform01(eng) * connection_angle(rp, rpp, R);
    const PolarPoint p = PolarPoint::make(rp, t0);
    const PolarPoint pp = PolarPoint::make(rpp, t0 + delta);
    if (!is_adjacent(p, pp, R)) continue;
    const PolarPoint mid = PolarPoint::make(uniform01(eng) * std::min(rp, rpp), t0 + uniform01(eng) * delta);
    ++done;
    if (!is_adjacent(p, mid, R) || !is_adjacent(mid, pp, R)) ++rep.violations;
  }
  return rep;
}

/// Same check on a caller-supplied triple; true when the triple satisfies
/// the hypotheses and the conclusion fails.
inline bool projection_violated(const PolarPoint& p, const PolarPoint& mid, const PolarPoint& pp, double R) {
  if (!is_adjacent(p, pp, R) || mid.r > std::min(p.r, pp.r)) return false;
  return !is_adjacent(p, mid, R) || !is_adjacent(mid, pp, R);
}

/// Vertices with r <= ell (ell from giant_core_radius) outside the largest
/// component.
inline AuditReport giant_membership_audit(const HypGraph& g, const ComponentSummary& cs, double L) {
  const ModelParams& params = g.params();
  detail::require_intermediate_alpha(params.alpha, "giant_membership_audit");
  const double ell = giant_core_radius(params, L);
  AuditReport rep{"giant_membership", params, 0, 0, params.seed, {}};
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.points()[v].r > ell) continue;
    ++rep.samples;
    if (!cs.in_largest(v)) ++rep.violations;
  }
  rep.extra = {{"ell", ell}, {"L", L}};
  return rep;
}

/// Counts aligned windows [j phi, j phi + 2 phi) with no vertex of radius in
/// (ell - 1, ell], where phi = (L'/n)(ln n)^{1/(1-alpha)}.
inline AuditReport sector_occupancy_audit(const HypGraph& g, double L, double Lp) {
  const ModelParams& params = g.params();
  detail::require_intermediate_alpha(params.alpha, "sector_occupancy_audit");
  const double ell = giant_core_radius(params, L);
  const double phi = Lp / params.n * std::pow(std::log(params.n), 1.0 / (1.0 - params.alpha));

  std::vector<double> angles;
  for (const auto& p : g.points().points)
    if (p.r > ell - 1.0 && p.r <= ell) angles.push_back(p.theta);
  std::sort(angles.begin(), angles.end());

  auto occupied = [&](double a, double b) {  // [a, b) within [0, 2pi)
    auto it = std::lower_bound(angles.begin(), angles.end(), a);
    return it != angles.end() && *it < b;
  };

  AuditReport rep{"sector_occupancy", params, 0, 0, params.seed, {}};
  if (phi >= kTwoPi) {
    rep.samples = 1;
    rep.violations = angles.empty() ? 1 : 0;
  } else {
    const auto windows = static_cast<std::size_t>(std::ceil(kTwoPi / phi));
    rep.samples = windows;
    for (std::size_t j = 0; j < windows; ++j) {
      const double a = static_cast<double>(j) * phi;
      const double b = a + 2.0 * phi;
      bool hit = occupied(a, std::min(b, kTwoPi));
      if (!hit && b > kTwoPi) hit = occupied(0.0, std::min(b - kTwoPi, kTwoPi));
      if (!hit) ++rep.violations;
    }
  }
  rep.extra = {{"ell", ell}, {"phi", phi}, {"L", L}, {"Lp", Lp},
               {"band_vertices", static_cast<double>(angles.size())}};
  return rep;
}

/// Per psi-sector composite check of the lower-bound events: (i) all 18
/// sub-sectors of Upsilon_ell are occupied, (ii) Xi \ Upsilon holds no
/// vertex, (iii) no vertex of Upsilon has a neighbor inside B_O(ell - 1).
/// A sector passing all three is certified; a certified sector whose
/// Upsilon vertices have any neighbor outside Upsilon is a violation.
inline AuditReport precomponent_audit(const HypGraph& g, const ComponentSummary& cs, double M, double beta) {
  const ModelParams& params = g.params();
  const LowerBoundRegions base = build_regions(params, M, beta, 0.0);
  const auto& pts = g.points().points;

  std::vector<VertexId> order;
  for (VertexId v = 0; v < pts.size(); ++v)
    if (pts[v].r >= base.ell - 1.0) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return pts[a].theta < pts[b].theta; });
  std::vector<double> angles(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) angles[i] = pts[order[i]].theta;

  const double reach = *std::max_element(base.xi.begin(), base.xi.end());
  const auto sectors = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(kTwoPi / base.psi)));
  const double width = kTwoPi / static_cast<double>(sectors);

  AuditReport rep{"precomponent", params, 0, sectors, params.seed, {}};
  std::size_t ok_b = 0, ok_c = 0, ok_s = 0, certified = 0, outside_giant = 0, max_size = 0;
  std::vector<VertexId> window;
  std::vector<VertexId> ups;

  auto collect = [&](double a, double b) {
    auto lo = std::lower_bound(angles.begin(), angles.end(), a);
    auto hi = std::upper_bound(angles.begin(), angles.end(), b);
    for (auto it = lo; it < hi; ++it) window.push_back(order[static_cast<std::size_t>(it - angles.begin())]);
  };

  for (std::size_t j = 0; j < sectors; ++j) {
    const double c = (static_cast<double>(j) + 0.5) * width;
    const LowerBoundRegions reg = base.recentered(c);
    window.clear();
    if (reach >= kPi) {
      window = order;
    } else {
      double a = c - reach, b = c + reach;
      if (a < 0.0) {
        collect(a + kTwoPi, kTwoPi);
        a = 0.0;
      }
      if (b >= kTwoPi) {
        collect(0.0, b - kTwoPi);
        b = kTwoPi;
      }
      collect(a, b);
    }

    bool sub[LowerBoundRegions::kSubsectors] = {};
    bool c_ok = true;
    ups.clear();
    for (VertexId v : window) {
      const PolarPoint& p = pts[v];
      if (reg.in_upsilon(p)) {
        ups.push_back(v);
        if (reg.level_of(p.r) == 0) {
          const double off = detail::signed_offset(p.theta, c) + 0.5 * reg.phi;
          auto k = static_cast<int>(std::floor(off / (reg.phi / LowerBoundRegions::kSubsectors)));
          sub[std::clamp(k, 0, LowerBoundRegions::kSubsectors - 1)] = true;
        }
      } else if (reg.in_xi(p)) {
        c_ok = false;
      }
    }
    const bool b_ok = std::all_of(std::begin(sub), std::end(sub), [](bool x) { return x; });
    bool s_ok = true;
    bool isolated = true;
    for (VertexId v : ups)
      for (VertexId w : g.neighbors(v)) {
        if (pts[w].r < reg.ell - 1.0) s_ok = false;
        else if (!reg.in_upsilon(pts[w])) isolated = false;
      }
    ok_b += b_ok;
    ok_c += c_ok;
    ok_s += s_ok;
    if (b_ok && c_ok && s_ok) {
      ++certified;
      if (!isolated) ++rep.violations;
      bool separated = true;
      for (VertexId v : ups)
        if (cs.in_largest(v)) separated = false;
      if (separated) ++outside_giant;
      // isolated Upsilon vertices form whole components; record the largest
      std::vector<VertexId> labels;
      for (VertexId v : ups) labels.push_back(cs.labels[v]);
      std::sort(labels.begin(), labels.end());
      std::size_t biggest = 0;
      for (std::size_t a = 0, b = 0; a < labels.size(); a = b) {
        while (b < labels.size() && labels[b] == labels[a]) ++b;
        biggest = std::max(biggest, b - a);
      }
      max_size = std::max(max_size, biggest);
    }
  }
  rep.extra = {{"ell", base.ell},
               {"ell_clamped", base.ell_clamped ? 1.0 : 0.0},
               {"psi", base.psi},
               {"event_B", static_cast<double>(ok_b)},
               {"event_C", static_cast<double>(ok_c)},
               {"event_S", static_cast<double>(ok_s)},
               {"certified", static_cast<double>(certified)},
               {"certified_outside_giant", static_cast<double>(outside_giant)},
               {"max_certified_size", static_cast<double>(max_size)}};
  return rep;
}

}  // namespace rhg
