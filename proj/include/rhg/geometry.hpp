// Hyperbolic-disk geometry for the Poissonized random hyperbolic graph model:
// distances, connection angles and region measures.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rhg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Model configuration (alpha, nu, n, seed) together with the derived disk
/// radius R = 2 ln(n / nu).
struct ModelParams {
  double alpha = 0.75;
  double nu = 1.0;
  double n = 1000.0;
  std::uint64_t seed = 0;
  double R = 0.0;

  static ModelParams make(double alpha, double nu, double n, std::uint64_t seed = 0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("alpha must be positive, got " + std::to_string(alpha));
    if (!(nu > 0.0) || !std::isfinite(nu))
      throw std::invalid_argument("nu must be positive, got " + std::to_string(nu));
    if (!(n / nu > 1.0) || !std::isfinite(n))
      throw std::invalid_argument("n/nu must exceed 1 (R = 2 ln(n/nu) > 0)");
    return ModelParams{alpha, nu, n, seed, 2.0 * std::log(n / nu)};
  }

  ModelParams with_seed(std::uint64_t s) const {
    ModelParams p = *this;
    p.seed = s;
    return p;
  }
};

/// Reduce an angle to [0, 2pi).
inline double reduce_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;  // fmod(-tiny) + 2pi rounds up to 2pi
  return t;
}

/// Small angle between two directions, in [0, pi].
inline double angular_distance(double a, double b) {
  double d = std::fabs(reduce_angle(a) - reduce_angle(b));
  return d > kPi ? kTwoPi - d : d;
}

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;

  static PolarPoint make(double r, double theta) { return PolarPoint{r, reduce_angle(theta)}; }

  friend bool operator==(const PolarPoint&, const PolarPoint&) = default;
};

/// Angular sector of an annulus: r_lo <= r < r_hi, angular distance to
/// theta_center at most half_angle.
struct SectorAnnulus {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double theta_center = 0.0;
  double half_angle = kPi;

  bool contains(const PolarPoint& p) const {
    return r_lo <= p.r && p.r < r_hi && angular_distance(p.theta, theta_center) <= half_angle;
  }
};

namespace detail {

// a + b = s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// d - |a - b| without losing the low-order bits of a - b.
inline double minus_abs_diff(double d, double a, double b) {
  double s, e;
  two_sum(a, -b, s, e);
  return s >= 0.0 ? (d - s) - e : (d + s) + e;
}

// a + b - d, same treatment.
inline double sum_minus(double a, double b, double d) {
  double s, e;
  two_sum(a, b, s, e);
  return (s - d) + e;
}

inline double sq(double x) { return x * x; }

}  // namespace detail

/// cosh(d_h) - 1 for two points, written as a sum of nonnegative terms:
/// 2 sinh^2((r_p - r_q)/2) + 2 sinh r_p sinh r_q sin^2(dtheta/2).
inline double cosh_distance_minus_one(const PolarPoint& p, const PolarPoint& q) {
  const double radial = std::sinh(0.5 * (p.r - q.r));
  const double angular = std::sin(0.5 * (p.theta - q.theta));
  return 2.0 * radial * radial + 2.0 * std::sinh(p.r) * std::sinh(q.r) * angular * angular;
}

/// Hyperbolic distance between two points of the disk. R is accepted for
/// interface symmetry with is_adjacent; curvature is fixed at -1.
inline double hyp_distance(const PolarPoint& p, const PolarPoint& q, double /*R*/ = 0.0) {
  // cosh d - 1 = 2 sinh^2(d/2)
  const double y = cosh_distance_minus_one(p, q);
  return 2.0 * std::asinh(std::sqrt(0.5 * y));
}

/// d_h(p, q) <= R, decided on cosh values. Pairs with r_p + r_q <= R are
/// adjacent regardless of angle.
inline bool is_adjacent(const PolarPoint& p, const PolarPoint& q, double R) {
  if (p.r + q.r <= R) return true;
  const double radial = std::sinh(0.5 * (p.r - q.r));
  const double angular = std::sin(0.5 * (p.theta - q.theta));
  const double half_r = std::sinh(0.5 * R);
  return radial * radial + std::sinh(p.r) * std::sinh(q.r) * angular * angular <= half_r * half_r;
}

/// Overshoot of the arccos argument beyond [-1, 1] that is silently clamped.
inline constexpr double kArccosClampTolerance = 1e-9;

/// Angle at the apex of a hyperbolic triangle with adjacent sides d1, d2 and
/// opposite side d. Evaluated through half-angle forms so that both small
/// and near-pi angles keep full relative precision.
inline double theta_exact(double d1, double d2, double d) {
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw std::domain_error("theta_exact: adjacent sides must be positive");
  const double denom = std::sinh(d1) * std::sinh(d2);
  // sin^2(theta/2) and cos^2(theta/2)
  const double m = detail::minus_abs_diff(d, d1, d2);
  const double s = detail::sum_minus(d1, d2, d);
  double sin2 = std::sinh(0.5 * (d + std::fabs(d1 - d2))) * std::sinh(0.5 * m) / denom;
  double cos2 = std::sinh(0.5 * (d1 + d2 + d)) * std::sinh(0.5 * s) / denom;
  // argument of arccos is 1 - 2 sin2 = 2 cos2 - 1
  if (-2.0 * sin2 > kArccosClampTolerance || -2.0 * cos2 > kArccosClampTolerance)
    throw std::domain_error("theta_exact: sides violate the triangle inequality");
  sin2 = std::max(sin2, 0.0);
  cos2 = std::max(cos2, 0.0);
  return 2.0 * std::atan2(std::sqrt(sin2), std::sqrt(cos2));
}

/// theta_R(x, y): the largest angle at the origin between points of radii x
/// and y that still lie within distance R of each other. Saturates at pi
/// when x + y <= R and at 0 when the pair can never be within R.
inline double connection_angle(double x, double y, double R) {
  if (x + y <= R) return kPi;
  if (x <= 0.0 || y <= 0.0 || std::fabs(x - y) > R) return 0.0;
  return theta_exact(x, y, R);
}

/// Leading term 2 e^{(R - d1 - d2)/2} of the connection angle. Valid for
/// min(d1, d2) <= R <= d1 + d2.
inline double theta_approx(double d1, double d2, double R) {
  if (!(std::min(d1, d2) <= R && R <= d1 + d2))
    throw std::domain_error("theta_approx: requires min(d1, d2) <= R <= d1 + d2");
  return 2.0 * std::exp(0.5 * (R - d1 - d2));
}

/// Exact model measure of B_O(rho): (cosh(alpha rho) - 1) / (cosh(alpha R) - 1).
inline double mu_ball(double rho, const ModelParams& params) {
  if (!(rho >= 0.0 && rho <= params.R))
    throw std::domain_error("mu_ball: rho must lie in [0, R]");
  const double num = std::sinh(0.5 * params.alpha * rho);
  const double den = std::sinh(0.5 * params.alpha * params.R);
  return (num / den) * (num / den);
}

/// e^{-alpha (R - rho)}, the large-R form of mu_ball.
inline double mu_ball_asymptotic(double rho, const ModelParams& params) {
  return std::exp(-params.alpha * (params.R - rho));
}

inline double mu_annulus_sector(const SectorAnnulus& region, const ModelParams& params) {
  const double frac = std::clamp(region.half_angle, 0.0, kPi) / kPi;
  return frac * (mu_ball(region.r_hi, params) - mu_ball(region.r_lo, params));
}

/// Inverse of the radial CDF F(r) = mu_ball(r): maps u in [0, 1) to a radius
/// in [0, R).
inline double radius_from_uniform(double u, double alpha, double R) {
  const double s = std::sinh(0.5 * alpha * R);
  // cosh(alpha r) - 1 = u (cosh(alpha R) - 1)  <=>  sinh(alpha r / 2) = sqrt(u) sinh(alpha R / 2)
  double r = 2.0 * std::asinh(std::sqrt(u) * s) / alpha;
  if (r >= R) r = std::nextafter(R, 0.0);
  return r;
}

}  // namespace rhg
