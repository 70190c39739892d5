#pragma once

// Geometry of the scattering disk, ds^2 = 4 (dx^2 + dy^2) / (1 - x^2 - y^2).

#include <cmath>

#include "layerlab/errors.hpp"

namespace layerlab {

/// Geodesic through the seed point (r0, theta0). sign selects the branch.
struct GeodesicParams {
  double r0 = 0.5;
  double theta0 = 0.0;
  double c0 = 4.0;
  int sign = 1;
};

inline constexpr double geodesic_clamp_tolerance = 1e-12;

namespace detail {

inline double clamp_unit(double x, const char* what) {
  if (x < -geodesic_clamp_tolerance || x > 1.0 + geodesic_clamp_tolerance) throw domain_error(what);
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

// The bracketed difference of the geodesic formula, without sign or offset.
inline double geodesic_shape(double c0, double r) {
  const double a = c0 * r * r - 1.0;
  const double s1 = a / (1.0 - r * r);
  const double s2 = clamp_unit(a / (c0 - 1.0), "radius outside the geodesic band");
  return std::atan(std::sqrt(s1 < 0.0 ? 0.0 : s1)) - std::asin(std::sqrt(s2)) / std::sqrt(c0);
}

}  // namespace detail

inline void validate_geodesic(const GeodesicParams& gp) {
  if (!(gp.r0 > 0.0 && gp.r0 < 1.0)) throw domain_error("geodesic seed radius must lie in (0,1)");
  if (gp.sign != 1 && gp.sign != -1) throw domain_error("geodesic sign must be +1 or -1");
  if (!std::isfinite(gp.theta0)) throw domain_error("geodesic seed angle must be finite");
  if (!(gp.c0 * gp.r0 * gp.r0 >= 1.0 - geodesic_clamp_tolerance) || !std::isfinite(gp.c0))
    throw domain_error("geodesic constant must satisfy c0 >= 1/r0^2");
}

/// Smallest admissible radius c0^{-1/2} (the turning radius).
inline double geodesic_turning_radius(const GeodesicParams& gp) {
  validate_geodesic(gp);
  return 1.0 / std::sqrt(gp.c0);
}

/// c1, fixed by passage through the seed point.
inline double geodesic_offset(const GeodesicParams& gp) {
  validate_geodesic(gp);
  return gp.theta0 - gp.sign * detail::geodesic_shape(gp.c0, gp.r0);
}

inline void check_geodesic_radius(const GeodesicParams& gp, double r) {
  const double lo = 1.0 / std::sqrt(gp.c0);
  if (!(r < 1.0) || r < lo * (1.0 - geodesic_clamp_tolerance)) throw domain_error("radius outside [c0^{-1/2}, 1)");
}

inline double geodesic_theta(const GeodesicParams& gp, double r) {
  const double c1 = geodesic_offset(gp);
  check_geodesic_radius(gp, r);
  return gp.sign * detail::geodesic_shape(gp.c0, r) + c1;
}

/// Closed-form dtheta/dr = sign sqrt(1 - r^2) / (r sqrt(c0 r^2 - 1)).
inline double geodesic_slope(const GeodesicParams& gp, double r) {
  validate_geodesic(gp);
  check_geodesic_radius(gp, r);
  const double a = gp.c0 * r * r - 1.0;
  if (!(a > 0.0)) throw domain_error("geodesic slope is infinite at the turning radius");
  return gp.sign * std::sqrt(1.0 - r * r) / (r * std::sqrt(a));
}

/// Length of a radial segment from the centre: 2 asin(r).
inline double radial_distance(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw domain_error("radial_distance needs r in [0,1]");
  return 2.0 * std::asin(r);
}

/// Area density 4 / (1 - x^2 - y^2).
inline double area_density(double x, double y) {
  const double s = x * x + y * y;
  if (!(s < 1.0)) throw domain_error("area_density needs a point of the open disk");
  return 4.0 / (1.0 - s);
}

}  // namespace layerlab
