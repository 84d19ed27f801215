#pragma once

// Laplace fundamental solution and the Dirichlet Green's function of a disk.

#include "limqr/types.hpp"

#include <algorithm>
#include <cmath>

namespace limqr {

struct DiskSubregion {
  Point2 center;
  double radius = 0.0;
};

/// Collocation point relative to a subregion, with its image point.
struct SourceConfig {
  Point2 xi;
  double rho = 0.0;  // |xi - center|
  Point2 image;      // only meaningful when rho > 0

  static SourceConfig make(const Point2& xi, const DiskSubregion& sub) {
    require(sub.radius > 0.0, "subregion radius must be positive");
    SourceConfig c;
    c.xi = xi;
    c.rho = (xi - sub.center).norm();
    require(c.rho < sub.radius, "source must lie strictly inside the subregion");
    c.image = c.rho > 0.0 ? Point2(sub.center + (sub.radius * sub.radius / (c.rho * c.rho)) * (xi - sub.center))
                          : Point2(sub.center);
    return c;
  }
};

/// u*(x, xi) = (1/2pi) ln(1/|x - xi|)
inline double laplace_fundamental(const Point2& x, const Point2& xi) {
  const double r = (x - xi).norm();
  require(r > 0.0, "laplace_fundamental: coincident points");
  return -std::log(r) / (2.0 * pi);
}

inline double laplace_fundamental_normal(const Point2& x, const Point2& n, const Point2& xi) {
  const Point2 d = x - xi;
  const double r2 = d.squaredNorm();
  require(r2 > 0.0, "laplace_fundamental_normal: coincident points");
  return -d.dot(n) / (2.0 * pi * r2);
}

/// Dirichlet Green's function of the disk: Laplacian is delta(x - xi), zero on the circle, G <= 0 inside.
inline double dgf_disk(const Point2& x, const SourceConfig& cfg, const DiskSubregion& sub) {
  const double r2 = (x - cfg.xi).squaredNorm();
  require(r2 > 0.0, "dgf_disk: x coincides with the source");
  const double R = sub.radius;
  require((x - sub.center).norm() <= R * (1.0 + 1e-10), "dgf_disk: x outside the subregion");
  if (cfg.rho == 0.0) return std::log(std::sqrt(r2) / R) / (2.0 * pi);
  const double ri2 = (x - cfg.image).squaredNorm();
  return std::log(R * R * r2 / (cfg.rho * cfg.rho * ri2)) / (4.0 * pi);
}

/// Poisson kernel: outward normal derivative of dgf_disk on the circle.
inline double dgf_disk_normal(const Point2& x, const SourceConfig& cfg, const DiskSubregion& sub) {
  const double R = sub.radius;
  require(std::abs((x - sub.center).norm() - R) <= 1e-10 * std::max(1.0, R), "dgf_disk_normal: x not on the circle");
  return (R * R - cfg.rho * cfg.rho) / (2.0 * pi * R * (x - cfg.xi).squaredNorm());
}

} // namespace limqr
