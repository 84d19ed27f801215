#pragma once

// Gauss-Legendre rules and their mapping onto circles and disks.

#include "limqr/types.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <vector>

namespace limqr {

struct QuadratureRule {
  std::vector<double> nodes;    // increasing, in [-1, 1]
  std::vector<double> weights;  // positive, sum to 2
};

namespace detail {

inline QuadratureRule compute_gauss_legendre(int order) {
  QuadratureRule rule;
  const auto n = static_cast<std::size_t>(order);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess, largest root first
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // refresh derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = n - 1 - lo;
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (order % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

} // namespace detail

inline constexpr int max_gauss_order = 64;

/// Cached Gauss-Legendre rule on [-1, 1], 1 <= order <= 64.
inline const QuadratureRule& gauss_legendre_rule(int order) {
  require(order >= 1 && order <= max_gauss_order, "gauss_legendre_rule: order must be in [1, 64]");
  static std::array<QuadratureRule, max_gauss_order + 1> cache;
  static std::array<std::once_flag, max_gauss_order + 1> flags;
  const auto k = static_cast<std::size_t>(order);
  std::call_once(flags[k], [&] { cache[k] = detail::compute_gauss_legendre(order); });
  return cache[k];
}

/// Points, outward normals and weights (Jacobian included) on a circle,
/// four arcs with a GL rule of `order` points each.
struct CircleQuadrature {
  std::vector<Point2> points;
  std::vector<Point2> normals;
  std::vector<double> weights;
};

inline CircleQuadrature circle_quadrature(const Point2& center, double radius, int order, int arcs = 4) {
  require(radius > 0.0, "circle quadrature: radius must be positive");
  require(arcs >= 1, "circle quadrature: need at least one arc");
  const auto& rule = gauss_legendre_rule(order);
  CircleQuadrature q;
  const double half = pi / arcs;  // half-length of each arc
  for (int arc = 0; arc < arcs; ++arc) {
    const double mid = (2 * arc + 1) * half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = mid + half * rule.nodes[k];
      const Point2 n(std::cos(t), std::sin(t));
      q.normals.push_back(n);
      q.points.push_back(center + radius * n);
      q.weights.push_back(rule.weights[k] * half * radius);
    }
  }
  return q;
}

inline double integrate_circle_boundary(const Point2& center, double radius,
                                        const std::function<double(const Point2&, const Point2&)>& f,
                                        int order = 8, int arcs = 4) {
  const auto q = circle_quadrature(center, radius, order, arcs);
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f(q.points[i], q.normals[i]);
  return s;
}

struct DiskQuadrature {
  std::vector<Point2> points;
  std::vector<double> weights;
};

/// Polar tensor rule over the disk (center, radius) about `pole`, which must lie
/// strictly inside. Radial nodes follow r = r_max(theta) * t^3 with t on a GL
/// rule, so integrands with a logarithmic singularity at the pole converge fast.
/// `angular_order` GL points on each of four angular arcs.
inline DiskQuadrature disk_quadrature(const Point2& center, double radius, int radial_order, int angular_order,
                                      const Point2& pole) {
  require(radius > 0.0, "disk quadrature: radius must be positive");
  const Point2 off = pole - center;
  require(off.norm() < radius, "disk quadrature: pole must be inside the disk");
  const auto& rr = gauss_legendre_rule(radial_order);
  const auto& ra = gauss_legendre_rule(angular_order);
  DiskQuadrature q;
  q.points.reserve(rr.nodes.size() * ra.nodes.size() * 4);
  q.weights.reserve(q.points.capacity());
  const double half = 0.25 * pi;
  for (int arc = 0; arc < 4; ++arc) {
    const double mid = (2 * arc + 1) * half;
    for (std::size_t a = 0; a < ra.nodes.size(); ++a) {
      const double th = mid + half * ra.nodes[a];
      const Point2 dir(std::cos(th), std::sin(th));
      // distance from pole to the circle along dir
      const double b = off.dot(dir);
      const double rmax = -b + std::sqrt(b * b + radius * radius - off.squaredNorm());
      const double wa = ra.weights[a] * half;
      for (std::size_t k = 0; k < rr.nodes.size(); ++k) {
        const double t = 0.5 * (rr.nodes[k] + 1.0);
        const double r = rmax * t * t * t;
        const double dr = 3.0 * rmax * t * t * 0.5 * rr.weights[k];
        q.points.push_back(pole + r * dir);
        q.weights.push_back(wa * dr * r);
      }
    }
  }
  return q;
}

inline DiskQuadrature disk_quadrature(const Point2& center, double radius, int radial_order, int angular_order) {
  return disk_quadrature(center, radius, radial_order, angular_order, center);
}

inline double integrate_disk(const Point2& center, double radius, const std::function<double(const Point2&)>& f,
                             int radial_order = 12, int angular_order = 6) {
  const auto q = disk_quadrature(center, radius, radial_order, angular_order);
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f(q.points[i]);
  return s;
}

inline double integrate_disk(const Point2& center, double radius, const std::function<double(const Point2&)>& f,
                             int radial_order, int angular_order, const Point2& pole) {
  const auto q = disk_quadrature(center, radius, radial_order, angular_order, pole);
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f(q.points[i]);
  return s;
}

} // namespace limqr
