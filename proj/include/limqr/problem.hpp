#pragma once

// Benchmark problems in the form  Laplacian(u) = f(x) + b(u, grad u).

#include "limqr/geometry.hpp"
#include "limqr/linear_operator.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace limqr {

struct ProblemSpec {
  std::string name;
  Domain domain = Domain::rectangle(0, 1, 0, 1);
  std::function<double(const Point2&)> f;  // empty means zero
  LinearOperator btilde;
  std::vector<BcKind> segment_bc;  // one per domain segment
  /// Boundary datum on a segment: u for Dirichlet, outward du/dn for Neumann.
  std::function<double(const Point2&, int segment, BcKind bc)> boundary;
  std::function<double(const Point2&)> exact;  // optional
  std::function<Point2(const Point2&)> exact_gradient;

  double rhs(const Point2& x) const { return f ? f(x) : 0.0; }
  bool has_exact() const { return static_cast<bool>(exact); }
};

struct ProblemParams {
  double u0 = 1.0, u1 = 10.0, k = 40.0;  // convdiff1d
  double peclet = 50.0;                  // thermal
};

namespace detail {

/// Boundary data manufactured from an exact solution and its gradient.
inline void manufacture_boundary(ProblemSpec& p) {
  const Domain dom = p.domain;
  auto u = p.exact;
  auto gu = p.exact_gradient;
  p.boundary = [dom, u, gu](const Point2& x, int seg, BcKind bc) {
    if (bc == BcKind::dirichlet) return u(x);
    return gu(x).dot(dom.segment_normal(seg, x));
  };
}

} // namespace detail

/// Catalog: pep5, pep7, disk, convdiff1d, thermal.
inline ProblemSpec problem_catalog(const std::string& name, const ProblemParams& prm = {}) {
  ProblemSpec p;
  p.name = name;
  using D = BcKind;
  if (name == "pep5") {
    p.domain = Domain::rectangle(-0.5, 0.5, -0.5, 0.5);
    p.exact = [](const Point2& x) { return std::sin(pi * x.x()) * std::cos(pi * x.y() / 2); };
    p.exact_gradient = [](const Point2& x) {
      return Point2(pi * std::cos(pi * x.x()) * std::cos(pi * x.y() / 2),
                    -0.5 * pi * std::sin(pi * x.x()) * std::sin(pi * x.y() / 2));
    };
    p.f = [](const Point2& x) { return -1.25 * pi * pi * std::sin(pi * x.x()) * std::cos(pi * x.y() / 2); };
    p.segment_bc = {D::neumann, D::dirichlet, D::neumann, D::dirichlet};
    detail::manufacture_boundary(p);
  } else if (name == "pep7") {
    p.domain = Domain::rectangle(1.0, 2.0, 1.0, 2.0);
    constexpr double a = pi / 6, b = 7 * pi / 4, c = 3 * pi / 4, d = 5 * pi / 4;
    auto X = [=](double x) { return std::sin(a * x) * std::sin(b * x); };
    auto Y = [=](double y) { return std::sin(c * y) * std::sin(d * y); };
    auto dX = [=](double x) { return a * std::cos(a * x) * std::sin(b * x) + b * std::sin(a * x) * std::cos(b * x); };
    auto dY = [=](double y) { return c * std::cos(c * y) * std::sin(d * y) + d * std::sin(c * y) * std::cos(d * y); };
    auto d2X = [=](double x) {
      return -(a * a + b * b) * std::sin(a * x) * std::sin(b * x) + 2 * a * b * std::cos(a * x) * std::cos(b * x);
    };
    auto d2Y = [=](double y) {
      return -(c * c + d * d) * std::sin(c * y) * std::sin(d * y) + 2 * c * d * std::cos(c * y) * std::cos(d * y);
    };
    p.exact = [=](const Point2& x) { return X(x.x()) * Y(x.y()); };
    p.exact_gradient = [=](const Point2& x) { return Point2(dX(x.x()) * Y(x.y()), X(x.x()) * dY(x.y())); };
    p.f = [=](const Point2& x) { return d2X(x.x()) * Y(x.y()) + X(x.x()) * d2Y(x.y()); };
    p.segment_bc = {D::dirichlet, D::dirichlet, D::dirichlet, D::dirichlet};
    detail::manufacture_boundary(p);
  } else if (name == "disk") {
    p.domain = Domain::disk(Point2(0, 0), 1.0);
    p.exact = [](const Point2& x) { return std::sin(10 * (x.x() + x.y())); };
    p.exact_gradient = [](const Point2& x) {
      const double c = 10 * std::cos(10 * (x.x() + x.y()));
      return Point2(c, c);
    };
    p.f = [](const Point2& x) { return -200 * std::sin(10 * (x.x() + x.y())); };
    p.segment_bc = {D::dirichlet};
    detail::manufacture_boundary(p);
  } else if (name == "convdiff1d") {
    require(prm.u0 > 0.0 && prm.u1 > 0.0, "convdiff1d: U0, U1 must be positive");
    p.domain = Domain::rectangle(0.0, 1.0, -0.1, 0.1);
    const double k = prm.k, u0 = prm.u0, lr = std::log(prm.u1 / prm.u0);
    auto V = [=](double x) { return lr + k * (x - 0.5); };
    p.exact = [=](const Point2& x) { return u0 * std::exp(0.5 * k * x.x() * x.x() + (lr - 0.5 * k) * x.x()); };
    p.exact_gradient = [=](const Point2& x) {
      return Point2(V(x.x()) * u0 * std::exp(0.5 * k * x.x() * x.x() + (lr - 0.5 * k) * x.x()), 0.0);
    };
    p.btilde.a0 = [k](const Point2&) { return k; };
    p.btilde.a1 = [V](const Point2& x) { return V(x.x()); };
    p.segment_bc = {D::neumann, D::dirichlet, D::neumann, D::dirichlet};
    detail::manufacture_boundary(p);
  } else if (name == "thermal") {
    p.domain = Domain::rectangle(0.0, 1.0, 0.0, 1.0);
    const double pe = prm.peclet;
    p.btilde.a1 = [pe](const Point2& x) { return pe * 4.0 * x.y() * (x.y() - 1.0); };
    p.segment_bc = {D::dirichlet, D::neumann, D::dirichlet, D::dirichlet};
    p.boundary = [](const Point2&, int seg, BcKind) { return seg == 0 ? 1.0 : 0.0; };
  } else {
    throw InputError("unknown problem: " + name);
  }
  return p;
}

/// Fill bc kind, normal and value of every boundary node (segments inferred from
/// positions where missing). At rectangle corners a
/// Dirichlet edge wins over a Neumann one; between equal kinds the horizontal edge wins.
inline void boundary_data(NodeSet& ns, const ProblemSpec& p) {
  const int nseg = p.domain.segment_count();
  require(static_cast<int>(p.segment_bc.size()) == nseg, "boundary_data: one bc kind per segment required");
  infer_segments(ns, p.domain);
  for (auto& b : ns.boundary) {
    if (b.segment >= nseg) throw InputError("boundary_data: node not covered by any segment");
    int seg = b.segment;
    if (b.alt_segment >= 0) {
      const int alt = b.alt_segment;
      const BcKind k1 = p.segment_bc[static_cast<std::size_t>(seg)];
      const BcKind k2 = p.segment_bc[static_cast<std::size_t>(alt)];
      if (k1 != k2) {
        seg = k1 == BcKind::dirichlet ? seg : alt;
      } else if (p.domain.is_rectangle()) {
        seg = (seg % 2 == 0) ? seg : alt;  // segments 0 and 2 are horizontal
      }
    }
    b.bc = p.segment_bc[static_cast<std::size_t>(seg)];
    b.normal = p.domain.segment_normal(seg, b.position);
    b.value = p.boundary ? p.boundary(b.position, seg, b.bc) : 0.0;
  }
}

} // namespace limqr
