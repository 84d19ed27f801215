#pragma once

// Domains, boundary nodes and node-set generators (uniform, Halton,
// advancing-front quasi-uniform, repel).

#include "limqr/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <variant>
#include <vector>

namespace limqr {

struct Rectangle {
  double xmin, xmax, ymin, ymax;
};

struct Disk {
  Point2 center;
  double radius;
};

class Domain {
public:
  static Domain rectangle(double xmin, double xmax, double ymin, double ymax) {
    require(xmin < xmax && ymin < ymax, "rectangle requires xmin<xmax and ymin<ymax");
    return Domain(Rectangle{xmin, xmax, ymin, ymax});
  }
  static Domain disk(const Point2& center, double radius) {
    require(radius > 0.0, "disk radius must be positive");
    return Domain(Disk{center, radius});
  }

  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }
  const Rectangle& rect() const { return std::get<Rectangle>(shape_); }
  const Disk& circle() const { return std::get<Disk>(shape_); }

  /// Number of boundary segments: 4 edges (bottom, right, top, left) or 1 circle.
  int segment_count() const { return is_rectangle() ? 4 : 1; }

  bool contains_strictly(const Point2& p) const { return distance_to_boundary(p) > 0.0 && inside(p); }

  bool inside(const Point2& p) const {
    if (is_rectangle()) {
      const auto& r = rect();
      return p.x() > r.xmin && p.x() < r.xmax && p.y() > r.ymin && p.y() < r.ymax;
    }
    const auto& d = circle();
    return (p - d.center).norm() < d.radius;
  }

  /// Unsigned distance from an interior point to the boundary curve.
  double distance_to_boundary(const Point2& p) const {
    if (is_rectangle()) {
      const auto& r = rect();
      return std::min({p.x() - r.xmin, r.xmax - p.x(), p.y() - r.ymin, r.ymax - p.y()});
    }
    const auto& d = circle();
    return d.radius - (p - d.center).norm();
  }

  double perimeter() const {
    if (is_rectangle()) {
      const auto& r = rect();
      return 2.0 * ((r.xmax - r.xmin) + (r.ymax - r.ymin));
    }
    return 2.0 * pi * circle().radius;
  }

  double area() const {
    if (is_rectangle()) {
      const auto& r = rect();
      return (r.xmax - r.xmin) * (r.ymax - r.ymin);
    }
    return pi * circle().radius * circle().radius;
  }

  /// Bounding box as a rectangle.
  Rectangle bounds() const {
    if (is_rectangle()) return rect();
    const auto& d = circle();
    return {d.center.x() - d.radius, d.center.x() + d.radius, d.center.y() - d.radius,
            d.center.y() + d.radius};
  }

  /// Outward unit normal of a segment at p (p assumed on that segment).
  Point2 segment_normal(int segment, const Point2& p) const {
    if (is_rectangle()) {
      static const std::array<Point2, 4> n{Point2(0, -1), Point2(1, 0), Point2(0, 1), Point2(-1, 0)};
      return n.at(static_cast<std::size_t>(segment));
    }
    return (p - circle().center).normalized();
  }

  /// Distance from p to the boundary curve (p anywhere).
  double distance_to_curve(const Point2& p) const {
    if (is_rectangle()) {
      const auto& r = rect();
      const double cx = std::clamp(p.x(), r.xmin, r.xmax);
      const double cy = std::clamp(p.y(), r.ymin, r.ymax);
      if (inside(p)) return distance_to_boundary(p);
      return std::hypot(p.x() - cx, p.y() - cy);
    }
    return std::abs((p - circle().center).norm() - circle().radius);
  }

  /// Segments whose curve passes within tol of p (two at rectangle corners, empty off the boundary).
  std::vector<int> segments_at(const Point2& p, double tol = 1e-9) const {
    std::vector<int> out;
    if (is_disk()) {
      if (distance_to_curve(p) <= tol * std::max(1.0, circle().radius)) out.push_back(0);
      return out;
    }
    const auto& r = rect();
    const double t = tol * std::max({1.0, r.xmax - r.xmin, r.ymax - r.ymin});
    const bool inx = p.x() >= r.xmin - t && p.x() <= r.xmax + t;
    const bool iny = p.y() >= r.ymin - t && p.y() <= r.ymax + t;
    if (inx && std::abs(p.y() - r.ymin) <= t) out.push_back(0);
    if (iny && std::abs(p.x() - r.xmax) <= t) out.push_back(1);
    if (inx && std::abs(p.y() - r.ymax) <= t) out.push_back(2);
    if (iny && std::abs(p.x() - r.xmin) <= t) out.push_back(3);
    return out;
  }

private:
  explicit Domain(std::variant<Rectangle, Disk> s) : shape_(std::move(s)) {}
  std::variant<Rectangle, Disk> shape_;
};

enum class BcKind { dirichlet, neumann };

struct BoundaryNode {
  Point2 position;
  Point2 normal;  // outward, unit
  BcKind bc = BcKind::dirichlet;
  double value = 0.0;
  int segment = -1;      // owning segment, -1 when unknown (e.g. read from CSV)
  int alt_segment = -1;  // second segment for rectangle corners
};

struct NodeSet {
  std::vector<Point2> interior;
  std::vector<BoundaryNode> boundary;

  std::size_t total() const { return interior.size() + boundary.size(); }
  const Point2& point(std::size_t global) const {
    return global < interior.size() ? interior[global] : boundary[global - interior.size()].position;
  }
};

// ---------------------------------------------------------------------------
// Halton / van der Corput

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

/// Element i is (radical_inverse_2(i+skip), radical_inverse_3(i+skip)).
inline std::vector<Point2> halton_points(int count, int skip = 1) {
  require(count >= 1, "halton_points: count must be >= 1");
  require(skip >= 0, "halton_points: skip must be >= 0");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto idx = static_cast<std::uint64_t>(i + skip);
    pts.emplace_back(radical_inverse(idx, 2), radical_inverse(idx, 3));
  }
  return pts;
}

/// Assign segment ids to boundary nodes that lack them, from their positions.
inline void infer_segments(NodeSet& ns, const Domain& dom) {
  for (auto& b : ns.boundary) {
    if (b.segment >= 0) continue;
    const auto segs = dom.segments_at(b.position);
    if (segs.empty()) throw InputError("boundary node not on the domain boundary");
    b.segment = segs[0];
    b.alt_segment = segs.size() > 1 ? segs[1] : -1;
  }
}

// ---------------------------------------------------------------------------
// Boundary discretizations

/// Equispaced rectangle boundary with `sx` segments along x-edges and `sy`
/// along y-edges. Corners are emitted once and carry both segment ids.
inline std::vector<BoundaryNode> rectangle_boundary(const Domain& dom, int sx, int sy) {
  require(dom.is_rectangle(), "rectangle_boundary: rectangle domain required");
  require(sx >= 1 && sy >= 1, "rectangle_boundary: need at least one segment per edge");
  const auto& r = dom.rect();
  std::vector<BoundaryNode> out;
  auto add = [&](double x, double y, int seg, int alt) {
    BoundaryNode b;
    b.position = Point2(x, y);
    b.segment = seg;
    b.alt_segment = alt;
    b.normal = dom.segment_normal(seg, b.position);
    out.push_back(b);
  };
  const double dx = (r.xmax - r.xmin) / sx;
  const double dy = (r.ymax - r.ymin) / sy;
  // bottom (0), left-to-right, including corner (xmin,ymin)
  for (int i = 0; i < sx; ++i) add(r.xmin + i * dx, r.ymin, 0, i == 0 ? 3 : -1);
  // right (1), bottom-to-top, including corner (xmax,ymin)
  for (int j = 0; j < sy; ++j) add(r.xmax, r.ymin + j * dy, 1, j == 0 ? 0 : -1);
  // top (2), right-to-left, including corner (xmax,ymax)
  for (int i = 0; i < sx; ++i) add(r.xmax - i * dx, r.ymax, 2, i == 0 ? 1 : -1);
  // left (3), top-to-bottom, including corner (xmin,ymax)
  for (int j = 0; j < sy; ++j) add(r.xmin, r.ymax - j * dy, 3, j == 0 ? 2 : -1);
  return out;
}

inline std::vector<BoundaryNode> circle_boundary(const Domain& dom, int count) {
  require(dom.is_disk(), "circle_boundary: disk domain required");
  require(count >= 3, "circle_boundary: need at least 3 nodes");
  const auto& d = dom.circle();
  std::vector<BoundaryNode> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * pi * i / count;
    BoundaryNode b;
    b.normal = Point2(std::cos(t), std::sin(t));
    b.position = d.center + d.radius * b.normal;
    b.segment = 0;
    out.push_back(b);
  }
  return out;
}

/// Boundary with spacing close to h: ceil(perimeter/h) on circles,
/// round(edge/h) segments per rectangle edge.
inline std::vector<BoundaryNode> boundary_with_spacing(const Domain& dom, double h) {
  require(h > 0.0, "boundary spacing must be positive");
  if (dom.is_disk()) return circle_boundary(dom, std::max(3, static_cast<int>(std::ceil(dom.perimeter() / h))));
  const auto& r = dom.rect();
  const int sx = std::max(1, static_cast<int>(std::lround((r.xmax - r.xmin) / h)));
  const int sy = std::max(1, static_cast<int>(std::lround((r.ymax - r.ymin) / h)));
  return rectangle_boundary(dom, sx, sy);
}

// ---------------------------------------------------------------------------
// Node-set generators

/// Tensor grid with nx*ny points including the boundary; interior count is (nx-2)(ny-2).
inline NodeSet uniform_nodes(const Domain& dom, int nx, int ny) {
  require(dom.is_rectangle(), "uniform_nodes: rectangle domain required");
  require(nx >= 2 && ny >= 2, "uniform_nodes: nx, ny must be >= 2");
  require(nx * ny >= 4, "uniform_nodes: nx*ny must be >= 4");
  const auto& r = dom.rect();
  NodeSet ns;
  const double dx = (r.xmax - r.xmin) / (nx - 1);
  const double dy = (r.ymax - r.ymin) / (ny - 1);
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) ns.interior.emplace_back(r.xmin + i * dx, r.ymin + j * dy);
  ns.boundary = rectangle_boundary(dom, nx - 1, ny - 1);
  return ns;
}

/// Halton interior points mapped into the bounding box (rejection for disks),
/// equispaced boundary with `boundary_spacing`.
inline NodeSet halton_nodes(const Domain& dom, int count, double boundary_spacing, int skip = 1) {
  require(count >= 1, "halton_nodes: count must be >= 1");
  const auto box = dom.bounds();
  NodeSet ns;
  int idx = skip;
  while (static_cast<int>(ns.interior.size()) < count) {
    const auto p01 = halton_points(1, idx++).front();
    const Point2 p(box.xmin + (box.xmax - box.xmin) * p01.x(), box.ymin + (box.ymax - box.ymin) * p01.y());
    if (dom.inside(p)) ns.interior.push_back(p);
  }
  ns.boundary = boundary_with_spacing(dom, boundary_spacing);
  return ns;
}

/// Advancing-front fill of the bounding box (potential dot positions swept
/// upward from the bottom edge). Spacing at x is h / density(x).
inline std::vector<Point2> advancing_front_fill(const Rectangle& box, double h,
                                                const std::function<double(const Point2&)>& density) {
  struct Dot {
    double x, y;
  };
  const double width = box.xmax - box.xmin;
  const int ninit = std::max(2, static_cast<int>(std::ceil(width / (0.1 * h)))) + 1;
  std::vector<Dot> pdp;
  pdp.reserve(static_cast<std::size_t>(ninit));
  const double y0 = box.ymin - 0.5 * h;
  for (int i = 0; i < ninit; ++i) {
    // small deterministic perturbation avoids systematic ties along the start line
    const double jitter = 1e-4 * h * radical_inverse(static_cast<std::uint64_t>(i + 1), 2);
    pdp.push_back({box.xmin + width * i / (ninit - 1), y0 + jitter});
  }
  std::vector<Point2> nodes;
  const double ymax = box.ymax + 0.5 * h;
  const std::size_t cap = 50'000'000;
  while (!pdp.empty() && nodes.size() < cap) {
    // lowest dot; ties broken by lowest x (dots are kept sorted by x)
    std::size_t i = 0;
    for (std::size_t k = 1; k < pdp.size(); ++k)
      if (pdp[k].y < pdp[i].y) i = k;
    if (pdp[i].y > ymax) break;
    const Dot c = pdp[i];
    nodes.emplace_back(c.x, c.y);
    const double r = h / density(Point2(c.x, c.y));
    const double r2 = r * r;
    auto d2 = [&](const Dot& d) { return (d.x - c.x) * (d.x - c.x) + (d.y - c.y) * (d.y - c.y); };
    long ileft = static_cast<long>(i) - 1;
    while (ileft >= 0 && d2(pdp[static_cast<std::size_t>(ileft)]) <= r2) --ileft;
    std::size_t iright = i + 1;
    while (iright < pdp.size() && d2(pdp[iright]) <= r2) ++iright;
    const double ang_left =
        ileft >= 0 ? std::atan2(pdp[static_cast<std::size_t>(ileft)].y - c.y, pdp[static_cast<std::size_t>(ileft)].x - c.x)
                   : pi;
    const double ang_right = iright < pdp.size() ? std::atan2(pdp[iright].y - c.y, pdp[iright].x - c.x) : 0.0;
    std::vector<Dot> fresh;
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double a = ang_left - s * (ang_left - ang_right);
      const Dot d{c.x + r * std::cos(a), c.y + r * std::sin(a)};
      if (d.x >= box.xmin && d.x <= box.xmax) fresh.push_back(d);
    }
    std::vector<Dot> next;
    next.reserve(pdp.size() + fresh.size());
    next.insert(next.end(), pdp.begin(), pdp.begin() + (ileft + 1));
    next.insert(next.end(), fresh.begin(), fresh.end());
    next.insert(next.end(), pdp.begin() + static_cast<long>(iright), pdp.end());
    pdp.swap(next);
  }
  return nodes;
}

/// Quasi-uniform node set: advancing-front interior fill with local spacing
/// h/density around a given boundary discretization. A front node is
/// kept when it lies strictly inside and at least 0.9*h from every boundary node.
inline NodeSet quasi_uniform_nodes(const Domain& dom, double h, std::vector<BoundaryNode> boundary,
                                   const std::function<double(const Point2&)>& density = {}) {
  require(h > 0.0, "quasi_uniform_nodes: h must be positive");
  const auto dens = density ? density : [](const Point2&) { return 1.0; };
  const auto box = dom.bounds();
  require(h < std::min(box.xmax - box.xmin, box.ymax - box.ymin),
          "quasi_uniform_nodes: spacing larger than the domain");
  NodeSet ns;
  ns.boundary = std::move(boundary);
  const auto fill = advancing_front_fill(box, h, dens);
  for (const auto& p : fill) {
    if (!dom.inside(p)) continue;
    const double local = 0.9 * h / dens(p);
    bool ok = dom.distance_to_boundary(p) > 0.25 * local;
    for (const auto& b : ns.boundary) {
      if (!ok) break;
      ok = (b.position - p).norm() >= local;
    }
    if (ok) ns.interior.push_back(p);
  }
  if (ns.interior.empty()) throw InputError("quasi_uniform_nodes: no interior node fits");
  return ns;
}

inline NodeSet quasi_uniform_nodes(const Domain& dom, double h,
                                   const std::function<double(const Point2&)>& density = {}) {
  require(h > 0.0, "quasi_uniform_nodes: h must be positive");
  return quasi_uniform_nodes(dom, h, boundary_with_spacing(dom, h), density);
}

struct RepelOptions {
  double jitter = 0.2;  // amplitude in units of h
  int neighbor_count = 5;
  int iterations = 20;
  double step = 0.1;  // displacement per iteration in units of h
};

/// Structured grid restricted to the disk, jittered, then relaxed by a
/// repulsion force from the nearest neighbors. Boundary nodes never move.
inline NodeSet repel_nodes_disk(const Domain& dom, double h, std::uint64_t seed, const RepelOptions& opt = {}) {
  require(dom.is_disk(), "repel_nodes_disk: disk domain required");
  require(h > 0.0, "repel_nodes_disk: h must be positive");
  require(opt.iterations >= 0, "repel_nodes_disk: iterations must be >= 0");
  require(opt.neighbor_count >= 1, "repel_nodes_disk: neighbor_count must be >= 1");
  const auto& d = dom.circle();
  NodeSet ns;
  ns.boundary = circle_boundary(dom, std::max(3, static_cast<int>(std::ceil(dom.perimeter() / h))));
  const double keep = d.radius - 0.5 * h;
  const int m = static_cast<int>(std::ceil(d.radius / h));
  for (int j = -m; j <= m; ++j)
    for (int i = -m; i <= m; ++i) {
      const Point2 p = d.center + Point2(i * h, j * h);
      if ((p - d.center).norm() < keep) ns.interior.push_back(p);
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double limit = d.radius - 0.25 * h;
  auto accept = [&](const Point2& p) { return (p - d.center).norm() < limit; };
  if (opt.jitter > 0.0) {
    for (auto& p : ns.interior) {
      const Point2 q = p + opt.jitter * h * Point2(uni(rng), uni(rng));
      if (accept(q)) p = q;
    }
  }
  const std::size_t ni = ns.interior.size();
  std::vector<Point2> all;
  std::vector<std::pair<double, std::size_t>> dist;
  for (int it = 0; it < opt.iterations; ++it) {
    all.assign(ns.interior.begin(), ns.interior.end());
    for (const auto& b : ns.boundary) all.push_back(b.position);
    std::vector<Point2> moved = ns.interior;
    for (std::size_t i = 0; i < ni; ++i) {
      dist.clear();
      for (std::size_t j = 0; j < all.size(); ++j)
        if (j != i) dist.emplace_back((all[j] - all[i]).squaredNorm(), j);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(opt.neighbor_count), dist.size());
      std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
      Point2 force = Point2::Zero();
      for (std::size_t q = 0; q < k; ++q) {
        const Point2 r = all[i] - all[dist[q].second];
        const double rn = r.norm();
        force += r / (rn * rn * rn);
      }
      const double fn = force.norm();
      if (fn == 0.0) continue;
      const Point2 q = all[i] + opt.step * h * force / fn;
      if (accept(q)) moved[i] = q;
    }
    ns.interior.swap(moved);
  }
  return ns;
}

/// Smallest pairwise distance among a set of points (brute force).
inline double min_pairwise_distance(const std::vector<Point2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

} // namespace limqr
