#pragma once

// Classical radial bases (GA, MQ1, MQ2, TPS) with polynomial augmentation,
// their particular solutions and the direct local basis.

#include "limqr/linear_operator.hpp"
#include "limqr/types.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace limqr {

enum class RbfKind { ga, mq1, mq2, tps };

struct BasisKind {
  RbfKind kind = RbfKind::ga;
  double epsilon = 1.0;

  static BasisKind ga(double eps) { return make(RbfKind::ga, eps); }
  static BasisKind mq1(double eps) { return make(RbfKind::mq1, eps); }
  static BasisKind mq2(double eps) { return make(RbfKind::mq2, eps); }
  static BasisKind tps() { return {RbfKind::tps, 0.0}; }

  /// Degree of the appended polynomial, -1 for none.
  int poly_degree() const {
    switch (kind) {
      case RbfKind::ga: return -1;
      case RbfKind::mq1: return 0;
      case RbfKind::mq2: return 1;
      case RbfKind::tps: return 2;
    }
    return -1;
  }
  int poly_count() const {
    const int d = poly_degree();
    return (d + 1) * (d + 2) / 2;
  }

private:
  static BasisKind make(RbfKind k, double eps) {
    require(eps > 0.0 && std::isfinite(eps), "shape parameter must be positive");
    return {k, eps};
  }
};

inline std::string to_string(RbfKind k) {
  switch (k) {
    case RbfKind::ga: return "GA";
    case RbfKind::mq1: return "MQ1";
    case RbfKind::mq2: return "MQ2";
    case RbfKind::tps: return "TPS";
  }
  return "?";
}

/// Accepts ga, mq1, mq2, tps in either case.
inline RbfKind parse_rbf_kind(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "ga") return RbfKind::ga;
  if (s == "mq1") return RbfKind::mq1;
  if (s == "mq2") return RbfKind::mq2;
  if (s == "tps") return RbfKind::tps;
  throw InputError("unknown rbf kind: " + s);
}

struct RbfJet {
  double value = 0.0;
  Point2 gradient = Point2::Zero();
  double laplacian = 0.0;
};

inline RbfJet rbf_jet(const BasisKind& b, const Point2& x, const Point2& center) {
  const Point2 d = x - center;
  const double r2 = d.squaredNorm();
  const double e2 = b.epsilon * b.epsilon;
  RbfJet j;
  switch (b.kind) {
    case RbfKind::ga: {
      const double phi = std::exp(-e2 * r2);
      j.value = phi;
      j.gradient = -2.0 * e2 * phi * d;
      j.laplacian = (4.0 * e2 * e2 * r2 - 4.0 * e2) * phi;
      break;
    }
    case RbfKind::mq1: {
      const double phi = std::sqrt(1.0 + e2 * r2);
      j.value = phi;
      j.gradient = (e2 / phi) * d;
      j.laplacian = 2.0 * e2 / phi - e2 * e2 * r2 / (phi * phi * phi);
      break;
    }
    case RbfKind::mq2: {
      const double s = std::sqrt(1.0 + e2 * r2);
      j.value = s * s * s;
      j.gradient = 3.0 * e2 * s * d;
      j.laplacian = 6.0 * e2 * s + 3.0 * e2 * e2 * r2 / s;
      break;
    }
    case RbfKind::tps: {
      if (r2 == 0.0) break;
      const double lr = 0.5 * std::log(r2);
      j.value = r2 * r2 * lr;
      j.gradient = (4.0 * r2 * lr + r2) * d;
      j.laplacian = 16.0 * r2 * lr + 8.0 * r2;
      break;
    }
  }
  return j;
}

namespace detail {

/// Ein(x) = integral_0^x (1 - e^-t)/t dt
inline double ein(double x) {
  if (x <= 5.0) {
    double term = x, sum = x;
    for (int k = 2; k < 200; ++k) {
      term *= -x * (k - 1) / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  constexpr double euler_gamma = 0.57721566490153286061;
  return -std::expint(-x) + std::log(x) + euler_gamma;
}

} // namespace detail

/// A function whose Laplacian is the basis function centered at `center`.
inline double particular_solution(const BasisKind& b, const Point2& x, const Point2& center) {
  const double r2 = (x - center).squaredNorm();
  switch (b.kind) {
    case RbfKind::ga: {
      const double e2 = b.epsilon * b.epsilon;
      return detail::ein(e2 * r2) / (4.0 * e2);
    }
    case RbfKind::mq1: {
      const double e = b.epsilon;
      const double s = std::sqrt(r2 + 1.0 / (e * e));
      return e * ((r2 + 4.0 / (e * e)) * s / 9.0 - std::log(1.0 / e + s) / (3.0 * e * e * e));
    }
    case RbfKind::tps: {
      if (r2 == 0.0) return 0.0;
      const double r6 = r2 * r2 * r2;
      return r6 * 0.5 * std::log(r2) / 36.0 - r6 / 108.0;
    }
    case RbfKind::mq2: break;
  }
  throw InputError("particular_solution: unsupported basis " + to_string(b.kind));
}

// ---------------------------------------------------------------------------
// Scaled monomials p(X, Y), X = (x - ox)/s, Y = (y - oy)/s, ordered 1, X, Y, X^2, XY, Y^2.

struct MonomialFrame {
  Point2 origin = Point2::Zero();
  double scale = 1.0;
};

/// Value, gradient, Laplacian of monomial q in the frame.
inline RbfJet monomial_jet(int q, const MonomialFrame& f, const Point2& x) {
  const double X = (x.x() - f.origin.x()) / f.scale;
  const double Y = (x.y() - f.origin.y()) / f.scale;
  const double is = 1.0 / f.scale;
  RbfJet j;
  switch (q) {
    case 0: j.value = 1.0; break;
    case 1: j.value = X; j.gradient = Point2(is, 0.0); break;
    case 2: j.value = Y; j.gradient = Point2(0.0, is); break;
    case 3: j.value = X * X; j.gradient = Point2(2 * X * is, 0.0); j.laplacian = 2 * is * is; break;
    case 4: j.value = X * Y; j.gradient = Point2(Y * is, X * is); break;
    case 5: j.value = Y * Y; j.gradient = Point2(0.0, 2 * Y * is); j.laplacian = 2 * is * is; break;
    default: throw InputError("monomial index out of range");
  }
  return j;
}

/// Particular solution of monomial q: Laplacian equals the monomial.
inline double monomial_particular(int q, const MonomialFrame& f, const Point2& x) {
  const double X = (x.x() - f.origin.x()) / f.scale;
  const double Y = (x.y() - f.origin.y()) / f.scale;
  const double s2 = f.scale * f.scale;
  switch (q) {
    case 0: return s2 * (X * X + Y * Y) / 4.0;
    case 1: return s2 * X * X * X / 6.0;
    case 2: return s2 * Y * Y * Y / 6.0;
    case 3: return s2 * X * X * X * X / 12.0;
    case 4: return s2 * (X * X * X * Y + X * Y * Y * Y) / 12.0;
    case 5: return s2 * Y * Y * Y * Y / 12.0;
    default: throw InputError("monomial index out of range");
  }
}

// ---------------------------------------------------------------------------

/// Local basis {phi(|x - x_j|)} plus scaled monomials. Columns: n radial, then poly.
class DirectBasis {
public:
  DirectBasis(const BasisKind& kind, std::vector<Point2> centers) : kind_(kind), centers_(std::move(centers)) {
    require(!centers_.empty(), "DirectBasis: empty stencil");
    Point2 c = Point2::Zero();
    for (const auto& p : centers_) c += p;
    c /= static_cast<double>(centers_.size());
    double s = 0.0;
    for (const auto& p : centers_) s = std::max(s, (p - c).norm());
    frame_.origin = c;
    frame_.scale = s > 0.0 ? s : 1.0;
  }

  const BasisKind& kind() const { return kind_; }
  const std::vector<Point2>& centers() const { return centers_; }
  const MonomialFrame& frame() const { return frame_; }
  int node_count() const { return static_cast<int>(centers_.size()); }
  int poly_count() const { return kind_.poly_count(); }
  int size() const { return node_count() + poly_count(); }

  /// Rows = points, columns = basis functions. Any output pointer may be null.
  void evaluate(const std::vector<Point2>& pts, Matrix* val, Matrix* gx, Matrix* gy, Matrix* lap = nullptr) const {
    const auto P = static_cast<Eigen::Index>(pts.size());
    const int n = node_count(), m = size();
    if (val) val->resize(P, m);
    if (gx) gx->resize(P, m);
    if (gy) gy->resize(P, m);
    if (lap) lap->resize(P, m);
    for (Eigen::Index i = 0; i < P; ++i) {
      const auto& x = pts[static_cast<std::size_t>(i)];
      for (int j = 0; j < m; ++j) {
        const RbfJet jt = j < n ? rbf_jet(kind_, x, centers_[static_cast<std::size_t>(j)]) : monomial_jet(j - n, frame_, x);
        if (val) (*val)(i, j) = jt.value;
        if (gx) (*gx)(i, j) = jt.gradient.x();
        if (gy) (*gy)(i, j) = jt.gradient.y();
        if (lap) (*lap)(i, j) = jt.laplacian;
      }
    }
  }

  Matrix values(const std::vector<Point2>& pts) const {
    Matrix v;
    evaluate(pts, &v, nullptr, nullptr);
    return v;
  }

  /// Polynomial side conditions: row q holds p_q(x_j) over radial columns, zero over poly columns.
  Matrix constraint_rows() const {
    const int n = node_count(), np = poly_count();
    Matrix c = Matrix::Zero(np, size());
    for (int q = 0; q < np; ++q)
      for (int j = 0; j < n; ++j) c(q, j) = monomial_jet(q, frame_, centers_[static_cast<std::size_t>(j)]).value;
    return c;
  }

  /// Particular solutions of every basis function at the points.
  Matrix particular(const std::vector<Point2>& pts) const {
    const int n = node_count(), m = size();
    Matrix out(static_cast<Eigen::Index>(pts.size()), m);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int j = 0; j < m; ++j)
        out(static_cast<Eigen::Index>(i), j) = j < n ? particular_solution(kind_, pts[i], centers_[static_cast<std::size_t>(j)])
                                                    : monomial_particular(j - n, frame_, pts[i]);
    return out;
  }

private:
  BasisKind kind_;
  std::vector<Point2> centers_;
  MonomialFrame frame_;
};

/// 2-norm condition number via singular values; infinity when the smallest is zero.
inline double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

} // namespace limqr
