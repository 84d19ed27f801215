#pragma once

// RBF-QR: a well-conditioned basis for the Gaussian RBF space near the flat limit.

#include "limqr/types.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace limqr {

enum class Trig { cos, sin };

struct ExpansionIndex {
  int k = 0;
  int l = 0;
  Trig trig = Trig::cos;
  int p() const { return k % 2; }
  int m() const { return 2 * l + p(); }  // angular frequency

  bool operator==(const ExpansionIndex&) const = default;
};

/// All indices through degree k_max, degree-major: C00, C10, S10, C20, C21, S21, ...
inline std::vector<ExpansionIndex> expansion_indices(int k_max) {
  require(k_max >= 0, "expansion_indices: k_max must be >= 0");
  std::vector<ExpansionIndex> out;
  out.reserve(static_cast<std::size_t>((k_max + 1) * (k_max + 2) / 2));
  for (int k = 0; k <= k_max; ++k) {
    for (int l = 0; l <= k / 2; ++l) {
      out.push_back({k, l, Trig::cos});
      if (2 * l + k % 2 != 0) out.push_back({k, l, Trig::sin});
    }
  }
  return out;
}

/// log d_{k,l}(eps)
inline double log_scale_factor(const ExpansionIndex& idx, double eps) {
  require(eps > 0.0, "scale factor requires eps > 0");
  const int k = idx.k, l = idx.l, p = idx.p();
  return 2.0 * k * std::log(eps) - (k - 2 * l - 1) * std::log(2.0) - std::lgamma((k + 2 * l + p) / 2 + 1.0) -
         std::lgamma((k - 2 * l - p) / 2 + 1.0);
}

inline double scale_factor(const ExpansionIndex& idx, double eps) { return std::exp(log_scale_factor(idx, eps)); }

inline double hypergeometric_1f2(double a, double b1, double b2, double z) {
  auto bad = [](double b) { return b <= 0.0 && b == std::floor(b); };
  require(!bad(b1) && !bad(b2), "hypergeometric_1f2: b1, b2 must not be nonpositive integers");
  if (z == 0.0) return 1.0;
  double term = 1.0, sum = 1.0;
  for (int t = 0; t < 200; ++t) {
    term *= (a + t) * z / ((b1 + t) * (b2 + t) * (t + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw NumericalError("hypergeometric_1f2: series not converged after 200 terms, last term " +
                       std::to_string(term));
}

/// c_{k,l}(x_j) or s_{k,l}(x_j) for a node at polar (r, theta) in unit-disk coordinates.
inline double expansion_coefficient(const ExpansionIndex& idx, double r, double theta, double eps) {
  const int k = idx.k, l = idx.l, p = idx.p(), m = idx.m();
  const double b = m == 0 ? 1.0 : 2.0;
  const double t = k - 2 * l == 0 ? 0.5 : 1.0;
  const double e2 = eps * eps;
  const double ang = idx.trig == Trig::cos ? std::cos(m * theta) : std::sin(m * theta);
  const double alpha = (k - 2 * l + p + 1) / 2.0;
  const double beta1 = k - 2 * l + 1.0;
  const double beta2 = (k + 2 * l + p + 2) / 2.0;
  return b * t * std::exp(-e2 * r * r) * std::pow(r, k) * ang * hypergeometric_1f2(alpha, beta1, beta2, e2 * e2 * r * r);
}

/// Chebyshev T_0..T_kmax and their derivatives at r.
inline void chebyshev_table(int kmax, double r, std::vector<double>& T, std::vector<double>& dT) {
  T.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  dT.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  std::vector<double> U(static_cast<std::size_t>(kmax + 1), 0.0);
  T[0] = 1.0;
  U[0] = 1.0;
  if (kmax >= 1) {
    T[1] = r;
    U[1] = 2.0 * r;
  }
  for (int n = 2; n <= kmax; ++n) {
    const auto i = static_cast<std::size_t>(n);
    T[i] = 2.0 * r * T[i - 1] - T[i - 2];
    U[i] = 2.0 * r * U[i - 1] - U[i - 2];
  }
  for (int n = 1; n <= kmax; ++n) dT[static_cast<std::size_t>(n)] = n * U[static_cast<std::size_t>(n - 1)];
}

inline double chebyshev_t(int n, double r) {
  require(n >= 0, "chebyshev_t: n must be >= 0");
  std::vector<double> T, dT;
  chebyshev_table(n, r, T, dT);
  return T.back();
}

struct ExpansionJet {
  double value = 0.0;
  Point2 gradient = Point2::Zero();  // in the unit-disk coordinates
};

namespace detail {

/// Radial part g(r) = e^{-eps^2 r^2} r^{2l} T_{k-2l}(r), its derivative and g/r (limits at r = 0).
struct RadialPart {
  double g, dg, g_over_r;
};

inline RadialPart radial_part(int k, int l, double r, double eps, const std::vector<double>& T,
                              const std::vector<double>& dT, const std::vector<double>& rpow) {
  const double e2 = eps * eps;
  const auto j = static_cast<std::size_t>(k - 2 * l);
  const double ex = std::exp(-e2 * r * r);
  const double r2l = rpow[static_cast<std::size_t>(2 * l)];
  RadialPart rp{};
  rp.g = ex * r2l * T[j];
  if (r > 0.0) {
    const double r2lm1 = l > 0 ? rpow[static_cast<std::size_t>(2 * l - 1)] : 0.0;
    rp.dg = ex * (-2.0 * e2 * r * r2l * T[j] + 2.0 * l * r2lm1 * T[j] + r2l * dT[j]);
    rp.g_over_r = rp.g / r;
  } else if (l == 0 && k % 2 == 1) {
    const double c1 = k * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
    rp.dg = c1;
    rp.g_over_r = c1;
  }
  return rp;
}

inline ExpansionJet combine(const ExpansionIndex& idx, const RadialPart& rp, double theta) {
  const int m = idx.m();
  double a, da;
  if (idx.trig == Trig::cos) {
    a = std::cos(m * theta);
    da = -m * std::sin(m * theta);
  } else {
    a = std::sin(m * theta);
    da = m * std::cos(m * theta);
  }
  const double c = std::cos(theta), s = std::sin(theta);
  ExpansionJet j;
  j.value = rp.g * a;
  j.gradient = Point2(rp.dg * a * c - rp.g_over_r * da * s, rp.dg * a * s + rp.g_over_r * da * c);
  return j;
}

} // namespace detail

/// C_{k,l} or S_{k,l} at polar (r, theta) with its Cartesian gradient, unit-disk coordinates.
inline ExpansionJet expansion_function_jet(const ExpansionIndex& idx, double r, double theta, double eps) {
  require(r >= 0.0, "expansion_function_jet: r must be >= 0");
  if (r == 0.0) theta = 0.0;
  std::vector<double> T, dT, rpow(static_cast<std::size_t>(idx.k + 1));
  chebyshev_table(idx.k, r, T, dT);
  rpow[0] = 1.0;
  for (std::size_t i = 1; i < rpow.size(); ++i) rpow[i] = rpow[i - 1] * r;
  return detail::combine(idx, detail::radial_part(idx.k, idx.l, r, eps, T, dT, rpow), theta);
}

/// Expansion coefficients at the nodes (rows) for each index (columns), unit-disk coordinates.
inline Matrix expansion_block(const std::vector<Point2>& nodes, const std::vector<ExpansionIndex>& idx, const Point2& c,
                              double s, double eps) {
  Matrix C(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(idx.size()));
  for (Eigen::Index j = 0; j < C.rows(); ++j) {
    const Point2 u = (nodes[static_cast<std::size_t>(j)] - c) / s;
    const double r = u.norm();
    const double th = r > 0.0 ? std::atan2(u.y(), u.x()) : 0.0;
    for (Eigen::Index q = 0; q < C.cols(); ++q) C(j, q) = expansion_coefficient(idx[static_cast<std::size_t>(q)], r, th, eps);
  }
  return C;
}

/// First n columns, in index order, that are independent of the columns already taken.
inline std::vector<int> leading_columns(const Matrix& C, int n, double tol = 1e-10) {
  std::vector<int> out;
  Matrix Q(C.rows(), n);
  for (Eigen::Index q = 0; q < C.cols() && static_cast<int>(out.size()) < n; ++q) {
    const double norm0 = C.col(q).norm();
    if (!(norm0 > 0.0)) continue;
    Vector v = C.col(q);
    const auto r = static_cast<Eigen::Index>(out.size());
    for (int pass = 0; pass < 2; ++pass) v -= Q.leftCols(r) * (Q.leftCols(r).transpose() * v);
    const double vn = v.norm();
    if (vn <= tol * norm0) continue;
    Q.col(r) = v / vn;
    out.push_back(static_cast<int>(q));
  }
  return out;
}

struct RbfQrOptions {
  std::optional<Point2> center;  // default: centroid of the nodes
  std::optional<double> scale;   // default: largest node distance from the center
  int k_cap = 40;
  double truncation_tol = 10.0 * DBL_EPSILON;
};

/// psi_k = V_k + sum_j Rtilde_{k,j} V_{n+j}, k < n, in unit-disk coordinates.
class RbfQrBasis {
public:
  static RbfQrBasis build(const std::vector<Point2>& nodes, double eps, const RbfQrOptions& opt = {}) {
    require(!nodes.empty(), "RBF-QR: empty stencil");
    require(eps > 0.0 && std::isfinite(eps), "RBF-QR: eps must be positive");
    RbfQrBasis b;
    b.eps_ = eps;
    b.nodes_ = nodes;
    const auto n = static_cast<int>(nodes.size());
    Point2 c = Point2::Zero();
    if (opt.center) {
      c = *opt.center;
    } else {
      for (const auto& p : nodes) c += p;
      c /= n;
    }
    double s = 0.0;
    for (const auto& p : nodes) s = std::max(s, (p - c).norm());
    if (opt.scale) {
      require(*opt.scale > 0.0, "RBF-QR: scale must be positive");
      s = std::max(s, *opt.scale);
    }
    if (s == 0.0) s = 1.0;
    b.center_ = c;
    b.scale_ = s;
    b.eps_scaled_ = eps * s;

    int k0 = 0;
    while ((k0 + 1) * (k0 + 2) / 2 < n) ++k0;
    require(k0 <= opt.k_cap, "RBF-QR: stencil too large for the degree cap");
    const double log_tol = std::log(opt.truncation_tol);
    auto truncation_degree = [&](int from, double log_dmin) {
      int k = from;
      while (k < opt.k_cap) {
        double log_dnext = -std::numeric_limits<double>::infinity();
        for (int l = 0; l <= (k + 1) / 2; ++l) log_dnext = std::max(log_dnext, log_scale_factor({k + 1, l, Trig::cos}, b.eps_scaled_));
        if (log_dnext - log_dmin <= log_tol) break;
        ++k;
      }
      return k;
    };
    std::vector<ExpansionIndex> all;
    Matrix C;
    std::vector<int> lead;
    double log_dmin = std::numeric_limits<double>::infinity();
    const auto first = expansion_indices(k0);
    for (int i = 0; i < n; ++i) log_dmin = std::min(log_dmin, log_scale_factor(first[static_cast<std::size_t>(i)], b.eps_scaled_));
    int kmax = truncation_degree(k0, log_dmin);
    for (;;) {
      all = expansion_indices(kmax);
      C = expansion_block(nodes, all, c, s, b.eps_scaled_);
      lead = leading_columns(C, n);
      if (static_cast<int>(lead.size()) < n) {
        if (kmax == opt.k_cap) throw NumericalError("RBF-QR: rank-deficient expansion matrix (coincident nodes?)");
        ++kmax;
        continue;
      }
      double dmin = std::numeric_limits<double>::infinity();
      for (int q : lead) dmin = std::min(dmin, log_scale_factor(all[static_cast<std::size_t>(q)], b.eps_scaled_));
      const int need = truncation_degree(kmax, dmin);
      if (need == kmax) break;
      kmax = need;
    }
    const auto m = static_cast<int>(all.size());
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    for (int q : lead) used[static_cast<std::size_t>(q)] = 1;
    std::vector<int> order = lead;
    for (int q = 0; q < m; ++q)
      if (!used[static_cast<std::size_t>(q)]) order.push_back(q);
    b.kmax_ = kmax;
    b.indices_.clear();
    Matrix Cp(n, m);
    for (int q = 0; q < m; ++q) {
      b.indices_.push_back(all[static_cast<std::size_t>(order[static_cast<std::size_t>(q)])]);
      Cp.col(q) = C.col(order[static_cast<std::size_t>(q)]);
    }
    Eigen::HouseholderQR<Matrix> qr(Cp);
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    const auto R1 = R.leftCols(n).triangularView<Eigen::Upper>();
    double pmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) pmin = std::min(pmin, std::abs(R(i, i)));
    b.min_pivot_ = pmin;
    if (!(pmin > 0.0) || !std::isfinite(pmin))
      throw NumericalError("RBF-QR: rank-deficient expansion matrix (coincident nodes?)");
    Matrix Rt = R1.solve(R.rightCols(m - n));
    std::vector<double> logd(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q) logd[static_cast<std::size_t>(q)] = log_scale_factor(b.indices_[static_cast<std::size_t>(q)], b.eps_scaled_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m - n; ++j)
        Rt(i, j) *= std::exp(logd[static_cast<std::size_t>(n + j)] - logd[static_cast<std::size_t>(i)]);
    if (!Rt.allFinite()) throw NumericalError("RBF-QR: non-finite correction matrix");
    b.rtilde_ = std::move(Rt);
    return b;
  }

  double epsilon() const { return eps_; }
  double scaled_epsilon() const { return eps_scaled_; }
  const Point2& center() const { return center_; }
  double scale() const { return scale_; }
  int k_max() const { return kmax_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int size() const { return node_count(); }
  int poly_count() const { return 0; }
  const std::vector<Point2>& nodes() const { return nodes_; }
  const std::vector<ExpansionIndex>& indices() const { return indices_; }
  const Matrix& rtilde() const { return rtilde_; }
  double min_pivot() const { return min_pivot_; }

  /// Expansion functions V (rows = points, columns = indices), gradients in original coordinates.
  void expansion_matrix(const std::vector<Point2>& pts, Matrix* val, Matrix* gx, Matrix* gy) const {
    const auto P = static_cast<Eigen::Index>(pts.size());
    const auto m = static_cast<Eigen::Index>(indices_.size());
    if (val) val->resize(P, m);
    if (gx) gx->resize(P, m);
    if (gy) gy->resize(P, m);
    std::vector<double> T, dT, rpow(static_cast<std::size_t>(kmax_ + 1));
    for (Eigen::Index i = 0; i < P; ++i) {
      const Point2 u = (pts[static_cast<std::size_t>(i)] - center_) / scale_;
      const double r = u.norm();
      const double th = r > 0.0 ? std::atan2(u.y(), u.x()) : 0.0;
      chebyshev_table(kmax_, r, T, dT);
      rpow[0] = 1.0;
      for (std::size_t q = 1; q < rpow.size(); ++q) rpow[q] = rpow[q - 1] * r;
      for (Eigen::Index q = 0; q < m; ++q) {
        const auto& idx = indices_[static_cast<std::size_t>(q)];
        if (val && !gx && !gy) {
          const auto rp = detail::radial_part(idx.k, idx.l, r, eps_scaled_, T, dT, rpow);
          (*val)(i, q) = rp.g * (idx.trig == Trig::cos ? std::cos(idx.m() * th) : std::sin(idx.m() * th));
          continue;
        }
        const auto jt = detail::combine(idx, detail::radial_part(idx.k, idx.l, r, eps_scaled_, T, dT, rpow), th);
        if (val) (*val)(i, q) = jt.value;
        if (gx) (*gx)(i, q) = jt.gradient.x() / scale_;
        if (gy) (*gy)(i, q) = jt.gradient.y() / scale_;
      }
    }
  }

  /// psi values and gradients at points; rows = points, columns = psi_k.
  void evaluate(const std::vector<Point2>& pts, Matrix* val, Matrix* gx, Matrix* gy) const {
    Matrix V, X, Y;
    expansion_matrix(pts, val ? &V : nullptr, gx ? &X : nullptr, gy ? &Y : nullptr);
    if (val) *val = reduce(V);
    if (gx) *gx = reduce(X);
    if (gy) *gy = reduce(Y);
  }

  Matrix values(const std::vector<Point2>& pts) const {
    Matrix v;
    evaluate(pts, &v, nullptr, nullptr);
    return v;
  }

  Matrix constraint_rows() const { return Matrix(0, size()); }

  Matrix particular(const std::vector<Point2>&) const {
    throw InputError("RBF-QR basis has no particular solutions");
  }

  /// Column map from expansion functions to psi: W -> W.leftCols(n) + W.rightCols(m-n) Rtilde^T.
  Matrix reduce(const Matrix& W) const {
    const auto n = static_cast<Eigen::Index>(node_count());
    Matrix out = W.leftCols(n);
    if (W.cols() > n) out.noalias() += W.rightCols(W.cols() - n) * rtilde_.transpose();
    return out;
  }

private:
  double eps_ = 1.0, eps_scaled_ = 1.0, scale_ = 1.0, min_pivot_ = 0.0;
  Point2 center_ = Point2::Zero();
  int kmax_ = 0;
  std::vector<Point2> nodes_;
  std::vector<ExpansionIndex> indices_;
  Matrix rtilde_;
};

inline Matrix evaluate_psi(const RbfQrBasis& basis, const std::vector<Point2>& pts) { return basis.values(pts); }

enum class BoundaryOp { value, normal_derivative };

/// Rows B psi_k(x_i) for a boundary operator, one row per point.
inline Matrix apply_boundary_operator_psi(const RbfQrBasis& basis, const std::vector<Point2>& pts,
                                          const std::vector<Point2>& normals, BoundaryOp op) {
  if (op == BoundaryOp::value) return basis.values(pts);
  require(normals.size() == pts.size(), "apply_boundary_operator_psi: one normal per point");
  for (const auto& p : pts)
    require((p - basis.center()).norm() > 0.0, "apply_boundary_operator_psi: derivative row at the expansion center");
  Matrix gx, gy;
  basis.evaluate(pts, nullptr, &gx, &gy);
  for (Eigen::Index i = 0; i < gx.rows(); ++i) {
    const auto& nv = normals[static_cast<std::size_t>(i)];
    gx.row(i) = nv.x() * gx.row(i) + nv.y() * gy.row(i);
  }
  return gx;
}

} // namespace limqr
