#pragma once

// Local interpolation systems on a stencil, for any basis exposing
// evaluate / constraint_rows / size / node_count.

#include "limqr/linear_operator.hpp"
#include "limqr/rbf.hpp"

#include <memory>
#include <vector>

namespace limqr {

enum class RowType { value, normal_derivative };

struct StencilPoint {
  Point2 position;
  RowType row = RowType::value;
  Point2 normal = Point2::Zero();
};

template <class Basis>
struct LocalInterpolant {
  Basis basis;
  std::vector<StencilPoint> points;
  std::shared_ptr<const Matrix> A;        // collocation matrix, derivative rows at Neumann points
  std::shared_ptr<const Matrix> A_tilde;  // value rows only; same object as A when no derivative rows
  Matrix values, grad_x, grad_y;          // basis at the stencil points

  bool has_derivative_rows() const { return A.get() != A_tilde.get(); }

  /// Coefficients for data d (one entry per stencil point); side-condition entries are zero.
  Vector coefficients(const Vector& d) const {
    require(d.size() == static_cast<Eigen::Index>(points.size()), "interpolant: data size mismatch");
    Vector rhs = Vector::Zero(A->rows());
    rhs.head(d.size()) = d;
    return dense_coefficients(rhs);
  }

  Vector dense_coefficients(const Vector& rhs) const { return Eigen::PartialPivLU<Matrix>(*A).solve(rhs); }
};

template <class Basis>
LocalInterpolant<Basis> build_local_interpolant(Basis basis, const std::vector<StencilPoint>& pts) {
  require(static_cast<int>(pts.size()) == basis.node_count(), "interpolant: one stencil point per basis center");
  std::vector<Point2> pos;
  pos.reserve(pts.size());
  for (const auto& s : pts) pos.push_back(s.position);
  LocalInterpolant<Basis> li{std::move(basis), pts, nullptr, nullptr, {}, {}, {}};
  li.basis.evaluate(pos, &li.values, &li.grad_x, &li.grad_y);
  const int n = li.basis.node_count(), m = li.basis.size();
  const Matrix cons = li.basis.constraint_rows();
  auto tilde = std::make_shared<Matrix>(m, m);
  tilde->topRows(n) = li.values;
  tilde->bottomRows(m - n) = cons;
  bool deriv = false;
  for (const auto& s : pts) deriv = deriv || s.row == RowType::normal_derivative;
  li.A_tilde = tilde;
  if (!deriv) {
    li.A = tilde;
  } else {
    auto a = std::make_shared<Matrix>(*tilde);
    for (int k = 0; k < n; ++k) {
      const auto& s = pts[static_cast<std::size_t>(k)];
      if (s.row == RowType::normal_derivative)
        a->row(k) = s.normal.x() * li.grad_x.row(k) + s.normal.y() * li.grad_y.row(k);
    }
    li.A = a;
  }
  return li;
}

inline LocalInterpolant<DirectBasis> build_interpolation_matrix(const BasisKind& kind,
                                                               const std::vector<StencilPoint>& pts) {
  std::vector<Point2> pos;
  for (const auto& s : pts) pos.push_back(s.position);
  return build_local_interpolant(DirectBasis(kind, pos), pts);
}

/// (A_b)_{kj} = b(phi_j(x_k), grad phi_j(x_k)) over stencil rows; side-condition rows are zero.
template <class Basis>
Matrix build_operator_matrix(const LocalInterpolant<Basis>& li, const LinearOperator& op) {
  const int n = li.basis.node_count(), m = li.basis.size();
  Matrix ab = Matrix::Zero(m, m);
  if (op.is_zero()) return ab;
  for (int k = 0; k < n; ++k) {
    const Point2& x = li.points[static_cast<std::size_t>(k)].position;
    const double a0 = op.a0 ? op.a0(x) : 0.0;
    const double a1 = op.a1 ? op.a1(x) : 0.0;
    const double a2 = op.a2 ? op.a2(x) : 0.0;
    ab.row(k) = a0 * li.values.row(k) + a1 * li.grad_x.row(k) + a2 * li.grad_y.row(k);
  }
  return ab;
}

} // namespace limqr
