#pragma once

#include "limqr/types.hpp"

#include <functional>

namespace limqr {

/// b(u, grad u) = a0(x) u + a1(x) u_x + a2(x) u_y. Empty coefficients are zero.
struct LinearOperator {
  std::function<double(const Point2&)> a0, a1, a2;

  bool is_zero() const { return !a0 && !a1 && !a2; }

  double apply(const Point2& x, double u, double ux, double uy) const {
    double s = 0.0;
    if (a0) s += a0(x) * u;
    if (a1) s += a1(x) * ux;
    if (a2) s += a2(x) * uy;
    return s;
  }

  static LinearOperator identity() {
    LinearOperator op;
    op.a0 = [](const Point2&) { return 1.0; };
    return op;
  }
};

} // namespace limqr
