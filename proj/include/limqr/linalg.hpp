#pragma once

// Dense local solves and a restarted GMRES for the global sparse system.

#include "limqr/types.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace limqr {

struct DenseSolveResult {
  Matrix x;
  double relative_residual = 0.0;
};

/// LU with partial pivoting; throws on an exactly zero pivot.
inline DenseSolveResult dense_solve(const Matrix& a, const Matrix& b) {
  require(a.rows() == a.cols(), "dense_solve: matrix must be square");
  require(a.rows() == b.rows(), "dense_solve: dimension mismatch");
  require(a.allFinite() && b.allFinite(), "dense_solve: non-finite entries");
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& U = lu.matrixLU();
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    if (U(i, i) == 0.0) throw NumericalError("dense_solve: singular matrix (zero pivot)");
  DenseSolveResult r;
  r.x = lu.solve(b);
  const double bn = b.norm();
  r.relative_residual = bn > 0.0 ? (a * r.x - b).norm() / bn : (a * r.x).norm();
  return r;
}

inline Vector dense_solve(const Matrix& a, const Vector& b) { return dense_solve(a, Matrix(b)).x.col(0); }

/// Compressed sparse row matrix.
struct CsrMatrix {
  int rows = 0, cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(values.size()); }

  Vector multiply(const Vector& x) const {
    Vector y(rows);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        s += values[static_cast<std::size_t>(k)] * x(col_idx[static_cast<std::size_t>(k)]);
      y(i) = s;
    }
    return y;
  }

  double diagonal(int i) const {
    for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
      if (col_idx[static_cast<std::size_t>(k)] == i) return values[static_cast<std::size_t>(k)];
    return 0.0;
  }

  Matrix to_dense() const {
    Matrix d = Matrix::Zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        d(i, col_idx[static_cast<std::size_t>(k)]) += values[static_cast<std::size_t>(k)];
    return d;
  }

  /// Rows given as (column, value) lists; columns sorted and duplicates summed.
  static CsrMatrix from_rows(int ncols, std::vector<std::vector<std::pair<int, double>>> rows_in) {
    CsrMatrix m;
    m.rows = static_cast<int>(rows_in.size());
    m.cols = ncols;
    for (auto& row : rows_in) {
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      int last = -1;
      for (const auto& [c, v] : row) {
        require(c >= 0 && c < ncols, "CsrMatrix: column index out of range");
        if (c == last) {
          m.values.back() += v;
        } else {
          m.col_idx.push_back(c);
          m.values.push_back(v);
          last = c;
        }
      }
      m.row_ptr.push_back(static_cast<int>(m.values.size()));
    }
    return m;
  }
};

enum class Preconditioner { none, jacobi, ilu0 };

inline Preconditioner parse_preconditioner(const std::string& s) {
  if (s == "none") return Preconditioner::none;
  if (s == "jacobi") return Preconditioner::jacobi;
  if (s == "ilu0") return Preconditioner::ilu0;
  throw InputError("unknown preconditioner: " + s);
}

/// Incomplete LU with the sparsity pattern of the matrix (unit lower factor).
class Ilu0 {
public:
  explicit Ilu0(const CsrMatrix& a) : a_(a), diag_(static_cast<std::size_t>(a.rows), -1) {
    auto& v = a_.values;
    const auto& rp = a_.row_ptr;
    const auto& ci = a_.col_idx;
    for (int i = 0; i < a_.rows; ++i)
      for (int k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k)
        if (ci[static_cast<std::size_t>(k)] == i) diag_[static_cast<std::size_t>(i)] = k;
    for (int i = 0; i < a_.rows; ++i)
      if (diag_[static_cast<std::size_t>(i)] < 0) throw NumericalError("ILU(0): missing diagonal entry");
    std::vector<int> pos(static_cast<std::size_t>(a_.cols), -1);
    for (int i = 0; i < a_.rows; ++i) {
      const int b = rp[static_cast<std::size_t>(i)], e = rp[static_cast<std::size_t>(i) + 1];
      for (int k = b; k < e; ++k) pos[static_cast<std::size_t>(ci[static_cast<std::size_t>(k)])] = k;
      for (int k = b; k < e; ++k) {
        const int j = ci[static_cast<std::size_t>(k)];
        if (j >= i) continue;
        const double piv = v[static_cast<std::size_t>(diag_[static_cast<std::size_t>(j)])];
        if (piv == 0.0) throw NumericalError("ILU(0): zero pivot");
        const double lij = v[static_cast<std::size_t>(k)] / piv;
        v[static_cast<std::size_t>(k)] = lij;
        for (int q = diag_[static_cast<std::size_t>(j)] + 1; q < rp[static_cast<std::size_t>(j) + 1]; ++q) {
          const int p = pos[static_cast<std::size_t>(ci[static_cast<std::size_t>(q)])];
          if (p >= 0) v[static_cast<std::size_t>(p)] -= lij * v[static_cast<std::size_t>(q)];
        }
      }
      for (int k = b; k < e; ++k) pos[static_cast<std::size_t>(ci[static_cast<std::size_t>(k)])] = -1;
    }
  }

  Vector solve(const Vector& b) const {
    const auto& v = a_.values;
    const auto& rp = a_.row_ptr;
    const auto& ci = a_.col_idx;
    Vector x = b;
    for (int i = 0; i < a_.rows; ++i)
      for (int k = rp[static_cast<std::size_t>(i)]; k < diag_[static_cast<std::size_t>(i)]; ++k)
        x(i) -= v[static_cast<std::size_t>(k)] * x(ci[static_cast<std::size_t>(k)]);
    for (int i = a_.rows - 1; i >= 0; --i) {
      for (int k = diag_[static_cast<std::size_t>(i)] + 1; k < rp[static_cast<std::size_t>(i) + 1]; ++k)
        x(i) -= v[static_cast<std::size_t>(k)] * x(ci[static_cast<std::size_t>(k)]);
      x(i) /= v[static_cast<std::size_t>(diag_[static_cast<std::size_t>(i)])];
    }
    return x;
  }

private:
  CsrMatrix a_;
  std::vector<int> diag_;
};

enum class SolveStatus { converged, stagnated, max_iterations };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::stagnated: return "stagnated";
    case SolveStatus::max_iterations: return "max_outer_exhausted";
  }
  return "?";
}

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<double> residual_history;  // relative residual after each inner iteration
  int restart_used = 0;
};

struct GmresOptions {
  int restart = 30;
  double tol = 1e-10;
  int max_outer = 200;
  Preconditioner preconditioner = Preconditioner::jacobi;
  double stagnation_factor = 1e-3;  // minimum relative reduction per outer cycle
};

/// Right-preconditioned restarted GMRES with Givens rotations.
inline Vector gmres_restarted(const CsrMatrix& a, const Vector& b, SolveReport& report,
                              const GmresOptions& opt = {}, const Vector* x0 = nullptr) {
  require(a.rows == a.cols, "gmres: matrix must be square");
  require(b.size() == a.rows, "gmres: rhs size mismatch");
  require(opt.restart >= 1 && opt.max_outer >= 1 && opt.tol > 0.0, "gmres: invalid options");
  const int n = a.rows;
  report = SolveReport{};
  report.restart_used = opt.restart;
  Vector x = x0 ? *x0 : Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    report.converged = true;
    report.status = SolveStatus::converged;
    return x;
  }

  Vector dinv;
  std::unique_ptr<Ilu0> ilu;
  if (opt.preconditioner == Preconditioner::jacobi) {
    dinv.resize(n);
    for (int i = 0; i < n; ++i) {
      const double d = a.diagonal(i);
      dinv(i) = d != 0.0 ? 1.0 / d : 1.0;
    }
  } else if (opt.preconditioner == Preconditioner::ilu0) {
    ilu = std::make_unique<Ilu0>(a);
  }
  auto precond = [&](const Vector& v) -> Vector {
    switch (opt.preconditioner) {
      case Preconditioner::jacobi: return dinv.cwiseProduct(v);
      case Preconditioner::ilu0: return ilu->solve(v);
      case Preconditioner::none: break;
    }
    return v;
  };

  const int m = std::min(opt.restart, n);
  Matrix V(n, m + 1);
  Matrix H = Matrix::Zero(m + 1, m);
  Vector cs(m), sn(m), g(m + 1);
  Vector r = b - a.multiply(x);
  double rel = r.norm() / bnorm;
  report.relative_residual = rel;
  if (rel <= opt.tol) {
    report.converged = true;
    report.status = SolveStatus::converged;
    return x;
  }
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    const double cycle_start = rel;
    const double beta = r.norm();
    V.col(0) = r / beta;
    H.setZero();
    g.setZero();
    g(0) = beta;
    int j = 0;
    for (; j < m; ++j) {
      Vector w = a.multiply(precond(V.col(j)));
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        H(i, j) = w.dot(V.col(i));
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double den = std::hypot(H(j, j), H(j + 1, j));
      cs(j) = den > 0.0 ? H(j, j) / den : 1.0;
      sn(j) = den > 0.0 ? H(j + 1, j) / den : 0.0;
      H(j, j) = den;
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      ++report.iterations;
      rel = std::abs(g(j + 1)) / bnorm;
      report.residual_history.push_back(rel);
      if (rel <= opt.tol || den == 0.0) {
        ++j;
        break;
      }
    }
    Vector y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += precond(V.leftCols(j) * y);
    r = b - a.multiply(x);
    rel = r.norm() / bnorm;
    report.relative_residual = rel;
    if (rel <= opt.tol) {
      report.converged = true;
      report.status = SolveStatus::converged;
      return x;
    }
    if (rel > (1.0 - opt.stagnation_factor) * cycle_start) {
      report.status = SolveStatus::stagnated;
      return x;
    }
  }
  report.status = SolveStatus::max_iterations;
  return x;
}

/// GMRES with the configured restart; on failure the restart length is
/// multiplied by 4 (up to the system size or max_restart) and the solve repeated.
inline Vector gmres_escalating(const CsrMatrix& a, const Vector& b, SolveReport& report, const GmresOptions& opt = {},
                               int max_restart = 1000) {
  GmresOptions o = opt;
  int total = 0;
  const int limit = std::min(a.rows, max_restart);
  while (true) {
    Vector x = gmres_restarted(a, b, report, o);
    total += report.iterations;
    if (report.converged || o.restart >= limit) {
      report.iterations = total;
      return x;
    }
    o.restart = std::min(limit, 4 * o.restart);
  }
}

} // namespace limqr
