#pragma once

// Stencils, integration subregions, local collocation rows and the global system.

#include "limqr/geometry.hpp"
#include "limqr/green.hpp"
#include "limqr/linalg.hpp"
#include "limqr/local.hpp"
#include "limqr/problem.hpp"
#include "limqr/quadrature.hpp"
#include "limqr/rbfqr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace limqr {

enum class Method { lrdrm, lim, lim_rbfqr };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::lrdrm: return "lrdrm";
    case Method::lim: return "lim";
    case Method::lim_rbfqr: return "lim-rbfqr";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "lrdrm") return Method::lrdrm;
  if (s == "lim") return Method::lim;
  if (s == "lim-rbfqr") return Method::lim_rbfqr;
  throw InputError("unknown method: " + s);
}

struct Stencil {
  int id = 0;                // collocation (interior) index
  Point2 xi;
  std::vector<int> members;  // global node indices, nearest first; members[0] == id
  int n_interior = 0, n_boundary = 0;
  double nearest_distance = 0.0;  // to the closest other node
  DiskSubregion sub;
};

/// n nearest nodes to every interior node. Within band_width of the boundary the
/// candidates are interior and boundary nodes, elsewhere interior nodes only.
inline std::vector<Stencil> build_stencils(const NodeSet& ns, const Domain& dom, int n,
                                           double band_width = std::numeric_limits<double>::infinity()) {
  const int N = static_cast<int>(ns.interior.size());
  const int total = static_cast<int>(ns.total());
  require(n >= 1, "build_stencils: n must be >= 1");
  require(n <= total, "build_stencils: fewer candidates than the stencil size");
  std::vector<Stencil> out(static_cast<std::size_t>(N));
  std::vector<std::pair<double, int>> cand;
  cand.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < N; ++i) {
    const Point2& xi = ns.interior[static_cast<std::size_t>(i)];
    const bool near = dom.distance_to_boundary(xi) <= band_width;
    cand.clear();
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < total; ++j) {
      const double d2 = (ns.point(static_cast<std::size_t>(j)) - xi).squaredNorm();
      if (j != i) nearest = std::min(nearest, d2);
      if (j < N || near) cand.emplace_back(d2, j);
    }
    if (static_cast<int>(cand.size()) < n) throw InputError("build_stencils: fewer candidates than the stencil size");
    std::partial_sort(cand.begin(), cand.begin() + n, cand.end());
    Stencil& s = out[static_cast<std::size_t>(i)];
    s.id = i;
    s.xi = xi;
    s.nearest_distance = std::sqrt(nearest);
    for (int q = 0; q < n; ++q) {
      const int j = cand[static_cast<std::size_t>(q)].second;
      s.members.push_back(j);
      (j < N ? s.n_interior : s.n_boundary)++;
    }
    if (s.members.front() != i) throw InputError("build_stencils: duplicate node at interior point " + std::to_string(i));
  }
  return out;
}

/// Centered at the collocation point, radius kappa * min(nearest node, distance to the boundary).
inline DiskSubregion choose_subregion(const Stencil& st, const Domain& dom, double kappa = 0.8) {
  require(kappa > 0.0 && kappa < 1.0, "choose_subregion: kappa must be in (0,1)");
  const double r = kappa * std::min(st.nearest_distance, dom.distance_to_boundary(st.xi));
  if (!(r > 0.0)) throw InputError("choose_subregion: collocation point on the boundary");
  return {st.xi, r};
}

struct QuadratureOptions {
  int circle_order = 8;
  int radial_order = 12;
  int angular_order = 6;
};

struct AssemblyOptions {
  Method method = Method::lim_rbfqr;
  BasisKind basis = BasisKind::ga(1.0);
  int stencil_size = 25;
  double band_width = std::numeric_limits<double>::infinity();
  double kappa = 0.8;
  QuadratureOptions quadrature;
  int threads = 1;
  bool diagnostics = false;
};

/// u_i = sum_k coeffs[k] * u_{cols[k]} + rhs over interior unknowns.
struct LocalRow {
  int row = 0;
  std::vector<int> cols;
  std::vector<double> coeffs;
  double rhs = 0.0;
};

struct StencilDiagnostics {
  int stencil_id = 0;
  double cond_A = std::numeric_limits<double>::quiet_NaN();  // direct-basis collocation matrix
  double cond_B = std::numeric_limits<double>::quiet_NaN();  // matrix the method solves
  double radius = 0.0;
  int n_i = 0, n_b = 0;
};

namespace detail {

inline std::vector<StencilPoint> stencil_points(const Stencil& st, const NodeSet& ns) {
  const auto N = ns.interior.size();
  std::vector<StencilPoint> pts;
  pts.reserve(st.members.size());
  for (int j : st.members) {
    StencilPoint sp;
    const auto u = static_cast<std::size_t>(j);
    if (u < N) {
      sp.position = ns.interior[u];
    } else {
      const auto& b = ns.boundary[u - N];
      sp.position = b.position;
      sp.normal = b.normal;
      sp.row = b.bc == BcKind::neumann ? RowType::normal_derivative : RowType::value;
    }
    pts.push_back(sp);
  }
  return pts;
}

/// Steps 1-3 on a built interpolant; returns z and the known constant term.
template <class Basis>
LocalRow finish_row(const Stencil& st, const NodeSet& ns, const ProblemSpec& prob, const LocalInterpolant<Basis>& li,
                    const Vector& h, const Vector& htt, bool drm, double f_volume) {
  const int n = li.basis.node_count();
  const Matrix Ab = build_operator_matrix(li, prob.btilde);
  Vector w = h;
  Vector wt;
  const bool need_step1 = drm || !prob.btilde.is_zero();
  if (need_step1) {
    Eigen::PartialPivLU<Matrix> lut(*li.A_tilde);
    wt = lut.transpose().solve(htt);
    w.noalias() += Ab.transpose() * wt;
  }
  Eigen::PartialPivLU<Matrix> lu(*li.A);
  const Vector z = lu.transpose().solve(w);
  if (!z.allFinite()) throw NumericalError("local row " + std::to_string(st.id) + ": non-finite coefficients");

  LocalRow row;
  row.row = st.id;
  const auto N = static_cast<int>(ns.interior.size());
  double c = f_volume;
  if (drm) {
    for (int k = 0; k < n; ++k) c += wt(k) * prob.rhs(li.points[static_cast<std::size_t>(k)].position);
  }
  for (int k = 0; k < n; ++k) {
    const int j = st.members[static_cast<std::size_t>(k)];
    if (j < N) {
      row.cols.push_back(j);
      row.coeffs.push_back(z(k));
    } else {
      c += z(k) * ns.boundary[static_cast<std::size_t>(j - N)].value;
    }
  }
  row.rhs = c;
  return row;
}

template <class Basis>
LocalRow integral_row(const Stencil& st, const NodeSet& ns, const ProblemSpec& prob, const LocalInterpolant<Basis>& li,
                      bool drm, const QuadratureOptions& q) {
  const auto& sub = st.sub;
  const auto cq = circle_quadrature(sub.center, sub.radius, q.circle_order);
  const auto src = SourceConfig::make(st.xi, sub);
  Vector wc(static_cast<Eigen::Index>(cq.points.size()));
  for (std::size_t k = 0; k < cq.points.size(); ++k)
    wc(static_cast<Eigen::Index>(k)) = cq.weights[k] * dgf_disk_normal(cq.points[k], src, sub);
  Vector h = li.basis.values(cq.points).transpose() * wc;
  Vector htt;
  double fv = 0.0;
  if (drm) {
    const Matrix pc = li.basis.particular(cq.points);
    const Matrix p0 = li.basis.particular({st.xi});
    htt = p0.row(0).transpose() - pc.transpose() * wc;
  } else {
    const auto dq = disk_quadrature(sub.center, sub.radius, q.radial_order, q.angular_order, st.xi);
    Vector wd(static_cast<Eigen::Index>(dq.points.size()));
    for (std::size_t k = 0; k < dq.points.size(); ++k) {
      const double g = dq.weights[k] * dgf_disk(dq.points[k], src, sub);
      wd(static_cast<Eigen::Index>(k)) = g;
      fv += g * prob.rhs(dq.points[k]);
    }
    if (!prob.btilde.is_zero()) htt = li.basis.values(dq.points).transpose() * wd;
  }
  return finish_row(st, ns, prob, li, h, htt, drm, fv);
}

} // namespace detail

inline LocalRow local_row_lrdrm(const Stencil& st, const NodeSet& ns, const ProblemSpec& prob,
                                const LocalInterpolant<DirectBasis>& li, const QuadratureOptions& q = {}) {
  return detail::integral_row(st, ns, prob, li, true, q);
}

template <class Basis>
LocalRow local_row_lim(const Stencil& st, const NodeSet& ns, const ProblemSpec& prob, const LocalInterpolant<Basis>& li,
                       const QuadratureOptions& q = {}) {
  return detail::integral_row(st, ns, prob, li, false, q);
}

/// RBF-QR basis for a stencil: centroid-centered, scaled so the subregion lies in the unit disk.
inline RbfQrBasis stencil_rbfqr_basis(const Stencil& st, const NodeSet& ns, double eps) {
  std::vector<Point2> pos;
  for (int j : st.members) pos.push_back(ns.point(static_cast<std::size_t>(j)));
  Point2 c = Point2::Zero();
  for (const auto& p : pos) c += p;
  c /= static_cast<double>(pos.size());
  RbfQrOptions opt;
  opt.center = c;
  opt.scale = (st.xi - c).norm() + st.sub.radius;
  return RbfQrBasis::build(pos, eps, opt);
}

inline LocalRow local_row_lim_rbfqr(const Stencil& st, const NodeSet& ns, const ProblemSpec& prob, double eps,
                                    const QuadratureOptions& q = {}) {
  auto li = build_local_interpolant(stencil_rbfqr_basis(st, ns, eps), detail::stencil_points(st, ns));
  return local_row_lim(st, ns, prob, li, q);
}

struct GlobalSystem {
  CsrMatrix matrix;
  Vector rhs;
};

/// Row i: u_i - sum_j z_ij u_j = rhs_i.
inline GlobalSystem assemble_global(const std::vector<LocalRow>& rows, const NodeSet& ns) {
  const int N = static_cast<int>(ns.interior.size());
  require(static_cast<int>(rows.size()) == N, "assemble_global: exactly one row per interior node required");
  std::vector<std::vector<std::pair<int, double>>> entries(static_cast<std::size_t>(N));
  std::vector<char> seen(static_cast<std::size_t>(N), 0);
  GlobalSystem g;
  g.rhs.resize(N);
  for (const auto& r : rows) {
    require(r.row >= 0 && r.row < N, "assemble_global: row index out of range");
    require(!seen[static_cast<std::size_t>(r.row)], "assemble_global: duplicate row");
    seen[static_cast<std::size_t>(r.row)] = 1;
    auto& e = entries[static_cast<std::size_t>(r.row)];
    e.emplace_back(r.row, 1.0);
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      require(r.cols[k] >= 0 && r.cols[k] < N, "assemble_global: column index out of range");
      e.emplace_back(r.cols[k], -r.coeffs[k]);
    }
    g.rhs(r.row) = r.rhs;
  }
  g.matrix = CsrMatrix::from_rows(N, std::move(entries));
  return g;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers; rethrows the first failure.
template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct AssembledProblem {
  std::vector<Stencil> stencils;
  std::vector<LocalRow> rows;
  std::vector<StencilDiagnostics> diagnostics;
  GlobalSystem system;
};

/// Stencils, subregions and one local row per interior node, merged into the global system.
inline AssembledProblem assemble(const NodeSet& ns, const ProblemSpec& prob, const AssemblyOptions& opt) {
  if (opt.method == Method::lim_rbfqr)
    require(opt.basis.kind == RbfKind::ga, "lim-rbfqr requires the Gaussian basis");
  AssembledProblem out;
  out.stencils = build_stencils(ns, prob.domain, opt.stencil_size, opt.band_width);
  for (auto& s : out.stencils) s.sub = choose_subregion(s, prob.domain, opt.kappa);
  const int N = static_cast<int>(out.stencils.size());
  out.rows.resize(static_cast<std::size_t>(N));
  if (opt.diagnostics) out.diagnostics.resize(static_cast<std::size_t>(N));
  parallel_for(N, opt.threads, [&](int i) {
    const Stencil& st = out.stencils[static_cast<std::size_t>(i)];
    const auto pts = detail::stencil_points(st, ns);
    StencilDiagnostics dg;
    dg.stencil_id = i;
    dg.radius = st.sub.radius;
    dg.n_i = st.n_interior;
    dg.n_b = st.n_boundary;
    try {
      if (opt.method == Method::lim_rbfqr) {
        auto li = build_local_interpolant(stencil_rbfqr_basis(st, ns, opt.basis.epsilon), pts);
        out.rows[static_cast<std::size_t>(i)] = local_row_lim(st, ns, prob, li, opt.quadrature);
        if (opt.diagnostics) {
          dg.cond_B = condition_number(*li.A);
          dg.cond_A = condition_number(*build_interpolation_matrix(opt.basis, pts).A);
        }
      } else {
        auto li = build_interpolation_matrix(opt.basis, pts);
        out.rows[static_cast<std::size_t>(i)] = opt.method == Method::lrdrm
                                                    ? local_row_lrdrm(st, ns, prob, li, opt.quadrature)
                                                    : local_row_lim(st, ns, prob, li, opt.quadrature);
        if (opt.diagnostics) dg.cond_A = dg.cond_B = condition_number(*li.A);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (stencil " + std::to_string(i) + ")");
    }
    if (opt.diagnostics) out.diagnostics[static_cast<std::size_t>(i)] = dg;
  });
  out.system = assemble_global(out.rows, ns);
  return out;
}

} // namespace limqr
