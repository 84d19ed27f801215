#pragma once

// Error norms, node-set construction per distribution and the run / sweep /
// convergence / isoline drivers.

#include "limqr/assembly.hpp"
#include "limqr/geometry.hpp"
#include "limqr/problem.hpp"
#include "limqr/rbfqr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace limqr {

struct ErrorReport {
  double linf = 0.0;
  double l2_percent = 0.0;  // NaN when the exact vector is zero
  double rms = 0.0;
  bool l2_defined = true;
};

inline ErrorReport error_norms(const Vector& exact, const Vector& approx) {
  require(exact.size() == approx.size() && exact.size() >= 1, "error_norms: vectors must have equal length >= 1");
  ErrorReport e;
  const Vector d = exact - approx;
  e.linf = d.cwiseAbs().maxCoeff();
  e.rms = std::sqrt(d.squaredNorm() / static_cast<double>(d.size()));
  const double en = exact.norm();
  if (en > 0.0) {
    e.l2_percent = 100.0 * d.norm() / en;
  } else {
    e.l2_defined = false;
    e.l2_percent = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

enum class Distribution { uniform, halton, quasi_uniform, repel };

inline std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::uniform: return "uniform";
    case Distribution::halton: return "halton";
    case Distribution::quasi_uniform: return "quasi-uniform";
    case Distribution::repel: return "repel";
  }
  return "?";
}

inline Distribution parse_distribution(const std::string& s) {
  if (s == "uniform") return Distribution::uniform;
  if (s == "halton") return Distribution::halton;
  if (s == "quasi-uniform") return Distribution::quasi_uniform;
  if (s == "repel") return Distribution::repel;
  throw InputError("unknown distribution: " + s);
}

namespace detail {

/// Spacing whose generated interior count is closest to the target (bisection, count decreases with h).
template <class Gen>
NodeSet search_spacing(const Domain& dom, int target, Gen&& gen) {
  double h0 = std::sqrt(dom.area() / target);
  double lo = 0.5 * h0, hi = 2.0 * h0;
  std::optional<NodeSet> best;
  int best_diff = std::numeric_limits<int>::max();
  auto consider = [&](double h) {
    NodeSet ns;
    try {
      ns = gen(h);
    } catch (const InputError&) {
      return std::numeric_limits<int>::min();
    }
    const int c = static_cast<int>(ns.interior.size());
    const int diff = std::abs(c - target);
    if (diff < best_diff) {
      best_diff = diff;
      best = std::move(ns);
    }
    return c;
  };
  for (int it = 0; it < 40 && best_diff > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int c = consider(mid);
    if (c == std::numeric_limits<int>::min() || c < target)
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-9 * h0) break;
  }
  if (!best) throw InputError("could not generate a node set with " + std::to_string(target) + " interior nodes");
  return std::move(*best);
}

/// Boundary discretizations reported alongside specific benchmark node sets:
/// segments per rectangle edge (x-edges, y-edges) or nodes on a circle.
struct BoundaryCounts {
  int sx = 0, sy = 0, circle = 0;
};

inline std::optional<BoundaryCounts> tabulated_boundary(const std::string& problem, Distribution dist, int N) {
  struct Row {
    const char* problem;
    Distribution dist;
    int N;
    BoundaryCounts c;
  };
  using D = Distribution;
  // convection-diffusion strip: x-edges carry nl/2 nodes between the corners, y-edges ns/2 including them
  auto strip = [](int nl, int ns) { return BoundaryCounts{nl / 2 + 1, ns / 2 - 1, 0}; };
  static const Row table[] = {
      {"pep5", D::quasi_uniform, 401, {19, 19, 0}},     {"pep7", D::quasi_uniform, 401, {19, 19, 0}},
      {"disk", D::quasi_uniform, 1185, {0, 0, 125}},    {"disk", D::quasi_uniform, 4880, {0, 0, 251}},
      {"convdiff1d", D::halton, 500, strip(100, 20)},   {"convdiff1d", D::halton, 1125, strip(150, 30)},
      {"convdiff1d", D::halton, 2000, strip(200, 40)},  {"convdiff1d", D::halton, 3125, strip(250, 50)},
      {"convdiff1d", D::halton, 4500, strip(300, 60)},  {"convdiff1d", D::halton, 6125, strip(350, 70)},
      {"convdiff1d", D::halton, 8000, strip(400, 80)},  {"convdiff1d", D::quasi_uniform, 500, strip(100, 22)},
      {"convdiff1d", D::quasi_uniform, 1127, strip(150, 32)}, {"convdiff1d", D::quasi_uniform, 1981, strip(198, 42)},
      {"convdiff1d", D::quasi_uniform, 3125, strip(250, 52)}, {"convdiff1d", D::quasi_uniform, 4501, strip(300, 62)},
      {"convdiff1d", D::quasi_uniform, 6158, strip(352, 74)}, {"convdiff1d", D::quasi_uniform, 7987, strip(404, 84)},
  };
  for (const auto& r : table)
    if (problem == r.problem && dist == r.dist && N == r.N) return r.c;
  return std::nullopt;
}

inline std::vector<BoundaryNode> counted_boundary(const Domain& dom, const BoundaryCounts& c) {
  return dom.is_disk() ? circle_boundary(dom, c.circle) : rectangle_boundary(dom, c.sx, c.sy);
}

} // namespace detail

/// Node set with (about) N interior nodes; boundary data from the problem.
inline NodeSet make_nodes(const ProblemSpec& prob, Distribution dist, int N, std::uint64_t seed = 1) {
  require(N >= 1, "make_nodes: N must be >= 1");
  const Domain& dom = prob.domain;
  const auto tab = detail::tabulated_boundary(prob.name, dist, N);
  NodeSet ns;
  switch (dist) {
    case Distribution::uniform: {
      require(dom.is_rectangle(), "uniform distribution requires a rectangle");
      const auto& r = dom.rect();
      const double w = r.xmax - r.xmin, hgt = r.ymax - r.ymin;
      const int ny = std::max(1, static_cast<int>(std::lround(std::sqrt(N * hgt / w))));
      const int nx = std::max(1, static_cast<int>(std::lround(static_cast<double>(N) / ny)));
      ns = uniform_nodes(dom, nx + 2, ny + 2);
      break;
    }
    case Distribution::halton:
      ns = halton_nodes(dom, N, std::sqrt(dom.area() / N), static_cast<int>(seed));
      if (tab) ns.boundary = detail::counted_boundary(dom, *tab);
      break;
    case Distribution::quasi_uniform:
      ns = detail::search_spacing(dom, N, [&](double h) {
        return tab ? quasi_uniform_nodes(dom, h, detail::counted_boundary(dom, *tab)) : quasi_uniform_nodes(dom, h);
      });
      break;
    case Distribution::repel:
      ns = detail::search_spacing(dom, N, [&](double h) { return repel_nodes_disk(dom, h, seed); });
      break;
  }
  boundary_data(ns, prob);
  return ns;
}

struct RunConfig {
  std::string problem = "pep5";
  ProblemParams params;
  Method method = Method::lim_rbfqr;
  Distribution distribution = Distribution::uniform;
  int N = 400;
  int stencil = 25;
  double epsilon = 1.0;
  RbfKind kind = RbfKind::ga;
  double kappa = 0.8;
  double band_width = std::numeric_limits<double>::infinity();
  QuadratureOptions quadrature;
  GmresOptions gmres;
  std::uint64_t seed = 1;
  int threads = 1;
  bool diagnostics = false;
};

inline BasisKind basis_of(const RunConfig& c) {
  switch (c.kind) {
    case RbfKind::ga: return BasisKind::ga(c.epsilon);
    case RbfKind::mq1: return BasisKind::mq1(c.epsilon);
    case RbfKind::mq2: return BasisKind::mq2(c.epsilon);
    case RbfKind::tps: return BasisKind::tps();
  }
  return BasisKind::ga(c.epsilon);
}

struct RunResult {
  RunConfig config;
  int N = 0;  // actual interior count
  int N_b = 0;
  ErrorReport errors;
  bool has_errors = false;
  SolveReport solve;
  double wall_seconds = 0.0;
  bool ok = false;
  std::string reason;
  NodeSet nodes;
  Vector solution;
  std::vector<StencilDiagnostics> diagnostics;
};

/// Solve on a prepared node set.
inline RunResult run_on_nodes(const RunConfig& cfg, const ProblemSpec& prob, const NodeSet& ns) {
  RunResult res;
  res.config = cfg;
  res.nodes = ns;
  res.N = static_cast<int>(ns.interior.size());
  res.N_b = static_cast<int>(ns.boundary.size());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    AssemblyOptions ao;
    ao.method = cfg.method;
    ao.basis = basis_of(cfg);
    ao.stencil_size = cfg.stencil;
    ao.band_width = cfg.band_width;
    ao.kappa = cfg.kappa;
    ao.quadrature = cfg.quadrature;
    ao.threads = cfg.threads;
    ao.diagnostics = cfg.diagnostics;
    auto asm_ = assemble(ns, prob, ao);
    res.diagnostics = std::move(asm_.diagnostics);
    res.solution = gmres_escalating(asm_.system.matrix, asm_.system.rhs, res.solve, cfg.gmres);
    res.ok = res.solve.converged && res.solution.allFinite();
    if (!res.ok) res.reason = "gmres " + to_string(res.solve.status);
  } catch (const std::exception& e) {
    res.ok = false;
    res.reason = e.what();
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (res.solution.size() == res.N && prob.has_exact()) {
    Vector ex(res.N);
    for (int i = 0; i < res.N; ++i) ex(i) = prob.exact(ns.interior[static_cast<std::size_t>(i)]);
    res.errors = error_norms(ex, res.solution);
    res.has_errors = res.solution.allFinite();
  }
  return res;
}

inline RunResult run_single(const RunConfig& cfg) {
  const auto prob = problem_catalog(cfg.problem, cfg.params);
  NodeSet ns;
  try {
    ns = make_nodes(prob, cfg.distribution, cfg.N, cfg.seed);
  } catch (const std::exception& e) {
    RunResult r;
    r.config = cfg;
    r.reason = e.what();
    return r;
  }
  return run_on_nodes(cfg, prob, ns);
}

namespace detail {

/// Independent solves on one node set, `threads` cells at a time; results keep the input order.
inline std::vector<RunResult> run_cells(std::vector<RunConfig> cells, const ProblemSpec& prob, const NodeSet& ns,
                                        int threads) {
  std::vector<RunResult> out(cells.size());
  const int pool = std::max(1, threads);
  for (auto& c : cells) c.threads = pool > 1 ? 1 : c.threads;
  parallel_for(static_cast<int>(cells.size()), pool, [&](int i) {
    out[static_cast<std::size_t>(i)] = run_on_nodes(cells[static_cast<std::size_t>(i)], prob, ns);
  });
  return out;
}

} // namespace detail

/// One solve per epsilon on a shared node set.
inline std::vector<RunResult> epsilon_sweep(const RunConfig& base, const std::vector<double>& eps_list) {
  require(!eps_list.empty(), "epsilon_sweep: empty list");
  for (double e : eps_list) require(e > 0.0, "epsilon_sweep: epsilon must be positive");
  const auto prob = problem_catalog(base.problem, base.params);
  const auto ns = make_nodes(prob, base.distribution, base.N, base.seed);
  std::vector<RunConfig> cells;
  for (double e : eps_list) {
    RunConfig c = base;
    c.epsilon = e;
    cells.push_back(c);
  }
  return detail::run_cells(std::move(cells), prob, ns, base.threads);
}

inline std::vector<RunResult> convergence_study(const RunConfig& base, const std::vector<int>& N_list) {
  require(!N_list.empty(), "convergence_study: empty list");
  for (std::size_t i = 1; i < N_list.size(); ++i)
    require(N_list[i] > N_list[i - 1], "convergence_study: N list must be increasing");
  std::vector<RunResult> out(N_list.size());
  const int pool = std::max(1, base.threads);
  parallel_for(static_cast<int>(N_list.size()), pool, [&](int i) {
    RunConfig c = base;
    c.N = N_list[static_cast<std::size_t>(i)];
    if (pool > 1) c.threads = 1;
    out[static_cast<std::size_t>(i)] = run_single(c);
  });
  return out;
}

/// Local RBF-QR reconstruction of a nodal solution at arbitrary points, from the
/// n nearest value-carrying nodes (interior and Dirichlet boundary nodes).
inline Vector reconstruct(const NodeSet& ns, const Vector& u, const std::vector<Point2>& at, double eps, int n = 25) {
  require(u.size() == static_cast<Eigen::Index>(ns.interior.size()), "reconstruct: one value per interior node");
  std::vector<Point2> pos;
  std::vector<double> val;
  for (std::size_t i = 0; i < ns.interior.size(); ++i) {
    pos.push_back(ns.interior[i]);
    val.push_back(u(static_cast<Eigen::Index>(i)));
  }
  for (const auto& b : ns.boundary)
    if (b.bc == BcKind::dirichlet) {
      pos.push_back(b.position);
      val.push_back(b.value);
    }
  require(static_cast<int>(pos.size()) >= n, "reconstruct: fewer value nodes than the stencil size");
  Vector out(static_cast<Eigen::Index>(at.size()));
  std::vector<std::pair<double, int>> cand(pos.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    for (std::size_t j = 0; j < pos.size(); ++j) cand[j] = {(pos[j] - at[k]).squaredNorm(), static_cast<int>(j)};
    std::partial_sort(cand.begin(), cand.begin() + n, cand.end());
    std::vector<Point2> sp;
    Vector d(n);
    for (int q = 0; q < n; ++q) {
      sp.push_back(pos[static_cast<std::size_t>(cand[static_cast<std::size_t>(q)].second)]);
      d(q) = val[static_cast<std::size_t>(cand[static_cast<std::size_t>(q)].second)];
    }
    RbfQrOptions opt;
    Point2 c = Point2::Zero();
    for (const auto& p : sp) c += p;
    c /= n;
    double r = (at[k] - c).norm();
    for (const auto& p : sp) r = std::max(r, (p - c).norm());
    opt.center = c;
    opt.scale = r;
    const auto basis = RbfQrBasis::build(sp, eps, opt);
    const Vector coef = basis.values(sp).partialPivLu().solve(d);
    out(static_cast<Eigen::Index>(k)) = basis.values({at[k]}).row(0).dot(coef);
  }
  return out;
}

/// Largest increase of the reconstructed solution along vertical sections x = const,
/// sampled at `samples` equispaced heights (0 means nonincreasing in x2 everywhere).
inline double section_rise(const ProblemSpec& prob, const NodeSet& ns, const Vector& u, double eps,
                           const std::vector<double>& xs, int samples = 41) {
  require(prob.domain.is_rectangle(), "section_rise: rectangle domain required");
  require(samples >= 2, "section_rise: need at least two samples");
  const auto& r = prob.domain.rect();
  double worst = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    std::vector<Point2> line;
    for (int k = 0; k < samples; ++k) line.emplace_back(x, r.ymin + (r.ymax - r.ymin) * k / (samples - 1));
    const Vector t = reconstruct(ns, u, line, eps);
    for (int k = 1; k < samples; ++k) worst = std::max(worst, t(k) - t(k - 1));
  }
  return worst;
}

/// Stencil size x epsilon grid on a shared node set, row-major over (n, eps).
inline std::vector<RunResult> isolines(const RunConfig& base, const std::vector<int>& n_list,
                                       const std::vector<double>& eps_list) {
  require(!n_list.empty() && !eps_list.empty(), "isolines: grid axes must be nonempty");
  const auto prob = problem_catalog(base.problem, base.params);
  const auto ns = make_nodes(prob, base.distribution, base.N, base.seed);
  std::vector<RunConfig> cells;
  for (int n : n_list)
    for (double e : eps_list) {
      RunConfig c = base;
      c.stencil = n;
      c.epsilon = e;
      cells.push_back(c);
    }
  return detail::run_cells(std::move(cells), prob, ns, base.threads);
}

} // namespace limqr
