// Command-line front end: single runs, epsilon sweeps, convergence studies and
// stencil-size x epsilon isoline grids. Writes CSV tables and SVG plots.

#include "limqr/limqr.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace limqr;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem = "pep5", method = "lim-rbfqr", dist = "uniform", kind = "ga", precond = "jacobi";
  int N = 400, stencil = 25;
  double epsilon = 1.0, kappa = 0.8, band = std::numeric_limits<double>::infinity();
  int circle = 8, radial = 12, angular = 6;
  int restart = 30, max_outer = 200;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double k = 40.0, peclet = 50.0, u0 = 1.0, u1 = 10.0;
  std::string out = "-", solution, nodes_out, diagnostics, svg;
  bool no_timing = false;
  std::vector<double> eps_list;
  std::vector<int> n_list, stencil_list;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--problem", o.problem, "pep5 | pep7 | disk | convdiff1d | thermal");
  app->add_option("--method", o.method, "lrdrm | lim | lim-rbfqr");
  app->add_option("--dist", o.dist, "uniform | halton | quasi-uniform | repel");
  app->add_option("--n", o.N, "target number of interior nodes")->check(CLI::PositiveNumber);
  app->add_option("--stencil", o.stencil, "stencil size")->check(CLI::PositiveNumber);
  app->add_option("--epsilon", o.epsilon, "shape parameter")->check(CLI::PositiveNumber);
  app->add_option("--kind", o.kind, "ga | mq1 | mq2 | tps (direct methods)");
  app->add_option("--kappa", o.kappa, "subregion radius factor in (0,1)");
  app->add_option("--band", o.band, "boundary band width for boundary stencil members");
  app->add_option("--quad-circle", o.circle, "Gauss points per quarter arc")->check(CLI::Range(1, 64));
  app->add_option("--quad-radial", o.radial, "radial Gauss points")->check(CLI::Range(1, 64));
  app->add_option("--quad-angular", o.angular, "angular Gauss points per quarter")->check(CLI::Range(1, 64));
  app->add_option("--restart", o.restart, "GMRES restart length")->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "GMRES relative tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-outer", o.max_outer, "GMRES outer cycles")->check(CLI::PositiveNumber);
  app->add_option("--precond", o.precond, "none | jacobi | ilu0");
  app->add_option("--seed", o.seed, "node generator seed");
  app->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--k", o.k, "convdiff1d decay parameter");
  app->add_option("--peclet", o.peclet, "thermal Peclet number");
  app->add_option("--u0", o.u0, "convdiff1d left value");
  app->add_option("--u1", o.u1, "convdiff1d right value");
  app->add_option("--out", o.out, "result CSV path, - for standard output");
  app->add_option("--svg", o.svg, "SVG plot path");
  app->add_flag("--no-timing", o.no_timing, "write wall_seconds as 0 (byte-reproducible tables)");
}

RunConfig make_config(const Options& o) {
  RunConfig c;
  problem_catalog(o.problem);  // validates the name
  c.problem = o.problem;
  c.params.k = o.k;
  c.params.peclet = o.peclet;
  c.params.u0 = o.u0;
  c.params.u1 = o.u1;
  c.method = parse_method(o.method);
  c.distribution = parse_distribution(o.dist);
  c.kind = parse_rbf_kind(o.kind);
  if (c.method == Method::lim_rbfqr) require(c.kind == RbfKind::ga, "lim-rbfqr requires --kind ga");
  require(o.kappa > 0.0 && o.kappa < 1.0, "--kappa must lie in (0,1)");
  require(o.band > 0.0, "--band must be positive");
  c.N = o.N;
  c.stencil = o.stencil;
  c.epsilon = o.epsilon;
  c.kappa = o.kappa;
  c.band_width = o.band;
  c.quadrature = {o.circle, o.radial, o.angular};
  c.gmres.restart = o.restart;
  c.gmres.tol = o.tol;
  c.gmres.max_outer = o.max_outer;
  c.gmres.preconditioner = parse_preconditioner(o.precond);
  c.seed = o.seed;
  c.threads = o.threads;
  return c;
}

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write(f);
  if (!f) throw IoError("write failed: " + path);
}

void write_table(const Options& o, const std::vector<RunResult>& results) {
  std::vector<ResultRow> rows;
  for (const auto& r : results) rows.push_back(to_row(r, !o.no_timing));
  with_output(o.out, [&](std::ostream& s) { write_results(s, rows); });
}

void write_svg(const std::string& path, const std::string& doc) {
  if (!path.empty()) with_output(path, [&](std::ostream& s) { s << doc; });
}

double plotted_error(const RunResult& r) {
  if (!r.ok || !r.has_errors) return std::numeric_limits<double>::quiet_NaN();
  return r.errors.l2_defined ? r.errors.l2_percent : r.errors.rms;
}

int cmd_run(const Options& o) {
  RunConfig c = make_config(o);
  c.diagnostics = !o.diagnostics.empty();
  const auto prob = problem_catalog(c.problem, c.params);
  const RunResult r = run_single(c);
  write_table(o, {r});
  if (!o.solution.empty() && r.solution.size() == r.N)
    with_output(o.solution, [&](std::ostream& s) { write_solution(s, solution_field(r, prob)); });
  if (!o.nodes_out.empty()) with_output(o.nodes_out, [&](std::ostream& s) { write_nodes(s, r.nodes); });
  if (!o.diagnostics.empty()) with_output(o.diagnostics, [&](std::ostream& s) { write_diagnostics(s, r.diagnostics); });
  if (!r.ok) {
    std::cerr << "error,numerical," << detail::sanitize(r.reason) << '\n';
    return exit_numerical;
  }
  return exit_ok;
}

int cmd_sweep(const Options& o) {
  require(!o.eps_list.empty(), "--eps-list must not be empty");
  const auto res = epsilon_sweep(make_config(o), o.eps_list);
  write_table(o, res);
  svg::LinePlot p{"error vs shape parameter", "epsilon", "error", false, true, {}};
  svg::Series s{o.method, {}, {}};
  for (const auto& r : res) {
    s.x.push_back(r.config.epsilon);
    s.y.push_back(plotted_error(r));
  }
  p.series.push_back(s);
  write_svg(o.svg, svg::render(p));
  return exit_ok;
}

int cmd_converge(const Options& o) {
  require(!o.n_list.empty(), "--n-list must not be empty");
  const auto res = convergence_study(make_config(o), o.n_list);
  write_table(o, res);
  svg::LinePlot p{"error vs N", "N", "error", true, true, {}};
  svg::Series s{o.method + " " + o.dist, {}, {}};
  for (const auto& r : res) {
    s.x.push_back(r.N);
    s.y.push_back(plotted_error(r));
  }
  p.series.push_back(s);
  write_svg(o.svg, svg::render(p));
  return exit_ok;
}

int cmd_isolines(const Options& o) {
  require(!o.stencil_list.empty() && !o.eps_list.empty(), "--stencil-list and --eps-list must not be empty");
  const auto res = isolines(make_config(o), o.stencil_list, o.eps_list);
  write_table(o, res);
  svg::Heatmap h;
  h.title = "log10 error, " + o.method;
  h.xlabel = "epsilon";
  h.ylabel = "stencil size n";
  h.xticks = o.eps_list;
  for (int n : o.stencil_list) h.yticks.push_back(n);
  for (const auto& r : res) h.values.push_back(plotted_error(r));
  write_svg(o.svg, svg::render(h));
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local integral method solver with RBF-QR stabilized interpolation"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "single solve");
  add_common(run, o);
  run->add_option("--solution", o.solution, "solution CSV path (x,y,u_apx[,u_exact])");
  run->add_option("--nodes", o.nodes_out, "node set CSV path");
  run->add_option("--diagnostics", o.diagnostics, "per-stencil diagnostics CSV path");
  auto* sweep = app.add_subcommand("sweep", "one solve per shape parameter on a shared node set");
  add_common(sweep, o);
  sweep->add_option("--eps-list", o.eps_list, "shape parameters")->required()->check(CLI::PositiveNumber);
  auto* conv = app.add_subcommand("converge", "one solve per node count");
  add_common(conv, o);
  conv->add_option("--n-list", o.n_list, "increasing node counts")->required()->check(CLI::PositiveNumber);
  auto* iso = app.add_subcommand("isolines", "stencil size x shape parameter grid");
  add_common(iso, o);
  iso->add_option("--stencil-list", o.stencil_list, "stencil sizes")->required()->check(CLI::PositiveNumber);
  iso->add_option("--eps-list", o.eps_list, "shape parameters")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }
  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*conv) return cmd_converge(o);
    return cmd_isolines(o);
  } catch (const IoError& e) {
    std::cerr << "error,io," << e.what() << '\n';
    return exit_io;
  } catch (const InputError& e) {
    std::cerr << "error,usage," << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error,numerical," << e.what() << '\n';
    return exit_numerical;
  }
}
