#pragma once

// CSV readers and writers for node sets, stencil diagnostics, result tables
// and solution fields. Reals are written with 17 significant digits.

#include "limqr/bench.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace limqr {

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) throw InputError("csv: not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InputError("csv: not an integer: '" + s + "'");
  return v;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

/// Remaining data lines split into fields.
inline std::vector<std::vector<std::string>> read_rows(std::istream& in, std::size_t min_fields,
                                                       std::size_t max_fields) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    if (f.size() < min_fields || f.size() > max_fields) throw InputError("csv: wrong field count in '" + line + "'");
    rows.push_back(std::move(f));
  }
  return rows;
}

/// Checks the header against `expected`, then reads the data lines.
inline std::vector<std::vector<std::string>> read_table(std::istream& in, const std::string& expected,
                                                        std::size_t min_fields, std::size_t max_fields) {
  const auto h = read_header(in);
  if (h != expected) throw InputError("csv: unexpected header '" + h + "'");
  return read_rows(in, min_fields, max_fields);
}

/// Free text made safe for one CSV field.
inline std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Node sets: kind,x,y,nx,ny,bc

inline const char* nodes_header = "kind,x,y,nx,ny,bc";

inline void write_nodes(std::ostream& out, const NodeSet& ns) {
  out << nodes_header << '\n';
  for (const auto& p : ns.interior)
    out << "interior," << format_real(p.x()) << ',' << format_real(p.y()) << ",0,0,\n";
  for (const auto& b : ns.boundary)
    out << "boundary," << format_real(b.position.x()) << ',' << format_real(b.position.y()) << ','
        << format_real(b.normal.x()) << ',' << format_real(b.normal.y()) << ','
        << (b.bc == BcKind::neumann ? "neumann" : "dirichlet") << '\n';
}

/// Boundary segments are left unassigned (-1); boundary_data infers them.
inline NodeSet read_nodes(std::istream& in) {
  NodeSet ns;
  for (const auto& f : detail::read_table(in, nodes_header, 6, 6)) {
    const Point2 p(parse_real(f[1]), parse_real(f[2]));
    if (f[0] == "interior") {
      ns.interior.push_back(p);
    } else if (f[0] == "boundary") {
      BoundaryNode b;
      b.position = p;
      b.normal = Point2(parse_real(f[3]), parse_real(f[4]));
      if (f[5] == "dirichlet")
        b.bc = BcKind::dirichlet;
      else if (f[5] == "neumann")
        b.bc = BcKind::neumann;
      else
        throw InputError("csv: unknown bc '" + f[5] + "'");
      ns.boundary.push_back(b);
    } else {
      throw InputError("csv: unknown node kind '" + f[0] + "'");
    }
  }
  return ns;
}

// ---------------------------------------------------------------------------
// Stencil diagnostics: stencil_id,cond_A,cond_B,radius,n_i,n_b

inline const char* diagnostics_header = "stencil_id,cond_A,cond_B,radius,n_i,n_b";

inline void write_diagnostics(std::ostream& out, const std::vector<StencilDiagnostics>& d) {
  out << diagnostics_header << '\n';
  for (const auto& s : d)
    out << s.stencil_id << ',' << format_real(s.cond_A) << ',' << format_real(s.cond_B) << ','
        << format_real(s.radius) << ',' << s.n_i << ',' << s.n_b << '\n';
}

inline std::vector<StencilDiagnostics> read_diagnostics(std::istream& in) {
  std::vector<StencilDiagnostics> out;
  for (const auto& f : detail::read_table(in, diagnostics_header, 6, 6)) {
    StencilDiagnostics s;
    s.stencil_id = parse_int(f[0]);
    s.cond_A = parse_real(f[1]);
    s.cond_B = parse_real(f[2]);
    s.radius = parse_real(f[3]);
    s.n_i = parse_int(f[4]);
    s.n_b = parse_int(f[5]);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result tables

struct ResultRow {
  std::string problem, method, distribution;
  int N = 0, n = 0;
  double epsilon = 0.0;
  double linf = 0.0, l2pct = 0.0, rms = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string reason;  // empty on success

  bool operator==(const ResultRow&) const = default;
};

inline const char* results_header =
    "problem,method,distribution,N,n,epsilon,linf,l2pct,rms,iterations,wall_seconds,reason";

/// Error columns are nan for failed solves. With timing off wall_seconds is 0,
/// which makes the table a pure function of the configuration.
inline ResultRow to_row(const RunResult& r, bool timing = true) {
  ResultRow row;
  row.problem = r.config.problem;
  row.method = to_string(r.config.method);
  row.distribution = to_string(r.config.distribution);
  row.N = r.N;
  row.n = r.config.stencil;
  row.epsilon = r.config.epsilon;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool have = r.ok && r.has_errors;
  row.linf = have ? r.errors.linf : nan;
  row.l2pct = have ? r.errors.l2_percent : nan;
  row.rms = have ? r.errors.rms : nan;
  row.iterations = r.solve.iterations;
  row.wall_seconds = timing ? r.wall_seconds : 0.0;
  row.reason = r.ok ? "" : detail::sanitize(r.reason.empty() ? "failed" : r.reason);
  return row;
}

inline void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << results_header << '\n';
  for (const auto& r : rows)
    out << r.problem << ',' << r.method << ',' << r.distribution << ',' << r.N << ',' << r.n << ','
        << format_real(r.epsilon) << ',' << format_real(r.linf) << ',' << format_real(r.l2pct) << ','
        << format_real(r.rms) << ',' << r.iterations << ',' << format_real(r.wall_seconds) << ','
        << detail::sanitize(r.reason) << '\n';
}

inline std::vector<ResultRow> read_results(std::istream& in) {
  std::vector<ResultRow> out;
  for (const auto& f : detail::read_table(in, results_header, 12, 12)) {
    ResultRow r;
    r.problem = f[0];
    r.method = f[1];
    r.distribution = f[2];
    r.N = parse_int(f[3]);
    r.n = parse_int(f[4]);
    r.epsilon = parse_real(f[5]);
    r.linf = parse_real(f[6]);
    r.l2pct = parse_real(f[7]);
    r.rms = parse_real(f[8]);
    r.iterations = parse_int(f[9]);
    r.wall_seconds = parse_real(f[10]);
    r.reason = f[11];
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solution fields: x,y,u_apx[,u_exact]

struct SolutionField {
  std::vector<Point2> points;
  std::vector<double> approx;
  std::vector<double> exact;  // empty when unknown
};

inline SolutionField solution_field(const RunResult& r, const ProblemSpec& prob) {
  SolutionField s;
  s.points = r.nodes.interior;
  for (Eigen::Index i = 0; i < r.solution.size(); ++i) s.approx.push_back(r.solution(i));
  if (prob.has_exact())
    for (const auto& p : s.points) s.exact.push_back(prob.exact(p));
  return s;
}

inline void write_solution(std::ostream& out, const SolutionField& s) {
  require(s.points.size() == s.approx.size(), "write_solution: one value per point");
  require(s.exact.empty() || s.exact.size() == s.points.size(), "write_solution: exact size mismatch");
  const bool ex = !s.exact.empty();
  out << (ex ? "x,y,u_apx,u_exact" : "x,y,u_apx") << '\n';
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    out << format_real(s.points[i].x()) << ',' << format_real(s.points[i].y()) << ',' << format_real(s.approx[i]);
    if (ex) out << ',' << format_real(s.exact[i]);
    out << '\n';
  }
}

inline SolutionField read_solution(std::istream& in) {
  const auto header = detail::read_header(in);
  const bool ex = header == "x,y,u_apx,u_exact";
  if (!ex && header != "x,y,u_apx") throw InputError("csv: unexpected header '" + header + "'");
  SolutionField s;
  const std::size_t k = ex ? 4 : 3;
  for (const auto& f : detail::read_rows(in, k, k)) {
    s.points.emplace_back(parse_real(f[0]), parse_real(f[1]));
    s.approx.push_back(parse_real(f[2]));
    if (ex) s.exact.push_back(parse_real(f[3]));
  }
  return s;
}

} // namespace limqr
