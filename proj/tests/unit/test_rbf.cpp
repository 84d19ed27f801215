#include "limqr/local.hpp"
#include "limqr/geometry.hpp"
#include "limqr/rbf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace limqr;

namespace {

std::vector<StencilPoint> as_points(const std::vector<Point2>& p) {
  std::vector<StencilPoint> out;
  for (const auto& x : p) out.push_back({x, RowType::value, Point2::Zero()});
  return out;
}

std::vector<Point2> random_cloud(int n, unsigned seed, double scale = 0.2) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point2> p;
  for (int i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
  return p;
}

double fd_laplacian(const std::function<double(const Point2&)>& f, const Point2& x, double h) {
  return (f(x + Point2(h, 0)) + f(x - Point2(h, 0)) + f(x + Point2(0, h)) + f(x - Point2(0, h)) - 4 * f(x)) / (h * h);
}

} // namespace

TEST(BasisKind, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(BasisKind::ga(0.0), InputError);
  EXPECT_THROW(BasisKind::mq1(-1.0), InputError);
  EXPECT_EQ(parse_rbf_kind("TPS"), RbfKind::tps);
  EXPECT_THROW(parse_rbf_kind("imq"), InputError);
}

TEST(RbfJet, GaussianAtCenter) {
  const auto j = rbf_jet(BasisKind::ga(1.5), Point2(0.2, 0.2), Point2(0.2, 0.2));
  EXPECT_EQ(j.value, 1.0);
  EXPECT_EQ(j.gradient, Point2(0, 0));
  EXPECT_NEAR(j.laplacian, -4 * 2.25, 1e-15);
}

TEST(RbfJet, MultiquadricAndTpsSpecialValues) {
  EXPECT_EQ(rbf_jet(BasisKind::mq1(3.0), Point2(1, 1), Point2(1, 1)).value, 1.0);
  EXPECT_NEAR(rbf_jet(BasisKind::tps(), Point2(1, 0), Point2(0, 0)).value, 0.0, 1e-16);
  const auto t0 = rbf_jet(BasisKind::tps(), Point2(0, 0), Point2(0, 0));
  EXPECT_EQ(t0.value, 0.0);
  EXPECT_EQ(t0.laplacian, 0.0);
}

TEST(RbfJet, DerivativesMatchFiniteDifferences) {
  const Point2 c(0.1, -0.3), x(0.45, 0.2);
  for (const auto& b : {BasisKind::ga(1.3), BasisKind::mq1(0.8), BasisKind::mq2(1.1), BasisKind::tps()}) {
    auto f = [&](const Point2& p) { return rbf_jet(b, p, c).value; };
    const auto j = rbf_jet(b, x, c);
    const double h = 1e-5;
    EXPECT_NEAR(j.gradient.x(), (f(x + Point2(h, 0)) - f(x - Point2(h, 0))) / (2 * h), 1e-8) << to_string(b.kind);
    EXPECT_NEAR(j.gradient.y(), (f(x + Point2(0, h)) - f(x - Point2(0, h))) / (2 * h), 1e-8) << to_string(b.kind);
    EXPECT_NEAR(j.laplacian, fd_laplacian(f, x, 1e-4), 1e-5) << to_string(b.kind);
    const Point2 radial = (x - c).normalized();
    EXPECT_NEAR(std::abs(j.gradient.normalized().dot(radial)), 1.0, 1e-12);
  }
}

TEST(ParticularSolution, ClosedFormValues) {
  EXPECT_NEAR(particular_solution(BasisKind::tps(), Point2(1, 0), Point2(0, 0)), -1.0 / 108.0, 1e-15);
  EXPECT_EQ(particular_solution(BasisKind::ga(2.0), Point2(0.5, 0.5), Point2(0.5, 0.5)), 0.0);
  EXPECT_THROW(particular_solution(BasisKind::mq2(1.0), Point2(1, 0), Point2(0, 0)), InputError);
}

TEST(ParticularSolution, LaplacianRecoversBasis) {
  const Point2 c(0, 0);
  for (const auto& b : {BasisKind::ga(1.0), BasisKind::ga(3.0), BasisKind::mq1(1.2), BasisKind::tps()}) {
    for (double r : {0.7, 0.3, 1.5}) {
      const Point2 x(r * std::cos(0.4), r * std::sin(0.4));
      auto f = [&](const Point2& p) { return particular_solution(b, p, c); };
      EXPECT_NEAR(fd_laplacian(f, x, 1e-3), rbf_jet(b, x, c).value, 1e-6 * std::max(1.0, std::abs(rbf_jet(b, x, c).value)))
          << to_string(b.kind) << " r=" << r;
    }
  }
}

TEST(ParticularSolution, GaussianLargeArgumentBranchIsContinuous) {
  const auto b = BasisKind::ga(1.0);
  const double below = particular_solution(b, Point2(std::sqrt(5.0) - 1e-9, 0), Point2(0, 0));
  const double above = particular_solution(b, Point2(std::sqrt(5.0) + 1e-9, 0), Point2(0, 0));
  EXPECT_NEAR(below, above, 1e-8);
}

TEST(Monomials, ParticularSolutionsInvertLaplacian) {
  const MonomialFrame f{Point2(0.2, -0.1), 0.3};
  const Point2 x(0.35, 0.05);
  for (int q = 0; q < 6; ++q) {
    auto p = [&](const Point2& y) { return monomial_particular(q, f, y); };
    EXPECT_NEAR(fd_laplacian(p, x, 2e-4), monomial_jet(q, f, x).value, 1e-6) << q;
  }
}

TEST(InterpolationMatrix, SingleNodeGaussian) {
  const auto li = build_interpolation_matrix(BasisKind::ga(1.0), as_points({Point2(0.3, 0.3)}));
  ASSERT_EQ(li.A->rows(), 1);
  EXPECT_EQ((*li.A)(0, 0), 1.0);
}

TEST(InterpolationMatrix, InteriorStencilSharesMatrixAndIsSymmetric) {
  const auto pts = random_cloud(12, 3);
  for (const auto& b : {BasisKind::ga(2.0), BasisKind::mq1(1.0), BasisKind::mq2(1.0), BasisKind::tps()}) {
    const auto li = build_interpolation_matrix(b, as_points(pts));
    EXPECT_EQ(li.A.get(), li.A_tilde.get());
    EXPECT_FALSE(li.has_derivative_rows());
    EXPECT_EQ(*li.A, li.A->transpose()) << to_string(b.kind);
  }
}

TEST(InterpolationMatrix, NeumannRowsAreNormalDerivatives) {
  auto sp = as_points(random_cloud(9, 5));
  sp[3].row = RowType::normal_derivative;
  sp[3].normal = Point2(0.6, 0.8);
  const auto li = build_interpolation_matrix(BasisKind::ga(2.0), sp);
  EXPECT_TRUE(li.has_derivative_rows());
  for (int j = 0; j < 9; ++j) {
    const auto jt = rbf_jet(BasisKind::ga(2.0), sp[3].position, sp[static_cast<std::size_t>(j)].position);
    EXPECT_NEAR((*li.A)(3, j), jt.gradient.dot(sp[3].normal), 1e-15);
    EXPECT_NEAR((*li.A_tilde)(3, j), jt.value, 1e-15);
  }
}

TEST(InterpolationMatrix, NodalReproduction) {
  const auto pts = random_cloud(15, 9);
  Vector d(15);
  for (int i = 0; i < 15; ++i) d(i) = std::sin(3 * pts[static_cast<std::size_t>(i)].x()) + pts[static_cast<std::size_t>(i)].y();
  for (const auto& b : {BasisKind::ga(3.0), BasisKind::mq1(2.0), BasisKind::tps()}) {
    const auto li = build_interpolation_matrix(b, as_points(pts));
    const Vector a = li.coefficients(d);
    const Vector back = li.values * a;
    EXPECT_LT((back - d).cwiseAbs().maxCoeff(), condition_number(*li.A) * 1e-15) << to_string(b.kind);
  }
}

TEST(InterpolationMatrix, Mq2ReproducesLinears) {
  const auto pts = random_cloud(10, 21);
  auto p = [](const Point2& x) { return 1.5 - 2 * x.x() + 0.7 * x.y(); };
  Vector d(10);
  for (int i = 0; i < 10; ++i) d(i) = p(pts[static_cast<std::size_t>(i)]);
  const auto li = build_interpolation_matrix(BasisKind::mq2(2.0), as_points(pts));
  const Vector a = li.coefficients(d);
  for (const Point2& x : {Point2(0.05, 0.1), Point2(-0.13, 0.02), Point2(0.0, -0.17)})
    EXPECT_NEAR(li.basis.values({x}).row(0).dot(a), p(x), 1e-9);
}

TEST(OperatorMatrix, ZeroIdentityAndConvective) {
  const auto pts = random_cloud(8, 4);
  const auto b = BasisKind::ga(1.7);
  const auto li = build_interpolation_matrix(b, as_points(pts));
  EXPECT_TRUE(build_operator_matrix(li, LinearOperator{}).isZero(0.0));
  EXPECT_EQ(build_operator_matrix(li, LinearOperator::identity()), *li.A_tilde);
  LinearOperator op;
  const double k = 40.0;
  auto V = [](const Point2& x) { return std::log(10.0) + 40.0 * (x.x() - 0.5); };
  op.a0 = [k](const Point2&) { return k; };
  op.a1 = V;
  const Matrix ab = build_operator_matrix(li, op);
  const double e2 = 1.7 * 1.7;
  for (int i : {0, 3, 7})
    for (int j = 0; j < 8; ++j) {
      const Point2 d = pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)];
      const double phi = std::exp(-e2 * d.squaredNorm());
      const double expect = k * phi + V(pts[static_cast<std::size_t>(i)]) * (-2 * e2 * d.x() * phi);
      EXPECT_NEAR(ab(i, j), expect, 1e-10);
    }
}

TEST(ConditionLaw, SlopeOfDirectGaussian) {
  // measured slope of log10 cond(A) against log10(1/eps) on a fixed Halton stencil
  const auto pts = halton_points(25, 1);
  std::vector<double> lx, ly;
  for (double eps : {2.0, 1.0, 0.5, 0.25}) {
    const auto li = build_interpolation_matrix(BasisKind::ga(eps), as_points(pts));
    lx.push_back(std::log10(1.0 / eps));
    ly.push_back(std::log10(condition_number(*li.A)));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[static_cast<std::size_t>(i)] - mx) * (ly[static_cast<std::size_t>(i)] - my);
    sxx += (lx[static_cast<std::size_t>(i)] - mx) * (lx[static_cast<std::size_t>(i)] - mx);
  }
  const double slope = sxy / sxx;
  RecordProperty("slope_n25", std::to_string(slope));
  EXPECT_GT(slope, 0.0);
}

TEST(ConditionNumber, SingularIsInfinite) {
  EXPECT_EQ(condition_number(Matrix::Identity(3, 3)), 1.0);
  EXPECT_TRUE(std::isinf(condition_number(Matrix::Zero(2, 2))));
}
