#include "limqr/green.hpp"
#include "limqr/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace limqr;

TEST(Fundamental, Values) {
  EXPECT_NEAR(laplace_fundamental(Point2(1, 0), Point2(0, 0)), 0.0, 1e-16);
  EXPECT_NEAR(laplace_fundamental(Point2(std::exp(-1.0), 0), Point2(0, 0)), 1.0 / (2 * pi), 1e-15);
  EXPECT_THROW(laplace_fundamental(Point2(1, 1), Point2(1, 1)), InputError);
}

TEST(Fundamental, NormalDerivative) {
  const Point2 xi(0.2, 0.3);
  const Point2 n(std::cos(0.7), std::sin(0.7));
  EXPECT_NEAR(laplace_fundamental_normal(xi + n, n, xi), -1.0 / (2 * pi), 1e-15);
  EXPECT_NEAR(laplace_fundamental_normal(xi + n, Point2(-n.y(), n.x()), xi), 0.0, 1e-16);
}

TEST(Fundamental, FluxThroughCircle) {
  const Point2 xi(0.1, 0.0);
  const double v = integrate_circle_boundary(
      Point2(0, 0), 1.0, [&](const Point2& x, const Point2& n) { return laplace_fundamental_normal(x, n, xi); }, 16);
  EXPECT_NEAR(v, -1.0, 1e-10);
}

TEST(SourceConfig, ImagePoint) {
  const DiskSubregion sub{Point2(1, 1), 0.5};
  const auto c = SourceConfig::make(Point2(1.2, 0.9), sub);
  EXPECT_NEAR((c.image - sub.center).norm() * c.rho, 0.25, 1e-15);
  EXPECT_NEAR((c.image - sub.center).normalized().dot((c.xi - sub.center).normalized()), 1.0, 1e-15);
  EXPECT_THROW(SourceConfig::make(Point2(1.6, 1.0), sub), InputError);
}

TEST(DiskGreen, VanishesOnCircle) {
  const DiskSubregion sub{Point2(0.3, 0.4), 0.7};
  for (double rho : {0.0, 0.2, 0.5}) {
    const auto c = SourceConfig::make(sub.center + Point2(rho, 0.1 * rho), sub);
    for (int k = 0; k < 12; ++k) {
      const double t = 2 * pi * k / 12;
      EXPECT_NEAR(dgf_disk(sub.center + sub.radius * Point2(std::cos(t), std::sin(t)), c, sub), 0.0, 1e-13);
    }
  }
}

TEST(DiskGreen, CenteredValue) {
  const DiskSubregion sub{Point2(0, 0), 1.0};
  const auto c = SourceConfig::make(sub.center, sub);
  EXPECT_NEAR(dgf_disk(Point2(0.5, 0), c, sub), -std::log(2.0) / (2 * pi), 1e-15);
}

TEST(DiskGreen, NonPositiveInsideAndSymmetric) {
  const DiskSubregion sub{Point2(0, 0), 1.0};
  const Point2 a(0.3, -0.2), b(-0.4, 0.5);
  const auto ca = SourceConfig::make(a, sub), cb = SourceConfig::make(b, sub);
  EXPECT_LT(dgf_disk(b, ca, sub), 0.0);
  EXPECT_NEAR(dgf_disk(b, ca, sub), dgf_disk(a, cb, sub), 1e-14);
}

TEST(PoissonKernel, CenteredValue) {
  const DiskSubregion sub{Point2(2, -1), 1.0};
  const auto c = SourceConfig::make(sub.center, sub);
  for (double t : {0.0, 1.0, 2.5}) EXPECT_NEAR(dgf_disk_normal(sub.center + Point2(std::cos(t), std::sin(t)), c, sub),
                                               1.0 / (2 * pi), 1e-15);
}

TEST(PoissonKernel, IntegratesToOneAndIsPositive) {
  const DiskSubregion sub{Point2(0, 0), 1.0};
  for (double ratio : {0.0, 0.3, 0.9}) {
    const auto c = SourceConfig::make(Point2(ratio * 0.6, ratio * 0.8), sub);
    auto flux = [&](int arcs) {
      return integrate_circle_boundary(
          sub.center, sub.radius, [&](const Point2& x, const Point2&) { return dgf_disk_normal(x, c, sub); }, 16, arcs);
    };
    EXPECT_NEAR(flux(32), 1.0, 1e-12) << ratio;
  }
  const auto c = SourceConfig::make(Point2(0.5, 0.0), sub);
  double qmax = 0.0;
  Point2 arg;
  for (int k = 0; k < 360; ++k) {
    const Point2 x(std::cos(2 * pi * k / 360), std::sin(2 * pi * k / 360));
    const double q = dgf_disk_normal(x, c, sub);
    EXPECT_GE(q, 0.0);
    if (q > qmax) qmax = q, arg = x;
  }
  EXPECT_NEAR((arg - Point2(1, 0)).norm(), 0.0, 1e-12);
}

TEST(PoissonKernel, ReproducesHarmonicFunction) {
  const DiskSubregion sub{Point2(0.1, 0.2), 0.4};
  const Point2 xi(0.25, 0.1);
  const auto c = SourceConfig::make(xi, sub);
  auto u = [](const Point2& x) { return x.x() * x.x() - x.y() * x.y() + 3 * x.x() * x.y(); };
  const double v = integrate_circle_boundary(
      sub.center, sub.radius, [&](const Point2& x, const Point2&) { return dgf_disk_normal(x, c, sub) * u(x); }, 16);
  EXPECT_NEAR(v, u(xi), 1e-10);
}

TEST(PoissonKernel, MatchesFiniteDifferenceOfGreen) {
  const DiskSubregion sub{Point2(0, 0), 0.5};
  const auto c = SourceConfig::make(Point2(0.1, -0.15), sub);
  const double h = 1e-6 * sub.radius;
  for (double t : {0.3, 1.9, 4.0}) {
    const Point2 n(std::cos(t), std::sin(t));
    const Point2 x = sub.center + sub.radius * n;
    const double fd = (dgf_disk(x, c, sub) - dgf_disk(x - h * n, c, sub)) / h;
    EXPECT_NEAR(fd, dgf_disk_normal(x, c, sub), 1e-6);
  }
}

TEST(GreenIdentity, ClosureForQuadraticWithUnitLaplacian) {
  const DiskSubregion sub{Point2(0.3, -0.2), 0.6};
  auto u = [&](const Point2& x) { return (x - sub.center).squaredNorm() / 4.0; };
  for (double ratio : {0.0, 0.5}) {
    const Point2 xi = sub.center + ratio * sub.radius * Point2(0.6, 0.8);
    const auto c = SourceConfig::make(xi, sub);
    const double boundary = integrate_circle_boundary(
        sub.center, sub.radius, [&](const Point2& x, const Point2&) { return dgf_disk_normal(x, c, sub) * u(x); }, 16);
    const double volume =
        integrate_disk(sub.center, sub.radius, [&](const Point2& x) { return dgf_disk(x, c, sub); }, 24, 16, xi);
    EXPECT_NEAR(boundary + volume, u(xi), 1e-8) << ratio;
  }
}
