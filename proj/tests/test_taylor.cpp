#include <cmath>

#include <gtest/gtest.h>

#include "dgeo/roots.hpp"
#include "dgeo/scalar_fn.hpp"
#include "dgeo/taylor.hpp"

using dgeo::Jet;

TEST(Taylor, ExpLogDerivatives) {
  Jet x = Jet::variable(0.7);
  Jet e = exp(x);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(e.derivative(k), std::exp(0.7), 1e-13);
  Jet l = log(x);
  EXPECT_NEAR(l.derivative(1), 1 / 0.7, 1e-14);
  EXPECT_NEAR(l.derivative(3), 2 / std::pow(0.7, 3), 1e-12);
  EXPECT_NEAR(l.derivative(5), 24 / std::pow(0.7, 5), 1e-9);
}

TEST(Taylor, PowQuotientChain) {
  Jet x = Jet::variable(1.3);
  Jet f = pow(x, 2.5) / (x + 1.0);
  // f = x^2.5/(x+1); compare against a hand derivative at order 1 and 2
  const double a = 1.3;
  const double d1 = (2.5 * std::pow(a, 1.5) * (a + 1) - std::pow(a, 2.5)) / ((a + 1) * (a + 1));
  EXPECT_NEAR(f.derivative(1), d1, 1e-13);
  Jet g = exp(log(x) * 2.5) / (x + 1.0);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(f.derivative(k), g.derivative(k), 1e-9 * (1 + std::abs(g.derivative(k))));
}

TEST(Taylor, RevertInvertsSeries) {
  const double x0 = 0.4;
  Jet f = exp(Jet::variable(x0)) + Jet::variable(x0) * 3.0;
  Jet g = revert(f, x0);
  // compose f(g(y0 + d)) must be y0 + d
  std::array<double, 7> a = f.c;
  a[0] = f.c[0];
  Jet gd = g;
  Jet fg = dgeo::compose(a, 6, gd);
  EXPECT_NEAR(fg.c[0], f.c[0], 1e-15);
  EXPECT_NEAR(fg.c[1], 1.0, 1e-13);
  for (int k = 2; k <= 6; ++k) EXPECT_NEAR(fg.c[k], 0.0, 1e-11);
}

TEST(ScalarFn, DerivativesAgreeWithFiniteDifferences) {
  dgeo::ScalarFn f([](const Jet& x) { return x * log(x) + sqrt(x); }, dgeo::Interval::positive());
  for (double x : {0.3, 1.0, 2.7, 9.1}) {
    const double h = 1e-5 * x;
    const double fd1 = (f(x + h) - f(x - h)) / (2 * h);
    const double fd2 = (f.d1(x + h) - f.d1(x - h)) / (2 * h);
    EXPECT_NEAR(f.d1(x), fd1, 1e-5 * std::abs(fd1));
    EXPECT_NEAR(f.d2(x), fd2, 1e-5 * std::abs(fd2));
  }
}

TEST(ScalarFn, FallbacksAreFlaggedReducedAccuracy) {
  auto v = [](double x) { return std::exp(2 * x); };
  auto d1 = [](double x) { return 2 * std::exp(2 * x); };
  auto d2 = [](double x) { return 4 * std::exp(2 * x); };
  auto f = dgeo::ScalarFn::from_derivatives(v, d1, d2, dgeo::Interval::real_line());
  EXPECT_TRUE(f.reduced_accuracy());
  EXPECT_NEAR(f.d1(0.5), 2 * std::exp(1.0), 1e-14);
  EXPECT_NEAR(f.d3(0.5), 8 * std::exp(1.0), 1e-6);
  auto g = dgeo::ScalarFn::from_values(v, dgeo::Interval::real_line());
  EXPECT_TRUE(g.reduced_accuracy());
  EXPECT_NEAR(g.d1(0.5), 2 * std::exp(1.0), 1e-8);
  EXPECT_NEAR(g.d2(0.5), 4 * std::exp(1.0), 1e-5);
}

TEST(ScalarFn, InverseHasInverseDerivatives) {
  dgeo::ScalarFn f([](const Jet& x) { return pow(x, 3.0) + x; }, dgeo::Interval::real_line());
  auto g = dgeo::inverse(f);
  const double y = 10.0;  // x = 2
  EXPECT_NEAR(g(y), 2.0, 1e-13);
  EXPECT_NEAR(g.d1(y), 1.0 / 13.0, 1e-13);
  // (f^{-1})'' = -f''/f'^3
  EXPECT_NEAR(g.d2(y), -12.0 / (13.0 * 13.0 * 13.0), 1e-13);
}

TEST(Roots, MonotoneSolverBracketsAndConverges) {
  auto f = [](double x) { return std::log(x); };
  auto df = [](double x) { return 1 / x; };
  EXPECT_NEAR(dgeo::solve_monotone(f, df, 5.0, dgeo::Interval::positive(), 1.0, true),
              std::exp(5.0), 1e-10);
  EXPECT_NEAR(dgeo::solve_monotone(f, df, -30.0, dgeo::Interval::positive(), 1.0, true),
              std::exp(-30.0), 1e-22);
  auto dec = [](double x) { return -x * x * x; };
  EXPECT_NEAR(dgeo::solve_monotone(dec, {}, 8.0, dgeo::Interval::real_line(), 0.5, false), -2.0,
              1e-12);
  EXPECT_THROW(dgeo::solve_monotone(f, df, 1.0, dgeo::Interval{0.0, 2.0}, 1.0, true),
               std::domain_error);
}
