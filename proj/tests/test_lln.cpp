#include <gtest/gtest.h>

#include <cmath>

#include "dgeo/errors.hpp"
#include "dgeo/lln.hpp"
#include "oracles.hpp"

using namespace dgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SimConfig config(double q, double v, long k_max, int reps, std::uint64_t seed = 42) {
  SimConfig c;
  c.q = q;
  c.d = 1;
  c.v = VectorXd::Constant(1, v);
  c.k_max = k_max;
  c.reps = reps;
  c.seed = seed;
  return c;
}

double t_density(double x, double nu, double scale) { return oracle::student_t_pdf(x, nu, scale); }

}  // namespace

TEST(Checkpoints, LogSpaced) {
  EXPECT_EQ(checkpoints(1000), (std::vector<long>{1, 10, 100, 1000}));
  EXPECT_EQ(checkpoints(2500), (std::vector<long>{1, 10, 100, 1000, 2500}));
  EXPECT_EQ(checkpoints(1), (std::vector<long>{1}));
}

TEST(Wilson, MatchesReferenceValues) {
  // statsmodels proportion_confint(..., alpha=0.01, method="wilson")
  Wilson w = wilson_interval(5, 100, kWilsonZ99);
  EXPECT_NEAR(w.lo, 0.016848316042600647, 1e-14);
  EXPECT_NEAR(w.hi, 0.13915030290164004, 1e-14);
  w = wilson_interval(0, 500, kWilsonZ99);
  EXPECT_NEAR(w.lo, 0.0, 1e-15);
  EXPECT_NEAR(w.hi, 0.013096011833243784, 1e-14);
  w = wilson_interval(500, 500, kWilsonZ99);
  EXPECT_NEAR(w.lo, 0.9869039881667563, 1e-14);
  EXPECT_EQ(w.hi, 1.0);
}

TEST(ChebyshevBounds, Scaling) {
  const SimConfig c = config(1.5, 0.0, 100, 1);
  const auto a = chebyshev_bounds(c, 100, 0.5), b = chebyshev_bounds(c, 100, 0.25);
  EXPECT_NEAR(b.bound_F / a.bound_F, 16.0, 1e-12);
  EXPECT_NEAR(b.bound_FF / a.bound_FF, 4.0, 1e-12);
  // k^2 bound_F = 3 E(Y1^2 Y2^2)/eps^4 + (E Y^4 - 3 E(Y1^2 Y2^2))/(k eps^4), so it decays like 1/k^2
  const Moments m = moments(params(c), 0, 0);
  const double lim = 3 * m.cross / std::pow(0.5, 4);
  for (long k : {10L, 100L, 1000L, 10000L, 100000L}) {
    const double scaled = chebyshev_bounds(c, k, 0.5).bound_F * double(k) * double(k);
    EXPECT_NEAR(scaled, lim + (m.fourth - 3 * m.cross) / (k * std::pow(0.5, 4)), 1e-12 * lim);
  }
}

TEST(ChebyshevBounds, MatchQuadratureRecomputation) {
  const SimConfig c = config(1.5, 0.0, 100, 1);
  const RepetitionLaw one = repetition(params(c), 1), two = repetition(params(c), 2);
  auto w = [](double poly, double dens) { return dens == 0.0 ? 0.0 : poly * dens; };
  const double mean = oracle::whole_line([&](double t) { return w(t, joint_density(one, VectorXd::Constant(1, t))); });
  const double m2 = oracle::whole_line([&](double t) { return w(t * t, joint_density(one, VectorXd::Constant(1, t))); });
  const double y4 = oracle::whole_line(
      [&](double t) { return w(std::pow(t - mean, 4), joint_density(one, VectorXd::Constant(1, t))); });
  auto plane = [&](auto f) {
    return oracle::whole_line([&](double x) { return oracle::whole_line([&](double y) { return f(x, y); }, 1e-11); },
                              1e-10);
  };
  auto rho2 = [&](double x, double y) {
    VectorXd z(2);
    z << x, y;
    return joint_density(two, z);
  };
  const double y1y2 = plane([&](double x, double y) { return w(std::pow(x - mean, 2) * std::pow(y - mean, 2), rho2(x, y)); });
  const double f4 = oracle::whole_line([&](double t) { return w(std::pow(t, 4), joint_density(one, VectorXd::Constant(1, t))); });
  const double ff = plane([&](double x, double y) { return w(x * x * y * y, rho2(x, y)); });

  const long k = 100;
  const double eps = 0.5;
  const double bF = (y4 + 3.0 * (k - 1) * y1y2) / (std::pow(k, 3) * std::pow(eps, 4));
  const double bFF = ((f4 - m2 * m2) + (k - 1) * (ff - m2 * m2)) / (k * eps * eps);
  const auto b = chebyshev_bounds(c, k, eps);
  EXPECT_NEAR(b.bound_F / bF, 1.0, 1e-6);
  EXPECT_NEAR(b.bound_FF / bFF, 1.0, 1e-6);
}

TEST(ChebyshevBounds, TLawFourthMoments) {
  // nu = 7 at q = 1.5, d = 1; E Y^4 = 3 s^4 nu^2/((nu-2)(nu-4)), and the pair shares the radius:
  // E Y1^2 Y2^2 = s^4 nu^2/((nu-2)(nu-4)).
  const SimConfig c = config(1.5, 0.0, 100, 1);
  const Moments m = moments(params(c), 0, 0);
  const double nu = 7.0, s2 = m.scale2;
  const double ref = s2 * s2 * nu * nu / ((nu - 2) * (nu - 4));
  EXPECT_NEAR(m.fourth, 3 * ref, 1e-12 * ref);
  EXPECT_NEAR(m.cross, ref, 1e-12 * ref);
  // the t density with that scale is the k = 1 law
  const RepetitionLaw one = repetition(params(c), 1);
  for (double x : {-2.0, 0.0, 0.7, 5.0})
    EXPECT_NEAR(joint_density(one, VectorXd::Constant(1, x)), t_density(x, nu, std::sqrt(s2)), 1e-13);
}

TEST(RunLln, TargetsAndStatistics) {
  SimReport r = run_lln(config(1.5, 0.0, 10, 2));
  ASSERT_EQ(r.stats.size(), 1u);
  EXPECT_EQ(r.stats[0].name, "F_1");
  EXPECT_EQ(r.stats[0].target, 0.0);
  EXPECT_TRUE(r.stats[0].guaranteed);

  SimConfig c;
  c.q = 1.3;
  c.d = 2;
  c.v = VectorXd::Zero(2);
  c.variant = Variant::trace_d;
  c.S = MatrixXd::Identity(2, 2);
  c.S(0, 0) = 1.5;
  c.S(1, 1) = 0.5;
  c.k_max = 10;
  c.reps = 2;
  r = run_lln(c);
  ASSERT_EQ(r.stats.size(), 5u);
  EXPECT_EQ(r.stats[2].name, "F_11");
  EXPECT_EQ(r.stats[3].name, "F_12");
  EXPECT_FALSE(r.stats[3].guaranteed);
  EXPECT_NEAR(r.stats[3].target, 0.0, 1e-15);
  EXPECT_GT(r.stats[2].target, 0.0);
}

TEST(RunLln, RejectsInvalidConfig) {
  SimConfig c = config(1.5, 0.0, 10, 2);
  c.variant = Variant::full;
  EXPECT_THROW(run_lln(c), DomainError);
  c = config(0.5, 0.0, 10, 2);
  EXPECT_THROW(run_lln(c), DomainError);
  c = config(1.5, 0.0, 0, 2);
  EXPECT_THROW(run_lln(c), DomainError);
  c = config(1.5, 0.0, 10, 2);
  c.eps_grid = {0.0};
  EXPECT_THROW(run_lln(c), DomainError);
}

TEST(RunLln, DeterministicAcrossWorkerCounts) {
  SimConfig c = config(1.5, 2.0, 1000, 16, 7);
  const SimReport a = run_lln(c);
  c.workers = 4;
  const SimReport b = run_lln(c);
  ASSERT_EQ(a.averages.size(), b.averages.size());
  for (std::size_t i = 0; i < a.averages.size(); ++i) EXPECT_EQ(a.averages[i], b.averages[i]);
  EXPECT_EQ(a.seeds, b.seeds);
  c.seed = 8;
  EXPECT_NE(run_lln(c).averages[0], a.averages[0]);
}

TEST(RunLln, PrefixLawMatchesFirstMarginal) {
  // X_1 across reps is a draw from iota_1(p)
  const SimConfig c = config(1.5, 0.3, 1, 4000, 3);
  const SimReport r = run_lln(c);
  const Moments m = moments(params(c), 0, 0);
  VectorXd x(c.reps);
  for (int i = 0; i < c.reps; ++i) x[i] = r.averages[i](0, 0);
  const double n = c.reps;
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (n - 1);
  EXPECT_LT(std::abs(mean - 0.3), 4 * std::sqrt(m.second / n));
  // var of the sample variance is (mu4 - sigma^4)/n to leading order
  EXPECT_LT(std::abs(var - m.second), 4 * std::sqrt((m.fourth - m.second * m.second) / n));
}

TEST(RunLln, GaussianCaseIsClassicalLln) {
  const SimConfig c = config(1.0, 0.0, 10000, 100, 11);
  const SimReport r = run_lln(c);
  const double sigma = std::sqrt(moments(params(c), 0, 0).second);
  EXPECT_NEAR(sigma * sigma, 0.5, 1e-15);
  const int last = static_cast<int>(r.checkpoints.size()) - 1;
  ASSERT_EQ(r.checkpoints[last], 10000);
  int inside = 0;
  for (int i = 0; i < c.reps; ++i)
    if (std::abs(r.deviation(i, last, 0)) < 4 * sigma / 100.0) ++inside;
  EXPECT_GE(inside, 95);
}

TEST(RunLln, MedianDeviationDecays) {
  const SimConfig c = config(1.5, 2.0, 10000, 100, 42);
  const SimReport r = run_lln(c);
  EXPECT_EQ(r.stats[0].target, 2.0);
  std::vector<double> med = median_deviation(r, 0);
  // checkpoints 1, 10, 100, 1000, 10000
  ASSERT_EQ(med.size(), 5u);
  EXPECT_TRUE(nonincreasing({med[2], med[3], med[4]}));
}

TEST(MedianDeviation, EvenAndOdd) {
  EXPECT_TRUE(nonincreasing({3, 2, 2, 1}));
  EXPECT_FALSE(nonincreasing({3, 2, 2.5}));
  SimReport r;
  r.checkpoints = {1};
  r.stats = {{"F_1", 0, -1, 0.0, true}};
  for (double v : {4.0, -1.0, 2.0, 3.0}) r.averages.push_back(MatrixXd::Constant(1, 1, v));
  EXPECT_EQ(median_deviation(r, 0)[0], 2.5);
  r.averages.push_back(MatrixXd::Constant(1, 1, -10.0));
  EXPECT_EQ(median_deviation(r, 0)[0], 3.0);
}

TEST(VerifyBounds, AllCellsPass) {
  SimConfig c = config(1.5, 0.0, 1000, 500, 42);
  c.eps_grid = {0.25, 0.5, 1.0};
  const auto cells = verify_bounds(c);
  ASSERT_EQ(cells.size(), 4u * 3u);
  for (const auto& cell : cells) {
    EXPECT_TRUE(cell.pass) << cell.k << " " << cell.eps;
    EXPECT_GE(cell.freq, 0.0);
    EXPECT_LE(cell.freq, 1.0);
    EXPECT_GE(cell.bound, 0.0);
    EXPECT_LE(cell.ci.lo, cell.freq);
    EXPECT_GE(cell.ci.hi, cell.freq);
    if (cell.bound >= 1.0) EXPECT_TRUE(cell.pass);
  }
}

TEST(VerifyBounds, GaussianBaselinePasses) {
  SimConfig c = config(1.0, 1.0, 1000, 200, 5);
  for (const auto& cell : verify_bounds(c)) EXPECT_TRUE(cell.pass) << cell.k << " " << cell.eps;
}

TEST(VerifyBounds, NeedsEnoughReps) { EXPECT_THROW(verify_bounds(config(1.5, 0.0, 10, 50)), DomainError); }

TEST(Summability, PartialSumsConverge) {
  const SimConfig c = config(1.5, 0.0, 10, 1);
  const Summability s = borel_cantelli_summability(c, 0.5, 100000);
  EXPECT_TRUE(s.summable);
  EXPECT_LE(s.relative_change, 1e-3);
  ASSERT_EQ(s.rows.back().k, 100000);
  // terms * k^2 bounded beyond k = 10, and terms decrease
  for (std::size_t i = 2; i < s.rows.size(); ++i) {
    EXPECT_LT(s.rows[i].term, s.rows[i - 1].term);
    EXPECT_LE(s.rows[i].scaled, s.rows[1].scaled * 1.0001);
  }
  // direct summation oracle
  const Moments m = moments(params(c), 0, 0);
  double direct = 0.0;
  for (long k = 100000; k >= 1; --k)
    direct += (m.fourth + 3.0 * (k - 1) * m.cross) / (std::pow(double(k), 3) * std::pow(0.5, 4));
  EXPECT_NEAR(s.rows.back().partial / direct, 1.0, 1e-12);

  const Summability big = borel_cantelli_summability(c, 1.0, 100000);
  EXPECT_LT(big.rows.back().partial, s.rows.back().partial);
}
