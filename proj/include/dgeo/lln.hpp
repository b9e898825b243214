#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgeo/qgauss.hpp"

namespace dgeo {

struct SimConfig {
  double q = 1.5;
  int d = 1;
  Eigen::VectorXd v;
  Variant variant = Variant::identity;
  Eigen::MatrixXd S;  // empty means I_d; trace_d needs tr S = d
  long k_max = 1000;
  int reps = 100;
  std::uint64_t seed = 42;
  std::vector<double> eps_grid{0.25, 0.5, 1.0};
  int workers = 1;
};

// Throws DomainError on an invalid configuration.
void validate(const SimConfig& cfg);
QGaussParams params(const SimConfig& cfg);

// F_i (b < 0) or F_ij; indices are zero based.
struct StatInfo {
  std::string name;  // F_1, F_12, ...
  int a = 0;
  int b = -1;
  double target = 0.0;     // expectation under iota_1
  bool guaranteed = true;  // false for F_ij on the trace_d variant
};

struct SimReport {
  SimConfig config;
  std::vector<long> checkpoints;  // 1, 10, 100, ..., and k_max
  std::vector<StatInfo> stats;
  std::vector<std::uint64_t> seeds;  // one per rep
  // averages[rep](c, s) = (1/k_c) sum_{m <= k_c} T_s(X_m)
  std::vector<Eigen::MatrixXd> averages;

  double deviation(int rep, int c, int s) const { return averages[rep](c, s) - stats[s].target; }
};

std::vector<long> checkpoints(long k_max);
std::uint64_t rep_seed(std::uint64_t seed, int rep);

// Reps run on cfg.workers threads; the result does not depend on that count.
SimReport run_lln(const SimConfig& cfg);

struct ChebyshevBounds {
  double bound_F = 0.0;
  double bound_FF = 0.0;
};

// Fourth-moment bound for F_i and second-moment bound for F_ij after k steps.
ChebyshevBounds chebyshev_bounds(const SimConfig& cfg, long k, double eps, int i = 0, int j = 0);

struct Wilson {
  double lo = 0.0;
  double hi = 1.0;
};

Wilson wilson_interval(long successes, long trials, double z);
inline constexpr double kWilsonZ99 = 2.5758293035489004;

struct BoundCell {
  std::string stat;
  long k = 0;
  double eps = 0.0;
  long exceed = 0;
  int reps = 0;
  double freq = 0.0;
  Wilson ci;
  double bound = 0.0;
  bool guaranteed = true;
  bool pass = false;  // ci.lo <= bound
};

// Needs at least 100 reps.
std::vector<BoundCell> verify_bounds(const SimReport& report);
std::vector<BoundCell> verify_bounds(const SimConfig& cfg);

struct SummabilityRow {
  long k = 0;
  double term = 0.0;
  double partial = 0.0;
  double scaled = 0.0;  // k^2 * term
};

struct Summability {
  double eps = 0.0;
  std::vector<SummabilityRow> rows;  // at log spaced k
  double relative_change = 0.0;      // last decade change of the partial sum
  bool summable = false;             // relative_change <= 1e-3
};

// Partial sums of bound_F for F_1 over k = 1..k_max.
Summability borel_cantelli_summability(const SimConfig& cfg, double eps, long k_max = 100000);

// Median over reps of |avg_k - target| at each checkpoint.
std::vector<double> median_deviation(const SimReport& report, int stat);
bool nonincreasing(const std::vector<double>& xs);

}  // namespace dgeo
