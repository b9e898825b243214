#include "dgeo/lln.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "dgeo/elliptical.hpp"
#include "dgeo/errors.hpp"

namespace dgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

std::vector<StatInfo> statistics(const SimConfig& cfg) {
  const QGaussParams p = params(cfg);
  std::vector<StatInfo> out;
  for (int i = 0; i < cfg.d; ++i)
    out.push_back({"F_" + std::to_string(i + 1), i, -1, moments(p, i, i).mean, true});
  if (cfg.variant == Variant::trace_d) {
    for (int i = 0; i < cfg.d; ++i)
      for (int j = i; j < cfg.d; ++j)
        out.push_back({"F_" + std::to_string(i + 1) + std::to_string(j + 1), i, j, moments(p, i, j).pair_mean,
                       false});
  }
  return out;
}

MatrixXd simulate_rep(const EllipticalKernel& f, const std::vector<StatInfo>& stats,
                      const std::vector<long>& marks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EllipticalSampler sampler(f);
  sampler.reset(rng);
  std::vector<Kahan> acc(stats.size());
  MatrixXd out(marks.size(), stats.size());
  std::size_t c = 0;
  for (long m = 1; c < marks.size(); ++m) {
    const VectorXd x = sampler.next(rng);
    for (std::size_t s = 0; s < stats.size(); ++s)
      acc[s].add(stats[s].b < 0 ? x[stats[s].a] : x[stats[s].a] * x[stats[s].b]);
    if (m == marks[c]) {
      for (std::size_t s = 0; s < stats.size(); ++s) out(c, s) = acc[s].sum / static_cast<double>(m);
      ++c;
    }
  }
  return out;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.variant == Variant::full) throw DomainError("simulation variant must be identity or trace_d");
  if (cfg.d < 1) throw DomainError("d must be positive");
  if (cfg.v.size() != cfg.d) throw DomainError("v must have length d");
  if (cfg.k_max < 1) throw DomainError("k_max must be at least 1");
  if (cfg.reps < 1) throw DomainError("reps must be at least 1");
  if (cfg.workers < 1) throw DomainError("workers must be at least 1");
  for (double e : cfg.eps_grid)
    if (!(e > 0)) throw DomainError("eps values must be positive");
  params(cfg);
}

QGaussParams params(const SimConfig& cfg) {
  const MatrixXd S = cfg.S.size() == 0 ? MatrixXd::Identity(cfg.d, cfg.d) : cfg.S;
  return make_params(cfg.q, cfg.v, S, cfg.variant);
}

std::vector<long> checkpoints(long k_max) {
  std::vector<long> out{1};
  if (k_max == 1) return out;
  for (long k = 10; k < k_max; k *= 10) out.push_back(k);
  out.push_back(k_max);
  return out;
}

std::uint64_t rep_seed(std::uint64_t seed, int rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep)};
  std::uint32_t w[2];
  seq.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

SimReport run_lln(const SimConfig& cfg) {
  validate(cfg);
  SimReport r;
  r.config = cfg;
  r.checkpoints = checkpoints(cfg.k_max);
  r.stats = statistics(cfg);
  r.seeds.resize(cfg.reps);
  for (int i = 0; i < cfg.reps; ++i) r.seeds[i] = rep_seed(cfg.seed, i);
  r.averages.resize(cfg.reps);

  const EllipticalKernel f = kernel(repetition(params(cfg), 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < cfg.reps; i = next++) {
      try {
        r.averages[i] = simulate_rep(f, r.stats, r.checkpoints, r.seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::min(cfg.workers, cfg.reps);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return r;
}

ChebyshevBounds chebyshev_bounds(const SimConfig& cfg, long k, double eps, int i, int j) {
  if (k < 1 || !(eps > 0)) throw DomainError("bounds need k >= 1 and eps > 0");
  const Moments m = moments(params(cfg), i, j);
  const double kk = static_cast<double>(k);
  ChebyshevBounds b;
  const double e2 = eps * eps;
  b.bound_F = (m.fourth + 3.0 * (kk - 1.0) * m.cross) / (kk * kk * kk * e2 * e2);
  b.bound_FF = (m.pair_var + (kk - 1.0) * m.pair_cross) / (kk * e2);
  return b;
}

Wilson wilson_interval(long successes, long trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials) throw DomainError("invalid binomial counts");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<BoundCell> verify_bounds(const SimReport& report) {
  const SimConfig& cfg = report.config;
  if (cfg.reps < 100) throw DomainError("bound verification needs at least 100 reps");
  std::vector<BoundCell> out;
  for (std::size_t s = 0; s < report.stats.size(); ++s) {
    const StatInfo& st = report.stats[s];
    for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
      const long k = report.checkpoints[c];
      for (double eps : cfg.eps_grid) {
        BoundCell cell;
        cell.stat = st.name;
        cell.k = k;
        cell.eps = eps;
        cell.reps = cfg.reps;
        for (int r = 0; r < cfg.reps; ++r)
          if (std::abs(report.deviation(r, static_cast<int>(c), static_cast<int>(s))) > eps) ++cell.exceed;
        cell.freq = static_cast<double>(cell.exceed) / cfg.reps;
        cell.ci = wilson_interval(cell.exceed, cfg.reps, kWilsonZ99);
        const ChebyshevBounds b = st.b < 0 ? chebyshev_bounds(cfg, k, eps, st.a, st.a)
                                           : chebyshev_bounds(cfg, k, eps, st.a, st.b);
        cell.bound = st.b < 0 ? b.bound_F : b.bound_FF;
        cell.guaranteed = st.guaranteed;
        cell.pass = cell.ci.lo <= cell.bound;
        out.push_back(cell);
      }
    }
  }
  return out;
}

std::vector<BoundCell> verify_bounds(const SimConfig& cfg) { return verify_bounds(run_lln(cfg)); }

Summability borel_cantelli_summability(const SimConfig& cfg, double eps, long k_max) {
  validate(cfg);
  if (k_max < 10) throw DomainError("summability needs k_max >= 10");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const Moments m = moments(params(cfg), 0, 0);
  const double e4 = std::pow(eps, 4);
  Summability out;
  out.eps = eps;
  const std::vector<long> marks = checkpoints(k_max);
  Kahan partial;
  double previous_decade = 0.0;
  std::size_t c = 0;
  for (long k = 1; k <= k_max; ++k) {
    const double kk = static_cast<double>(k);
    const double term = (m.fourth + 3.0 * (kk - 1.0) * m.cross) / (kk * kk * kk * e4);
    partial.add(term);
    if (k == marks[c]) {
      out.rows.push_back({k, term, partial.sum, kk * kk * term});
      if (c + 1 < marks.size()) previous_decade = partial.sum;
      ++c;
    }
  }
  out.relative_change = (partial.sum - previous_decade) / partial.sum;
  out.summable = out.relative_change <= 1e-3;
  return out;
}

std::vector<double> median_deviation(const SimReport& report, int stat) {
  std::vector<double> out;
  const int reps = static_cast<int>(report.averages.size());
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    std::vector<double> dev(reps);
    for (int r = 0; r < reps; ++r) dev[r] = std::abs(report.deviation(r, static_cast<int>(c), stat));
    auto mid = dev.begin() + reps / 2;
    std::nth_element(dev.begin(), mid, dev.end());
    double med = *mid;
    if (reps % 2 == 0) med = 0.5 * (med + *std::max_element(dev.begin(), mid));
    out.push_back(med);
  }
  return out;
}

bool nonincreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) return false;
  return true;
}

}  // namespace dgeo
