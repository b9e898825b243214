#include "dgeo/discrete_family.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dgeo/errors.hpp"
#include "dgeo/roots.hpp"

namespace dgeo {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Pointwise gauge quantities at a normalized density.
struct State {
  Normalized n;
  VectorXd chi;      // 1/ell'(p)
  VectorXd chichi;   // chi chi'(p) = -ell''/ell'^3
  VectorXd tau;      // tau(p)
  VectorXd dtau;     // tau'(p)
  VectorXd eta;      // grad psi
  double chi_mass = 0.0;
};

State state(const DiscreteFamily& fam, const VectorXd& theta) {
  State s;
  s.n = normalize(fam, theta);
  const int m = fam.size();
  s.chi.resize(m);
  s.chichi.resize(m);
  s.tau.resize(m);
  s.dtau.resize(m);
  for (int x = 0; x < m; ++x) {
    const double p = s.n.p[x];
    Jet e = fam.gauge.ell.expand(p);
    const double l1 = e.derivative(1), l2 = e.derivative(2);
    s.chi[x] = 1.0 / l1;
    s.chichi[x] = -l2 / (l1 * l1 * l1);
    Jet t = fam.gauge.tau.expand(p);
    s.tau[x] = t.c[0];
    s.dtau[x] = t.c[1];
  }
  VectorXd w = s.chi.cwiseProduct(fam.weights);
  s.chi_mass = w.sum();
  s.eta = fam.T * w / s.chi_mass;
  return s;
}

void require_in_I(const DiscreteFamily& fam, const VectorXd& p, const char* what) {
  if (p.size() != fam.size()) throw DomainError(std::string(what) + ": wrong length");
  for (int i = 0; i < p.size(); ++i)
    if (!fam.gauge.I.contains(p[i]))
      throw DomainError(std::string(what) + ": value outside " + fam.gauge.I.str());
}

double sup_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

bool DiscreteFamily::in_box(const VectorXd& theta) const {
  if (theta.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (theta[i] < theta_box(i, 0) || theta[i] > theta_box(i, 1)) return false;
  return true;
}

void validate(const DiscreteFamily& fam) {
  const int m = fam.size(), n = fam.dim();
  if (m < 2) throw InvariantError("sample space needs at least two points");
  if (fam.weights.size() != m) throw InvariantError("weights length differs from |X|");
  if (fam.c.size() != m) throw InvariantError("c length differs from |X|");
  for (int i = 0; i < m; ++i)
    if (!(fam.weights[i] > 0) || !std::isfinite(fam.weights[i]))
      throw InvariantError("weights must be positive and finite");
  if (!fam.T.allFinite() || !fam.c.allFinite()) throw InvariantError("T and c must be finite");
  if (n < 1 || n > m - 1) throw InvariantError("need 1 <= n <= |X| - 1 statistics");
  if (fam.theta_box.rows() != n || fam.theta_box.cols() != 2)
    throw InvariantError("theta_box must be n x 2");
  for (int i = 0; i < n; ++i)
    if (!(fam.theta_box(i, 0) < fam.theta_box(i, 1))) throw InvariantError("theta_box rows need lo < hi");
  MatrixXd stacked(n + 1, m);
  stacked.topRows(n) = fam.T;
  stacked.row(n).setOnes();
  Eigen::JacobiSVD<MatrixXd> svd(stacked);
  const VectorXd sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  if (rank < n + 1) throw InvariantError("rows of T and the constant row are linearly dependent");
}

DiscreteFamily make_family(VectorXd weights, GaugeTriple gauge, MatrixXd T, VectorXd c) {
  DiscreteFamily f{std::move(weights), std::move(gauge), std::move(T), std::move(c), {}};
  f.theta_box.resize(f.T.rows(), 2);
  f.theta_box.col(0).setConstant(-kInf);
  f.theta_box.col(1).setConstant(kInf);
  validate(f);
  return f;
}

Normalized normalize(const DiscreteFamily& fam, const VectorXd& theta) {
  if (theta.size() != fam.dim()) throw DomainError("theta has wrong dimension");
  if (!theta.allFinite()) throw DomainError("theta must be finite");
  if (!fam.in_box(theta)) throw DomainError("theta outside theta_box");
  const GaugeTriple& g = fam.gauge;
  const VectorXd u = fam.T.transpose() * theta - fam.c;
  const VectorXd& mu = fam.weights;
  auto mass = [&](double psi) {
    double acc = 0.0;
    for (int x = 0; x < u.size(); ++x) acc += exp_htau(g, u[x] - psi) * mu[x];
    return acc;
  };
  auto dmass = [&](double psi) {
    double acc = 0.0;
    for (int x = 0; x < u.size(); ++x) {
      const double p = exp_htau(g, u[x] - psi);
      if (!(p > 0) || !std::isfinite(p)) return std::numeric_limits<double>::quiet_NaN();
      acc -= mu[x] / g.ell.d1(p);
    }
    return acc;
  };
  const double uniform = 1.0 / mu.sum();
  double psi0 = u.maxCoeff();
  if (g.I.contains(uniform)) psi0 -= g.ell(uniform);
  double psi;
  try {
    psi = solve_monotone(mass, dmass, 1.0, Interval::real_line(), psi0, false, RootOptions{1e-15});
  } catch (const DomainError& e) {
    throw InfeasibleError(std::string("no normalizing psi: ") + e.what());
  }
  if (!std::isfinite(psi)) throw NumericError("non-finite psi");
  const double m = mass(psi);
  if (!std::isfinite(m)) throw NumericError("non-finite mass");
  if (std::abs(m - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "mass cannot reach 1 inside I=" << g.I.str() << " (closest " << m << ")";
    throw InfeasibleError(os.str());
  }
  Normalized out;
  out.psi = psi;
  out.p.resize(u.size());
  for (int x = 0; x < u.size(); ++x) {
    const double p = exp_htau(g, u[x] - psi);
    if (!g.I.contains(p)) {
      std::ostringstream os;
      os << "density value " << p << " at x=" << x << " leaves I=" << g.I.str();
      throw InfeasibleError(os.str());
    }
    out.p[x] = p;
  }
  return out;
}

double divergence(const DiscreteFamily& fam, const VectorXd& p, const VectorXd& p2) {
  require_in_I(fam, p, "divergence");
  require_in_I(fam, p2, "divergence");
  double acc = 0.0;
  for (int x = 0; x < p.size(); ++x) acc += d_htau(fam.gauge, p[x], p2[x]) * fam.weights[x];
  return acc;
}

double entropy(const DiscreteFamily& fam, const VectorXd& p) {
  require_in_I(fam, p, "entropy");
  double acc = 0.0;
  for (int x = 0; x < p.size(); ++x) acc -= fam.gauge.h(fam.gauge.tau(p[x])) * fam.weights[x];
  return acc;
}

double total(const DiscreteFamily& fam, const VectorXd& p, const ScalarFn& f) {
  double acc = 0.0;
  for (int x = 0; x < p.size(); ++x) acc += f(p[x]) * fam.weights[x];
  return acc;
}

VectorXd moment(const DiscreteFamily& fam, const VectorXd& p, const ScalarFn& f) {
  VectorXd w(p.size());
  for (int x = 0; x < p.size(); ++x) w[x] = f(p[x]) * fam.weights[x];
  return fam.T * w;
}

VectorXd psi_gradient(const DiscreteFamily& fam, const VectorXd& theta) {
  return state(fam, theta).eta;
}

MatrixXd psi_hessian(const DiscreteFamily& fam, const VectorXd& theta) {
  State s = state(fam, theta);
  MatrixXd C = fam.T.colwise() - s.eta;
  VectorXd w = s.chichi.cwiseProduct(fam.weights);
  return C * w.asDiagonal() * C.transpose() / s.chi_mass;
}

MatrixXd metric(const DiscreteFamily& fam, const VectorXd& theta) {
  State s = state(fam, theta);
  MatrixXd C = fam.T.colwise() - s.eta;
  VectorXd w = s.dtau.cwiseProduct(s.chi).cwiseProduct(fam.weights);
  return C * w.asDiagonal() * C.transpose();
}

std::vector<MatrixXd> connection_raw(const DiscreteFamily& fam, const VectorXd& theta) {
  State s = state(fam, theta);
  MatrixXd C = fam.T.colwise() - s.eta;
  MatrixXd H = C * s.chichi.cwiseProduct(fam.weights).asDiagonal() * C.transpose() / s.chi_mass;
  VectorXd dI = C * s.dtau.cwiseProduct(s.chi).cwiseProduct(fam.weights);
  const int n = fam.dim();
  std::vector<MatrixXd> out(n, MatrixXd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i](j, k) = -H(i, j) * dI[k];
  return out;
}

double hessian_potential(const DiscreteFamily& fam, const VectorXd& theta) {
  Normalized n = normalize(fam, theta);
  const GaugeTriple& g = fam.gauge;
  double s_star = 0.0, tau_mass = 0.0;
  for (int x = 0; x < n.p.size(); ++x) {
    const double t = g.tau(n.p[x]);
    s_star += (g.h(t) - t * g.ell(n.p[x])) * fam.weights[x];
    tau_mass += t * fam.weights[x];
  }
  return -s_star + n.psi * tau_mass;
}

MatrixXd fd_hessian(const std::function<double(const VectorXd&)>& f, const VectorXd& x) {
  const int n = static_cast<int>(x.size());
  auto at = [&](double scale) {
    MatrixXd H(n, n);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
      const double hi = scale * std::max(1.0, std::abs(x[i]));
      VectorXd e = VectorXd::Zero(n);
      e[i] = hi;
      H(i, i) = (f(x + e) - 2 * f0 + f(x - e)) / (hi * hi);
      for (int j = 0; j < i; ++j) {
        const double hj = scale * std::max(1.0, std::abs(x[j]));
        VectorXd d = VectorXd::Zero(n);
        d[j] = hj;
        H(i, j) = H(j, i) = (f(x + e + d) - f(x + e - d) - f(x - e + d) + f(x - e - d)) / (4 * hi * hj);
      }
    }
    return H;
  };
  const MatrixXd coarse = at(1e-4), fine = at(0.5e-4);
  return (4 * fine - coarse) / 3;
}

double tau_mass_spread(const DiscreteFamily& fam, const VectorXd& theta) {
  const ScalarFn& tau = fam.gauge.tau;
  double lo = kInf, hi = -kInf;
  auto probe = [&](const VectorXd& th) {
    if (!fam.in_box(th)) return;
    try {
      const double v = total(fam, normalize(fam, th).p, tau);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    } catch (const InfeasibleError&) {
    }
  };
  probe(theta);
  for (int i = 0; i < fam.dim(); ++i) {
    for (double step : {0.1, -0.1, 0.5, -0.5}) {
      VectorXd th = theta;
      th[i] += step;
      probe(th);
    }
  }
  return hi - lo;
}

GeometryReport hessian_check(const DiscreteFamily& fam, const VectorXd& theta) {
  GeometryReport r;
  r.theta = theta;
  r.tau_mass_spread = tau_mass_spread(fam, theta);
  if (r.tau_mass_spread > 1e-8) {
    r.status = CheckStatus::not_applicable;
    std::ostringstream os;
    os << "I_tau varies by " << r.tau_mass_spread
       << " across probe points; the Hessian potential needs I_tau constant on the family";
    r.message = os.str();
    return r;
  }
  r.g = metric(fam, theta);
  r.christoffel_raw = connection_raw(fam, theta);
  r.potential = hessian_potential(fam, theta);
  r.hess_potential = fd_hessian([&](const VectorXd& th) { return hessian_potential(fam, th); }, theta);
  r.max_defect = (r.hess_potential - r.g).cwiseAbs().maxCoeff();
  for (const auto& m : r.christoffel_raw) r.max_connection = std::max(r.max_connection, m.cwiseAbs().maxCoeff());
  return r;
}

double canonical_divergence_check(const DiscreteFamily& fam, const VectorXd& theta,
                                  const VectorXd& theta2) {
  const double spread = std::max(tau_mass_spread(fam, theta), tau_mass_spread(fam, theta2));
  if (spread > 1e-8) throw NotApplicable("I_tau is not constant on the family");
  State s = state(fam, theta);
  Normalized n2 = normalize(fam, theta2);
  const VectorXd grad = fam.T * s.tau.cwiseProduct(fam.weights);
  const double lhs = hessian_potential(fam, theta2) - hessian_potential(fam, theta) +
                     (theta - theta2).dot(grad);
  return std::abs(lhs - divergence(fam, s.n.p, n2.p));
}

bool is_conformal(const GaugeTriple& g, double tol) {
  const auto grid = log_grid(g.I, 64);
  double lo = kInf, hi = -kInf;
  for (double t : grid) {
    const double r = g.tau(t) * g.ell.d1(t);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo <= tol * std::max(std::abs(lo), std::abs(hi));
}

double conformal_check(const DiscreteFamily& fam, const VectorXd& theta, const VectorXd& theta2) {
  if (!is_conformal(fam.gauge)) throw NotApplicable("tau/chi is not constant on I");
  State s = state(fam, theta);
  Normalized n2 = normalize(fam, theta2);
  const double tau_mass = s.tau.dot(fam.weights);
  const double lhs = n2.psi - s.n.psi + (theta - theta2).dot(s.eta);
  return std::abs(lhs - divergence(fam, s.n.p, n2.p) / tau_mass);
}

Projection pythagorean_project(const DiscreteFamily& fam, const VectorXd& rho, std::uint64_t seed) {
  require_in_I(fam, rho, "projection source");
  const ScalarFn& tau = fam.gauge.tau;
  const VectorXd target = moment(fam, rho, tau);
  const double tau_rho = total(fam, rho, tau);
  const int n = fam.dim();

  auto residual = [&](const VectorXd& th, State& s) {
    s = state(fam, th);
    return VectorXd(fam.T * s.tau.cwiseProduct(fam.weights) - target);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  constexpr int kRestarts = 10, kIter = 100;
  constexpr double kTol = 1e-12, kAccept = 1e-10;
  Projection best;
  best.residual = kInf;
  for (int start = 0; start <= kRestarts; ++start) {
    VectorXd th = VectorXd::Zero(n);
    if (start > 0)
      for (int i = 0; i < n; ++i) th[i] = N01(rng);
    for (int i = 0; i < n; ++i) th[i] = std::clamp(th[i], fam.theta_box(i, 0), fam.theta_box(i, 1));
    State s;
    VectorXd r;
    try {
      r = residual(th, s);
    } catch (const std::exception&) {
      continue;
    }
    int it = 0;
    for (; it < kIter && sup_norm(r) > kTol; ++it) {
      MatrixXd C = fam.T.colwise() - s.eta;
      MatrixXd J = fam.T * s.dtau.cwiseProduct(s.chi).cwiseProduct(fam.weights).asDiagonal() * C.transpose();
      VectorXd step = J.fullPivLu().solve(-r);
      if (!step.allFinite()) break;
      double t = 1.0;
      bool moved = false;
      while (t >= 1e-8) {
        VectorXd cand = th + t * step;
        State cs;
        try {
          if (fam.in_box(cand)) {
            VectorXd rc = residual(cand, cs);
            if (rc.norm() <= (1 - 1e-4 * t) * r.norm()) {
              th = cand;
              r = rc;
              s = cs;
              moved = true;
              break;
            }
          }
        } catch (const std::exception&) {
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    const double res = sup_norm(r);
    if (res < best.residual) {
      best.theta = th;
      best.p = s.n.p;
      best.psi = s.n.psi;
      best.residual = res;
      best.tau_residual = std::abs(s.tau.dot(fam.weights) - tau_rho);
      best.iterations = it;
      best.restarts = start;
    }
    if (res <= kTol) break;
  }
  if (!(best.residual <= kAccept))
    throw ConvergenceError("projection failed: moment constraints may be infeasible (residual " +
                           std::to_string(best.residual) + ")");
  return best;
}

EntropyMax entropy_max_check(const DiscreteFamily& fam, const VectorXd& rho) {
  if (fam.c.cwiseAbs().maxCoeff() != 0.0) throw DomainError("entropy maximality requires c = 0");
  EntropyMax r;
  r.projection = pythagorean_project(fam, rho);
  r.entropy_rho = entropy(fam, rho);
  r.entropy_star = entropy(fam, r.projection.p);
  r.holds = r.entropy_star >= r.entropy_rho - 1e-10;
  r.equality = std::abs(r.entropy_star - r.entropy_rho) <= 1e-10;
  return r;
}

DiscreteFamily affine_reparam(const DiscreteFamily& fam, const MatrixXd& A, const VectorXd& v1,
                              const VectorXd& v2) {
  const int n = fam.dim();
  if (A.rows() != n || A.cols() != n || v1.size() != n || v2.size() != n)
    throw DomainError("affine reparametrization has wrong shapes");
  if (!Eigen::FullPivLU<MatrixXd>(A).isInvertible()) throw DomainError("A is singular");
  MatrixXd T2 = A.transpose() * fam.T;
  T2.colwise() += v2;
  VectorXd c2 = fam.c - fam.T.transpose() * v1;
  return make_family(fam.weights, fam.gauge, T2, c2);
}

AffineCheck affine_reparam_check(const DiscreteFamily& fam, const MatrixXd& A, const VectorXd& v1,
                                 const VectorXd& v2, const MatrixXd& grid) {
  DiscreteFamily fam2 = affine_reparam(fam, A, v1, v2);
  AffineCheck r;
  for (int j = 0; j < grid.cols(); ++j) {
    const VectorXd th2 = grid.col(j);
    const VectorXd th1 = A * th2 + v1;
    Normalized n1 = normalize(fam, th1), n2 = normalize(fam2, th2);
    r.density_defect = std::max(r.density_defect, sup_norm(n1.p - n2.p));
    r.psi_defect = std::max(r.psi_defect, std::abs(n2.psi - (n1.psi + th2.dot(v2))));
  }
  return r;
}

}  // namespace dgeo
