#include "dgeo/qgauss.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dgeo/errors.hpp"
#include "dgeo/gauge.hpp"
#include "dgeo/quadrature.hpp"

namespace dgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

double logdet_spd(const MatrixXd& S) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw DomainError("matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

bool is_spd(const MatrixXd& S) {
  if (S.rows() != S.cols() || !S.allFinite()) return false;
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
    return false;
  Eigen::LLT<MatrixXd> llt(S);
  return llt.info() == Eigen::Success;
}

void check_hypothesis(double q, int d) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("q-Gaussian families need q >= 1");
  if (d < 1) throw DomainError("dimension must be positive");
  if (!(d * (q - 1.0) < 2.0)) throw DomainError("q-Gaussian families need d(q-1) < 2");
}

VectorXd tile(const VectorXd& v, int k) {
  VectorXd out(v.size() * k);
  for (int m = 0; m < k; ++m) out.segment(m * v.size(), v.size()) = v;
  return out;
}

MatrixXd block_diag(const MatrixXd& S, int k) {
  const int d = static_cast<int>(S.rows());
  MatrixXd out = MatrixXd::Zero(d * k, d * k);
  for (int m = 0; m < k; ++m) out.block(m * d, m * d, d, d) = S;
  return out;
}

// (exp((1-q) L) - 1) / (q - 1), i.e. -ln_q(e^L), with the q -> 1 limit -L
double neg_ln_q_of_exp(double q, double L) {
  if (q == 1.0) return -L;
  return std::expm1((1.0 - q) * L) / (q - 1.0);
}

double stat_value(Statistic s, const VectorXd& x) {
  if (s.a < 0) return 1.0;
  if (s.b < 0) return x[s.a];
  return x[s.a] * x[s.b];
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::identity: return "identity";
    case Variant::trace_d: return "trace_d";
  }
  return "full";
}

Variant variant_from_string(const std::string& s) {
  if (s == "full") return Variant::full;
  if (s == "identity") return Variant::identity;
  if (s == "trace_d") return Variant::trace_d;
  throw DomainError("unknown variant '" + s + "' (expected full, identity or trace_d)");
}

void validate(const QGaussParams& p) {
  const int d = p.d();
  check_hypothesis(p.q, d);
  if (!p.v.allFinite()) throw DomainError("v must be finite");
  if (p.S.rows() != d || p.S.cols() != d) throw DomainError("S must be d x d");
  if (!is_spd(p.S)) throw DomainError("S must be symmetric positive definite");
  if (p.variant == Variant::identity &&
      (p.S - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("variant identity requires S = I");
  if (p.variant == Variant::trace_d && std::abs(p.S.trace() - d) > 1e-12 * d)
    throw DomainError("variant trace_d requires tr S = d");
}

QGaussParams make_params(double q, VectorXd v, MatrixXd S, Variant variant) {
  QGaussParams p{q, std::move(v), std::move(S), variant};
  validate(p);
  return p;
}

QGaussParams make_params(double q, VectorXd v) {
  const int d = static_cast<int>(v.size());
  return make_params(q, std::move(v), MatrixXd::Identity(d, d), Variant::identity);
}

double lambda_q(double q, const MatrixXd& S) {
  const int d = static_cast<int>(S.rows());
  check_hypothesis(q, d);
  if (q == 1.0) return -0.5 * logdet_spd(S / kPi);
  const double r = 1.0 / (q - 1.0);
  const double inner = 0.5 * logdet_spd((q - 1.0) * S / kPi) + std::lgamma(r) - std::lgamma(r - 0.5 * d);
  const double L = 2.0 / (2.0 + d * (1.0 - q)) * inner;
  return neg_ln_q_of_exp(q, L);
}

EllipticalKernel kernel(const QGaussParams& p) {
  EllipticalKernel f;
  f.center = p.v;
  f.M = p.S;
  const double lam = lambda_q(p.q, p.S);
  if (p.q == 1.0) {
    f.c0 = std::exp(-lam);
    f.kappa = 1.0;
    return f;
  }
  const double A = 1.0 + (p.q - 1.0) * lam;
  if (!(A > 0)) throw NumericError("q-Gaussian normalizer leaves the support of exp_q");
  f.alpha = 1.0 / (p.q - 1.0);
  f.kappa = (p.q - 1.0) / A;
  f.c0 = std::exp(-f.alpha * std::log(A));
  return f;
}

double density(const QGaussParams& p, const VectorXd& x) {
  if (!x.allFinite()) return 0.0;
  const VectorXd z = x - p.v;
  const double Q = z.dot(p.S * z);
  if (std::isnan(Q)) return 0.0;  // overflow of a huge positive form
  return exp_q(p.q, -Q - lambda_q(p.q, p.S));
}

double RepetitionLaw::dof() const {
  if (base.q == 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * a_k / (base.q - 1.0) - dim();
}

RepetitionLaw repetition(const QGaussParams& p, int k) {
  validate(p);
  if (k < 1) throw DomainError("repetition order k must be >= 1");
  const double q = p.q;
  const int d = p.d();
  RepetitionLaw law;
  law.base = p;
  law.k = k;
  law.a_k = 1.0 + (k + 3) * d * (q - 1.0) / 2.0;
  law.q_k = 1.0 + (q - 1.0) / law.a_k;
  auto log_beta = [&](const MatrixXd& S) {
    if (q == 1.0) return -logdet_spd(S) / d;
    return -logdet_spd((q - 1.0) * S / kPi) / d + (1.0 - law.q_k) * std::lgamma(1.0 / (law.q_k - 1.0));
  };
  law.beta_k = std::exp(log_beta(p.S));
  if (q == 1.0) {
    law.nu_k = 0.5 * d * k * std::log(kPi);
  } else {
    const double a0 = 1.0 + 3.0 * d * (q - 1.0) / 2.0;
    const double q0 = 1.0 + (q - 1.0) / a0;
    const double G = std::lgamma(1.0 / (law.q_k - 1.0)) / law.a_k - std::lgamma(1.0 / (q0 - 1.0)) / a0;
    law.nu_k = neg_ln_q_of_exp(q, G);
  }
  // det(beta_k(S) S) against det(beta_k(I) I), in logs
  const double lhs = d * log_beta(p.S) + logdet_spd(p.S);
  const double rhs = d * log_beta(MatrixXd::Identity(d, d));
  law.det_invariance_defect = std::abs(std::expm1(lhs - rhs));
  return law;
}

EllipticalKernel kernel(const RepetitionLaw& law) {
  const double q = law.base.q;
  EllipticalKernel f;
  f.center = tile(law.base.v, law.k);
  f.M = block_diag(law.base.S, law.k);
  if (q == 1.0) {
    f.c0 = std::exp(-law.nu_k);
    f.kappa = law.beta_k;
    return f;
  }
  const double A = 1.0 + (q - 1.0) * law.nu_k;
  if (!(A > 0)) throw NumericError("repetition constant leaves the support of exp_q");
  f.alpha = law.a_k / (q - 1.0);
  f.kappa = (q - 1.0) * law.beta_k / A;
  f.c0 = std::exp(-f.alpha * std::log(A));
  return f;
}

double joint_density(const RepetitionLaw& law, const VectorXd& x) {
  const int d = law.base.d();
  if (x.size() != law.dim()) throw DomainError("joint point must have length d k");
  if (!x.allFinite()) return 0.0;
  double Q = 0.0;
  for (int m = 0; m < law.k; ++m) {
    const VectorXd z = x.segment(m * d, d) - law.base.v;
    Q += z.dot(law.base.S * z);
  }
  if (std::isnan(Q)) return 0.0;
  const double base = exp_q(law.base.q, -law.beta_k * Q - law.nu_k);
  return std::pow(base, law.a_k);
}

double marginal_defect(const QGaussParams& p, int k, int kprime, const VectorXd& x) {
  const int d = p.d();
  if (kprime < 1) throw DomainError("k' must be >= 1");
  if (d * kprime > 3) throw DomainError("marginal quadrature supports d k' <= 3");
  const RepetitionLaw big = repetition(p, k + kprime), small = repetition(p, k);
  if (x.size() != small.dim()) throw DomainError("marginal point must have length d k");
  const int m = d * kprime;
  VectorXd full(big.dim());
  full.head(x.size()) = x;
  auto f = [&](const VectorXd& y) {
    full.tail(m) = y;
    return joint_density(big, full);
  };
  std::vector<std::pair<double, double>> box(m, {-kInf, kInf});
  QuadResult r = integrate_box(f, box, QuadOptions{1e-12, 1e-11, 4000}, tile(p.v, kprime));
  return std::abs(r.value - joint_density(small, x));
}

MarginalReport marginal_check(const QGaussParams& p, int k, int kprime) {
  const int d = p.d();
  VectorXd w(d * k);
  for (int m = 0; m < k; ++m)
    for (int i = 0; i < d; ++i) w[m * d + i] = 1.0 - 0.35 * m + 0.2 * i;
  MarginalReport rep;
  for (int j = 0; j < 9; ++j) {
    const double s = -3.0 + 0.75 * j;
    VectorXd x = tile(p.v, k) + s * w;
    const double def = marginal_defect(p, k, kprime, x);
    rep.points.push_back(x);
    rep.defects.push_back(def);
    rep.max_defect = std::max(rep.max_defect, def);
  }
  return rep;
}

MatrixXd sample_joint(const RepetitionLaw& law, int n, std::uint64_t seed) {
  if (n < 0) throw DomainError("sample count must be nonnegative");
  EllipticalSampler sampler(kernel(law));
  std::mt19937_64 rng(seed);
  MatrixXd out(n, law.dim());
  for (int i = 0; i < n; ++i) {
    sampler.reset(rng);
    out.row(i) = sampler.next(rng).transpose();
  }
  return out;
}

std::string sample_header(const RepetitionLaw& law) {
  std::ostringstream os;
  for (int m = 1; m <= law.k; ++m)
    for (int i = 1; i <= law.base.d(); ++i) os << (m + i > 2 ? "," : "") << "x_" << m << "_" << i;
  return os.str();
}

double escort_moment(const RepetitionLaw& law, Statistic stat, double power) {
  const EllipticalKernel f = raise(kernel(law), power);
  const double m = mass(f);
  if (stat.a < 0) return m;
  if (stat.a >= f.dim() || stat.b >= f.dim()) throw DomainError("statistic index out of range");
  if (stat.b < 0) {
    if (!f.gaussian() && !(dof(f) > 1.0)) throw DomainError("escort first moment diverges");
    return m * f.center[stat.a];
  }
  return m * raw_moment2(f, stat.a, stat.b);
}

double escort_moment_quadrature(const RepetitionLaw& law, Statistic stat, double power) {
  if (law.dim() != 1) throw DomainError("quadrature escort moments need d k = 1");
  VectorXd x(1);
  auto f = [&](double t) {
    x[0] = t;
    return stat_value(stat, x) * std::pow(joint_density(law, x), power);
  };
  return integrate(f, -kInf, kInf, QuadOptions{1e-13, 1e-12, 4000}, law.base.v[0]).value;
}

Moments moments(const QGaussParams& p, int i, int j) {
  const int d = p.d();
  if (i < 0 || i >= d || j < 0 || j >= d) throw DomainError("moment index out of range");
  const EllipticalKernel one = kernel(repetition(p, 1)), two = kernel(repetition(p, 2));
  Moments m;
  m.mean = one.center[i];
  m.second = covariance(one)(i, i);
  m.fourth = central_moment4(one, i, i, i, i);
  m.cross = central_moment4(two, i, i, d + i, d + i);
  m.pair_mean = raw_moment2(one, i, j);
  m.pair_var = raw_moment4(one, i, j, i, j) - m.pair_mean * m.pair_mean;
  m.pair_cross = raw_moment4(two, i, j, d + i, d + j) - m.pair_mean * m.pair_mean;
  m.dof = dof(one);
  m.scale2 = mixing_scale(one)(i, i);
  return m;
}

namespace full_family {

int parameter_count(int D) { return D + D * (D + 1) / 2; }

VectorXd statistic(const VectorXd& x) {
  const int D = static_cast<int>(x.size());
  VectorXd t(parameter_count(D));
  t.head(D) = x;
  int s = D;
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) t[s++] = x[a] * x[b];
  return t;
}

VectorXd to_theta(const VectorXd& V, const MatrixXd& S) {
  const int D = static_cast<int>(V.size());
  VectorXd th(parameter_count(D));
  th.head(D) = 2.0 * S * V;
  int s = D;
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) th[s++] = -(a == b ? 1.0 : 2.0) * S(a, b);
  return th;
}

void from_theta(int D, const VectorXd& theta, VectorXd& V, MatrixXd& S) {
  if (theta.size() != parameter_count(D)) throw DomainError("theta has wrong length");
  S.resize(D, D);
  int s = D;
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) {
      S(a, b) = S(b, a) = -theta[s++] / (a == b ? 1.0 : 2.0);
    }
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw DomainError("theta maps to a non positive definite S");
  V = llt.solve(theta.head(D)) / 2.0;
}

namespace {

int dim_of(int n) {
  int D = 0;
  while (parameter_count(D) < n) ++D;
  if (parameter_count(D) != n) throw DomainError("theta length is not D + D(D+1)/2");
  return D;
}

EllipticalKernel kernel_of(double q, const VectorXd& theta) {
  const int D = dim_of(static_cast<int>(theta.size()));
  QGaussParams p;
  p.q = q;
  from_theta(D, theta, p.v, p.S);
  return kernel(p);
}

}  // namespace

double psi(double q, const VectorXd& theta) {
  const int D = dim_of(static_cast<int>(theta.size()));
  VectorXd V;
  MatrixXd S;
  from_theta(D, theta, V, S);
  return V.dot(S * V) + lambda_q(q, S);
}

VectorXd psi_gradient(double q, const VectorXd& theta) {
  const EllipticalKernel esc = raise(kernel_of(q, theta), q);
  const int D = esc.dim();
  const MatrixXd C = covariance(esc);
  VectorXd g(parameter_count(D));
  g.head(D) = esc.center;
  int s = D;
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) g[s++] = esc.center[a] * esc.center[b] + C(a, b);
  return g;
}

MatrixXd psi_hessian(double q, const VectorXd& theta) {
  const EllipticalKernel p = kernel_of(q, theta);
  const EllipticalKernel esc = raise(p, q), sec = raise(p, 2.0 * q - 1.0);
  const int D = p.dim();
  const VectorXd& V = p.center;
  const MatrixXd Ce = covariance(esc), C = covariance(sec);
  // statistic index -> (a, b), b = -1 for first order
  std::vector<std::pair<int, int>> idx;
  for (int a = 0; a < D; ++a) idx.push_back({a, -1});
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) idx.push_back({a, b});
  const int n = static_cast<int>(idx.size());
  VectorXd delta = VectorXd::Zero(n);
  for (int s = D; s < n; ++s) delta[s] = C(idx[s].first, idx[s].second) - Ce(idx[s].first, idx[s].second);
  MatrixXd H(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = s; t < n; ++t) {
      auto [a, b] = idx[s];
      auto [c, e] = idx[t];
      double cov;
      if (b < 0 && e < 0) {
        cov = C(a, c);
      } else if (b < 0) {
        cov = V[c] * C(a, e) + V[e] * C(a, c);
      } else if (e < 0) {
        cov = V[a] * C(c, b) + V[b] * C(c, a);
      } else {
        cov = V[a] * V[c] * C(b, e) + V[a] * V[e] * C(b, c) + V[b] * V[c] * C(a, e) + V[b] * V[e] * C(a, c) +
              central_moment4(sec, a, b, c, e) - C(a, b) * C(c, e);
      }
      H(s, t) = H(t, s) = cov + delta[s] * delta[t];
    }
  return q * std::exp(log_mass(sec) - log_mass(esc)) * H;
}

double chi_mass(double q, const VectorXd& theta) { return mass(raise(kernel_of(q, theta), q)); }

}  // namespace full_family

MleFamily mle_family_from_string(const std::string& s) {
  if (s == "identity_mean_only" || s == "mean") return MleFamily::identity_mean_only;
  if (s == "full_M_qk" || s == "full") return MleFamily::full;
  throw DomainError("unknown MLE family '" + s + "' (expected identity_mean_only or full_M_qk)");
}

MleResult mle(double q, int d, int k, const MatrixXd& data, MleFamily family) {
  check_hypothesis(q, d);
  const int D = d * k;
  if (data.cols() != D) throw DomainError("data must have d k columns");
  if (data.rows() < 1) throw DomainError("no observations");
  if (!data.allFinite()) throw DomainError("data must be finite");
  const RepetitionLaw ref = repetition(make_params(q, VectorXd::Zero(d)), k);
  MleResult r;
  r.family = family;
  r.q_prime = ref.q_k;
  r.chi_mass_reference = escort_moment(ref, {}, ref.q_k);
  const int n = static_cast<int>(data.rows());

  if (family == MleFamily::identity_mean_only) {
    VectorXd sum = VectorXd::Zero(d);
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < k; ++m) sum += data.row(j).segment(m * d, d).transpose();
    r.v = sum / (n * k);
    const RepetitionLaw law = repetition(make_params(q, r.v), k);
    const double c = law.a_k * law.beta_k;
    r.V = tile(r.v, k);
    r.S = c * MatrixXd::Identity(D, D);
    r.theta = 2.0 * c * r.v;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += ln_q(law.q_k, joint_density(law, data.row(j).transpose()));
    r.objective = obj / n;
    r.grad_norm = (2.0 * c * (sum / n - k * r.v)).cwiseAbs().maxCoeff();
    r.defect = r.chi_mass_reference * r.grad_norm;
    return r;
  }

  const double qp = ref.q_k;
  const VectorXd mean = data.colwise().mean().transpose();
  const MatrixXd centered = data.rowwise() - mean.transpose();
  const MatrixXd C = centered.transpose() * centered / n;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(C);
  if (n < D + 1 || !(es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff())))
    throw InfeasibleError("full-family MLE needs at least d k + 1 observations in general position (got " +
                          std::to_string(n) + ")");
  VectorXd Tbar = VectorXd::Zero(full_family::parameter_count(D));
  for (int j = 0; j < n; ++j) Tbar += full_family::statistic(data.row(j).transpose());
  Tbar /= n;

  auto objective = [&](const VectorXd& th) {
    try {
      return th.dot(Tbar) - full_family::psi(qp, th);
    } catch (const DomainError&) {
      return -kInf;
    }
  };
  VectorXd th = full_family::to_theta(mean, C.inverse() / 2.0);
  double L = objective(th);
  VectorXd g = Tbar - full_family::psi_gradient(qp, th);
  int it = 0;
  for (; it < 500 && g.cwiseAbs().maxCoeff() > 1e-8; ++it) {
    const MatrixXd H = full_family::psi_hessian(qp, th);
    VectorXd step = H.ldlt().solve(g);
    if (!step.allFinite() || !(g.dot(step) > 0)) step = g;
    double t = 1.0;
    bool moved = false;
    while (t >= 1e-10) {
      const VectorXd cand = th + t * step;
      const double Lc = objective(cand);
      if (Lc >= L + 1e-4 * t * g.dot(step)) {
        th = cand;
        L = Lc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    g = Tbar - full_family::psi_gradient(qp, th);
    if (!moved) break;
  }
  r.theta = th;
  r.objective = L;
  r.grad_norm = g.cwiseAbs().maxCoeff();
  full_family::from_theta(D, th, r.V, r.S);
  r.defect = full_family::chi_mass(qp, th) * r.grad_norm;
  r.iterations = it;
  if (r.grad_norm > 1e-8) {
    std::ostringstream os;
    os << "MLE did not converge: gradient norm " << r.grad_norm << " after " << it << " iterations";
    throw ConvergenceError(os.str());
  }
  return r;
}

}  // namespace dgeo
