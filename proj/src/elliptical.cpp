#include "dgeo/elliptical.hpp"

#include <numbers>

#include "dgeo/errors.hpp"

namespace dgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double quadratic_form(const EllipticalKernel& f, const VectorXd& x) {
  const VectorXd z = x - f.center;
  return z.dot(f.M * z);
}

double evaluate(const EllipticalKernel& f, const VectorXd& x) {
  if (!x.allFinite()) return 0.0;
  const double Q = quadratic_form(f, x);
  if (std::isnan(Q)) return 0.0;
  if (f.gaussian()) return f.c0 * std::exp(-f.kappa * Q);
  return f.c0 * std::exp(-f.alpha * std::log1p(f.kappa * Q));
}

EllipticalKernel raise(const EllipticalKernel& f, double r) {
  if (!(r > 0)) throw DomainError("kernel power must be positive");
  EllipticalKernel g = f;
  g.c0 = std::pow(f.c0, r);
  if (f.gaussian())
    g.kappa = f.kappa * r;
  else
    g.alpha = f.alpha * r;
  return g;
}

double log_mass(const EllipticalKernel& f) {
  const int D = f.dim();
  if (!(f.kappa > 0) || !(f.c0 > 0)) throw DomainError("kernel needs c0 > 0 and kappa > 0");
  Eigen::LLT<MatrixXd> llt(f.M);
  if (llt.info() != Eigen::Success) throw DomainError("kernel matrix is not positive definite");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double out = std::log(f.c0) + 0.5 * D * std::log(std::numbers::pi) - 0.5 * D * std::log(f.kappa) -
               0.5 * logdet;
  if (!f.gaussian()) {
    if (!(f.alpha > 0.5 * D)) throw DomainError("kernel is not integrable (alpha <= D/2)");
    out += std::lgamma(f.alpha - 0.5 * D) - std::lgamma(f.alpha);
  }
  return out;
}

double mass(const EllipticalKernel& f) { return std::exp(log_mass(f)); }

double dof(const EllipticalKernel& f) {
  return f.gaussian() ? std::numeric_limits<double>::infinity() : 2.0 * f.alpha - f.dim();
}

MatrixXd mixing_scale(const EllipticalKernel& f) {
  const MatrixXd Minv = f.M.inverse();
  if (f.gaussian()) return Minv / (2.0 * f.kappa);
  return Minv / (f.kappa * dof(f));
}

double radial_moment(const EllipticalKernel& f, int j) {
  if (f.gaussian() || j == 0) return 1.0;
  const double nu = dof(f);
  if (!(nu > 2.0 * j)) throw DomainError("moment of order " + std::to_string(2 * j) + " diverges for nu = " +
                                         std::to_string(nu));
  double out = 1.0;
  for (int i = 1; i <= j; ++i) out *= nu / (nu - 2.0 * i);
  return out;
}

MatrixXd covariance(const EllipticalKernel& f) { return radial_moment(f, 1) * mixing_scale(f); }

double central_moment4(const EllipticalKernel& f, int a, int b, int c, int d) {
  const MatrixXd C = mixing_scale(f);
  return radial_moment(f, 2) * (C(a, b) * C(c, d) + C(a, c) * C(b, d) + C(a, d) * C(b, c));
}

double raw_moment2(const EllipticalKernel& f, int a, int b) {
  return f.center[a] * f.center[b] + covariance(f)(a, b);
}

double raw_moment4(const EllipticalKernel& f, int a, int b, int c, int d) {
  const VectorXd& m = f.center;
  const MatrixXd S = covariance(f);
  // odd central moments vanish
  return m[a] * m[b] * m[c] * m[d] + m[a] * m[b] * S(c, d) + m[a] * m[c] * S(b, d) +
         m[a] * m[d] * S(b, c) + m[b] * m[c] * S(a, d) + m[b] * m[d] * S(a, c) +
         m[c] * m[d] * S(a, b) + central_moment4(f, a, b, c, d);
}

EllipticalSampler::EllipticalSampler(const EllipticalKernel& f)
    : loc_(f.center), nu_(dof(f)) {
  Eigen::LLT<MatrixXd> llt(mixing_scale(f));
  if (llt.info() != Eigen::Success) throw DomainError("sampler scale is not positive definite");
  L_ = llt.matrixL();
  if (!f.gaussian() && !(nu_ > 0)) throw DomainError("sampler needs positive degrees of freedom");
}

void EllipticalSampler::reset(std::mt19937_64& rng) {
  if (std::isinf(nu_)) {
    radius_ = 1.0;
    return;
  }
  std::chi_squared_distribution<double> chi2(nu_);
  radius_ = std::sqrt(nu_ / chi2(rng));
}

VectorXd EllipticalSampler::next(std::mt19937_64& rng) {
  VectorXd z(loc_.size());
  for (int i = 0; i < z.size(); ++i) z[i] = normal_(rng);
  return loc_ + radius_ * (L_ * z);
}

}  // namespace dgeo
