#pragma once

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace dgeo {

// f(x) = c0 (1 + kappa Q(x))^{-alpha} with Q(x) = (x - center)^T M (x - center),
// or c0 exp(-kappa Q(x)) when alpha is infinite.
struct EllipticalKernel {
  double c0 = 1.0;
  double kappa = 1.0;
  double alpha = std::numeric_limits<double>::infinity();
  Eigen::VectorXd center;
  Eigen::MatrixXd M;

  int dim() const { return static_cast<int>(center.size()); }
  bool gaussian() const { return std::isinf(alpha); }
};

double quadratic_form(const EllipticalKernel& f, const Eigen::VectorXd& x);
double evaluate(const EllipticalKernel& f, const Eigen::VectorXd& x);

// f^r, again elliptical.
EllipticalKernel raise(const EllipticalKernel& f, double r);

// Integral over R^D; throws DomainError when it diverges.
double mass(const EllipticalKernel& f);
double log_mass(const EllipticalKernel& f);

// The normalized law f / mass(f) is X = center + R Y with Y ~ N(0, C) and an
// independent scalar R >= 0; for the t case R^2 = nu / W, W ~ chi^2_nu.
// Degrees of freedom nu = 2 alpha - D (infinite for the Gaussian case).
double dof(const EllipticalKernel& f);
Eigen::MatrixXd mixing_scale(const EllipticalKernel& f);  // C
// E R^{2j}; throws DomainError unless nu > 2j.
double radial_moment(const EllipticalKernel& f, int j);

Eigen::MatrixXd covariance(const EllipticalKernel& f);
// E[(X_a - c_a)(X_b - c_b)(X_c - c_c)(X_d - c_d)]
double central_moment4(const EllipticalKernel& f, int a, int b, int c, int d);
// E[X_a X_b] and E[X_a X_b X_c X_d]
double raw_moment2(const EllipticalKernel& f, int a, int b);
double raw_moment4(const EllipticalKernel& f, int a, int b, int c, int d);

// Draws from the normalized law. Successive next() calls between resets share
// one radial variable, so with a kernel for a single block they produce the
// prefixes of an exchangeable sequence of arbitrary length.
class EllipticalSampler {
 public:
  explicit EllipticalSampler(const EllipticalKernel& f);
  void reset(std::mt19937_64& rng);
  Eigen::VectorXd next(std::mt19937_64& rng);

 private:
  Eigen::VectorXd loc_;
  Eigen::MatrixXd L_;
  double nu_;
  double radius_ = 1.0;
  std::normal_distribution<double> normal_;
};

}  // namespace dgeo
