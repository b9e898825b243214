#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgeo/gauge.hpp"

namespace dgeo {

// Deformed exponential family p(x) = exp_{h,tau}(<theta, T(x)> - c(x) - psi)
// over a finite sample space with positive weights mu.
struct DiscreteFamily {
  Eigen::VectorXd weights;    // mu, size |X|
  GaugeTriple gauge;
  Eigen::MatrixXd T;          // n x |X|
  Eigen::VectorXd c;          // size |X|
  Eigen::MatrixXd theta_box;  // n x 2 of [lo, hi]; may be infinite

  int dim() const { return static_cast<int>(T.rows()); }
  int size() const { return static_cast<int>(T.cols()); }
  bool in_box(const Eigen::VectorXd& theta) const;
};

// Validates shapes, weights and the rank condition on [T; 1]; throws InvariantError.
void validate(const DiscreteFamily& fam);
// Builds a family with an unbounded theta box.
DiscreteFamily make_family(Eigen::VectorXd weights, GaugeTriple gauge, Eigen::MatrixXd T,
                           Eigen::VectorXd c);

struct Normalized {
  double psi = 0.0;
  Eigen::VectorXd p;
};

Normalized normalize(const DiscreteFamily& fam, const Eigen::VectorXd& theta);
double divergence(const DiscreteFamily& fam, const Eigen::VectorXd& p, const Eigen::VectorXd& p2);
double entropy(const DiscreteFamily& fam, const Eigen::VectorXd& p);

// Weighted sums sum_x f(p(x)) mu(x) and sum_x T(x) f(p(x)) mu(x)
double total(const DiscreteFamily& fam, const Eigen::VectorXd& p, const ScalarFn& f);
Eigen::VectorXd moment(const DiscreteFamily& fam, const Eigen::VectorXd& p, const ScalarFn& f);

Eigen::VectorXd psi_gradient(const DiscreteFamily& fam, const Eigen::VectorXd& theta);
Eigen::MatrixXd psi_hessian(const DiscreteFamily& fam, const Eigen::VectorXd& theta);
Eigen::MatrixXd metric(const DiscreteFamily& fam, const Eigen::VectorXd& theta);
// out[i](j, k) = g(nabla_{d_i} d_j, d_k)
std::vector<Eigen::MatrixXd> connection_raw(const DiscreteFamily& fam, const Eigen::VectorXd& theta);

// -I_{s*}(p_theta) + psi(theta) I_tau(p_theta)
double hessian_potential(const DiscreteFamily& fam, const Eigen::VectorXd& theta);

enum class CheckStatus { ok, not_applicable };

struct GeometryReport {
  CheckStatus status = CheckStatus::ok;
  std::string message;
  Eigen::VectorXd theta;
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> christoffel_raw;
  double potential = 0.0;
  Eigen::MatrixXd hess_potential;
  double max_defect = 0.0;
  double max_connection = 0.0;
  double tau_mass_spread = 0.0;
};

// Second derivatives by centered differences with one Richardson step.
Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x);

// Spread of I_tau over probe points around theta.
double tau_mass_spread(const DiscreteFamily& fam, const Eigen::VectorXd& theta);

GeometryReport hessian_check(const DiscreteFamily& fam, const Eigen::VectorXd& theta);

// |Phi(theta') - Phi(theta) + <theta - theta', grad Phi(theta)> - D(p_theta, p_theta')|;
// throws NotApplicable when I_tau is not constant.
double canonical_divergence_check(const DiscreteFamily& fam, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& theta2);

// Whether tau/chi is constant on a log-uniform grid over I.
bool is_conformal(const GaugeTriple& g, double tol = 1e-10);
// |psi(theta') - psi(theta) + <theta - theta', grad psi> - D(p, p')/I_tau(p)|;
// throws NotApplicable when tau/chi is not constant.
double conformal_check(const DiscreteFamily& fam, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& theta2);

struct Projection {
  Eigen::VectorXd theta;
  Eigen::VectorXd p;
  double psi = 0.0;
  double residual = 0.0;      // ||I_{T tau}(p*) - I_{T tau}(rho)||_inf
  double tau_residual = 0.0;  // |I_tau(p*) - I_tau(rho)|
  int iterations = 0;
  int restarts = 0;
};

Projection pythagorean_project(const DiscreteFamily& fam, const Eigen::VectorXd& rho,
                               std::uint64_t seed = 0);

struct EntropyMax {
  bool holds = false;
  bool equality = false;
  double entropy_rho = 0.0;
  double entropy_star = 0.0;
  Projection projection;
};

EntropyMax entropy_max_check(const DiscreteFamily& fam, const Eigen::VectorXd& rho);

// Family with T2 = A^T T + v2, c2 = c - <v1, T>; theta1 = A theta2 + v1.
DiscreteFamily affine_reparam(const DiscreteFamily& fam, const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& v1, const Eigen::VectorXd& v2);

struct AffineCheck {
  double density_defect = 0.0;
  double psi_defect = 0.0;  // |psi2 - (psi1 + <theta2, v2>)|
};

// Max over theta2 in `grid` (columns) of the density and psi defects.
AffineCheck affine_reparam_check(const DiscreteFamily& fam, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& v1, const Eigen::VectorXd& v2,
                                 const Eigen::MatrixXd& grid);

}  // namespace dgeo
