#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgeo/elliptical.hpp"

namespace dgeo {

enum class Variant { full, identity, trace_d };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// p(x) = exp_q(-|x - v|_S^2 - lambda_q(S)) on R^d; requires q >= 1, d(q-1) < 2.
struct QGaussParams {
  double q = 1.0;
  Eigen::VectorXd v;
  Eigen::MatrixXd S;
  Variant variant = Variant::full;

  int d() const { return static_cast<int>(v.size()); }
};

// Throws DomainError on q < 1, d(q-1) >= 2, S not SPD or a variant mismatch.
void validate(const QGaussParams& p);
QGaussParams make_params(double q, Eigen::VectorXd v, Eigen::MatrixXd S, Variant variant = Variant::full);
// S = I_d
QGaussParams make_params(double q, Eigen::VectorXd v);

double lambda_q(double q, const Eigen::MatrixXd& S);
double density(const QGaussParams& p, const Eigen::VectorXd& x);
EllipticalKernel kernel(const QGaussParams& p);

struct RepetitionLaw {
  QGaussParams base;
  int k = 1;
  double a_k = 1.0;
  double q_k = 1.0;
  double beta_k = 1.0;
  double nu_k = 0.0;
  double det_invariance_defect = 0.0;  // |det(beta_k(S) S) - det(beta_k(I) I)|, relative

  int dim() const { return base.d() * k; }
  // 2 a_k / (q - 1) - dk; infinite at q = 1
  double dof() const;
};

RepetitionLaw repetition(const QGaussParams& p, int k);
// x stacks the k blocks, length dk.
double joint_density(const RepetitionLaw& law, const Eigen::VectorXd& x);
EllipticalKernel kernel(const RepetitionLaw& law);

// |int rho_{k+k'}(x, y) dy - rho_k(x)| by adaptive quadrature; needs d k' <= 3.
double marginal_defect(const QGaussParams& p, int k, int kprime, const Eigen::VectorXd& x);

struct MarginalReport {
  double max_defect = 0.0;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> defects;
};

// Nine points x_j = v + s_j w with s_j in [-3, 3] and a fixed direction w.
MarginalReport marginal_check(const QGaussParams& p, int k, int kprime);

// n x dk matrix of exact draws; columns ordered block by block.
Eigen::MatrixXd sample_joint(const RepetitionLaw& law, int n, std::uint64_t seed);
// CSV header x_1_1,...,x_k_d (block, coordinate).
std::string sample_header(const RepetitionLaw& law);

// Statistic on the stacked coordinates: F_a(x) = x_a, or F_ab(x) = x_a x_b.
struct Statistic {
  int a = -1;  // -1 means the constant 1
  int b = -1;  // -1 means first order
};

// int stat(x) rho(x)^power dx in closed form.
double escort_moment(const RepetitionLaw& law, Statistic stat, double power);
// Same by quadrature; needs dk == 1.
double escort_moment_quadrature(const RepetitionLaw& law, Statistic stat, double power);

// Moments of coordinate i (and pair i, j) under iota_1 and iota_2.
struct Moments {
  double mean = 0.0;        // E F_i
  double second = 0.0;      // E Y^2, Y = F_i - E F_i
  double fourth = 0.0;      // E Y^4
  double cross = 0.0;       // E Y_1^2 Y_2^2 under iota_2
  double pair_mean = 0.0;   // E F_ij
  double pair_var = 0.0;    // E Z^2, Z = F_ij - E F_ij
  double pair_cross = 0.0;  // E Z_1 Z_2 under iota_2
  double dof = 0.0;
  double scale2 = 0.0;      // squared t scale of coordinate i
};

Moments moments(const QGaussParams& p, int i, int j);

// The full q-Gaussian family on R^D in natural coordinates
// theta = (2 S V, -(2 - delta_ab) S_ab for a <= b), T(x) = (x_a, x_a x_b).
namespace full_family {

int parameter_count(int D);
Eigen::VectorXd statistic(const Eigen::VectorXd& x);
Eigen::VectorXd to_theta(const Eigen::VectorXd& V, const Eigen::MatrixXd& S);
// Throws DomainError when S is not positive definite.
void from_theta(int D, const Eigen::VectorXd& theta, Eigen::VectorXd& V, Eigen::MatrixXd& S);
double psi(double q, const Eigen::VectorXd& theta);
// Escort expectation of T, equal to the gradient of psi.
Eigen::VectorXd psi_gradient(double q, const Eigen::VectorXd& theta);
Eigen::MatrixXd psi_hessian(double q, const Eigen::VectorXd& theta);
// int chi_q(p) = int p^q
double chi_mass(double q, const Eigen::VectorXd& theta);

}  // namespace full_family

enum class MleFamily { identity_mean_only, full };
MleFamily mle_family_from_string(const std::string& s);

struct MleResult {
  MleFamily family = MleFamily::full;
  double q_prime = 1.0;          // q_k
  Eigen::VectorXd v;             // mean-only estimate, length d
  Eigen::VectorXd V;             // full family location, length dk
  Eigen::MatrixXd S;             // full family shape, dk x dk
  Eigen::VectorXd theta;
  double objective = 0.0;        // mean q_k-log-likelihood
  double grad_norm = 0.0;        // ||mean T - grad psi||_inf
  double defect = 0.0;           // ||I_{T chi}(p*) - I_chi(p*) mean T||_inf
  double chi_mass_reference = 0.0;  // I_chi(rho^{0,I}_{q,k})
  int iterations = 0;
};

// data: n x dk, one observation per row.
MleResult mle(double q, int d, int k, const Eigen::MatrixXd& data, MleFamily family);

}  // namespace dgeo
