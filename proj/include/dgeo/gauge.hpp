#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/scalar_fn.hpp"

namespace dgeo {

enum class GaugeKind { kl, power, escort, scaled_log, custom };

std::string to_string(GaugeKind k);
GaugeKind gauge_kind_from_string(const std::string& s);

// Serializable description of a builtin gauge.
struct GaugeSpec {
  GaugeKind kind = GaugeKind::kl;
  double param = 1.0;  // q for power/escort, lambda for scaled_log
  Interval I = Interval::positive();
};

// (h, tau) on I with tau' > 0 on I and h'' > 0 on tau(I).
struct GaugeTriple {
  ScalarFn h;
  ScalarFn tau;
  Interval I;
  std::string name;

  ScalarFn ell;                               // h' o tau
  std::function<double(double)> ell_inverse;  // optional closed form on all of ell's range
  double ell_lo = -kInf;                      // limits of ell at the ends of I
  double ell_hi = kInf;
  std::optional<GaugeSpec> spec;
};

struct DerivedFunctions {
  ScalarFn ell, m, gamma, chi, s, s_star;
};

struct EquivalenceTransform {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, lambda = 1.0;
};

double ln_q(double q, double t);
// [1 + (1-q)u]^{1/(1-q)}, clipped to 0 or +inf outside its range.
double exp_q(double q, double u);

// Builds a gauge from (h, tau); ell is h' o tau unless supplied.
GaugeTriple make_gauge(ScalarFn h, ScalarFn tau, Interval I, std::string name,
                       ScalarFn ell = {});
GaugeTriple builtin_gauge(const GaugeSpec& spec);
GaugeTriple builtin_gauge(GaugeKind kind, double param = 1.0,
                          Interval I = Interval::positive());

// Checks tau' > 0 and h'' > 0 on a log-uniform grid; throws InvariantError.
void check_gauge(const GaugeTriple& g, int n = 64);

DerivedFunctions derived(const GaugeTriple& g);

double d_htau(const GaugeTriple& g, double t, double s);
// int_s^t (ell(u) - ell(s)) tau'(u) du by adaptive quadrature
double d_htau_quadrature(const GaugeTriple& g, double t, double s);

double exp_htau(const GaugeTriple& g, double u);

GaugeTriple apply_equivalence(const GaugeTriple& g, const EquivalenceTransform& T);

struct EquivalenceReport {
  double d_defect = 0.0;            // max |d - d~| over random pairs, relative to the size of d's terms
  double fingerprint_defect = 0.0;  // max relative (m, gamma) gap on a 64-point grid
  int samples = 0;
};

// Pairs are drawn log-uniformly from I clipped to [1e-2, 1e2].
EquivalenceReport equivalence_check(const GaugeTriple& g, const EquivalenceTransform& T, int n,
                                    std::uint64_t seed);

// h(r) = int_a^{tau^{-1}(r)} ell(t) tau'(t) dt
GaugeTriple gauge_from_pair(const ScalarFn& tau, const ScalarFn& ell, double a);
// int_s^t (ell(u) - ell(s)) tau'(u) du
double delta_pair(const ScalarFn& tau, const ScalarFn& ell, double t, double s);

// Legendre conjugate of a strictly convex h as a function on h'(dom h);
// hp_range overrides the endpoint evaluation of that image.
ScalarFn conjugate(const ScalarFn& h, std::optional<Interval> hp_range = std::nullopt);
double legendre_conjugate(const GaugeTriple& g, double r_star);

// 64-point style log-uniform grid strictly inside [max(lo,floor), min(hi,cap)].
std::vector<double> log_grid(const Interval& I, int n, double floor = 1e-3, double cap = 1e3);

struct Fingerprint {
  std::vector<double> t, m, gamma;
};
Fingerprint fingerprint(const GaugeTriple& g, const std::vector<double>& grid);

}  // namespace dgeo
