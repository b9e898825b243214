#include "dgeo/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "dgeo/errors.hpp"
#include "dgeo/quadrature.hpp"
#include "dgeo/roots.hpp"

namespace dgeo {
namespace {

const QuadOptions kQuad{1e-12, 1e-12, 4000};

double guess_in(const Interval& I) {
  if (I.contains(1.0)) return 1.0;
  if (I.bounded()) return I.lo + (I.hi - I.lo) / 2;
  if (std::isfinite(I.lo)) return I.lo + std::max(1.0, std::abs(I.lo));
  return I.hi - std::max(1.0, std::abs(I.hi));
}

Interval image(const ScalarFn& f, const Interval& I) {
  return {endpoint_value(f, I.lo, false), endpoint_value(f, I.hi, true)};
}

Jet ln_q_jet(double q, const Jet& t) {
  if (q == 1.0) return log(t);
  return (pow(t, 1.0 - q) - 1.0) / (1.0 - q);
}

double exp_q_raw(double q, double u) {
  if (q == 1.0) return std::exp(u);
  const double base = 1.0 + (1.0 - q) * u;
  if (base <= 0.0) return q > 1.0 ? kInf : 0.0;
  return std::pow(base, 1.0 / (1.0 - q));
}

}  // namespace

std::string to_string(GaugeKind k) {
  switch (k) {
    case GaugeKind::kl: return "kl";
    case GaugeKind::power: return "power";
    case GaugeKind::escort: return "escort";
    case GaugeKind::scaled_log: return "scaled_log";
    case GaugeKind::custom: return "custom";
  }
  return "custom";
}

GaugeKind gauge_kind_from_string(const std::string& s) {
  if (s == "kl") return GaugeKind::kl;
  if (s == "power") return GaugeKind::power;
  if (s == "escort") return GaugeKind::escort;
  if (s == "scaled_log") return GaugeKind::scaled_log;
  throw DomainError("unknown gauge kind '" + s + "'");
}

double ln_q(double q, double t) {
  if (q == 1.0) return std::log(t);
  return (std::pow(t, 1.0 - q) - 1.0) / (1.0 - q);
}

double exp_q(double q, double u) { return exp_q_raw(q, u); }

GaugeTriple make_gauge(ScalarFn h, ScalarFn tau, Interval I, std::string name, ScalarFn ell) {
  if (!I.valid() || I.lo < 0.0) throw DomainError("gauge interval must lie in (0, inf): " + I.str());
  GaugeTriple g;
  g.I = I;
  g.name = std::move(name);
  g.tau = ScalarFn(tau.map(), I, tau.reduced_accuracy());
  g.h = ScalarFn(h.map(), image(g.tau, I), h.reduced_accuracy());
  g.ell = ell ? ScalarFn(ell.map(), I, ell.reduced_accuracy()) : compose(g.h.derivative(), g.tau);
  g.ell_lo = endpoint_value(g.ell, I.lo, false);
  g.ell_hi = endpoint_value(g.ell, I.hi, true);
  return g;
}

GaugeTriple builtin_gauge(GaugeKind kind, double param, Interval I) {
  return builtin_gauge(GaugeSpec{kind, param, I});
}

GaugeTriple builtin_gauge(const GaugeSpec& spec) {
  const double q = spec.param;
  const Interval I = spec.I;
  if (!std::isfinite(q)) throw DomainError("gauge parameter must be finite");
  GaugeTriple g;
  switch (spec.kind) {
    case GaugeKind::kl: {
      ScalarFn h([](const Jet& r) { return r * log(r); }, Interval::positive());
      ScalarFn ell([](const Jet& t) { return log(t) + 1.0; }, I);
      g = make_gauge(h, ScalarFn::identity(I), I, "kl", ell);
      g.ell_inverse = [](double u) { return std::exp(u - 1.0); };
      break;
    }
    case GaugeKind::power: {
      JetMap hm;
      if (q == 1.0) {
        hm = [](const Jet& r) { return r * log(r) - r + 1.0; };
      } else if (q == 2.0) {
        hm = [](const Jet& r) { return (r - 1.0) - log(r); };
      } else {
        hm = [q](const Jet& r) {
          return ((pow(r, 2.0 - q) - 1.0) / (2.0 - q) - (r - 1.0)) / (1.0 - q);
        };
      }
      ScalarFn ell([q](const Jet& t) { return ln_q_jet(q, t); }, I);
      g = make_gauge(ScalarFn(hm, Interval::positive()), ScalarFn::identity(I), I,
                     "power(" + std::to_string(q) + ")", ell);
      g.ell_inverse = [q](double u) { return exp_q_raw(q, u); };
      break;
    }
    case GaugeKind::escort: {
      if (!(q > 0.0)) throw DomainError("escort gauge requires q > 0");
      JetMap hm;
      if (q == 1.0) {
        hm = [](const Jet& r) { return r * log(r) - r; };
      } else {
        hm = [q](const Jet& r) { return q * (pow(r, 1.0 / q) - r) / (1.0 - q) - r; };
      }
      ScalarFn tau([q](const Jet& t) { return pow(t, q); }, I);
      ScalarFn ell([q](const Jet& t) { return ln_q_jet(q, t); }, I);
      g = make_gauge(ScalarFn(hm, Interval::positive()), tau, I,
                     "escort(" + std::to_string(q) + ")", ell);
      g.ell_inverse = [q](double u) { return exp_q_raw(q, u); };
      break;
    }
    case GaugeKind::scaled_log: {
      const double lam = q;
      if (!(lam > 0.0)) throw DomainError("scaled_log gauge requires lambda > 0");
      ScalarFn h([lam](const Jet& r) { return (r * log(r) - r) / lam; }, Interval::positive());
      ScalarFn tau([lam](const Jet& t) { return pow(t, lam); }, I);
      ScalarFn ell([](const Jet& t) { return log(t); }, I);
      g = make_gauge(h, tau, I, "scaled_log(" + std::to_string(lam) + ")", ell);
      g.ell_inverse = [](double u) { return std::exp(u); };
      break;
    }
    case GaugeKind::custom:
      throw DomainError("custom gauges are built with make_gauge");
  }
  g.spec = spec;
  return g;
}

std::vector<double> log_grid(const Interval& I, int n, double floor, double cap) {
  double a = std::max(I.lo, floor), b = std::min(I.hi, cap);
  if (!(a < b)) throw DomainError("empty grid range for " + I.str());
  if (a == I.lo) a += 1e-6 * (b - a);
  if (b == I.hi) b -= 1e-6 * (b - a);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.5 : double(i) / (n - 1);
    out[i] = a > 0 ? a * std::pow(b / a, s) : a + (b - a) * s;
  }
  return out;
}

void check_gauge(const GaugeTriple& g, int n) {
  for (double t : log_grid(g.I, n)) {
    const double dt = g.tau.d1(t);
    if (!(dt > 0)) throw InvariantError("tau' <= 0 at t=" + std::to_string(t));
    const double hh = g.h.d2(g.tau(t));
    if (!(hh > 0)) throw InvariantError("h'' <= 0 at tau(t), t=" + std::to_string(t));
  }
}

DerivedFunctions derived(const GaugeTriple& g) {
  DerivedFunctions r;
  r.ell = g.ell;
  const JetMap ell = g.ell.map(), tau = g.tau.map(), h = g.h.map();
  const JetMap dell = g.ell.derivative().map();
  const JetMap d2ell = g.ell.derivative().derivative().map();
  const JetMap dtau = g.tau.derivative().map();
  const bool red = g.h.reduced_accuracy() || g.tau.reduced_accuracy() || g.ell.reduced_accuracy();
  r.m = ScalarFn([dell, dtau](const Jet& x) { return dell(x) * dtau(x); }, g.I, red);
  r.gamma = ScalarFn([d2ell, dtau](const Jet& x) { return d2ell(x) * dtau(x); }, g.I, red);
  r.chi = ScalarFn([dell](const Jet& x) { return 1.0 / dell(x); }, g.I, red);
  r.s = ScalarFn([h, tau](const Jet& x) { return -h(tau(x)); }, g.I, red);
  r.s_star = ScalarFn(
      [h, tau, ell](const Jet& x) {
        Jet tx = tau(x);
        return h(tx) - tx * ell(x);
      },
      g.I, red);
  return r;
}

double d_htau(const GaugeTriple& g, double t, double s) {
  if (!g.I.contains(t) || !g.I.contains(s))
    throw DomainError("d_htau arguments outside " + g.I.str());
  const double rt = g.tau(t), rs = g.tau(s);
  return g.h(rt) - g.h(rs) - (rt - rs) * g.ell(s);
}

double delta_pair(const ScalarFn& tau, const ScalarFn& ell, double t, double s) {
  const double ls = ell(s);
  auto f = [&](double u) { return (ell(u) - ls) * tau.d1(u); };
  return integrate(f, s, t, kQuad).value;
}

double d_htau_quadrature(const GaugeTriple& g, double t, double s) {
  if (!g.I.contains(t) || !g.I.contains(s))
    throw DomainError("d_htau arguments outside " + g.I.str());
  return delta_pair(g.tau, g.ell, t, s);
}

double exp_htau(const GaugeTriple& g, double u) {
  if (std::isnan(u)) return u;
  if (u >= g.ell_hi) return kInf;
  if (u <= g.ell_lo) return 0.0;
  double t;
  if (g.ell_inverse) {
    t = g.ell_inverse(u);
  } else {
    const ScalarFn& ell = g.ell;
    t = solve_monotone([&ell](double x) { return ell(x); },
                       [&ell](double x) { return ell.d1(x); }, u, g.I, guess_in(g.I), true,
                       RootOptions{1e-12});
  }
  if (t >= g.I.hi) return kInf;
  if (t <= g.I.lo) return 0.0;
  return t;
}

GaugeTriple apply_equivalence(const GaugeTriple& g, const EquivalenceTransform& T) {
  const double lam = T.lambda, a1 = T.a1, a2 = T.a2, a3 = T.a3;
  if (!(lam > 0.0) || !std::isfinite(lam) || !std::isfinite(a1) || !std::isfinite(a2) ||
      !std::isfinite(a3))
    throw DomainError("equivalence transform requires finite parameters and lambda > 0");
  const JetMap h1 = g.h.map(), tau1 = g.tau.map(), ell1 = g.ell.map();
  ScalarFn tau([tau1, lam, a3](const Jet& x) { return tau1(x) * lam + a3; }, g.I,
               g.tau.reduced_accuracy());
  ScalarFn h(
      [h1, lam, a1, a2, a3](const Jet& y) {
        Jet r = (y - a3) / lam;
        return h1(r) - r * a1 - a2;
      },
      Interval::real_line(), g.h.reduced_accuracy());
  ScalarFn ell([ell1, lam, a1](const Jet& x) { return (ell1(x) - a1) / lam; }, g.I,
               g.ell.reduced_accuracy());
  GaugeTriple out = make_gauge(h, tau, g.I, g.name + "~", ell);
  if (g.ell_inverse) {
    auto inv = g.ell_inverse;
    out.ell_inverse = [inv, lam, a1](double u) { return inv(lam * u + a1); };
  }
  return out;
}

EquivalenceReport equivalence_check(const GaugeTriple& g, const EquivalenceTransform& T, int n,
                                    std::uint64_t seed) {
  const GaugeTriple e = apply_equivalence(g, T);
  const std::vector<double> grid = log_grid(g.I, 64, 1e-2, 1e2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(std::log(grid.front()), std::log(grid.back()));
  EquivalenceReport r;
  r.samples = n;
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(U(rng)), s = std::exp(U(rng));
    // round-off floor of h(tau t) - h(tau s) - (tau t - tau s) ell(s) scales with its terms
    const double rt = g.tau(t), rs = g.tau(s);
    const double scale = std::max({1.0, std::abs(g.h(rt)), std::abs(g.h(rs)), std::abs((rt - rs) * g.ell(s))});
    r.d_defect = std::max(r.d_defect, std::abs(d_htau(g, t, s) - d_htau(e, t, s)) / scale);
  }
  const Fingerprint a = fingerprint(g, grid), b = fingerprint(e, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.fingerprint_defect = std::max(r.fingerprint_defect, std::abs(a.m[i] - b.m[i]) / std::abs(a.m[i]));
    r.fingerprint_defect =
        std::max(r.fingerprint_defect, std::abs(a.gamma[i] - b.gamma[i]) / std::max(1e-300, std::abs(a.gamma[i])));
  }
  return r;
}

GaugeTriple gauge_from_pair(const ScalarFn& tau, const ScalarFn& ell, double a) {
  Interval I{std::max(tau.domain().lo, ell.domain().lo), std::min(tau.domain().hi, ell.domain().hi)};
  if (!I.valid() || I.lo < 0.0) throw DomainError("pair domains do not overlap inside (0, inf)");
  if (!I.contains(a)) throw DomainError("base point a outside " + I.str());
  for (double t : log_grid(I, 64)) {
    if (!(tau.d1(t) > 0)) throw InvariantError("tau is not increasing at t=" + std::to_string(t));
    if (!(ell.d1(t) > 0)) throw InvariantError("ell is not increasing at t=" + std::to_string(t));
  }
  ScalarFn tau_i(tau.map(), I, tau.reduced_accuracy());
  ScalarFn ell_i(ell.map(), I, ell.reduced_accuracy());
  ScalarFn tau_inv = inverse(tau_i);
  const JetMap lm = ell_i.map(), tim = tau_inv.map();
  auto h = [tau_i, ell_i, tau_inv, lm, tim, a](const Jet& y) {
    const double r0 = y.c[0];
    const double t0 = tau_inv(r0);
    auto f = [&](double t) { return ell_i(t) * tau_i.d1(t); };
    const double v = integrate(f, a, t0, kQuad).value;
    Jet L = lm(tim(Jet::variable(r0)));
    Jet H = integrate(L, v);
    return compose(H.c, H.order, y);
  };
  return make_gauge(ScalarFn(h, tau_inv.domain()), tau_i, I, "pair", ell_i);
}

ScalarFn conjugate(const ScalarFn& h, std::optional<Interval> hp_range) {
  ScalarFn hp = h.derivative();
  ScalarFn hp_inv = inverse(hp, hp_range);
  const JetMap inv = hp_inv.map();
  auto map = [h, hp_inv, inv](const Jet& u) {
    const double u0 = u.c[0];
    const double r0 = hp_inv(u0);
    const double v = r0 * u0 - h(r0);
    Jet H = integrate(inv(Jet::variable(u0)), v);
    return compose(H.c, H.order, u);
  };
  return ScalarFn(map, hp_inv.domain(), h.reduced_accuracy());
}

double legendre_conjugate(const GaugeTriple& g, double r_star) {
  ScalarFn hs = conjugate(g.h, Interval{g.ell_lo, g.ell_hi});
  if (!hs.domain().contains(r_star))
    throw DomainError("r_star outside h'(tau(I)) = " + hs.domain().str());
  return hs(r_star);
}

Fingerprint fingerprint(const GaugeTriple& g, const std::vector<double>& grid) {
  DerivedFunctions d = derived(g);
  Fingerprint f;
  for (double t : grid) {
    f.t.push_back(t);
    f.m.push_back(d.m(t));
    f.gamma.push_back(d.gamma(t));
  }
  return f;
}

}  // namespace dgeo
