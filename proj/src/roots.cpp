#include "dgeo/roots.hpp"

#include <cmath>
#include <limits>

#include "dgeo/errors.hpp"

namespace dgeo {
namespace {

double step_out(double p, double bound, double& width, bool up) {
  if (std::isfinite(bound)) return p + (bound - p) / 2;
  width *= 2;
  return up ? p + width : p - width;
}

}  // namespace

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double target,
                      Interval dom, double guess, bool increasing,
                      const RootOptions& opt) {
  const double sgn = increasing ? 1.0 : -1.0;
  auto g = [&](double x) {
    double v = sgn * (f(x) - target);
    if (std::isnan(v)) throw NumericError("root finding: NaN at x=" + std::to_string(x));
    return v;
  };
  if (!dom.contains(guess)) throw DomainError("root finding: initial guess outside domain");

  double x = guess;
  double gx = g(x);
  if (gx == 0.0) return x;

  double a, b, ga, gb;
  double width = std::max(1.0, std::abs(x)) / 2;
  if (gx < 0) {
    a = x;
    ga = gx;
    double p = x;
    for (int i = 0;; ++i) {
      if (i >= opt.max_expand) throw DomainError("root finding: target above range");
      double n = step_out(p, dom.hi, width, true);
      if (n == p || !dom.contains(n)) throw DomainError("root finding: target above range");
      double gn = g(n);
      if (gn >= 0) {
        b = n;
        gb = gn;
        break;
      }
      a = p = n;
      ga = gn;
    }
  } else {
    b = x;
    gb = gx;
    double p = x;
    for (int i = 0;; ++i) {
      if (i >= opt.max_expand) throw DomainError("root finding: target below range");
      double n = step_out(p, dom.lo, width, false);
      if (n == p || !dom.contains(n)) throw DomainError("root finding: target below range");
      double gn = g(n);
      if (gn <= 0) {
        a = n;
        ga = gn;
        break;
      }
      b = p = n;
      gb = gn;
    }
  }
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;

  x = std::abs(ga) < std::abs(gb) ? a : b;
  gx = x == a ? ga : gb;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::abs(gx) <= opt.ftol) return x;
    double xn = std::numeric_limits<double>::quiet_NaN();
    if (df) {
      double d = sgn * df(x);
      if (std::isfinite(d) && d > 0) xn = x - gx / d;
    }
    bool newton = std::isfinite(xn) && xn > a && xn < b;
    if (!newton) {
      xn = (a > 0 && b / a > 1e3) ? std::sqrt(a * b) : a + (b - a) / 2;
    }
    if (newton && std::abs(xn - x) <= 4 * eps * std::abs(x)) return xn;
    double gn = g(xn);
    if (gn == 0.0) return xn;
    if (gn < 0) {
      a = xn;
    } else {
      b = xn;
    }
    x = xn;
    gx = gn;
    if (b - a <= 4 * eps * std::max(std::abs(a), std::abs(b))) return x;
  }
  if (std::abs(gx) <= 1e3 * opt.ftol) return x;
  throw ConvergenceError("root finding: no convergence");
}

}  // namespace dgeo
