#include "dgeo/scalar_fn.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dgeo/errors.hpp"
#include "dgeo/roots.hpp"

namespace dgeo {
namespace {

// Step for the k-th derivative with a fourth-order stencil.
double fd_step(double x, const Interval& dom, int k) {
  double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (4 + k)) * std::max(1.0, std::abs(x));
  if (std::isfinite(dom.lo)) h = std::min(h, (x - dom.lo) / 4);
  if (std::isfinite(dom.hi)) h = std::min(h, (dom.hi - x) / 4);
  return h;
}

// 5-point central stencil for the k-th derivative, k in 1..4.
double stencil(const std::function<double(double)>& f, double x, int k, const Interval& dom) {
  const double h = fd_step(x, dom, k);
  const double fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
  switch (k) {
    case 1: return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
    case 2: return (-fp2 + 16 * fp1 - 30 * f(x) + 16 * fm1 - fm2) / (12 * h * h);
    case 3: return (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
    default: return (fp2 - 4 * fp1 + 6 * f(x) - 4 * fm1 + fm2) / (h * h * h * h);
  }
}

double interior_guess(const Interval& dom) {
  if (dom.bounded()) return dom.lo + (dom.hi - dom.lo) / 2;
  if (std::isfinite(dom.lo)) return dom.lo == 0.0 ? 1.0 : dom.lo + std::max(1.0, std::abs(dom.lo));
  if (std::isfinite(dom.hi)) return dom.hi - std::max(1.0, std::abs(dom.hi));
  return 0.0;
}

}  // namespace

std::string Interval::str() const {
  std::ostringstream os;
  os << '(' << lo << ", " << hi << ')';
  return os.str();
}

ScalarFn::ScalarFn(JetMap f, Interval domain, bool reduced_accuracy)
    : f_(std::move(f)), dom_(domain), reduced_(reduced_accuracy) {
  if (!dom_.valid()) throw DomainError("invalid interval " + dom_.str());
}

ScalarFn ScalarFn::from_derivatives(std::function<double(double)> value,
                                    std::function<double(double)> d1,
                                    std::function<double(double)> d2, Interval domain) {
  auto map = [value, d1, d2, domain](const Jet& x) {
    const double x0 = x.c[0];
    std::array<double, Jet::max_order + 1> a{};
    a[0] = value(x0);
    a[1] = d1(x0);
    a[2] = d2(x0) / 2;
    a[3] = stencil(d2, x0, 1, domain) / 6;
    a[4] = stencil(d2, x0, 2, domain) / 24;
    return compose(a, 4, x);
  };
  return ScalarFn(map, domain, true);
}

ScalarFn ScalarFn::from_values(std::function<double(double)> value, Interval domain) {
  auto map = [value, domain](const Jet& x) {
    const double x0 = x.c[0];
    std::array<double, Jet::max_order + 1> a{};
    a[0] = value(x0);
    for (int k = 1; k <= 4; ++k) a[k] = stencil(value, x0, k, domain) / std::tgamma(k + 1.0);
    return compose(a, 4, x);
  };
  return ScalarFn(map, domain, true);
}

ScalarFn ScalarFn::identity(Interval domain) {
  return ScalarFn([](const Jet& x) { return x; }, domain);
}

double ScalarFn::derivative(double x, int k) const {
  if (k == 0) return (*this)(x);
  Jet e = expand(x);
  if (k <= e.order) return e.derivative(k);
  auto lower = [this, k](double t) { return derivative(t, k - 1); };
  return stencil(lower, x, 1, dom_);
}

ScalarFn ScalarFn::derivative() const {
  JetMap base = f_;
  auto map = [base](const Jet& x) {
    Jet d = differentiate(base(Jet::variable(x.c[0])));
    return compose(d.c, d.order, x);
  };
  return ScalarFn(map, dom_, reduced_);
}

ScalarFn compose(const ScalarFn& outer, const ScalarFn& inner) {
  JetMap f = outer.map(), g = inner.map();
  return ScalarFn([f, g](const Jet& x) { return f(g(x)); }, inner.domain(),
                  outer.reduced_accuracy() || inner.reduced_accuracy());
}

double endpoint_value(const ScalarFn& f, double endpoint, bool upper) {
  auto eval = [&f](double x) {
    try {
      return f(x);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  double v = eval(endpoint);
  if (!std::isnan(v)) return v;
  const double offsets[] = {1e-300, 1e-200, 1e-100, 1e-30};
  const double far[] = {1e300, 1e200, 1e100, 1e30};
  for (int i = 0; i < 4; ++i) {
    double x;
    if (std::isinf(endpoint)) {
      x = upper ? far[i] : -far[i];
    } else {
      x = upper ? endpoint - offsets[i] * std::max(1.0, std::abs(endpoint))
                : endpoint + offsets[i] * std::max(1.0, std::abs(endpoint));
    }
    if (!f.domain().contains(x)) continue;
    v = eval(x);
    if (!std::isnan(v)) return v;
  }
  throw NumericError("cannot evaluate endpoint limit");
}

ScalarFn inverse(const ScalarFn& f, std::optional<Interval> range) {
  const Interval dom = f.domain();
  Interval image = range ? *range
                         : Interval{endpoint_value(f, dom.lo, false), endpoint_value(f, dom.hi, true)};
  const double guess = interior_guess(dom);
  auto map = [f, dom, guess](const Jet& y) {
    const double y0 = y.c[0];
    auto val = [&f](double x) { return f(x); };
    auto der = [&f](double x) { return f.d1(x); };
    const double x0 = solve_monotone(val, der, y0, dom, guess, true, RootOptions{1e-14});
    bool constant = true;
    for (int i = 1; i <= Jet::max_order; ++i)
      if (y.c[i] != 0.0) constant = false;
    if (constant) return Jet::constant(x0);
    Jet e = f.expand(x0);
    if (!(e.c[1] > 0)) throw InvariantError("inverse: derivative not positive");
    Jet r = revert(e, x0);
    return compose(r.c, r.order, y);
  };
  return ScalarFn(map, image, f.reduced_accuracy());
}

}  // namespace dgeo
