#include "dgeo/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dgeo/errors.hpp"

namespace dgeo {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule(const std::function<double(double)>& g, double a, double b) {
  double err = 0.0;
  double v = GK::integrate(g, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

QuadResult adapt(const std::function<double(double)>& g, double a, double b,
                 const QuadOptions& opt) {
  std::priority_queue<Segment> heap;
  Segment s = rule(g, a, b);
  double total = s.value, err = s.error;
  heap.push(s);
  int n = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && n < opt.max_segments) {
    Segment top = heap.top();
    heap.pop();
    const double m = top.a + (top.b - top.a) / 2;
    if (m <= top.a || m >= top.b) {
      heap.push(top);
      break;
    }
    Segment l = rule(g, top.a, m), r = rule(g, m, top.b);
    total += l.value + r.value - top.value;
    err += l.error + r.error - top.error;
    heap.push(l);
    heap.push(r);
    n += 1;
  }
  // recompute sums to shed accumulated rounding
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(total)) throw NumericError("quadrature produced a non-finite value");
  return {total, err, n};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt, double center) {
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(f, b, a, opt, center);
    r.value = -r.value;
    return r;
  }
  constexpr double half_pi = std::numbers::pi / 2;
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adapt(f, a, b, opt);

  double base;
  double u0, u1;
  if (lo_inf && hi_inf) {
    base = center;
    u0 = -half_pi;
    u1 = half_pi;
  } else if (hi_inf) {
    base = a;
    u0 = 0.0;
    u1 = half_pi;
  } else {
    base = b;
    u0 = -half_pi;
    u1 = 0.0;
  }
  auto g = [&f, base](double u) {
    const double t = std::tan(u);
    const double jac = 1.0 + t * t;
    if (!std::isfinite(jac)) return 0.0;
    const double v = f(base + t);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return adapt(g, u0, u1, opt);
}

QuadResult integrate_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const std::vector<std::pair<double, double>>& box,
                         const QuadOptions& opt, const Eigen::VectorXd& center) {
  const int dim = static_cast<int>(box.size());
  if (dim < 1 || dim > 3) throw DomainError("integrate_box supports dimensions 1..3");
  Eigen::VectorXd c = center.size() == dim ? center : Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd x(dim);
  QuadOptions inner = opt;
  inner.abs_tol = opt.abs_tol / 10;
  inner.rel_tol = opt.rel_tol / 10;
  std::function<double(int)> level = [&](int i) -> double {
    auto g = [&, i](double t) {
      x[i] = t;
      if (i + 1 == dim) return f(x);
      return level(i + 1);
    };
    return integrate(g, box[i].first, box[i].second, i == 0 ? opt : inner, c[i]).value;
  };
  QuadResult r;
  r.value = level(0);
  r.error = opt.abs_tol;
  return r;
}

}  // namespace dgeo
