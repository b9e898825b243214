#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "dgeo/taylor.hpp"

namespace dgeo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = kInf;

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool valid() const { return lo < hi && !std::isnan(lo) && !std::isnan(hi); }
  std::string str() const;

  static Interval positive() { return {0.0, kInf}; }
  static Interval real_line() { return {-kInf, kInf}; }
};

using Jet = Taylor<double, 6>;
using JetMap = std::function<Jet(const Jet&)>;

// A smooth real function carried as a map on truncated Taylor series, so that
// derivatives of every order up to Jet::max_order are available and compose
// exactly.
class ScalarFn {
 public:
  ScalarFn() = default;
  ScalarFn(JetMap f, Interval domain, bool reduced_accuracy = false);

  // Analytic value, first and second derivative; higher orders by
  // finite differences of d2 (flagged reduced accuracy).
  static ScalarFn from_derivatives(std::function<double(double)> value,
                                   std::function<double(double)> d1,
                                   std::function<double(double)> d2,
                                   Interval domain);
  // Value only; all derivatives by 5-point finite differences.
  static ScalarFn from_values(std::function<double(double)> value,
                              Interval domain);
  static ScalarFn identity(Interval domain);

  double operator()(double x) const { return f_(Jet::constant(x)).c[0]; }
  Jet operator()(const Jet& x) const { return f_(x); }

  // Expansion around x.
  Jet expand(double x) const { return f_(Jet::variable(x)); }
  double derivative(double x, int k) const;
  double d1(double x) const { return derivative(x, 1); }
  double d2(double x) const { return derivative(x, 2); }
  double d3(double x) const { return derivative(x, 3); }

  // f' as a function.
  ScalarFn derivative() const;

  const Interval& domain() const { return dom_; }
  const JetMap& map() const { return f_; }
  bool reduced_accuracy() const { return reduced_; }
  explicit operator bool() const { return static_cast<bool>(f_); }

 private:
  JetMap f_;
  Interval dom_;
  bool reduced_ = false;
};

ScalarFn compose(const ScalarFn& outer, const ScalarFn& inner);

// Inverse of a strictly increasing function; the result's domain is the
// image of f's domain, evaluated at the endpoints unless given.
ScalarFn inverse(const ScalarFn& f, std::optional<Interval> range = std::nullopt);

// Limit of f at an endpoint of its domain, approached from inside.
double endpoint_value(const ScalarFn& f, double endpoint, bool upper);

}  // namespace dgeo
