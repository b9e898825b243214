#pragma once

#include <functional>

#include "dgeo/scalar_fn.hpp"

namespace dgeo {

struct RootOptions {
  double ftol = 1e-12;   // absolute tolerance on f(x) - target
  int max_iter = 200;
  int max_expand = 2200;
};

// Solves f(x) = target for f strictly monotone on dom, by bracketed
// Newton with bisection fallback. df may be empty. guess must lie in dom.
// Throws DomainError when target is outside the range of f over dom.
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double target,
                      Interval dom, double guess, bool increasing,
                      const RootOptions& opt = {});

}  // namespace dgeo
