#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dgeo {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_segments = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int segments = 0;
};

// Globally adaptive 15/31-point Gauss-Kronrod integration. Infinite ends are
// mapped with x = c + tan(u), c = center when both ends are infinite.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {}, double center = 0.0);

// Iterated integration over a (possibly infinite) box; dimension <= 3.
QuadResult integrate_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const std::vector<std::pair<double, double>>& box,
                         const QuadOptions& opt = {},
                         const Eigen::VectorXd& center = Eigen::VectorXd());

}  // namespace dgeo
