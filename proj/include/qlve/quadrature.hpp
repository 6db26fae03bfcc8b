#pragma once

#include <functional>
#include <vector>

#include "qlve/common.hpp"

namespace qlve {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes and weights normalised to probability measures.
const Rule& gauss_hermite(int p);          // standard normal N(0,1)
const Rule& gauss_legendre01(int p);       // uniform on [0,1]
const Rule& gauss_laguerre(int p, int alpha);  // Gamma(alpha+1, 1)

struct QuadResult {
  cplx value;
  double error;
};

// Adaptive Gauss-Kronrod on [a, b]; throws NumericalError when neither the relative
// tol nor the absolute absTol is reached.
QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol,
                              int maxDepth = 18, double absTol = 0);

}  // namespace qlve
