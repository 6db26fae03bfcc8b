#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlve/combin.hpp"
#include "qlve/surface.hpp"

namespace qlve {

struct LveScheme {
  // Gauss-Laguerre nodes per vertex for the deterministic orders n <= 4
  int laguerreNodes[5] = {0, 48, 32, 18, 10};
  int monteCarloFromN = 5;
  std::int64_t samples = 200000;  // per order, split over tree classes
  std::uint64_t seed = 20240611ULL;
  int threads = 0;  // 0: environment QLVE_THREADS or hardware concurrency
  bool allowMonteCarlo = true;
  int treeCap = 8;
};

struct ClassContribution {
  std::string shape;
  std::vector<int> cilia;
  std::uint64_t labelledCount = 0;
  cplx value;
  double error = 0;
};

struct TreeTerm {
  int n = 0;
  cplx value;
  double errEstimate = 0;
  bool monteCarlo = false;
  std::vector<ClassContribution> breakdown;
};

struct LveResult {
  cplx value;
  double error = 0;
  double tailBound = 0;
  double gamma = 0;
  std::vector<TreeTerm> terms;
};

struct SeriesData {
  int k = 1;
  SurfacePoint gPoint;
  int nMax = 0;
  std::vector<cplx> coefficients;  // a_0..a_Q, n-sum re-expanded in w = (sqrt(1+2u)-1)/(sqrt(1+2u)+1)
  std::vector<cplx> rawSums;       // plain partial n-sums
  std::vector<double> truncation;  // n-tail estimate per coefficient
  std::vector<bool> flagged;       // tail estimate above 1% of |a_q|
  // exact g-independent rationals: a_q = sum_n 2^{k-1} (-1/2)^{n-1} (-1)^q Y[n][q] (Pi g)^{n-1+q}
  std::vector<std::vector<Rational>> exact;
};

struct RemainderResult {
  cplx value;
  double error = 0;
};

// Order-n term of the cumulant expansion. tailOrder = q > 0 returns instead the
// Taylor remainder of order q in eps of the same term.
TreeTerm lve_term(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int n,
                  const LveScheme& scheme = {}, int tailOrder = 0);

LveResult lve_cumulant(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int nMax,
                       double tol = 1e-6, const LveScheme& scheme = {});

SeriesData eps_coefficients(const SurfacePoint& g, double psi, int k, int qMax, int nMax);

RemainderResult remainder(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int q, int nMax,
                          const LveScheme& scheme = {});

// (1/n!) sum over labelled trees and ordered cilia of the order-eps^q Gaussian
// coefficient with the u-integral done exactly; equals ciliated_sum at q = 0.
Rational tree_coefficient(int n, int k, int q);

// Exponential divided difference e[x_0..x_m] and its Taylor tail sum_{p>=q} of
// the homogeneous parts.
void exp_divided_difference(const cplx* x, int count, int q, cplx& full, cplx& tail);

// Tail bound sum_{n>nMax} C n^{k-2} gamma^{n-1} with C fitted from the last three terms.
double tail_bound(const std::vector<TreeTerm>& terms, int k, double gamma);

int default_threads();

}  // namespace qlve
