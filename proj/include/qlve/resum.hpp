#pragma once

#include <vector>

#include "qlve/lve.hpp"

namespace qlve {

struct BorelRecon {
  std::vector<cplx> padeNum;  // ascending powers of t
  std::vector<cplx> padeDen;  // padeDen[0] = 1
  std::vector<cplx> poles;
  cplx laplaceValue;
  cplx directValue;
  int requestedM = 0;
  int usedM = 0;         // denominator degree after reductions
  int cancelledPairs = 0;  // Froissart doublets removed
};

std::vector<cplx> borel_transform(const SeriesData& a);
std::vector<cplx> borel_transform(const std::vector<cplx>& a);

BorelRecon pade(const std::vector<cplx>& b, int L, int M);

cplx eval_rational(const BorelRecon& r, cplx t);

// Distance from the poles to [0, inf).
double pole_distance_to_positive_axis(const BorelRecon& r);

struct LaplaceOptions {
  double tol = 1e-13;
  double cutoffFactor = 1.0;  // multiplies T = ln(1e18) / Re(1/eps)
};

cplx laplace_reconstruct(const BorelRecon& r, cplx eps, const LaplaceOptions& opt = {});

}  // namespace qlve
