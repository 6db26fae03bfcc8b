#pragma once

#include <vector>

#include "qlve/surface.hpp"

namespace qlve {

struct ModelPoint {
  SurfacePoint g;
  EpsParam eps;
  double psi = 0.0;
  double t = 0.0;

  ModelPoint(const SurfacePoint& g_, const EpsParam& e, double psi_, double t_ = 0.0);
};

struct OracleOptions {
  double tol = 1e-10;
  bool saddleShift = true;
};

struct PartitionResult {
  cplx value;
  double error;
  double shift;  // imaginary offset of the integration line
};

struct CumulantResult {
  cplx value;
  double error;
  std::vector<cplx> moments;  // m_j / m_0 for j = 0..k+8
  double ratio;               // largest |m_{j+1}/m_j| over the last half of the moments
};

struct RadialResult {
  cplx value;
  double error;
  std::vector<cplx> radialMoments;  // M_0..M_k
};

PartitionResult partition(const ModelPoint& p, const OracleOptions& opt = {});
CumulantResult cumulant_oracle(const SurfacePoint& g, const EpsParam& eps, double psi, int k,
                               const OracleOptions& opt = {});
RadialResult radial_oracle(int N, cplx g, int k, double tol = 1e-12);

// Direct N-dimensional integral with N = 1: int dmu_1(phi) exp(-g phi^4 / 8).
cplx direct_n1_partition(cplx g, double tol = 1e-13);

}  // namespace qlve
