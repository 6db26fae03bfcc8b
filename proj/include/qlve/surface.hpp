#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlve/common.hpp"

namespace qlve {

// Point of the two-sheeted surface of the square root.
struct SurfacePoint {
  double modulus = 1.0;
  double liftedArg = 0.0;  // in (-2pi, 2pi]

  SurfacePoint() = default;
  SurfacePoint(double m, double phi);
  static SurfacePoint from_complex(cplx g);
};

struct EpsParam {
  double modulus = 1.0;
  double arg = 0.0;  // theta, |theta| < pi/2

  EpsParam() = default;
  EpsParam(double m, double theta);
  cplx value() const { return std::polar(modulus, arg); }
};

struct DomainReport {
  bool inCardioid = false;
  std::optional<double> psiUsed;
  double margin = 0.0;
};

cplx project(const SurfacePoint& g);
cplx lift_sqrt(const SurfacePoint& g);
cplx resolvent(cplx sigma, const SurfacePoint& g);

// Admissibility of a tilt for (g, eps): |phi+psi| < pi and |psi-theta| < pi/2.
bool tilt_admissible(const SurfacePoint& g, const EpsParam& eps, double psi);

// 1/4 (1+cos(phi+psi)) sqrt(cos(psi-theta)), zero outside the admissible set.
double cardioid_bound(double phi, double theta, double psi);

DomainReport cardioid_contains(const SurfacePoint& g, const EpsParam& eps, double alpha);
std::pair<double, double> max_radius(double phi, double theta);

// Ratio 4|g| / [(1+cos(phi+psi)) sqrt(cos(psi-theta))].
double convergence_ratio(const SurfacePoint& g, const EpsParam& eps, double psi);

struct RhoOptions {
  int thetaSteps = 512;
  bool refine = true;
  double tol = 1e-6;
};
double rho_xi(double xi, double phi, const RhoOptions& opt = {});
std::vector<std::pair<double, double>> rho_xi_curve(double xi, const std::vector<double>& phiGrid,
                                                    const RhoOptions& opt = {});
std::vector<double> uniform_phi_grid(int steps);
std::string rho_curve_csv(const std::vector<std::pair<double, double>>& curve, double xi);

bool sokal_disk_contains(const EpsParam& eps, double R);

}  // namespace qlve
