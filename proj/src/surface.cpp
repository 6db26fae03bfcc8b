#include "qlve/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace qlve {

SurfacePoint::SurfacePoint(double m, double phi) : modulus(m), liftedArg(phi) {
  if (!(m > 0)) throw DomainError("surface point needs a positive modulus");
  if (!(phi > -2 * kPi && phi <= 2 * kPi)) throw DomainError("lifted argument outside (-2pi, 2pi]");
}

SurfacePoint SurfacePoint::from_complex(cplx g) { return SurfacePoint(std::abs(g), std::arg(g)); }

EpsParam::EpsParam(double m, double theta) : modulus(m), arg(theta) {
  if (!(m > 0)) throw DomainError("eps needs a positive modulus");
  if (!(std::abs(theta) < kPi / 2)) throw DomainError("eps must lie in the right half plane");
}

cplx project(const SurfacePoint& g) { return std::polar(g.modulus, g.liftedArg); }

cplx lift_sqrt(const SurfacePoint& g) {
  // sqrt|g| e^{i phi/2} is the principal root for phi in (-pi, pi] and minus it beyond
  return std::polar(std::sqrt(g.modulus), g.liftedArg / 2);
}

cplx resolvent(cplx sigma, const SurfacePoint& g) {
  cplx a = lift_sqrt(g);
  cplx w = 1.0 - cplx(0, 1) * sigma * a;
  if (std::abs(w) <= 1e-14 * (1.0 + std::abs(sigma * a)))
    throw PoleError("resolvent evaluated at its pole sigma = 1/(i sqrt g)");
  return 1.0 / w;
}

bool tilt_admissible(const SurfacePoint& g, const EpsParam& eps, double psi) {
  return std::abs(g.liftedArg + psi) < kPi && std::abs(psi - eps.arg) < kPi / 2;
}

double cardioid_bound(double phi, double theta, double psi) {
  if (!(std::abs(phi + psi) < kPi && std::abs(psi - theta) < kPi / 2)) return 0.0;
  return 0.25 * (1 + std::cos(phi + psi)) * std::sqrt(std::cos(psi - theta));
}

namespace {

struct Interval {
  double lo, hi;
  bool empty() const { return !(lo < hi); }
};

Interval admissible_psi(double phi, double theta, double alpha) {
  double s = 1 - alpha;
  Interval a{-kPi * s - phi, kPi * s - phi};
  Interval b{theta - kPi / 2 * s, theta + kPi / 2 * s};
  return {std::max({a.lo, b.lo, -kPi}), std::min({a.hi, b.hi, kPi})};
}

// Derivative of log of the cardioid bound; strictly decreasing in psi.
double dlog_bound(double phi, double theta, double psi) {
  return -std::tan((phi + psi) / 2) - 0.5 * std::tan(psi - theta);
}

// Grid scan, golden-section ascent in the winning bracket, then a bisection polish on
// the log-derivative (the objective is log-concave on the admissible interval).
std::pair<double, double> maximize_bound(double phi, double theta, Interval iv) {
  const int grid = 64;
  auto f = [&](double psi) {
    return 0.25 * (1 + std::cos(phi + psi)) * std::sqrt(std::max(0.0, std::cos(psi - theta)));
  };
  double h = (iv.hi - iv.lo) / grid;
  int best = 0;
  double bestVal = -1;
  for (int i = 0; i < grid; ++i) {
    double v = f(iv.lo + (i + 0.5) * h);
    if (v > bestVal) {
      bestVal = v;
      best = i;
    }
  }
  double a = iv.lo + std::max(0, best - 1) * h + (best == 0 ? 0.0 : 0.5 * h);
  double b = iv.lo + std::min(grid, best + 2) * h - (best == grid - 1 ? 0.0 : 0.5 * h);
  auto neg = [&](double psi) { return -f(psi); };
  auto gs = boost::math::tools::brent_find_minima(neg, a, b, 40);
  double psi = gs.first;
  double lo = a, hi = b;
  if (dlog_bound(phi, theta, lo) > 0 && dlog_bound(phi, theta, hi) < 0) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      if (dlog_bound(phi, theta, mid) > 0)
        lo = mid;
      else
        hi = mid;
    }
    psi = 0.5 * (lo + hi);
  }
  double v = f(psi);
  if (v < bestVal) {
    psi = iv.lo + (best + 0.5) * h;
    v = bestVal;
  }
  return {v, psi};
}

}  // namespace

DomainReport cardioid_contains(const SurfacePoint& g, const EpsParam& eps, double alpha) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("alpha must lie in [0, 1)");
  DomainReport rep;
  Interval iv = admissible_psi(g.liftedArg, eps.arg, alpha);
  if (iv.empty()) {
    rep.margin = -g.modulus;
    return rep;
  }
  auto [best, psi] = maximize_bound(g.liftedArg, eps.arg, iv);
  rep.margin = best * (1 - alpha) - g.modulus;
  rep.inCardioid = rep.margin > 0;
  if (rep.inCardioid) rep.psiUsed = psi;
  return rep;
}

std::pair<double, double> max_radius(double phi, double theta) {
  if (!(std::abs(theta) < kPi / 2)) throw DomainError("max_radius needs |theta| < pi/2");
  Interval iv = admissible_psi(phi, theta, 0.0);
  if (iv.empty()) throw DomainError("no admissible tilt for this (phi, theta)");
  return maximize_bound(phi, theta, iv);
}

double convergence_ratio(const SurfacePoint& g, const EpsParam& eps, double psi) {
  double den = (1 + std::cos(g.liftedArg + psi)) * std::sqrt(std::cos(psi - eps.arg));
  if (!(den > 0) || !tilt_admissible(g, eps, psi)) return std::numeric_limits<double>::infinity();
  return 4 * g.modulus / den;
}

double rho_xi(double xi, double phi, const RhoOptions& opt) {
  if (!(xi > 0 && xi < 1)) throw DomainError("xi must lie in (0, 1)");
  // some theta in the open interval violates |phi + xi theta| < pi: the bound
  // tends to zero along the admissibility boundary
  if (std::abs(phi) + xi * kPi / 2 >= kPi) return 0.0;
  auto h = [&](double th) {
    return 0.25 * (1 + std::cos(phi + xi * th)) * std::sqrt(std::cos((1 - xi) * th));
  };
  const int m = opt.thetaSteps;
  const double step = kPi / m;
  int best = 0;
  double bestVal = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    double v = h(-kPi / 2 + (j + 0.5) * step);
    if (v < bestVal) {
      bestVal = v;
      best = j;
    }
  }
  if (!opt.refine) return bestVal;
  // endpoint limits are part of the infimum over the open interval
  double rho = std::min({bestVal, h(-kPi / 2), h(kPi / 2)});
  double a = -kPi / 2 + std::max(0, best - 1) * step;
  double b = -kPi / 2 + std::min(m, best + 2) * step;
  int bits = std::max(10, static_cast<int>(-std::log2(opt.tol * 1e-3)));
  auto r = boost::math::tools::brent_find_minima(h, a, b, std::min(bits, 52));
  return std::min(rho, r.second);
}

std::vector<std::pair<double, double>> rho_xi_curve(double xi, const std::vector<double>& phiGrid,
                                                    const RhoOptions& opt) {
  std::vector<std::pair<double, double>> out;
  out.reserve(phiGrid.size());
  for (double phi : phiGrid) {
    if (!(phi > -kPi - 1e-15 && phi <= kPi + 1e-15)) throw DomainError("phi grid outside (-pi, pi]");
    out.push_back({phi, rho_xi(xi, phi, opt)});
  }
  return out;
}

std::vector<double> uniform_phi_grid(int steps) {
  if (steps < 2) throw ConfigError("phi grid needs at least 2 steps");
  std::vector<double> g(steps + 1);
  for (int i = 0; i <= steps; ++i) g[i] = -kPi + 2 * kPi * i / steps;
  return g;
}

std::string rho_curve_csv(const std::vector<std::pair<double, double>>& curve, double xi) {
  std::string out = "phi,rho,xi\n";
  char buf[128];
  for (auto [phi, rho] : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", phi, rho, xi);
    out += buf;
  }
  return out;
}

bool sokal_disk_contains(const EpsParam& eps, double R) {
  if (!(R > 0)) throw DomainError("Sokal disk radius must be positive");
  return (1.0 / eps.value()).real() > 1.0 / R;
}

}  // namespace qlve
