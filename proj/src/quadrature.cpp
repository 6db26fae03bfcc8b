#include "qlve/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace qlve {

namespace {

// Golub-Welsch: eigen-decomposition of the Jacobi matrix; weights from the
// first components of the eigenvectors.
Rule golub_welsch(const std::vector<double>& diag, const std::vector<double>& off) {
  const int p = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < p; ++i) J(i, i + 1) = J(i + 1, i) = off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.x.resize(p);
  r.w.resize(p);
  for (int i = 0; i < p; ++i) {
    r.x[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    r.w[i] = v * v;
  }
  return r;
}

std::mutex cacheMutex;

}  // namespace

const Rule& gauss_hermite(int p) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(cacheMutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::vector<double> d(p, 0.0), o(std::max(p - 1, 0));
  for (int i = 0; i + 1 < p; ++i) o[i] = std::sqrt(double(i + 1));
  return cache.emplace(p, golub_welsch(d, o)).first->second;
}

const Rule& gauss_legendre01(int p) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(cacheMutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::vector<double> d(p, 0.0), o(std::max(p - 1, 0));
  for (int i = 0; i + 1 < p; ++i) {
    double k = i + 1;
    o[i] = k / std::sqrt(4 * k * k - 1);
  }
  Rule r = golub_welsch(d, o);
  for (auto& x : r.x) x = 0.5 * (x + 1);
  return cache.emplace(p, r).first->second;
}

const Rule& gauss_laguerre(int p, int alpha) {
  static std::map<std::pair<int, int>, Rule> cache;
  std::lock_guard<std::mutex> lock(cacheMutex);
  auto key = std::make_pair(p, alpha);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> d(p), o(std::max(p - 1, 0));
  for (int i = 0; i < p; ++i) d[i] = 2 * i + alpha + 1;
  for (int i = 0; i + 1 < p; ++i) o[i] = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
  return cache.emplace(key, golub_welsch(d, o)).first->second;
}

QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol,
                              int maxDepth, double absTol) {
  double err = 0;
  cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, maxDepth, tol, &err);
  double scale = std::max(std::abs(v), 1e-300);
  if (!(std::isfinite(v.real()) && std::isfinite(v.imag())))
    throw NumericalError("adaptive quadrature produced a non-finite value");
  if (err > std::max(100 * tol * scale, absTol) && err > 1e-14) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "adaptive quadrature did not converge: error estimate %.3g", err);
    throw NumericalError(msg);
  }
  return {v, err};
}

}  // namespace qlve
