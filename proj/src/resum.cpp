#include "qlve/resum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "qlve/quadrature.hpp"

namespace qlve {

namespace {

cplx horner(const std::vector<cplx>& c, cplx t) {
  cplx v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

std::vector<cplx> derivative(const std::vector<cplx>& c) {
  std::vector<cplx> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
  return d;
}

std::vector<cplx> roots(std::vector<cplx> c) {
  while (c.size() > 1 && std::abs(c.back()) < 1e-300) c.pop_back();
  if (c.size() <= 1) return {};
  Eigen::VectorXcd coeffs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) coeffs[i] = c[i];
  Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(coeffs);
  std::vector<cplx> out;
  for (int i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
  return out;
}

// Divide by (t - r); the remainder is dropped.
std::vector<cplx> deflate(const std::vector<cplx>& c, cplx r) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cplx> q(n);
  cplx carry = 0;
  for (int i = n; i >= 1; --i) {
    carry = c[i] + carry * r;
    q[i - 1] = carry;
  }
  return q;
}

}  // namespace

std::vector<cplx> borel_transform(const std::vector<cplx>& a) {
  if (a.empty()) throw ConfigError("Borel transform needs at least one coefficient");
  std::vector<cplx> b(a.size());
  double f = 1;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (q > 0) f *= double(q);
    b[q] = a[q] / f;
  }
  return b;
}

std::vector<cplx> borel_transform(const SeriesData& a) { return borel_transform(a.coefficients); }

BorelRecon pade(const std::vector<cplx>& b, int L, int M) {
  if (L < 0 || M < 0) throw ConfigError("Padé orders must be non-negative");
  if (L + M + 1 > static_cast<int>(b.size()))
    throw ConfigError("Padé order [" + std::to_string(L) + "/" + std::to_string(M) + "] needs " +
                      std::to_string(L + M + 1) + " coefficients");
  auto coef = [&](int i) { return i >= 0 && i < static_cast<int>(b.size()) ? b[i] : cplx(0); };
  BorelRecon r;
  r.requestedM = M;
  std::vector<cplx> den{1.0};
  int m = M;
  for (; m >= 0; --m) {
    if (m == 0) {
      den = {1.0};
      break;
    }
    Eigen::MatrixXcd A(m, m);
    Eigen::VectorXcd rhs(m);
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j) A(i - 1, j - 1) = coef(L + i - j);
      rhs[i - 1] = -coef(L + i);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    double cond = s[0] > 0 ? s[m - 1] / s[0] : 0.0;
    if (cond < 1e-13) continue;
    Eigen::VectorXcd qv = A.fullPivLu().solve(rhs);
    den.assign(m + 1, 0.0);
    den[0] = 1.0;
    for (int j = 1; j <= m; ++j) den[j] = qv[j - 1];
    break;
  }
  r.usedM = m;
  std::vector<cplx> num(L + 1, 0.0);
  for (int i = 0; i <= L; ++i)
    for (int j = 0; j <= std::min(i, m); ++j) num[i] += den[j] * coef(i - j);
  // cancel pole-zero pairs
  bool changed = true;
  while (changed) {
    changed = false;
    auto zs = roots(num), ps = roots(den);
    for (const auto& p : ps) {
      for (const auto& z : zs) {
        if (std::abs(p - z) < 1e-6) {
          num = deflate(num, z);
          den = deflate(den, p);
          cplx d0 = den.empty() ? cplx(1) : den[0];
          for (auto& c : num) c /= d0;
          for (auto& c : den) c /= d0;
          if (num.empty()) num = {0.0};
          ++r.cancelledPairs;
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  if (den.empty() || std::abs(den[0]) == 0) throw NumericalError("Padé denominator vanishes at 0");
  r.padeNum = num;
  r.padeDen = den;
  r.poles = roots(den);
  return r;
}

cplx eval_rational(const BorelRecon& r, cplx t) { return horner(r.padeNum, t) / horner(r.padeDen, t); }

double pole_distance_to_positive_axis(const BorelRecon& r) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : r.poles) {
    double d = p.real() >= 0 ? std::abs(p.imag()) : std::abs(p);
    best = std::min(best, d);
  }
  return best;
}

cplx laplace_reconstruct(const BorelRecon& r, cplx eps, const LaplaceOptions& opt) {
  const double re = (1.0 / eps).real();
  if (!(re > 0)) throw DomainError("Laplace reconstruction needs Re(1/eps) > 0");
  if (r.padeDen.empty()) throw ConfigError("empty Padé approximant");
  if (pole_distance_to_positive_axis(r) < 1e-6) {
    std::ostringstream os;
    for (const auto& p : r.poles)
      if (p.real() >= -1e-6 && std::abs(p.imag()) < 1e-6) os << " t=" << p.real();
    throw PoleError("Padé pole on the Laplace contour:" + os.str());
  }
  const double T = opt.cutoffFactor * std::log(1e18) / re;
  const cplx inv = 1.0 / eps;
  auto f = [&](double t) { return inv * std::exp(-t * inv) * eval_rational(r, t); };
  // split at poles close to the axis so the adaptive rule sees smooth panels
  std::vector<double> cuts{0.0};
  for (const auto& p : r.poles)
    if (p.real() > 0 && p.real() < T) cuts.push_back(p.real());
  cuts.push_back(T);
  std::sort(cuts.begin(), cuts.end());
  cplx total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) total += integrate_adaptive(f, cuts[i], cuts[i + 1], opt.tol, 24).value;
  // (1/eps) int_T^inf e^{-t/eps} B(t) dt = e^{-T/eps} sum_j eps^j B^{(j)}(T)
  std::vector<cplx> P = r.padeNum, Q = r.padeDen;
  cplx tailSum = 0, epsPow = 1;
  for (int j = 0; j < 3; ++j) {
    // derivatives of P/Q by the quotient rule on polynomials
    cplx val = horner(P, T) / std::pow(horner(Q, T), j + 1);
    tailSum += epsPow * val;
    std::vector<cplx> dP = derivative(P), dQ = derivative(Q);
    // (P/Q^{j+1})' = (P' Q - (j+1) P Q') / Q^{j+2}
    std::vector<cplx> next(std::max(dP.size() + Q.size(), P.size() + dQ.size()) + 1, 0.0);
    for (std::size_t a = 0; a < dP.size(); ++a)
      for (std::size_t c = 0; c < Q.size(); ++c) next[a + c] += dP[a] * Q[c];
    for (std::size_t a = 0; a < P.size(); ++a)
      for (std::size_t c = 0; c < dQ.size(); ++c) next[a + c] -= double(j + 1) * P[a] * dQ[c];
    P = next;
    epsPow *= eps;
  }
  return total + std::exp(-T * inv) * tailSum;
}

}  // namespace qlve
