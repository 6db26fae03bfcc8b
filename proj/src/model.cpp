#include "qlve/model.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qlve/quadrature.hpp"

namespace qlve {

ModelPoint::ModelPoint(const SurfacePoint& g_, const EpsParam& e, double psi_, double t_)
    : g(g_), eps(e), psi(psi_), t(t_) {
  if (!(std::abs(psi - eps.arg) < kPi / 2)) throw DomainError("tilt violates |psi - theta| < pi/2");
  if (!(std::abs(g.liftedArg + psi) < kPi)) throw DomainError("tilt violates |phi + psi| < pi");
  if (!(t >= 0)) throw DomainError("t = |J|^2 must be nonnegative");
}

namespace {

// Integrand data along the line sigma = x + i*shift.
struct Contour {
  cplx z, a, eps;
  double shift = 0;
  double center = 0;
  double halfWidth = 0;
  double cutAngle = 0;
  double argOffset = 0;
  cplx logNorm = 0;  // exponent at the reference point, removed for scaling

  double arg_cont(cplx w) const {
    double x = std::arg(w) - cutAngle;
    x = std::fmod(x, 2 * kPi);
    if (x <= 0) x += 2 * kPi;
    return cutAngle - 2 * kPi + x - argOffset;
  }
  cplx log_cont(cplx w) const { return {std::log(std::abs(w)), arg_cont(w)}; }

  cplx sigma(double x) const { return {x, shift}; }
  cplx resolvent(cplx s) const { return 1.0 / (1.0 - cplx(0, 1) * a * s); }
  // -sigma^2/(2z) + (1/2eps) ln R, branch continuous from R(0) = 1
  cplx exponent(cplx s) const {
    cplx w = 1.0 - cplx(0, 1) * a * s;
    return -s * s / (2.0 * z) - log_cont(w) / (2.0 * eps);
  }
};

Contour make_contour(const SurfacePoint& g, const EpsParam& e, double psi, bool shiftToSaddle) {
  Contour c;
  c.eps = e.value();
  c.z = c.eps * std::polar(1.0, -psi);
  c.a = lift_sqrt(g) * std::polar(1.0, psi / 2);
  cplx n = c.a / std::abs(c.a);
  double tau0 = n.real();
  cplx star = 0;
  if (shiftToSaddle) {
    cplx pg = project(g);
    star = cplx(0, 1) * (std::sqrt(1.0 + 2.0 * pg) - 1.0) / (2.0 * c.a);
    if (!(std::isfinite(star.real()) && std::isfinite(star.imag()))) star = 0;
    double y = star.imag();
    // keep the pole strictly outside the strip swept by the shift
    double limit = -0.5 * tau0 / std::abs(c.a);
    if (y < limit) y = limit;
    c.shift = y;
    c.center = star.real();
  }
  c.cutAngle = std::arg(-n);
  c.argOffset = 0;
  c.argOffset = c.arg_cont(1.0);
  double reInvZ = (1.0 / c.z).real();
  c.halfWidth = 1.25 * std::sqrt(2 * std::log(1e18) / reInvZ) + 3 * std::abs(c.shift);
  c.logNorm = c.exponent(c.sigma(c.center));
  return c;
}

// Composite Gauss-Legendre over [center-L, center+L], accumulating several
// integrands at once; panels double until two successive passes agree.
struct MultiQuad {
  std::vector<cplx> values;
  double error;
};

MultiQuad integrate_multi(const Contour& c, const std::function<void(cplx, cplx, std::vector<cplx>&)>& acc,
                          int count, double tol) {
  const Rule& rule = gauss_legendre01(20);
  auto run = [&](int panels) {
    std::vector<cplx> sums(count, 0.0), tmp(count);
    double a = c.center - c.halfWidth, h = 2 * c.halfWidth / panels;
    for (int p = 0; p < panels; ++p) {
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double x = a + h * (p + rule.x[i]);
        cplx s = c.sigma(x);
        cplx f = std::exp(c.exponent(s) - c.logNorm);
        std::fill(tmp.begin(), tmp.end(), 0.0);
        acc(s, f, tmp);
        for (int j = 0; j < count; ++j) sums[j] += h * rule.w[i] * tmp[j];
      }
    }
    return sums;
  };
  int panels = 16;
  auto prev = run(panels);
  for (int it = 0; it < 8; ++it) {
    panels *= 2;
    auto cur = run(panels);
    double err = 0, scale = 0;
    for (int j = 0; j < count; ++j) {
      err = std::max(err, std::abs(cur[j] - prev[j]));
      scale = std::max(scale, std::abs(cur[j]));
    }
    if (err <= tol * scale || err < 1e-300) return {cur, err / std::max(scale, 1e-300)};
    prev = std::move(cur);
  }
  throw NumericalError("sigma quadrature did not converge");
}

}  // namespace

PartitionResult partition(const ModelPoint& p, const OracleOptions& opt) {
  Contour c = make_contour(p.g, p.eps, p.psi, opt.saddleShift);
  auto f = [&](double x) {
    cplx s = c.sigma(x);
    cplx e = c.exponent(s) - c.logNorm + p.t / (2.0 * c.eps) * c.resolvent(s);
    return std::exp(e);
  };
  double err = 0;
  cplx v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, c.center - c.halfWidth, c.center + c.halfWidth, 20, opt.tol * 1e-2, &err);
  if (!(std::isfinite(v.real()) && std::isfinite(v.imag())))
    throw NumericalError("partition quadrature produced a non-finite value");
  double rel = err / std::max(std::abs(v), 1e-300);
  if (rel > opt.tol) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "partition quadrature error %.3g above tol %.3g", rel, opt.tol);
    throw NumericalError(msg);
  }
  cplx scale = std::exp(c.logNorm) / std::sqrt(2 * kPi * c.z);
  return {scale * v, rel * std::abs(scale * v), c.shift};
}

CumulantResult cumulant_oracle(const SurfacePoint& g, const EpsParam& eps, double psi, int k,
                               const OracleOptions& opt) {
  if (k < 1) throw ConfigError("cumulant order k must be >= 1");
  ModelPoint check(g, eps, psi);
  Contour c = make_contour(g, eps, psi, opt.saddleShift);
  const int J = k + 8;
  const cplx twoEps = 2.0 * c.eps;
  // pass 1: m_0 and the mean of R
  auto first = integrate_multi(
      c,
      [&](cplx s, cplx f, std::vector<cplx>& out) {
        cplx r = c.resolvent(s);
        out[0] = f;
        out[1] = f * r;
      },
      2, opt.tol);
  cplx m0 = first.values[0];
  cplx mu = first.values[1] / m0;
  // pass 2: central moments of R and the moment series of the t expansion
  auto second = integrate_multi(
      c,
      [&](cplx s, cplx f, std::vector<cplx>& out) {
        cplx r = c.resolvent(s);
        cplx d = r - mu, pd = 1.0;
        for (int j = 0; j <= k; ++j) {
          out[j] = f * pd;
          pd *= d;
        }
        cplx y = r / twoEps, py = 1.0;
        double fact = 1;
        for (int j = 0; j <= J; ++j) {
          if (j > 0) fact *= j;
          out[k + 1 + j] = f * py / fact;
          py *= y;
        }
      },
      k + J + 2, opt.tol);
  std::vector<cplx> central(k + 1);
  for (int j = 0; j <= k; ++j) central[j] = second.values[j] / second.values[0];
  central[1] = 0;
  // cumulants of the centred variable from its central moments
  std::vector<cplx> kappa(k + 1, 0.0);
  for (int nn = 2; nn <= k; ++nn) {
    cplx v = central[nn];
    for (int m = 2; m <= nn - 2; ++m) v -= binomial(nn - 1, m - 1).convert_to<double>() * kappa[m] * central[nn - m];
    kappa[nn] = v;
  }
  cplx kk = k == 1 ? mu : kappa[k];
  CumulantResult res;
  res.value = std::pow(c.eps, 1 - k) * kk;
  res.error = std::max(first.error, second.error) * std::max(1.0, std::abs(res.value)) *
              std::pow(std::abs(mu) / std::max(std::abs(kk), 1e-300) + 1.0, k > 1 ? 1.0 : 0.0);
  res.moments.resize(J + 1);
  cplx base = second.values[k + 1];
  for (int j = 0; j <= J; ++j) res.moments[j] = second.values[k + 1 + j] / base;
  res.ratio = 0;
  for (int j = J / 2; j < J; ++j)
    res.ratio = std::max(res.ratio, std::abs(res.moments[j + 1] / res.moments[j]));
  return res;
}

RadialResult radial_oracle(int N, cplx g, int k, double tol) {
  if (N < 1) throw ConfigError("radial_oracle needs N >= 1");
  if (k < 1 || k > 2) throw ConfigError("radial_oracle supports k = 1, 2");
  if (!(g.real() > 0) && std::abs(g) > 0) throw DomainError("radial_oracle needs Re g > 0");
  const double top = 12.0 + 3.0 * std::sqrt(double(N + 2 * k));
  // peak of r^{N-1} e^{-r^2/2} sits near sqrt(N-1); factor it out
  const double rp = std::sqrt(std::max(N - 1.0, 1.0));
  auto logw = [&](double r) { return (N - 1) * std::log(r / rp) - 0.5 * (r * r - rp * rp); };
  RadialResult res;
  res.radialMoments.resize(k + 1);
  double errMax = 0;
  for (int p = 0; p <= k; ++p) {
    auto f = [&](double r) -> cplx {
      if (r <= 0) return N == 1 && p == 0 ? std::exp(0.5 * rp * rp) : cplx(0);
      return std::pow(r, 2 * p) * std::exp(cplx(logw(r), 0) - g * std::pow(r, 4) / (8.0 * N));
    };
    double err = 0;
    res.radialMoments[p] =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, top, 20, tol, &err);
    errMax = std::max(errMax, err / std::abs(res.radialMoments[p]));
  }
  cplx z0 = res.radialMoments[0];
  cplx M1 = res.radialMoments[1] / z0;
  for (auto& m : res.radialMoments) m /= z0;
  if (k == 1) {
    res.value = M1 / double(N);
  } else {
    cplx M2 = res.radialMoments[2];
    res.value = M2 / double(N + 2) - M1 * M1 / double(N);
  }
  res.error = 4 * errMax * std::max(1.0, std::abs(M1));
  if (errMax > 1e3 * tol) throw NumericalError("radial quadrature did not converge");
  return res;
}

cplx direct_n1_partition(cplx g, double tol) {
  auto f = [&](double x) -> cplx {
    return std::exp(-0.5 * x * x - g * std::pow(x, 4) / 8.0) / std::sqrt(2 * kPi);
  };
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 20, tol, &err);
}

}  // namespace qlve
