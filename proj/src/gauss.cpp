#include "qlve/gauss.hpp"

#include <cmath>
#include <map>
#include <random>

#include "qlve/quadrature.hpp"

namespace qlve {

Covariance::Covariance(const Eigen::MatrixXd& m) : n(static_cast<int>(m.rows())), matrix(m) {
  if (m.rows() != m.cols()) throw DomainError("covariance must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("covariance must be symmetric");
}

Covariance Covariance::identity(int n) { return Covariance(Eigen::MatrixXd::Identity(n, n)); }
Covariance Covariance::ones(int n) { return Covariance(Eigen::MatrixXd::Ones(n, n)); }

ComplexScale::ComplexScale(cplx v) : z(v) {
  if (!(v.real() > 0)) throw DomainError("complex scale needs Re z > 0");
}

namespace {

struct Factor {
  Eigen::MatrixXd A;  // x = A xi with xi standard normal on the active directions
};

Factor factorize(const Covariance& C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C.matrix);
  const auto& ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -kKernelThreshold)
    throw IndefiniteCovariance("covariance has a negative eigenvalue " + std::to_string(ev.minCoeff()));
  std::vector<int> active;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > kKernelThreshold) active.push_back(i);
  Factor f;
  f.A.resize(C.n, active.size());
  for (std::size_t j = 0; j < active.size(); ++j)
    f.A.col(j) = es.eigenvectors().col(active[j]) * std::sqrt(ev(active[j]));
  return f;
}

cplx tensor_gh(const Factor& f, const RealIntegrand& F, int p) {
  const int r = static_cast<int>(f.A.cols());
  const Rule& rule = gauss_hermite(p);
  std::vector<int> idx(r, 0);
  Eigen::VectorXd xi(r);
  cplx total = 0;
  while (true) {
    double w = 1;
    for (int j = 0; j < r; ++j) {
      xi(j) = rule.x[idx[j]];
      w *= rule.w[idx[j]];
    }
    total += w * F(f.A * xi);
    int j = 0;
    while (j < r && ++idx[j] == p) idx[j++] = 0;
    if (j == r) break;
  }
  return total;
}

}  // namespace

Expectation expect_real(const Covariance& C, const RealIntegrand& F, const QuadSpec& spec) {
  Factor f = factorize(C);
  const int r = static_cast<int>(f.A.cols());
  bool mc = spec.kind == QuadSpec::Kind::MonteCarlo || (spec.kind == QuadSpec::Kind::Auto && r > 6);
  if (!mc) {
    int p = spec.order > 0 ? spec.order : (r <= 3 ? 40 : 20);
    cplx hi = tensor_gh(f, F, p);
    cplx lo = tensor_gh(f, F, std::max(2, (2 * p) / 3));
    return {hi, std::abs(hi - lo)};
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  const std::int64_t pairs = std::max<std::int64_t>(1, spec.samples / 2);
  Eigen::VectorXd xi(r);
  cplx mean = 0;
  double m2 = 0;
  for (std::int64_t s = 0; s < pairs; ++s) {
    for (int j = 0; j < r; ++j) xi(j) = normal(rng);
    Eigen::VectorXd x = f.A * xi;
    cplx v = 0.5 * (F(x) + F(-x));
    cplx d = v - mean;
    mean += d / double(s + 1);
    m2 += std::norm(d) * double(s) / double(s + 1);
  }
  double var = pairs > 1 ? m2 / double(pairs - 1) : 0.0;
  return {mean, std::sqrt(var / double(pairs))};
}

Expectation expect_complex(const ComplexScale& z, const Covariance& C, const ComplexIntegrand& F,
                           const QuadSpec& spec) {
  cplx lambda = std::sqrt(z.z);
  return expect_real(C, [&](const Eigen::VectorXd& x) { return F(lambda * x.cast<cplx>()); }, spec);
}

Expectation expect_complex_reweighted(const ComplexScale& z, const Covariance& C, const RealIntegrand& F,
                                      double tol) {
  Factor f = factorize(C);
  const int r = static_cast<int>(f.A.cols());
  if (r > 2) throw CapError("reweighted complex expectation supports rank <= 2");
  const double delta = std::arg(z.z);
  const double s = std::sqrt(std::abs(z.z) / std::cos(delta));
  const double t = std::tan(delta);
  const cplx pref = std::pow(std::cos(delta) * std::polar(1.0, delta), -0.5);
  const double L = 12.0;
  auto weight = [&](double eta) {
    return std::exp(-0.5 * eta * eta) * std::polar(1.0, 0.5 * t * eta * eta) / std::sqrt(2 * kPi);
  };
  if (r == 0) return {F(Eigen::VectorXd::Zero(C.n)), 0.0};
  if (r == 1) {
    auto g = [&](double eta) {
      Eigen::VectorXd xi(1);
      xi(0) = s * eta;
      return weight(eta) * F(f.A * xi);
    };
    auto q = integrate_adaptive(g, -L, L, tol, 22, tol);
    return {pref * q.value, std::abs(pref) * q.error};
  }
  double innerErr = 0;
  auto outer = [&](double e1) {
    auto inner = [&](double e2) {
      Eigen::VectorXd xi(2);
      xi << s * e1, s * e2;
      return weight(e2) * F(f.A * xi);
    };
    auto q = integrate_adaptive(inner, -L, L, tol, 22, tol);
    innerErr = std::max(innerErr, q.error);
    return weight(e1) * q.value;
  };
  auto q = integrate_adaptive(outer, -L, L, tol, 22, tol);
  return {pref * pref * q.value, std::abs(pref * pref) * (q.error + innerErr)};
}

CopiesResult copies_check(const ComplexScale& z, const std::function<cplx(cplx)>& F, int n,
                          const QuadSpec& spec) {
  if (n < 1) throw ConfigError("copies_check needs n >= 1");
  auto lhs = expect_complex(z, Covariance::identity(1),
                            [&](const Eigen::VectorXcd& x) { return std::pow(F(x(0)), n); }, spec);
  auto rhs = expect_complex(z, Covariance::ones(n),
                            [&](const Eigen::VectorXcd& x) {
                              cplx p = 1;
                              for (int i = 0; i < n; ++i) p *= F(x(i));
                              return p;
                            },
                            spec);
  return {lhs.value, rhs.value, std::abs(lhs.value - rhs.value)};
}

namespace {

template <class T, class Get>
T wick_recursive(std::map<std::vector<int>, T>& memo, std::vector<int> m, const Get& c) {
  int first = -1, total = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += m[i];
    if (first < 0 && m[i] > 0) first = static_cast<int>(i);
  }
  if (total == 0) return T(1);
  if (total % 2) return T(0);
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;
  std::vector<int> key = m;
  --m[first];
  T sum(0);
  // Stein: E[x_i f(x)] = sum_j C_ij E[d_j f(x)]
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    T cij = c(first, static_cast<int>(j));
    if (cij == T(0)) continue;
    int mult = m[j];
    --m[j];
    sum += T(mult) * cij * wick_recursive<T>(memo, m, c);
    ++m[j];
  }
  memo[key] = sum;
  return sum;
}

}  // namespace

Rational wick_moment(const std::vector<std::vector<Rational>>& C, const std::vector<int>& m) {
  std::map<std::vector<int>, Rational> memo;
  return wick_recursive<Rational>(memo, m, [&](int i, int j) { return C[i][j]; });
}

double wick_moment(const Covariance& C, const std::vector<int>& m) {
  std::map<std::vector<int>, double> memo;
  return wick_recursive<double>(memo, m, [&](int i, int j) { return C.matrix(i, j); });
}

Eigen::MatrixXd kernel_projector(const Covariance& C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C.matrix);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(C.n, C.n);
  for (int i = 0; i < C.n; ++i)
    if (es.eigenvalues()(i) <= kKernelThreshold)
      P += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  return P;
}

}  // namespace qlve
