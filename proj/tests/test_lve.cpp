#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qlve/bkar.hpp"
#include "qlve/gauss.hpp"
#include "qlve/lve.hpp"
#include "qlve/model.hpp"
#include "qlve/quadrature.hpp"

using namespace qlve;

namespace {

// Order-n term from its defining integral: Gauss-Legendre over the edge
// parameters, complex Gaussian expectation with covariance W^T(u).
cplx term_by_quadrature(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int n, int legendre) {
  const cplx z = eps.value() * std::polar(1.0, -psi);
  const cplx rot = std::polar(1.0, psi / 2);
  const Rule& gl = gauss_legendre01(legendre);
  QuadSpec spec;
  spec.order = 30;
  cplx sum = 0;
  for (const auto& t : enumerate_trees(n)) {
    auto td = tree_degrees(t);
    for (const auto& cil : subsets(n, k)) {
      std::vector<int> d = td;
      for (int c : cil) ++d[c];
      double fact = 1;
      for (int di : d)
        for (int j = 2; j < di; ++j) fact *= j;
      const int e = n - 1;
      cplx treeSum = 0;
      // W is only piecewise smooth in u: split the cube by edge orderings
      std::vector<int> perm(e);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<int> idx(e, 0);
        while (true) {
          std::vector<double> u(e);
          double w = 1, prod = 1;
          for (int i = 0; i < e; ++i) {
            prod *= gl.x[idx[i]];
            u[perm[i]] = prod;
            w *= gl.w[idx[i]] * std::pow(gl.x[idx[i]], e - 1 - i);
          }
          auto W = bkar_weights(t, u);
          auto F = [&](const Eigen::VectorXcd& x) {
            cplx p = 1;
            for (int i = 0; i < n; ++i) p *= std::pow(resolvent(x(i) * rot, g), d[i]);
            return p;
          };
          treeSum += w * expect_complex(ComplexScale(z), Covariance(W.w), F, spec).value;
          int i = 0;
          while (i < e && ++idx[i] == legendre) idx[i++] = 0;
          if (i == e) break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      double kf = std::tgamma(k + 1.0);
      sum += kf * fact * treeSum;
    }
  }
  double nf = std::tgamma(n + 1.0);
  return std::pow(2.0, k - 1) / nf * std::pow(-project(g) / 2.0, n - 1) * sum;
}

double dfact(int m) {
  double r = 1;
  for (int j = m; j > 1; j -= 2) r *= j;
  return r;
}

}  // namespace

TEST_CASE("small-eps limits of single terms") {
  SurfacePoint g(0.08, 0.6);
  EpsParam e(1e-9, 0.0);
  CHECK(std::abs(lve_term(g, e, 0.0, 1, 1).value - 1.0) < 1e-7);
  CHECK(std::abs(lve_term(g, e, 0.0, 1, 2).value + project(g) / 2.0) < 1e-8);
  CHECK(std::abs(lve_term(SurfacePoint(1e-12, 0.0), EpsParam(0.4, 0.1), 0.0, 1, 1).value - 1.0) < 1e-10);
}

TEST_CASE("term values agree with the defining integral") {
  SurfacePoint g(0.1, 0.4);
  EpsParam e(0.3, 0.2);
  const double psi = -0.2;
  for (int k = 1; k <= 2; ++k)
    for (int n = std::max(2, k); n <= 3; ++n) {
      cplx a = lve_term(g, e, psi, k, n).value;
      cplx b = term_by_quadrature(g, e, psi, k, n, 16);
      CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
    }
}

TEST_CASE("tree coefficients") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= std::min(n, 2); ++k) CHECK(tree_coefficient(n, k, 0) == ciliated_sum(n, k));
  const long y11[] = {1, 5, 22, 93, 386, 1586};
  for (int n = 1; n <= 6; ++n) CHECK(tree_coefficient(n, 1, 1) == y11[n - 1]);
  // coarse bound by marked trees
  for (int n = 1; n <= 5; ++n)
    for (int k = 1; k <= std::min(n, 2); ++k)
      for (int q = 0; q <= 2; ++q) {
        Rational y = tree_coefficient(n, k, q);
        Rational scaled = y * Rational(factorial(q) * (BigInt(1) << q));
        CHECK(y > 0);
        CHECK(scaled <= marked_sum(n, k, q));
      }
  CHECK(tree_coefficient(2, 3, 1) == 0);
  CHECK_THROWS_AS(tree_coefficient(8, 1, 0), CapError);
}

TEST_CASE("eps coefficients") {
  SurfacePoint g(0.1, 0.0);
  auto s = eps_coefficients(g, 0.0, 1, 3, 6);
  CHECK(std::abs(s.coefficients[0] - (std::sqrt(1.2) - 1) / 0.1) < 1e-6);
  for (auto f : s.truncation) CHECK(std::isfinite(f));
  auto one = eps_coefficients(g, 0.0, 1, 4, 1);
  for (int q = 0; q <= 4; ++q)
    CHECK(std::abs(one.rawSums[q] - std::pow(-0.1, q) * dfact(2 * q - 1)) < 1e-14);
  auto free = eps_coefficients(SurfacePoint(1e-12, 0.0), 0.0, 1, 3, 5);
  CHECK(std::abs(free.coefficients[0] - 1.0) < 1e-10);
  for (int q = 1; q <= 3; ++q) CHECK(std::abs(free.coefficients[q]) < 1e-10);
  SurfacePoint h(0.07, 0.9);
  auto a = eps_coefficients(h, 0.0, 2, 4, 6), b = eps_coefficients(h, 0.3, 2, 4, 6);
  for (int q = 0; q <= 4; ++q) CHECK(std::abs(a.coefficients[q] - b.coefficients[q]) < 1e-10);
  CHECK_THROWS_AS(eps_coefficients(g, 0.0, 1, 2, 9), CapError);
}

TEST_CASE("cumulant against the oracle") {
  SurfacePoint g(0.05, 0.0);
  EpsParam e(0.1, 0.0);
  auto r = lve_cumulant(g, e, 0.0, 1, 7);
  auto o = cumulant_oracle(g, e, 0.0, 1);
  CHECK(std::abs(r.value - o.value) < 1e-4);
  CHECK(std::abs(r.value - o.value) <= r.error + r.tailBound + 1e-9);
  CHECK(r.gamma == doctest::Approx(0.1));
  for (std::size_t i = 1; i < r.terms.size(); ++i)
    CHECK(std::abs(r.terms[i].value) < 0.2 * std::abs(r.terms[i - 1].value));
  auto f = lve_cumulant(SurfacePoint(1e-12, 0.0), EpsParam(0.5, 0.0), 0.0, 1, 3);
  CHECK(std::abs(f.value - 1.0) < 1e-10);
  CHECK_THROWS_AS(lve_cumulant(SurfacePoint(0.6, 0.0), e, 0.0, 1, 3), DomainError);
  CHECK_THROWS_AS(lve_cumulant(g, e, 0.0, 0, 3), ConfigError);
}

TEST_CASE("remainder matches the difference with truncated coefficients") {
  SurfacePoint g(0.06, 0.3);
  EpsParam e(0.1, -0.2);
  const double psi = -0.1;
  auto full = lve_cumulant(g, e, psi, 1, 4);
  CHECK(std::abs(remainder(g, e, psi, 1, 0, 4).value - full.value) < 1e-13);
  auto s = eps_coefficients(g, psi, 1, 3, 4);
  for (int q = 1; q <= 3; ++q) {
    cplx partial = 0;
    for (int p = 0; p < q; ++p) partial += s.rawSums[p] * std::pow(e.value(), p);
    cplx diff = full.value - partial;
    auto r = remainder(g, e, psi, 1, q, 4);
    CHECK(std::abs(r.value - diff) < 1e-12 + 1e-6 * std::abs(diff));
  }
}

TEST_CASE("exponential divided differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int m = 1; m <= 4; ++m)
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<cplx> x(m);
      for (auto& v : x) v = cplx(U(rng), U(rng));
      cplx direct = 0;
      for (int i = 0; i < m; ++i) {
        cplx den = 1;
        for (int j = 0; j < m; ++j)
          if (j != i) den *= x[i] - x[j];
        direct += std::exp(x[i]) / den;
      }
      // homogeneous parts h_p(x) / (p + m - 1)!
      std::vector<cplx> h(9, 0);
      h[0] = 1;
      for (int i = 0; i < m; ++i)
        for (int p = 1; p <= 8; ++p) h[p] += x[i] * h[p - 1];
      cplx full, tail;
      const int q = 3;
      exp_divided_difference(x.data(), m, q, full, tail);
      CHECK(std::abs(full - direct) < 1e-11 * std::max(1.0, std::abs(direct)));
      cplx head = 0;
      for (int p = 0; p < q; ++p) head += h[p] / std::tgamma(p + m);
      CHECK(std::abs(tail - (full - head)) < 1e-12 * std::max(1.0, std::abs(full)));
    }
  cplx same[3] = {0.5, 0.5, 0.5}, full, tail;
  exp_divided_difference(same, 3, 0, full, tail);
  CHECK(std::abs(full - std::exp(0.5) / 2.0) < 1e-14);
}

TEST_CASE("tail bound of an exact geometric sequence") {
  for (int k = 1; k <= 5; ++k) {
    const double gamma = 0.3, C = 1.7;
    std::vector<TreeTerm> terms;
    for (int n = k; n <= 6; ++n) {
      TreeTerm t{};
      t.n = n;
      t.value = C * std::pow(double(n), k - 2) * std::pow(gamma, n - 1);
      terms.push_back(t);
    }
    double direct = 0;
    for (int n = 7; n < 400; ++n) direct += C * std::pow(double(n), k - 2) * std::pow(gamma, n - 1);
    CHECK(tail_bound(terms, k, gamma) == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK(std::isinf(tail_bound({TreeTerm{}}, 1, 1.0)));
}

TEST_CASE("sampled terms are independent of the thread count") {
  LveScheme a, b;
  a.samples = b.samples = 4000;
  a.threads = 1;
  b.threads = 3;
  SurfacePoint g(0.05, 0.2);
  EpsParam e(0.1, 0.0);
  auto x = lve_term(g, e, 0.0, 1, 5, a), y = lve_term(g, e, 0.0, 1, 5, b);
  CHECK(x.monteCarlo);
  CHECK(x.value == y.value);
  CHECK(x.errEstimate == y.errEstimate);
}
