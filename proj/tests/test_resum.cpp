#include <doctest.h>

#include <cmath>

#include "qlve/model.hpp"
#include "qlve/resum.hpp"

using namespace qlve;

namespace {

// (1/eps) int_0^inf e^{-t/eps} / (1 + K t) dt = x e^x E_1(x) with x = 1/(K eps)
double stieltjes(double K, double eps) {
  double x = 1 / (K * eps);
  return -x * std::exp(x) * std::expint(-x);
}

}  // namespace

TEST_CASE("Borel transform") {
  std::vector<cplx> a{1, -1, 2, -6, 24};
  auto b = borel_transform(a);
  for (int q = 0; q < 5; ++q) CHECK(std::abs(b[q] - std::pow(-1.0, q)) < 1e-15);
  auto c = borel_transform(std::vector<cplx>{1, 0, 0});
  CHECK(c == std::vector<cplx>{1, 0, 0});
  CHECK_THROWS_AS(borel_transform(std::vector<cplx>{}), ConfigError);
}

TEST_CASE("Pade examples") {
  auto r = pade({1, -1, 1, -1}, 0, 1);
  REQUIRE(r.padeDen.size() == 2);
  CHECK(std::abs(r.padeDen[1] - 1.0) < 1e-14);
  REQUIRE(r.poles.size() == 1);
  CHECK(std::abs(r.poles[0] + 1.0) < 1e-12);
  auto p = pade({2, 0.5, -1, 3}, 3, 0);
  for (double t : {0.0, 0.7, 2.5}) CHECK(std::abs(eval_rational(p, t) - (2 + 0.5 * t - t * t + 3 * t * t * t)) < 1e-12);
  CHECK(p.poles.empty());
  CHECK_THROWS_AS(pade({1, 2, 3}, 2, 1), ConfigError);
}

TEST_CASE("Laplace reconstruction examples") {
  auto r = pade({1, -1, 1, -1}, 0, 1);
  CHECK(std::abs(laplace_reconstruct(r, 0.2) - 0.852110881423661) < 1e-13);
  CHECK(std::abs(stieltjes(1, 0.2) - 0.852110881423661) < 1e-13);
  auto one = pade({1, 0, 0}, 0, 0);
  for (double e : {0.05, 0.5, 3.0}) CHECK(std::abs(laplace_reconstruct(one, e) - 1.0) < 1e-13);
  CHECK(std::abs(laplace_reconstruct(one, std::polar(0.4, 1.0)) - 1.0) < 1e-13);
  auto bad = pade({1, 1, 1, 1}, 0, 1);
  CHECK_THROWS_AS(laplace_reconstruct(bad, 0.2), PoleError);
  CHECK_THROWS_AS(laplace_reconstruct(one, cplx(0, 0.3)), DomainError);
}

TEST_CASE("rational Borel transforms are reproduced") {
  for (double K : {1.0, 5.0, 20.0}) {
    std::vector<cplx> b(7);
    for (int q = 0; q < 7; ++q) b[q] = std::pow(-K, q);
    auto r = pade(b, 3, 3);
    CHECK(r.usedM == 1);
    double ref = stieltjes(K, 0.2);
    CHECK(std::abs(laplace_reconstruct(r, 0.2) - ref) < 1e-13);
  }
}

TEST_CASE("convergent series are resummed") {
  for (double K : {1.0, 5.0, 20.0}) {
    std::vector<cplx> a(25);
    for (int q = 0; q <= 24; ++q) a[q] = std::pow(-K, q);
    auto r = pade(borel_transform(a), 12, 12);
    const double eps = 0.05;
    CHECK(std::abs(laplace_reconstruct(r, eps) - 1 / (1 + K * eps)) < 1e-10);
  }
}

TEST_CASE("doubling the cutoff") {
  auto r = pade({1, -1, 1, -1, 1}, 2, 2);
  LaplaceOptions two;
  two.cutoffFactor = 2;
  for (cplx e : {cplx(0.2), std::polar(0.3, 0.7)})
    CHECK(std::abs(laplace_reconstruct(r, e) - laplace_reconstruct(r, e, two)) < 1e-12);
}

TEST_CASE("model series") {
  SurfacePoint g(0.1, 0.0);
  auto s = eps_coefficients(g, 0.0, 1, 6, 7);
  auto b = borel_transform(s);
  for (int q = 1; q <= 6; ++q) CHECK(std::pow(std::abs(b[q]), 1.0 / q) < 1.0);
  auto r = pade(b, 3, 3);
  CHECK(pole_distance_to_positive_axis(r) > 0.5);
  for (double e : {0.1, 0.2, 0.3}) {
    cplx o = cumulant_oracle(g, EpsParam(e, 0.0), 0.0, 1).value;
    CHECK(std::abs(laplace_reconstruct(r, e) - o) < 1e-3);
  }
  cplx o = cumulant_oracle(g, EpsParam(0.2, 0.0), 0.0, 1).value;
  double prev = 1;
  for (int m = 1; m <= 3; ++m) {
    double err = std::abs(laplace_reconstruct(pade(b, m, m), 0.2) - o);
    CHECK(err <= std::max(prev, 1e-10));
    prev = err;
  }
}
