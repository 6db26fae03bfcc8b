#include <doctest.h>

#include <cmath>

#include "qlve/model.hpp"

using namespace qlve;

TEST_CASE("partition function examples") {
  for (double e : {0.05, 1.0, 3.0}) {
    auto z = partition(ModelPoint(SurfacePoint(1e-12, 0.0), EpsParam(e, 0.0), 0.0));
    CHECK(std::abs(z.value - 1.0) < 1e-8);
  }
  ModelPoint p(SurfacePoint(0.2, 0.0), EpsParam(1.0, 0.0), 0.0);
  cplx ref = direct_n1_partition(0.2);
  CHECK(std::abs(partition(p).value - ref) < 1e-9);
  for (double psi : {-0.4, 0.0, 0.4}) {
    ModelPoint q(SurfacePoint(0.2, 0.0), EpsParam(1.0, 0.0), psi);
    CHECK(std::abs(partition(q).value - ref) < 1e-8);
  }
  CHECK_THROWS_AS(partition(ModelPoint(SurfacePoint(0.1, 0.0), EpsParam(0.1, 0.0), 2.0)), DomainError);
}

TEST_CASE("direct N = 1 integral") {
  // weak-coupling series 1 - 3g/8 + 105 g^2/128 - ...
  double g = 1e-3;
  double series = 1 - 3 * g / 8 + 105 * g * g / 128 - 10395.0 * g * g * g / 3072 + 2027025.0 * g * g * g * g / 98304;
  CHECK(std::abs(direct_n1_partition(g) - series) < 1e-11);
}

TEST_CASE("cumulant oracle examples") {
  auto free = cumulant_oracle(SurfacePoint(1e-12, 0.0), EpsParam(0.3, 0.0), 0.0, 1);
  CHECK(std::abs(free.value - 1.0) < 1e-9);
  auto a = cumulant_oracle(SurfacePoint(0.1, 0.0), EpsParam(0.25, 0.0), 0.0, 1);
  auto b = radial_oracle(4, 0.1, 1);
  CHECK(std::abs(a.value - b.value) < 1e-6);
  auto c = cumulant_oracle(SurfacePoint(0.1, 0.0), EpsParam(1e-3, 0.0), 0.0, 1);
  double a0 = (std::sqrt(1.2) - 1) / 0.1;
  CHECK(std::abs(c.value - a0) < 2e-3);
  CHECK(a.ratio < 1);
}

TEST_CASE("radial oracle") {
  CHECK(std::abs(radial_oracle(3, 1e-12, 1).value - 1.0) < 1e-9);
  auto r1 = radial_oracle(1, 0.5, 1);
  auto o1 = cumulant_oracle(SurfacePoint(0.5, 0.0), EpsParam(1.0, 0.0), 0.0, 1);
  CHECK(std::abs(r1.value - o1.value) < 1e-6);
  auto r2 = radial_oracle(2, 0.2, 2);
  auto o2 = cumulant_oracle(SurfacePoint(0.2, 0.0), EpsParam(0.5, 0.0), 0.0, 2);
  CHECK(std::abs(r2.value - o2.value) < 1e-5);
  // the quartic cumulant vanishes for a Gaussian
  CHECK(std::abs(radial_oracle(5, 1e-12, 2).value) < 1e-8);
}

TEST_CASE("psi independence of the oracle") {
  SurfacePoint g(0.1, 0.5);
  EpsParam e(0.2, 0.3);
  auto ref = cumulant_oracle(g, e, 0.0, 2).value;
  for (double psi : {-0.8, -0.3, 0.4, 0.9}) CHECK(std::abs(cumulant_oracle(g, e, psi, 2).value - ref) < 1e-8);
}

TEST_CASE("reality and conjugation symmetry") {
  for (int k = 1; k <= 3; ++k) {
    auto r = cumulant_oracle(SurfacePoint(0.3, 0.0), EpsParam(0.4, 0.0), 0.0, k).value;
    CHECK(std::abs(r.imag()) < 1e-10);
  }
  for (double phi : {-1.2, 0.4, 2.0})
    for (double th : {-0.6, 0.5}) {
      double psi = std::clamp(-phi / 2, th - 1.2, th + 1.2);
      ModelPoint p(SurfacePoint(0.15, phi), EpsParam(0.3, th), psi, 0.2);
      ModelPoint q(SurfacePoint(0.15, -phi), EpsParam(0.3, -th), -psi, 0.2);
      CHECK(std::abs(partition(p).value - std::conj(partition(q).value)) < 1e-9);
    }
}

TEST_CASE("Z increases in t at real parameters") {
  double prev = 0;
  for (double t = 0; t <= 2.0; t += 0.25) {
    auto z = partition(ModelPoint(SurfacePoint(0.3, 0.0), EpsParam(0.5, 0.0), 0.0, t)).value;
    CHECK(std::abs(z.imag()) < 1e-10);
    CHECK(z.real() > prev);
    prev = z.real();
  }
}
