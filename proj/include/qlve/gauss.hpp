#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qlve/common.hpp"

namespace qlve {

struct IndefiniteCovariance : DomainError {
  using DomainError::DomainError;
};

struct Covariance {
  int n = 0;
  Eigen::MatrixXd matrix;

  Covariance() = default;
  explicit Covariance(const Eigen::MatrixXd& m);
  static Covariance identity(int n);
  static Covariance ones(int n);
};

struct ComplexScale {
  cplx z;
  explicit ComplexScale(cplx v);
};

struct QuadSpec {
  enum class Kind { Auto, GaussHermite, MonteCarlo };
  Kind kind = Kind::Auto;
  int order = 0;  // 0 selects 40 for rank <= 3 and 20 above
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct Expectation {
  cplx value;
  double error;
};

using RealIntegrand = std::function<cplx(const Eigen::VectorXd&)>;
using ComplexIntegrand = std::function<cplx(const Eigen::VectorXcd&)>;

constexpr double kKernelThreshold = 1e-10;

Expectation expect_real(const Covariance& C, const RealIntegrand& F, const QuadSpec& spec = {});
Expectation expect_complex(const ComplexScale& z, const Covariance& C, const ComplexIntegrand& F,
                           const QuadSpec& spec = {});

// Direct evaluation of the complex Gaussian density along the real axes of the
// eigenbasis (oscillatory reweighting); only rank <= 2 is supported.
Expectation expect_complex_reweighted(const ComplexScale& z, const Covariance& C, const RealIntegrand& F,
                                      double tol = 1e-11);

struct CopiesResult {
  cplx lhs;
  cplx rhs;
  double diff;
};
CopiesResult copies_check(const ComplexScale& z, const std::function<cplx(cplx)>& F, int n,
                          const QuadSpec& spec = {});

Rational wick_moment(const std::vector<std::vector<Rational>>& C, const std::vector<int>& m);
double wick_moment(const Covariance& C, const std::vector<int>& m);

// Kernel projector of C (eigendirections with eigenvalue below the threshold).
Eigen::MatrixXd kernel_projector(const Covariance& C);

}  // namespace qlve
