#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace qlve {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

constexpr double kPi = 3.14159265358979323846;

// Exit codes used by the command line driver.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when a resolvent argument sits on its pole.
struct PoleError : DomainError {
  using DomainError::DomainError;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
double to_double(const Rational& r);

}  // namespace qlve
