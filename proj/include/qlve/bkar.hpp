#pragma once

#include <map>
#include <random>
#include <vector>

#include "qlve/combin.hpp"

namespace qlve {

// Polynomial in the n(n-1)/2 variables x_ij (i<j) with rational coefficients.
class EdgePolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit EdgePolynomial(int n, int degreeCap = 4);

  int n() const { return n_; }
  int degree_cap() const { return cap_; }
  int pair_count() const { return n_ * (n_ - 1) / 2; }
  int pair_index(int i, int j) const;
  Edge pair_of(int index) const;

  void add_term(const Exponents& e, const Rational& c);
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  int total_degree() const;

  Rational evaluate(const std::vector<Rational>& x) const;
  Rational at_ones() const;
  EdgePolynomial derivative(int pairIndex) const;

  static EdgePolynomial random(int n, int degree, std::mt19937_64& rng, int maxTerms = 6);

 private:
  int n_;
  int cap_;
  std::map<Exponents, Rational> terms_;
};

Rational bkar_rhs(const EdgePolynomial& f);

struct BkarCheck {
  Rational lhs;
  Rational rhs;
  bool equal;
};
BkarCheck bkar_check(const EdgePolynomial& f);

// Exponents keyed by vertex pair (i<j); diagonal entries of W are 1 and may be omitted.
Rational simplex_integrate_monomial(const LabelledTree& t, const std::map<Edge, int>& exponents);

// Integral over the ordered region u[order[0]] > u[order[1]] > ... of prod u_e^{a_e}.
Rational ordered_simplex_monomial(const std::vector<int>& order, const std::vector<int>& a);

}  // namespace qlve
