#include "qlve/bkar.hpp"

#include <algorithm>
#include <numeric>

namespace qlve {

EdgePolynomial::EdgePolynomial(int n, int degreeCap) : n_(n), cap_(degreeCap) {
  if (n < 1) throw ConfigError("EdgePolynomial needs n >= 1");
}

int EdgePolynomial::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major index of (i,j) in the strict upper triangle
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

Edge EdgePolynomial::pair_of(int index) const {
  for (int i = 0; i < n_; ++i) {
    int row = n_ - i - 1;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw ConfigError("pair index out of range");
}

void EdgePolynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != pair_count())
    throw ConfigError("exponent vector has the wrong length");
  if (std::accumulate(e.begin(), e.end(), 0) > cap_)
    throw ConfigError("EdgePolynomial degree cap exceeded");
  Rational& slot = terms_[e];
  slot += c;
  if (slot == 0) terms_.erase(e);
}

int EdgePolynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Rational EdgePolynomial::evaluate(const std::vector<Rational>& x) const {
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t p = 0; p < e.size(); ++p)
      for (int r = 0; r < e[p]; ++r) m *= x[p];
    total += m;
  }
  return total;
}

Rational EdgePolynomial::at_ones() const {
  Rational total = 0;
  for (const auto& [e, c] : terms_) total += c;
  return total;
}

EdgePolynomial EdgePolynomial::derivative(int pairIndex) const {
  EdgePolynomial d(n_, cap_);
  for (const auto& [e, c] : terms_) {
    if (e[pairIndex] == 0) continue;
    Exponents f = e;
    --f[pairIndex];
    d.terms_[f] += c * e[pairIndex];
  }
  return d;
}

EdgePolynomial EdgePolynomial::random(int n, int degree, std::mt19937_64& rng, int maxTerms) {
  EdgePolynomial p(n, std::max(degree, 1));
  const int m = p.pair_count();
  std::uniform_int_distribution<int> nterms(1, maxTerms);
  std::uniform_int_distribution<int> deg(0, degree);
  std::uniform_int_distribution<int> var(0, std::max(m - 1, 0));
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    Exponents e(m, 0);
    int d = m == 0 ? 0 : deg(rng);
    for (int i = 0; i < d; ++i) ++e[var(rng)];
    int a = num(rng);
    if (a == 0) a = 1;
    p.add_term(e, Rational(a, den(rng)));
  }
  return p;
}

Rational ordered_simplex_monomial(const std::vector<int>& order, const std::vector<int>& a) {
  // iterated integral from the smallest u upward
  Rational r = 1;
  int acc = 0;
  for (int j = static_cast<int>(order.size()) - 1; j >= 0; --j) {
    acc += a[order[j]] + 1;
    r /= acc;
  }
  return r;
}

namespace {

// For a forest and an ordering of its edges by decreasing u, minEdge[p] is the
// edge carrying w for vertex pair p, or -1 when the pair is disconnected.
std::vector<int> min_edges(const EdgePolynomial& shape, const std::vector<Edge>& edges,
                           const std::vector<int>& rank) {
  const int n = shape.n();
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back({edges[e].second, static_cast<int>(e)});
    adj[edges[e].second].push_back({edges[e].first, static_cast<int>(e)});
  }
  std::vector<int> out(shape.pair_count(), -1);
  for (int s = 0; s < n; ++s) {
    std::vector<std::pair<int, int>> stack{{s, -1}};
    std::vector<bool> seen(n, false);
    seen[s] = true;
    while (!stack.empty()) {
      auto [v, m] = stack.back();
      stack.pop_back();
      if (v > s) out[shape.pair_index(s, v)] = m;
      for (auto [x, e] : adj[v]) {
        if (seen[x]) continue;
        seen[x] = true;
        int me = (m < 0 || rank[e] > rank[m]) ? e : m;
        stack.push_back({x, me});
      }
    }
  }
  return out;
}

}  // namespace

Rational bkar_rhs(const EdgePolynomial& f) {
  if (f.n() > 4) throw CapError("bkar_rhs is limited to n <= 4");
  Rational total = 0;
  for (const auto& forest : enumerate_forests(f.n())) {
    EdgePolynomial d = f;
    for (auto [a, b] : forest.edges) d = d.derivative(f.pair_index(a, b));
    if (d.terms().empty()) continue;
    const int m = static_cast<int>(forest.edges.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<int> rank(m);
      for (int i = 0; i < m; ++i) rank[order[i]] = i;
      auto me = min_edges(f, forest.edges, rank);
      for (const auto& [e, c] : d.terms()) {
        std::vector<int> a(m, 0);
        bool zero = false;
        for (std::size_t p = 0; p < e.size() && !zero; ++p) {
          if (e[p] == 0) continue;
          if (me[p] < 0)
            zero = true;
          else
            a[me[p]] += e[p];
        }
        if (!zero) total += c * ordered_simplex_monomial(order, a);
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return total;
}

BkarCheck bkar_check(const EdgePolynomial& f) {
  Rational lhs = f.at_ones();
  Rational rhs = bkar_rhs(f);
  return {lhs, rhs, lhs == rhs};
}

Rational simplex_integrate_monomial(const LabelledTree& t, const std::map<Edge, int>& exponents) {
  if (t.n > 6) throw CapError("simplex_integrate_monomial is limited to n <= 6");
  EdgePolynomial shape(t.n, 1);
  const int m = t.n - 1;
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rational total = 0;
  do {
    std::vector<int> rank(m);
    for (int i = 0; i < m; ++i) rank[order[i]] = i;
    auto me = t.n > 1 ? min_edges(shape, t.edges, rank) : std::vector<int>{};
    std::vector<int> a(m, 0);
    for (const auto& [pair, p] : exponents) {
      if (pair.first == pair.second || p == 0) continue;
      a[me[shape.pair_index(pair.first, pair.second)]] += p;
    }
    total += ordered_simplex_monomial(order, a);
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

}  // namespace qlve
