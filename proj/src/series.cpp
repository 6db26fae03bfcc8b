#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>
#include <functional>
#include <memory>

#include "qlve/lve.hpp"

namespace qlve {

namespace {

using i128 = __int128;

// Dense homogeneous polynomials in r_0..r_{n-1} of even degree 2j, j = 0..q.
struct MonomialSpace {
  int n = 0, q = 0;
  std::vector<std::vector<std::vector<int>>> monos;  // [j][idx] -> exponents
  std::vector<std::vector<std::vector<int>>> mul;    // [j][idx][pair] -> index in degree j+1
  std::vector<std::pair<int, int>> pairs;            // (a, b), a <= b

  MonomialSpace(int n_, int q_) : n(n_), q(q_) {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) pairs.emplace_back(a, b);
    monos.resize(q + 1);
    std::vector<std::unordered_map<std::uint64_t, int>> index(q + 1);
    auto key = [&](const std::vector<int>& e) {
      std::uint64_t h = 0;
      for (int v : e) h = h * 64 + v;
      return h;
    };
    for (int j = 0; j <= q; ++j) {
      std::vector<int> e(n, 0);
      enumerate(e, 0, 2 * j, j);
      for (std::size_t i = 0; i < monos[j].size(); ++i) index[j][key(monos[j][i])] = static_cast<int>(i);
    }
    mul.resize(q);
    for (int j = 0; j < q; ++j) {
      mul[j].resize(monos[j].size());
      for (std::size_t i = 0; i < monos[j].size(); ++i) {
        for (auto [a, b] : pairs) {
          auto e = monos[j][i];
          ++e[a];
          ++e[b];
          mul[j][i].push_back(index[j + 1][key(e)]);
        }
      }
    }
  }

  void enumerate(std::vector<int>& e, int pos, int left, int j) {
    if (pos == n - 1) {
      e[pos] = left;
      monos[j].push_back(e);
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[pos] = v;
      enumerate(e, pos + 1, left - v, j);
    }
  }

  int pair_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    return a * n - a * (a - 1) / 2 + (b - a);
  }
};

using Poly = std::vector<i128>;
using Family = std::vector<Poly>;  // h_0..h_q

// out += s * p where s is a quadratic form given by pair coefficients
void mul_quadratic(const MonomialSpace& sp, int j, const Poly& p, const std::vector<i128>& s, Poly& out) {
  const auto& table = sp.mul[j];
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] != 0) out[table[i][k]] += p[i] * s[k];
  }
}

struct ClassPolyKey {
  int n, q;
  bool operator<(const ClassPolyKey& o) const { return std::tie(n, q) < std::tie(o.n, o.q); }
};

struct ClassPolys {
  std::vector<TreeClass> classes;
  std::vector<Poly> sumOverOrderings;  // sum_pi h_q(S_pi) per class
  std::shared_ptr<MonomialSpace> space;
};

ClassPolys build_class_polys(int n, int q) {
  ClassPolys out;
  out.space = std::make_shared<MonomialSpace>(n, q);
  const MonomialSpace& sp = *out.space;
  CombinConfig cfg;
  out.classes = tree_classes(n, cfg);
  const std::size_t P = sp.pairs.size();
  for (const auto& tc : out.classes) {
    const auto& t = tc.representative;
    Poly acc(sp.monos[q].size(), 0);
    // S_0 = sum r_i^2
    std::vector<i128> s0(P, 0);
    for (int i = 0; i < n; ++i) s0[sp.pair_index(i, i)] = 1;
    Family h0(q + 1);
    h0[0] = Poly(1, 1);
    for (int j = 1; j <= q; ++j) {
      h0[j] = Poly(sp.monos[j].size(), 0);
      mul_quadratic(sp, j - 1, h0[j - 1], s0, h0[j]);
    }
    std::vector<int> parent(n);
    std::vector<bool> used(n - 1, false);
    // clusters tracked as member lists for the cross term 2 R_A R_B
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) parent[i] = i, members[i] = {i};
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    std::function<void(int, const Family&, const std::vector<i128>&)> dfs = [&](int level, const Family& h,
                                                                                  const std::vector<i128>& S) {
      if (level == n) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h[q][i];
        return;
      }
      for (int e = 0; e < n - 1; ++e) {
        if (used[e]) continue;
        auto [a, b] = t.edges[e];
        int ra = find(a), rb = find(b);
        std::vector<i128> S2 = S;
        for (int x : members[ra])
          for (int y : members[rb]) S2[sp.pair_index(x, y)] += 2;
        Family h2(q + 1);
        h2[0] = h[0];
        for (int j = 1; j <= q; ++j) {
          h2[j] = h[j];
          mul_quadratic(sp, j - 1, h2[j - 1], S2, h2[j]);
        }
        used[e] = true;
        parent[ra] = rb;
        auto saved = members[rb];
        members[rb].insert(members[rb].end(), members[ra].begin(), members[ra].end());
        dfs(level + 1, h2, S2);
        members[rb] = saved;
        parent[ra] = ra;
        used[e] = false;
      }
    };
    dfs(1, h0, s0);
    out.sumOverOrderings.push_back(std::move(acc));
  }
  return out;
}

const ClassPolys& class_polys(int n, int q) {
  static std::map<ClassPolyKey, ClassPolys> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find({n, q});
  if (it != cache.end()) return it->second;
  return cache.emplace(ClassPolyKey{n, q}, build_class_polys(n, q)).first->second;
}

BigInt to_big(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

}  // namespace

Rational tree_coefficient(int n, int k, int q) {
  if (n < 1 || k < 1 || q < 0) throw ConfigError("tree_coefficient needs n >= 1, k >= 1, q >= 0");
  if (n > 7) throw CapError("exact coefficients are limited to n <= 7");
  if (k > n) return Rational(0);
  static std::map<std::tuple<int, int, int>, Rational> cache;
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find({n, k, q});
    if (it != cache.end()) return it->second;
  }
  const ClassPolys& cp = class_polys(n, q);
  const auto& sp = *cp.space;
  std::vector<BigInt> fact(2 * q + 2 * n + 2);
  fact[0] = 1;
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * BigInt(static_cast<unsigned>(i));
  Rational Y = 0;
  for (std::size_t c = 0; c < cp.classes.size(); ++c) {
    auto d0 = tree_degrees(cp.classes[c].representative);
    const Poly& P = cp.sumOverOrderings[c];
    BigInt classSum = 0;
    for (const auto& cil : subsets(n, k)) {
      auto d = d0;
      for (int v : cil) ++d[v];
      BigInt L = 0;
      for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i] == 0) continue;
        BigInt term = to_big(P[i]);
        for (int v = 0; v < n; ++v) term *= fact[d[v] + sp.monos[q][i][v] - 1];
        L += term;
      }
      classSum += L;
    }
    Y += Rational(classSum * BigInt(cp.classes[c].labelledCount));
  }
  Y *= Rational(factorial(k), factorial(n));
  Y /= Rational(factorial(n - 1 + q) * (BigInt(1) << q));
  std::lock_guard<std::mutex> lock(m);
  cache[{n, k, q}] = Y;
  return Y;
}

SeriesData eps_coefficients(const SurfacePoint& g, double psi, int k, int qMax, int nMax) {
  if (qMax < 0) throw ConfigError("qMax must be >= 0");
  if (nMax < k) throw ConfigError("nMax must be >= k");
  if (std::abs(g.liftedArg + psi) >= kPi) throw DomainError("tilt is not admissible for g");
  const cplx u = project(g);
  if (!(std::abs(u) < 0.5)) throw DomainError("coefficient series needs |g| < 1/2");
  SeriesData out;
  out.k = k;
  out.gPoint = g;
  out.nMax = nMax;
  const double beta = -(g.liftedArg + psi) / 2;
  // -kappa e^{-2 i beta} / eps with the tilt phases kept explicit
  const cplx step = -g.modulus * std::polar(1.0, -psi) * std::polar(1.0, -2 * beta);
  // u = 2w/(1-w)^2 maps the disk |w| < 1 onto the plane cut along (-inf, -1/2]
  const cplx root = std::sqrt(1.0 + 2.0 * u);
  const cplx w = (root - 1.0) / (root + 1.0);
  const int J = nMax - 1;
  out.exact.assign(nMax + 1, std::vector<Rational>(qMax + 1, Rational(0)));
  for (int q = 0; q <= qMax; ++q) {
    // F(u) = sum_j c_j u^j with j = n - 1
    std::vector<Rational> c(J + 1, Rational(0));
    cplx raw = 0;
    for (int n = k; n <= nMax; ++n) {
      Rational Y = tree_coefficient(n, k, q);
      out.exact[n][q] = Y;
      c[n - 1] = Y / Rational(BigInt(1) << (n - 1)) * ((n - 1) % 2 ? -1 : 1);
      raw += to_double(c[n - 1]) * std::pow(u, n - 1);
    }
    // d_i: coefficients of F(u(w)); u^j = 2^j w^j (1-w)^{-2j}
    std::vector<Rational> d(J + 1, Rational(0));
    d[0] = c[0];
    for (int i = 1; i <= J; ++i)
      for (int j = 1; j <= i; ++j)
        d[i] += c[j] * Rational(BigInt(1) << j) * Rational(binomial(i + j - 1, i - j));
    // split off the pole of order m at w = -1 (Y(n) 4^{-n} grows like n^{(m-2)/2})
    const int m = std::max(0, 2 * k - 3 + 3 * q);
    std::vector<Rational> h(J + 1, Rational(0));
    for (int i = 0; i <= J; ++i)
      for (int j = 0; j <= std::min(i, m); ++j) h[i] += d[i - j] * Rational(binomial(m, j));
    cplx acc = 0, wp = 1;
    for (int i = 0; i <= J; ++i, wp *= w) acc += to_double(h[i]) * wp;
    const cplx scale = std::pow(2.0, k - 1) * std::pow(step, q) / std::pow(1.0 + w, m);
    cplx value = scale * acc;
    double last = std::abs(to_double(h[J]) * std::pow(w, J));
    if (J > 0) last = std::max(last, std::abs(to_double(h[J - 1]) * std::pow(w, J)));
    double trunc = J == 0 ? std::abs(value) * std::abs(w) : std::abs(scale) * last;
    out.coefficients.push_back(value);
    out.rawSums.push_back(std::pow(2.0, k - 1) * std::pow(step, q) * raw);
    out.truncation.push_back(trunc);
    out.flagged.push_back(!(trunc <= 0.01 * std::abs(value)));
  }
  return out;
}

}  // namespace qlve
