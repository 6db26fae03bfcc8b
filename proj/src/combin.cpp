#include "qlve/combin.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace qlve {

namespace {

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::vector<std::vector<int>> adjacency(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::vector<int> prufer_encode(const LabelledTree& t) {
  int n = t.n;
  if (n <= 2) return {};
  std::vector<int> deg = tree_degrees(t);
  auto adj = adjacency(n, t.edges);
  std::vector<bool> removed(n, false);
  std::vector<int> code;
  code.reserve(n - 2);
  for (int step = 0; step < n - 2; ++step) {
    int leaf = 0;
    while (removed[leaf] || deg[leaf] != 1) ++leaf;
    for (int v : adj[leaf]) {
      if (!removed[v]) {
        code.push_back(v);
        --deg[v];
        break;
      }
    }
    removed[leaf] = true;
    deg[leaf] = 0;
  }
  return code;
}

LabelledTree prufer_decode(int n, const std::vector<int>& code) {
  LabelledTree t;
  t.n = n;
  if (n == 1) return t;
  if (n == 2) {
    t.edges.push_back({0, 1});
    return t;
  }
  std::vector<int> deg(n, 1);
  for (int c : code) ++deg[c];
  std::set<int> leaves;
  for (int i = 0; i < n; ++i)
    if (deg[i] == 1) leaves.insert(i);
  for (int c : code) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    t.edges.push_back(ordered(leaf, c));
    if (--deg[c] == 1) leaves.insert(c);
  }
  int a = *leaves.begin();
  int b = *std::next(leaves.begin());
  t.edges.push_back(ordered(a, b));
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

TreeStream::TreeStream(int n, const CombinConfig& cfg) : n_(n) {
  if (n < 1) throw ConfigError("tree enumeration needs n >= 1");
  if (n > cfg.treeCap)
    throw CapError("tree enumeration cap exceeded: n = " + std::to_string(n));
  code_.assign(std::max(0, n - 2), 0);
}

std::optional<LabelledTree> TreeStream::next() {
  if (done_) return std::nullopt;
  LabelledTree t = prufer_decode(n_, code_);
  int i = static_cast<int>(code_.size()) - 1;
  while (i >= 0 && code_[i] == n_ - 1) code_[i--] = 0;
  if (i < 0)
    done_ = true;
  else
    ++code_[i];
  return t;
}

std::uint64_t TreeStream::count() const {
  std::uint64_t c = 1;
  for (int i = 0; i < n_ - 2; ++i) c *= n_;
  return c;
}

std::vector<LabelledTree> enumerate_trees(int n, const CombinConfig& cfg) {
  TreeStream s(n, cfg);
  std::vector<LabelledTree> out;
  out.reserve(s.count());
  while (auto t = s.next()) out.push_back(std::move(*t));
  return out;
}

std::vector<Forest> enumerate_forests(int n, const CombinConfig& cfg) {
  if (n < 1) throw ConfigError("forest enumeration needs n >= 1");
  if (n > cfg.forestCap)
    throw CapError("forest enumeration cap exceeded: n = " + std::to_string(n));
  std::vector<Edge> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back({i, j});
  std::vector<Forest> out;
  const std::uint64_t m = all.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Forest f;
    f.n = n;
    for (std::uint64_t e = 0; e < m; ++e)
      if (mask >> e & 1) f.edges.push_back(all[e]);
    if (is_forest(f)) out.push_back(std::move(f));
  }
  return out;
}

std::vector<int> tree_degrees(const LabelledTree& t) {
  std::vector<int> d(t.n, 0);
  for (auto [a, b] : t.edges) {
    ++d[a];
    ++d[b];
  }
  return d;
}

std::vector<int> degrees(const MarkedTree& t) {
  std::vector<int> d = tree_degrees(t.ciliated.tree);
  for (int c : t.ciliated.cilia) ++d[c];
  for (auto [a, b] : t.markPairs) {
    ++d[a];
    ++d[b];
  }
  return d;
}

bool is_forest(const Forest& f) {
  std::vector<int> parent(f.n);
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : f.edges) {
    if (a < 0 || b < 0 || a >= f.n || b >= f.n || a == b) return false;
    int ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

bool is_tree(const LabelledTree& t) {
  if (static_cast<int>(t.edges.size()) != t.n - 1) return false;
  return is_forest(Forest{t.n, t.edges});
}

BkarWeights bkar_weights(const Forest& f, const std::vector<double>& u) {
  if (u.size() != f.edges.size())
    throw ConfigError("bkar_weights: one parameter per edge is required");
  const int n = f.n;
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (std::size_t e = 0; e < f.edges.size(); ++e) {
    auto [a, b] = f.edges[e];
    adj[a].push_back({b, u[e]});
    adj[b].push_back({a, u[e]});
  }
  BkarWeights out;
  out.n = n;
  out.u = u;
  out.w = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    // depth-first walk carrying the running path minimum
    std::vector<std::pair<int, double>> stack{{s, 1.0}};
    std::vector<int> from(n, -2);
    from[s] = -1;
    while (!stack.empty()) {
      auto [v, m] = stack.back();
      stack.pop_back();
      out.w(s, v) = m;
      for (auto [x, ux] : adj[v]) {
        if (from[x] != -2) continue;
        from[x] = v;
        stack.push_back({x, std::min(m, ux)});
      }
    }
  }
  return out;
}

BkarWeights bkar_weights(const LabelledTree& t, const std::vector<double>& u) {
  return bkar_weights(Forest{t.n, t.edges}, u);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Rational ciliated_sum(int n, int k) {
  if (k < 1 || k > n) throw ConfigError("ciliated_sum needs 1 <= k <= n");
  Rational r(binomial(2 * n - 1, n - k));
  r *= Rational(factorial(2 * n + k - 3), factorial(2 * n - 1));
  return r;
}

Rational marked_sum(int n, int k, int q) {
  if (k < 1 || k > n || q < 0) throw ConfigError("marked_sum needs 1 <= k <= n, q >= 0");
  // C(2n+2q+k-3, 2n-1) (2q+k-2)! written as one factorial ratio
  Rational r(binomial(2 * n - 1, n - k));
  r *= Rational(factorial(2 * n + 2 * q + k - 3), factorial(2 * n - 1));
  return r;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

Rational ciliated_sum_brute(int n, int k) {
  return marked_sum_brute(n, k, 0);
}

Rational marked_sum_brute(int n, int k, int q) {
  if (k < 1 || k > n || q < 0) throw ConfigError("marked_sum needs 1 <= k <= n, q >= 0");
  std::vector<BigInt> fact(2 * n + k + 2 * q + 1);
  for (std::size_t i = 0; i < fact.size(); ++i) fact[i] = factorial(i);
  // ordered cilia are k! copies of each subset
  BigInt total = 0;
  const int len = 2 * q;
  std::uint64_t nseq = 1;
  for (int i = 0; i < len; ++i) nseq *= n;
  for (const auto& t : enumerate_trees(n)) {
    auto d0 = tree_degrees(t);
    for (const auto& c : subsets(n, k)) {
      auto d1 = d0;
      for (int v : c) ++d1[v];
      for (std::uint64_t s = 0; s < nseq; ++s) {
        auto d = d1;
        std::uint64_t x = s;
        for (int i = 0; i < len; ++i) {
          ++d[x % n];
          x /= n;
        }
        BigInt p = 1;
        for (int v = 0; v < n; ++v) p *= fact[d[v] - 1];
        total += p;
      }
    }
  }
  return Rational(total * factorial(k), factorial(n));
}

CayleyResult cayley_sum(int n) {
  if (n < 2) throw ConfigError("cayley_sum needs n >= 2");
  BigInt lhs = 0;
  for (const auto& t : enumerate_trees(n)) {
    BigInt p = 1;
    for (int d : tree_degrees(t)) p *= factorial(d - 1);
    lhs += p;
  }
  // count d in {1..n}^n with sum 2(n-1) by dynamic programming
  std::vector<BigInt> ways(2 * n - 1, 0);
  ways[0] = 1;
  for (int v = 0; v < n; ++v) {
    std::vector<BigInt> next(2 * n - 1, 0);
    for (int s = 0; s < 2 * n - 1; ++s) {
      if (ways[s] == 0) continue;
      for (int d = 1; d <= n && s + d < 2 * n - 1; ++d) next[s + d] += ways[s];
    }
    ways = std::move(next);
  }
  BigInt rhs = factorial(n - 2) * ways[2 * n - 2];
  return {lhs, rhs, lhs == rhs};
}

namespace {

std::string ahu(const std::vector<std::vector<int>>& adj, int v, int parent) {
  std::vector<std::string> kids;
  for (int x : adj[v])
    if (x != parent) kids.push_back(ahu(adj, x, v));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (auto& k : kids) s += k;
  return s + ")";
}

std::vector<int> centers(const LabelledTree& t) {
  if (t.n == 1) return {0};
  auto deg = tree_degrees(t);
  auto adj = adjacency(t.n, t.edges);
  std::vector<int> layer;
  for (int i = 0; i < t.n; ++i)
    if (deg[i] <= 1) layer.push_back(i);
  int remaining = t.n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int x : adj[v])
        if (--deg[x] == 1) next.push_back(x);
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace

std::string canonical_form(const LabelledTree& t) {
  auto adj = adjacency(t.n, t.edges);
  std::string best;
  for (int c : centers(t)) {
    std::string s = ahu(adj, c, -1);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

std::vector<TreeClass> tree_classes(int n, const CombinConfig& cfg) {
  std::map<std::string, TreeClass> classes;
  TreeStream s(n, cfg);
  while (auto t = s.next()) {
    auto& c = classes[canonical_form(*t)];
    if (c.labelledCount == 0) c.representative = *t;
    ++c.labelledCount;
  }
  std::vector<TreeClass> out;
  for (auto& [key, c] : classes) out.push_back(std::move(c));
  return out;
}

}  // namespace qlve
