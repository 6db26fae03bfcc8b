#include "qlve/lve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "qlve/quadrature.hpp"

namespace qlve {

namespace {

struct ClassData {
  LabelledTree rep;
  std::uint64_t count = 0;
  std::string shape;
  std::vector<std::vector<int>> orderings;  // edge indices by decreasing u
};

const std::vector<ClassData>& class_data(int n, int cap) {
  static std::map<int, std::vector<ClassData>> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  CombinConfig cfg;
  cfg.treeCap = cap;
  std::vector<ClassData> out;
  for (auto& tc : tree_classes(n, cfg)) {
    ClassData cd;
    cd.rep = tc.representative;
    cd.count = tc.labelledCount;
    cd.shape = canonical_form(cd.rep);
    std::vector<int> order(n - 1);
    std::iota(order.begin(), order.end(), 0);
    do cd.orderings.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));
    out.push_back(std::move(cd));
  }
  return cache.emplace(n, std::move(out)).first->second;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_factorial(int m) { return std::lgamma(m + 1.0); }

// Level sums S_l = sum over clusters of (sum of r in cluster)^2 along an ordering.
void level_sums(const LabelledTree& t, const std::vector<int>& order, const double* r, double* S) {
  const int n = t.n;
  int parent[16];
  double R[16];
  double s = 0;
  for (int i = 0; i < n; ++i) {
    parent[i] = i;
    R[i] = r[i];
    s += r[i] * r[i];
  }
  S[0] = s;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (int l = 1; l < n; ++l) {
    auto [a, b] = t.edges[order[l - 1]];
    int ra = find(a), rb = find(b);
    s += 2 * R[ra] * R[rb];
    parent[ra] = rb;
    R[rb] += R[ra];
    S[l] = s;
  }
}

struct TermParams {
  double beta;     // -(phi + psi)/2
  cplx kappa;      // |g| eps e^{-i psi}
  int tailOrder;
};

TermParams term_params(const SurfacePoint& g, const EpsParam& eps, double psi, int q) {
  return {-(g.liftedArg + psi) / 2, g.modulus * eps.value() * std::polar(1.0, -psi), q};
}

struct Estimate {
  cplx value = 0;
  double error = 0;
};

// sum over orderings of the divided difference (or its tail) at one r point
cplx ordering_sum(const ClassData& cd, const double* r, cplx coef, int q, std::vector<double>& S,
                  std::vector<cplx>& x) {
  const int n = cd.rep.n;
  cplx total = 0;
  for (const auto& ord : cd.orderings) {
    level_sums(cd.rep, ord, r, S.data());
    for (int l = 0; l < n; ++l) x[l] = coef * S[l];
    cplx full, tail;
    exp_divided_difference(x.data(), n, q, full, tail);
    total += q > 0 ? tail : full;
  }
  return total;
}

// E over rho ~ Gamma(d_i) of e^{-i tan(beta) sum rho} sum_pi e[x], tensor Gauss-Laguerre.
// The rule is built for the base degrees b; each target d = b + e (e_i in {0, 1})
// reuses the nodes with the weight prod (r_i / b_i)^{e_i}.
// Only nodes with first coordinate index `first` are visited.
std::vector<cplx> laguerre_expectation(const ClassData& cd, const std::vector<int>& b,
                                       const std::vector<std::vector<int>>& extra, const TermParams& tp, int p,
                                       int first) {
  const int n = cd.rep.n;
  const double cb = std::cos(tp.beta), tb = std::tan(tp.beta);
  const cplx coef = -0.5 * tp.kappa / (cb * cb);
  std::vector<const Rule*> rules(n);
  for (int i = 0; i < n; ++i) rules[i] = &gauss_laguerre(p, b[i] - 1);
  std::vector<int> idx(n, 0);
  idx[0] = first;
  std::vector<double> r(n), S(n);
  std::vector<cplx> x(n);
  std::vector<cplx> total(extra.size(), 0.0);
  while (true) {
    double w = 1, sum = 0;
    for (int i = 0; i < n; ++i) {
      r[i] = rules[i]->x[idx[i]];
      w *= rules[i]->w[idx[i]];
      sum += r[i];
    }
    cplx v = w * std::polar(1.0, -tb * sum) * ordering_sum(cd, r.data(), coef, tp.tailOrder, S, x);
    for (std::size_t j = 0; j < extra.size(); ++j) {
      double f = 1;
      for (int i = 0; i < n; ++i)
        if (extra[j][i]) f *= r[i] / b[i];
      total[j] += f * v;
    }
    int i = 1;
    while (i < n && ++idx[i] == p) idx[i++] = 0;
    if (i >= n) break;
  }
  return total;
}

Estimate monte_carlo_class(const ClassData& cd, const std::vector<int>& d, const TermParams& tp,
                           std::int64_t samples, std::uint64_t seed) {
  const int n = cd.rep.n;
  const double cb = std::cos(tp.beta), tb = std::tan(tp.beta);
  const cplx coef = -0.5 * tp.kappa / (cb * cb);
  const double nOrd = static_cast<double>(cd.orderings.size());
  std::mt19937_64 rng(seed);
  std::vector<std::gamma_distribution<double>> gam;
  for (int i = 0; i < n; ++i) gam.emplace_back(double(d[i]), 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, cd.orderings.size() - 1);
  std::vector<double> r(n), S(n);
  std::vector<cplx> x(n);
  cplx mean = 0;
  double m2 = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      r[i] = gam[i](rng);
      sum += r[i];
    }
    const auto& ord = cd.orderings[pick(rng)];
    level_sums(cd.rep, ord, r.data(), S.data());
    for (int l = 0; l < n; ++l) x[l] = coef * S[l];
    cplx full, tail;
    exp_divided_difference(x.data(), n, tp.tailOrder, full, tail);
    cplx v = nOrd * std::polar(1.0, -tb * sum) * (tp.tailOrder > 0 ? tail : full);
    cplx dv = v - mean;
    mean += dv / double(s + 1);
    m2 += std::norm(dv) * double(s) / double(s + 1);
  }
  double var = samples > 1 ? m2 / double(samples - 1) : 0.0;
  return {mean, std::sqrt(var / double(std::max<std::int64_t>(samples, 1)))};
}

// Effective tilt for sampling: makes the Gamma weights real when the rotation is admissible.
double sampling_tilt(const SurfacePoint& g, const EpsParam& eps) {
  const double margin = 0.05;
  double target = -g.liftedArg;
  double lo = eps.arg - (kPi / 2 - margin), hi = eps.arg + (kPi / 2 - margin);
  return std::clamp(target, lo, hi);
}

template <class F>
void parallel_for(int count, int threads, const F& f) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) f(i);
    });
  for (auto& th : pool) th.join();
}

void validate(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int n) {
  if (k < 1) throw ConfigError("cumulant order k must be >= 1");
  if (n < k) throw ConfigError("tree order n must be >= k");
  if (!tilt_admissible(g, eps, psi)) throw DomainError("tilt is not admissible for (g, eps)");
  double gam = convergence_ratio(g, eps, psi);
  if (!(gam < 1)) throw DomainError("outside the cardioid for this tilt: gamma = " + std::to_string(gam));
}

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("QLVE_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void exp_divided_difference(const cplx* x, int count, int q, cplx& full, cplx& tail) {
  constexpr int kMaxTerms = 700;
  const int m = count - 1;
  double big = 0;
  cplx mean = 0;
  for (int i = 0; i < count; ++i) {
    big = std::max(big, std::abs(x[i]));
    mean += x[i];
  }
  mean /= double(count);
  // number of homogeneous parts needed: radius^P / P! below 1e-18 relative to the leading part
  auto terms_for = [](double radius) {
    double t = 1;
    int p = 0;
    while (p < kMaxTerms - 1) {
      ++p;
      t *= radius / p;
      if (t < 1e-18 && p > radius) break;
    }
    return p + 1;
  };
  // H^{(l)}_p = (H^{(l-1)}_p + x_l H^{(l)}_{p-1}) / (l + p), homogeneous of degree p
  cplx H[kMaxTerms];
  auto series = [&](cplx shift, int P, int from, cplx& head, cplx& rest) {
    cplx x0 = x[0] - shift, pw = 1;
    for (int p = 0; p < P; ++p) {
      H[p] = pw;
      pw *= x0 / double(p + 1);
    }
    for (int l = 1; l <= m; ++l) {
      cplx xl = x[l] - shift;
      H[0] /= double(l);
      for (int p = 1; p < P; ++p) H[p] = (H[p] + xl * H[p - 1]) * (1.0 / double(l + p));
    }
    head = 0;
    rest = 0;
    for (int p = 0; p < P; ++p) (p < from ? head : rest) += H[p];
  };
  double spread = 0;
  for (int i = 0; i < count; ++i) spread = std::max(spread, std::abs(x[i] - mean));
  cplx h, r;
  if (q <= 0 || big > 2.0) {
    series(mean, terms_for(spread), 0, h, r);
    full = std::exp(mean) * r;
    if (q <= 0) {
      tail = full;
      return;
    }
    series(0.0, std::max(q, 1), q, h, r);
    tail = full - h;
    return;
  }
  series(0.0, std::max(terms_for(big), q + 1), q, h, r);
  full = h + r;
  tail = r;
}

TreeTerm lve_term(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int n,
                  const LveScheme& scheme, int tailOrder) {
  validate(g, eps, psi, k, n);
  TreeTerm term;
  term.n = n;
  const bool mc = n >= scheme.monteCarloFromN || n > 4;
  if (mc && !scheme.allowMonteCarlo) throw CapError("order requires Monte Carlo but it is disabled");
  term.monteCarlo = mc;
  const double psiUse = mc ? sampling_tilt(g, eps) : psi;
  const TermParams tp = term_params(g, eps, psiUse, tailOrder);
  const cplx pg = project(g);
  const cplx pref = std::pow(2.0, k - 1) * std::pow(-pg / 2.0, n - 1);
  const double logNFact = log_factorial(n), logKFact = log_factorial(k);
  const int threads = scheme.threads > 0 ? scheme.threads : default_threads();

  if (n > scheme.treeCap) {
    if (!scheme.allowMonteCarlo) throw CapError("tree order above the enumeration cap");
    // uniform Prüfer codes and uniform cilia subsets
    std::mt19937_64 rng(splitmix(scheme.seed ^ (0x1000ULL * n + k)));
    std::uniform_int_distribution<int> vert(0, n - 1);
    const std::int64_t N = scheme.samples;
    cplx mean = 0;
    double m2 = 0;
    for (std::int64_t s = 0; s < N; ++s) {
      std::vector<int> code(n - 2);
      for (auto& c : code) c = vert(rng);
      ClassData cd;
      cd.rep = prufer_decode(n, code);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> d = tree_degrees(cd.rep);
      for (int i = 0; i < k; ++i) ++d[perm[i]];
      std::vector<int> order(n - 1);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      double logOrd = log_factorial(n - 1);
      cd.orderings = {order};
      auto est = monte_carlo_class(cd, d, tp, 1, rng());
      int D = 0;
      double logProd = 0;
      for (int di : d) {
        D += di;
        logProd += log_factorial(di - 1);
      }
      cplx v = std::exp(logProd + logOrd) * std::polar(std::pow(std::cos(tp.beta), -D), tp.beta * D) * est.value;
      cplx dv = v - mean;
      mean += dv / double(s + 1);
      m2 += std::norm(dv) * double(s) / double(s + 1);
    }
    double scale = std::exp((n - 2) * std::log(double(n)) + std::log(binomial(n, k).convert_to<double>()) +
                            logKFact - logNFact);
    term.value = pref * scale * mean;
    term.errEstimate = std::abs(pref) * scale * std::sqrt(m2 / double(std::max<std::int64_t>(N - 1, 1)) / double(N));
    return term;
  }

  const auto& classes = class_data(n, scheme.treeCap);
  struct Job {
    int cls;
    std::vector<int> cilia;
    std::vector<int> d;
    double weight;  // |class factor| * prod (d-1)!
  };
  std::vector<Job> jobs;
  double totalWeight = 0;
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    auto d0 = tree_degrees(classes[c].rep);
    for (auto& cil : subsets(n, k)) {
      Job j{c, cil, d0, 0};
      for (int v : cil) ++j.d[v];
      double lp = std::log(double(classes[c].count)) - logNFact + logKFact;
      for (int di : j.d) lp += log_factorial(di - 1);
      j.weight = std::exp(lp);
      totalWeight += j.weight;
      jobs.push_back(std::move(j));
    }
  }
  std::vector<Estimate> results(jobs.size());
  if (mc) {
    parallel_for(static_cast<int>(jobs.size()), threads, [&](int i) {
      const Job& j = jobs[i];
      std::int64_t ns = std::max<std::int64_t>(
          256, static_cast<std::int64_t>(std::llround(double(scheme.samples) * j.weight / totalWeight)));
      results[i] = monte_carlo_class(classes[j.cls], j.d, tp, ns,
                                     splitmix(scheme.seed ^ splitmix(1000003ULL * n + 7919ULL * i + k)));
    });
  } else {
    // one tensor rule per class serves all of its cilia subsets
    std::vector<std::vector<int>> byClass(classes.size());
    for (int i = 0; i < static_cast<int>(jobs.size()); ++i) byClass[jobs[i].cls].push_back(i);
    std::vector<std::vector<int>> bases(classes.size());
    // tasks: (class, rule, first node index); rule 0 is the main rule, 1 the coarser error rule
    const int pHi = scheme.laguerreNodes[n], pLo = std::max(4, (3 * pHi) / 4);
    struct Task {
      int cls, rule, first;
    };
    std::vector<Task> tasks;
    std::vector<std::vector<std::vector<int>>> extras(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      bases[c] = n == 1 ? jobs[byClass[c][0]].d : tree_degrees(classes[c].rep);
      for (int i : byClass[c]) {
        std::vector<int> e(n);
        for (int v = 0; v < n; ++v) e[v] = jobs[i].d[v] - bases[c][v];
        extras[c].push_back(e);
      }
      for (int f = 0; f < pHi; ++f) tasks.push_back({static_cast<int>(c), 0, f});
      for (int f = 0; f < pLo; ++f) tasks.push_back({static_cast<int>(c), 1, f});
    }
    std::vector<std::vector<cplx>> partial(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), threads, [&](int t) {
      const Task& tk = tasks[t];
      partial[t] = laguerre_expectation(classes[tk.cls], bases[tk.cls], extras[tk.cls], tp, tk.rule ? pLo : pHi, tk.first);
    });
    std::vector<std::vector<cplx>> hi(classes.size()), lo(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      hi[c].assign(byClass[c].size(), 0.0);
      lo[c].assign(byClass[c].size(), 0.0);
    }
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      auto& dst = tasks[t].rule ? lo[tasks[t].cls] : hi[tasks[t].cls];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += partial[t][j];
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t j = 0; j < byClass[c].size(); ++j)
        results[byClass[c][j]] = {hi[c][j], std::abs(hi[c][j] - lo[c][j])};
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    int D = 0;
    for (int di : jobs[i].d) D += di;
    // e^{i beta D} cos(beta)^{-D} from the Gamma representation of the resolvent powers
    cplx phase = std::polar(std::pow(std::cos(tp.beta), -D), tp.beta * D);
    results[i] = {jobs[i].weight * phase * results[i].value, jobs[i].weight * std::abs(phase) * results[i].error};
  }
  cplx sum = 0;
  double var = 0, errSum = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    sum += results[i].value;
    var += results[i].error * results[i].error;
    errSum += results[i].error;
    ClassContribution cc;
    cc.shape = classes[jobs[i].cls].shape;
    cc.cilia = jobs[i].cilia;
    cc.labelledCount = classes[jobs[i].cls].count;
    cc.value = pref * results[i].value;
    cc.error = std::abs(pref) * results[i].error;
    term.breakdown.push_back(std::move(cc));
  }
  term.value = pref * sum;
  term.errEstimate = std::abs(pref) * (mc ? std::sqrt(var) : errSum);
  return term;
}

double tail_bound(const std::vector<TreeTerm>& terms, int k, double gamma) {
  if (terms.empty() || !(gamma < 1)) return std::numeric_limits<double>::infinity();
  if (gamma <= 0) return 0;
  double C = 0;
  const int m = static_cast<int>(terms.size());
  for (int i = std::max(0, m - 3); i < m; ++i) {
    int n = terms[i].n;
    C = std::max(C, std::abs(terms[i].value) / (std::pow(double(n), k - 2) * std::pow(gamma, n - 1)));
  }
  const int nMax = terms.back().n;
  // sum_{n>=1} n^s x^n in closed form (s = k-2), minus the computed range
  const int s = k - 2;
  const double x = gamma;
  double total;
  if (s == -1) {
    total = -std::log1p(-x);
  } else {
    // Eulerian numbers A(s, j): sum n^s x^n = x A_s(x) / (1-x)^{s+1}
    std::vector<double> A(1, 1.0);
    for (int r = 2; r <= s; ++r) {
      std::vector<double> B(r, 0.0);
      for (int j = 0; j < r; ++j) {
        double v = 0;
        if (j < r - 1) v += (j + 1) * A[j];
        if (j >= 1) v += (r - j) * A[j - 1];
        B[j] = v;
      }
      A = std::move(B);
    }
    double poly = 0;
    for (int j = static_cast<int>(A.size()) - 1; j >= 0; --j) poly = poly * x + A[j];
    total = (s == 0 ? x / (1 - x) : x * poly / std::pow(1 - x, s + 1));
  }
  double head = 0;
  for (int n = 1; n <= nMax; ++n) head += std::pow(double(n), s) * std::pow(x, n);
  double rest = std::max(0.0, total - head);
  return C * rest / x;
}

LveResult lve_cumulant(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int nMax, double tol,
                       const LveScheme& scheme) {
  validate(g, eps, psi, k, std::max(k, nMax));
  LveResult res;
  res.gamma = convergence_ratio(g, eps, psi);
  // sampled orders get up to 16x the samples when their error exceeds the share of tol
  const double share = tol / std::max(1, nMax - k + 1);
  for (int n = k; n <= nMax; ++n) {
    LveScheme s = scheme;
    TreeTerm t = lve_term(g, eps, psi, k, n, s);
    while (t.monteCarlo && t.errEstimate > share && s.samples < 16 * scheme.samples) {
      s.samples *= 4;
      t = lve_term(g, eps, psi, k, n, s);
    }
    res.terms.push_back(std::move(t));
    res.value += res.terms.back().value;
    res.error += res.terms.back().errEstimate;
  }
  res.tailBound = tail_bound(res.terms, k, res.gamma);
  return res;
}

RemainderResult remainder(const SurfacePoint& g, const EpsParam& eps, double psi, int k, int q, int nMax,
                          const LveScheme& scheme) {
  validate(g, eps, psi, k, std::max(k, nMax));
  RemainderResult r;
  for (int n = k; n <= nMax; ++n) {
    auto t = lve_term(g, eps, psi, k, n, scheme, q);
    r.value += t.value;
    r.error += t.errEstimate;
  }
  return r;
}

}  // namespace qlve
