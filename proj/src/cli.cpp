#include "qlve/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlve/bkar.hpp"
#include "qlve/gauss.hpp"
#include "qlve/model.hpp"
#include "qlve/resum.hpp"

namespace qlve {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  double g = 0.1, gArg = 0.0;
  double eps = 0.1, epsArg = 0.0;
  std::string psi = "auto";
  double t = 0.0;
  int k = 1, nMax = 6, qMax = 6;
  int L = -1, M = -1;
  double tol = 1e-10;
  std::uint64_t seed = 20240611ULL;
  std::int64_t samples = 200000;
  int threads = 0;
  std::string method = "both";
  double alpha = 0.0;
  bool curve = false;
  double xi = 0.5;
  int steps = 256;
  std::string suite = "combinatorics";
  std::string out, format;
  bool timing = false;
};

json num(cplx v, double err) { return {{"re", v.real()}, {"im", v.imag()}, {"err", err}}; }
json num(double v, double err) { return {{"value", v}, {"err", err}}; }

SurfacePoint g_point(const RunConfig& c) { return SurfacePoint(c.g, c.gArg); }
EpsParam eps_point(const RunConfig& c) { return EpsParam(c.eps, c.epsArg); }

double resolve_psi(const RunConfig& c) {
  if (c.psi == "auto") return max_radius(c.gArg, c.epsArg).second;
  try {
    std::size_t used = 0;
    double v = std::stod(c.psi, &used);
    if (used != c.psi.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("--psi must be 'auto' or a number, got '" + c.psi + "'");
  }
}

json echo_inputs(const RunConfig& c, double psi) {
  return {{"g", {{"modulus", c.g}, {"liftedArg", c.gArg}}},
          {"eps", {{"modulus", c.eps}, {"arg", c.epsArg}}},
          {"psi", psi},
          {"psiPolicy", c.psi}};
}

LveScheme scheme_of(const RunConfig& c) {
  LveScheme s;
  s.seed = c.seed;
  s.samples = c.samples;
  s.threads = c.threads;
  return s;
}

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Check> suite_combinatorics(int nmax) {
  std::vector<Check> out;
  for (int n = 1; n <= std::min(nmax, 6); ++n) {
    if (n >= 2) {
      auto c = cayley_sum(n);
      out.push_back({"cayley n=" + std::to_string(n), c.equal, c.treeSum.str()});
    }
    for (int k = 1; k <= n; ++k) {
      auto a = ciliated_sum(n, k), b = ciliated_sum_brute(n, k);
      out.push_back({"ciliated n=" + std::to_string(n) + " k=" + std::to_string(k), a == b, a.str()});
    }
  }
  for (int n = 1; n <= std::min(nmax, 4); ++n)
    for (int k = 1; k <= n; ++k)
      for (int q = 0; q <= 2; ++q) {
        auto a = marked_sum(n, k, q), b = marked_sum_brute(n, k, q);
        out.push_back({"marked n=" + std::to_string(n) + " k=" + std::to_string(k) + " q=" + std::to_string(q),
                       a == b, a.str()});
      }
  for (int n = 1; n <= std::min(nmax, 5); ++n) {
    auto a = tree_coefficient(n, 1, 0), b = ciliated_sum(n, 1);
    out.push_back({"order-zero coefficient n=" + std::to_string(n), a == b, a.str()});
  }
  return out;
}

std::vector<Check> suite_bkar(int nmax, std::uint64_t seed) {
  std::vector<Check> out;
  std::mt19937_64 rng(seed);
  for (int n = 2; n <= std::min(nmax, 4); ++n) {
    int ok = 0, total = 40;
    for (int i = 0; i < total; ++i) {
      auto f = EdgePolynomial::random(n, 3, rng);
      if (bkar_check(f).equal) ++ok;
    }
    out.push_back({"bkar n=" + std::to_string(n), ok == total, std::to_string(ok) + "/" + std::to_string(total)});
  }
  return out;
}

std::vector<Check> suite_bounds(std::uint64_t seed) {
  std::vector<Check> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  int bad = 0;
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    SurfacePoint g(2 * std::abs(U(rng)) + 1e-3, 0.999 * kPi * U(rng) * 2);
    double psi = 0.999 * kPi * U(rng);
    cplx s = 10 * U(rng) * std::polar(1.0, psi / 2);
    double c = std::abs(std::cos((psi + g.liftedArg) / 2));
    if (!(c > 1e-6)) continue;
    double lhs = std::abs(resolvent(s, g));
    double excess = lhs - 1.0 / c;
    worst = std::max(worst, excess);
    if (excess > 1e-12) ++bad;
  }
  out.push_back({"resolvent bound", bad == 0, "worst excess " + csv_double(worst)});
  bad = 0;
  worst = -1;
  for (int i = 0; i < 2000; ++i) {
    double delta = 1.5 * U(rng), mod = 0.2 + 2 * std::abs(U(rng));
    double a = 3 * U(rng), c = i % 10 ? 2 * U(rng) : -std::sin(delta) / (2 * mod), b = std::abs(U(rng));
    auto F = [&](const Eigen::VectorXd& x) { return std::polar(1 / (1 + b * x(0) * x(0)), a * x(0) + c * x(0) * x(0)); };
    auto r = expect_complex_reweighted(ComplexScale(std::polar(mod, delta)), Covariance::identity(1), F);
    double excess = std::abs(r.value) - 1 / std::sqrt(std::cos(delta));
    worst = std::max(worst, excess);
    if (excess > 1e-12) ++bad;
  }
  out.push_back({"complex Gaussian bound", bad == 0, "worst excess " + csv_double(worst)});
  int neg = 0;
  for (int i = 0; i < 200; ++i) {
    int n = 2 + static_cast<int>(rng() % 5);
    std::vector<int> code(n - 2);
    for (auto& v : code) v = static_cast<int>(rng() % n);
    auto t = prufer_decode(n, code);
    std::vector<double> u(n - 1);
    for (auto& v : u) v = 0.5 * (1 + U(rng));
    if (min_eigenvalue(bkar_weights(t, u).w) < -1e-12) ++neg;
  }
  out.push_back({"interpolated weights positive semidefinite", neg == 0, std::to_string(neg) + " violations"});
  return out;
}

std::vector<Check> suite_copies() {
  std::vector<Check> out;
  for (cplx z : {cplx(1, 0), std::polar(0.5, 0.7), std::polar(2.0, -1.2)}) {
    for (int n = 1; n <= 3; ++n) {
      auto F = [](cplx x) { return std::exp(-0.05 * x * x) / (1.0 + 0.1 * x * x); };
      auto r = copies_check(ComplexScale(z), F, n);
      bool ok = r.diff <= 1e-8 * std::max(1.0, std::abs(r.lhs));
      out.push_back({"copies n=" + std::to_string(n) + " z=" + csv_double(z.real()) + "+" + csv_double(z.imag()) + "i",
                     ok, csv_double(r.diff)});
    }
  }
  return out;
}

std::vector<Check> suite_psi(int nmax, const LveScheme& scheme) {
  std::vector<Check> out;
  SurfacePoint g(0.1, 0.5);
  EpsParam e(0.2, 0.3);
  std::vector<double> psis{-0.9, -0.5, 0.0, 0.4, 0.8};
  std::vector<cplx> Z, K;
  for (double psi : psis) {
    Z.push_back(partition(ModelPoint(g, e, psi)).value);
    K.push_back(cumulant_oracle(g, e, psi, 2).value);
  }
  double dz = 0, dk = 0;
  for (std::size_t i = 1; i < psis.size(); ++i) {
    dz = std::max(dz, std::abs(Z[i] - Z[0]) / std::abs(Z[0]));
    dk = std::max(dk, std::abs(K[i] - K[0]) / std::abs(K[0]));
  }
  out.push_back({"partition psi-invariance", dz < 1e-7, csv_double(dz)});
  out.push_back({"second cumulant psi-invariance", dk < 1e-7, csv_double(dk)});
  for (int n = 1; n <= std::min(nmax, 3); ++n) {
    auto a = lve_term(g, e, -0.2, 1, n, scheme).value;
    auto b = lve_term(g, e, 0.3, 1, n, scheme).value;
    double d = std::abs(a - b) / std::abs(a);
    out.push_back({"tree term psi-invariance n=" + std::to_string(n), d < 1e-8, csv_double(d)});
  }
  return out;
}

std::vector<Check> suite_oracle(int nmax, const LveScheme& scheme) {
  std::vector<Check> out;
  SurfacePoint g(0.2, 0.0);
  for (int N : {1, 2, 4, 8})
    for (int k = 1; k <= 2; ++k) {
      auto a = cumulant_oracle(g, EpsParam(1.0 / N, 0), 0.0, k).value;
      auto b = radial_oracle(N, 0.2, k).value;
      double d = std::abs(a - b) / std::abs(b);
      out.push_back({"radial N=" + std::to_string(N) + " k=" + std::to_string(k), d < 1e-5, csv_double(d)});
    }
  SurfacePoint gs(0.05, 0.0);
  EpsParam e(0.1, 0.0);
  for (int k = 1; k <= 2; ++k) {
    auto lve = lve_cumulant(gs, e, 0.0, k, std::max(nmax, 4), 1e-6, scheme);
    auto orc = cumulant_oracle(gs, e, 0.0, k).value;
    double d = std::abs(lve.value - orc) / std::abs(orc);
    out.push_back({"lve vs oracle k=" + std::to_string(k), d < 1e-4, csv_double(d)});
  }
  return out;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + c.out);
  f << text;
}

std::string dump(json& j, const RunConfig& c, std::chrono::steady_clock::time_point start) {
  if (c.timing)
    j["timing"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 0.0);
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineNo = 0;
  while (std::getline(f, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      s.erase(0, s.find_first_not_of(ws));
      auto e = s.find_last_not_of(ws);
      s.erase(e == std::string::npos ? 0 : e + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineNo) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

int run_cli(const std::vector<std::string>& argsIn, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Quartic O(N) vector model: loop vertex expansion, oracles and resummation", "qlve"};
  app.require_subcommand(1);
  std::string configPath;

  auto add_point = [&](CLI::App* s) {
    s->add_option("--g", c.g, "modulus of the coupling");
    s->add_option("--g-arg", c.gArg, "lifted argument of the coupling in (-2pi, 2pi]");
    s->add_option("--eps", c.eps, "modulus of eps = 1/N");
    s->add_option("--eps-arg", c.epsArg, "argument of eps, |theta| < pi/2");
    s->add_option("--psi", c.psi, "tilt: 'auto' or a value");
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", configPath, "key=value file, overridden by flags");
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--format", c.format, "json or csv");
    s->add_flag("--timing", c.timing, "include wall time in the record");
  };
  auto add_lve = [&](CLI::App* s) {
    s->add_option("--k", c.k, "cumulant order");
    s->add_option("--nmax", c.nMax, "largest tree order");
    s->add_option("--seed", c.seed, "seed for Monte Carlo orders");
    s->add_option("--samples", c.samples, "Monte Carlo samples per order");
    s->add_option("--threads", c.threads, "worker threads (0: QLVE_THREADS or hardware)");
  };

  auto* partitionCmd = app.add_subcommand("partition", "partition function by contour quadrature");
  add_point(partitionCmd);
  add_common(partitionCmd);
  partitionCmd->add_option("--t", c.t, "source strength |J|^2");
  partitionCmd->add_option("--tol", c.tol, "relative tolerance");

  auto* cumulantCmd = app.add_subcommand("cumulant", "cumulant by oracle, tree expansion or both");
  add_point(cumulantCmd);
  add_common(cumulantCmd);
  add_lve(cumulantCmd);
  cumulantCmd->add_option("--method", c.method, "oracle, lve or both")->check(CLI::IsMember({"oracle", "lve", "both"}));
  cumulantCmd->add_option("--tol", c.tol, "oracle tolerance");

  auto* lveCmd = app.add_subcommand("lve", "tree expansion with per-order terms");
  add_point(lveCmd);
  add_common(lveCmd);
  add_lve(lveCmd);

  auto* seriesCmd = app.add_subcommand("series", "coefficients of the 1/N expansion");
  add_point(seriesCmd);
  add_common(seriesCmd);
  seriesCmd->add_option("--k", c.k, "cumulant order");
  seriesCmd->add_option("--nmax", c.nMax, "largest tree order");
  seriesCmd->add_option("--qmax", c.qMax, "largest eps power");

  auto* borelCmd = app.add_subcommand("borel", "Borel-Padé reconstruction");
  add_point(borelCmd);
  add_common(borelCmd);
  borelCmd->add_option("--k", c.k, "cumulant order");
  borelCmd->add_option("--nmax", c.nMax, "largest tree order");
  borelCmd->add_option("--qmax", c.qMax, "largest eps power");
  borelCmd->add_option("--L", c.L, "numerator degree");
  borelCmd->add_option("--M", c.M, "denominator degree");

  auto* domainCmd = app.add_subcommand("domain", "convergence domain queries");
  add_point(domainCmd);
  add_common(domainCmd);
  domainCmd->add_flag("--curve", c.curve, "emit the rho_xi curve as CSV");
  domainCmd->add_option("--xi", c.xi, "exponent xi in (0, 1)");
  domainCmd->add_option("--steps", c.steps, "phi grid intervals");
  domainCmd->add_option("--alpha", c.alpha, "cardioid shrink factor");

  auto* verifyCmd = app.add_subcommand("verify", "run a verification suite");
  add_common(verifyCmd);
  verifyCmd->add_option("--suite", c.suite, "suite name")
      ->check(CLI::IsMember({"bkar", "combinatorics", "bounds", "copies", "psi-invariance", "oracle-equivalence"}));
  verifyCmd->add_option("--nmax", c.nMax, "largest order");
  verifyCmd->add_option("--seed", c.seed, "seed");
  verifyCmd->add_option("--threads", c.threads, "worker threads");

  try {
    std::vector<std::string> args = argsIn;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config") path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      for (auto& [key, value] : read_config_file(path)) {
        bool given = false;
        for (const auto& a : argsIn)
          if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) given = true;
        if (!given) args.push_back("--" + key + "=" + value);
      }
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (c.format.empty()) c.format = (domainCmd->parsed() && c.curve) || seriesCmd->parsed() ? "csv" : "json";
    if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");

    if (partitionCmd->parsed()) {
      double psi = resolve_psi(c);
      OracleOptions opt;
      opt.tol = c.tol;
      auto r = partition(ModelPoint(g_point(c), eps_point(c), psi, c.t), opt);
      json j{{"command", "partition"}, {"inputs", echo_inputs(c, psi)}};
      j["inputs"]["t"] = c.t;
      j["Z"] = num(r.value, r.error);
      j["contourShift"] = num(r.shift, 0.0);
      emit(c, dump(j, c, start), out);
    } else if (cumulantCmd->parsed()) {
      double psi = resolve_psi(c);
      json j{{"command", "cumulant"}, {"inputs", echo_inputs(c, psi)}};
      j["inputs"]["k"] = c.k;
      j["inputs"]["method"] = c.method;
      cplx ov = 0, lv = 0;
      double oe = 0, le = 0;
      if (c.method != "lve") {
        OracleOptions opt;
        opt.tol = c.tol;
        auto r = cumulant_oracle(g_point(c), eps_point(c), psi, c.k, opt);
        ov = r.value;
        oe = r.error;
        j["oracle"] = num(ov, oe);
      }
      if (c.method != "oracle") {
        j["inputs"]["nMax"] = c.nMax;
        j["inputs"]["seed"] = c.seed;
        auto r = lve_cumulant(g_point(c), eps_point(c), psi, c.k, c.nMax, 1e-6, scheme_of(c));
        lv = r.value;
        le = r.error + r.tailBound;
        j["lve"] = num(lv, le);
        j["gamma"] = num(r.gamma, 0.0);
        j["tailBound"] = num(r.tailBound, 0.0);
      }
      if (c.method == "both") j["difference"] = num(std::abs(lv - ov), oe + le);
      emit(c, dump(j, c, start), out);
    } else if (lveCmd->parsed()) {
      double psi = resolve_psi(c);
      auto r = lve_cumulant(g_point(c), eps_point(c), psi, c.k, c.nMax, 1e-6, scheme_of(c));
      if (c.format == "csv") {
        std::string s = "n,re,im,err,monte_carlo\n";
        for (const auto& t : r.terms)
          s += std::to_string(t.n) + "," + csv_double(t.value.real()) + "," + csv_double(t.value.imag()) + "," +
               csv_double(t.errEstimate) + "," + (t.monteCarlo ? "1" : "0") + "\n";
        emit(c, s, out);
      } else {
        json j{{"command", "lve"}, {"inputs", echo_inputs(c, psi)}};
        j["inputs"]["k"] = c.k;
        j["inputs"]["nMax"] = c.nMax;
        j["inputs"]["seed"] = c.seed;
        json terms = json::array();
        for (const auto& t : r.terms)
          terms.push_back({{"n", t.n}, {"monteCarlo", t.monteCarlo}, {"value", num(t.value, t.errEstimate)}});
        j["terms"] = terms;
        j["value"] = num(r.value, r.error + r.tailBound);
        j["gamma"] = num(r.gamma, 0.0);
        j["tailBound"] = num(r.tailBound, 0.0);
        emit(c, dump(j, c, start), out);
      }
    } else if (seriesCmd->parsed()) {
      double psi = resolve_psi(c);
      auto s = eps_coefficients(g_point(c), psi, c.k, c.qMax, c.nMax);
      if (c.format == "csv") {
        std::string text = "q,re,im,truncation,flagged\n";
        for (int q = 0; q <= c.qMax; ++q)
          text += std::to_string(q) + "," + csv_double(s.coefficients[q].real()) + "," +
                  csv_double(s.coefficients[q].imag()) + "," + csv_double(s.truncation[q]) + "," +
                  (s.flagged[q] ? "1" : "0") + "\n";
        emit(c, text, out);
      } else {
        json j{{"command", "series"}, {"inputs", echo_inputs(c, psi)}};
        json a = json::array();
        for (int q = 0; q <= c.qMax; ++q) {
          json e = num(s.coefficients[q], s.truncation[q]);
          e["flagged"] = static_cast<bool>(s.flagged[q]);
          a.push_back(e);
        }
        j["coefficients"] = a;
        emit(c, dump(j, c, start), out);
      }
    } else if (borelCmd->parsed()) {
      double psi = resolve_psi(c);
      int L = c.L >= 0 ? c.L : c.qMax / 2, M = c.M >= 0 ? c.M : c.qMax / 2;
      auto s = eps_coefficients(g_point(c), psi, c.k, c.qMax, c.nMax);
      auto b = borel_transform(s);
      auto r = pade(b, L, M);
      cplx e = eps_point(c).value();
      r.laplaceValue = laplace_reconstruct(r, e);
      double recErr = 0;
      if (L > 0 && M > 0) {
        auto lower = pade(b, L - 1, M - 1);
        if (pole_distance_to_positive_axis(lower) > 1e-6) recErr = std::abs(laplace_reconstruct(lower, e) - r.laplaceValue);
      }
      auto orc = cumulant_oracle(g_point(c), eps_point(c), psi, c.k);
      r.directValue = orc.value;
      json j{{"command", "borel"}, {"inputs", echo_inputs(c, psi)}};
      j["inputs"]["L"] = L;
      j["inputs"]["M"] = M;
      j["inputs"]["qMax"] = c.qMax;
      auto list = [](const std::vector<cplx>& v) {
        json a = json::array();
        for (auto x : v) a.push_back(num(x, 0.0));
        return a;
      };
      json bj = json::array();
      double qf = 1;
      for (int q = 0; q < static_cast<int>(b.size()); ++q) {
        if (q > 0) qf *= q;
        bj.push_back(num(b[q], s.truncation[q] / qf));
      }
      j["borel"] = bj;
      j["padeNum"] = list(r.padeNum);
      j["padeDen"] = list(r.padeDen);
      j["poles"] = list(r.poles);
      j["usedM"] = r.usedM;
      j["cancelledPairs"] = r.cancelledPairs;
      j["poleDistance"] = num(pole_distance_to_positive_axis(r), 0.0);
      j["laplaceValue"] = num(r.laplaceValue, recErr);
      j["directValue"] = num(r.directValue, orc.error);
      j["relativeDifference"] = num(std::abs(r.laplaceValue - r.directValue) / std::abs(r.directValue), 0.0);
      emit(c, dump(j, c, start), out);
    } else if (domainCmd->parsed()) {
      if (c.curve) {
        auto curve = rho_xi_curve(c.xi, uniform_phi_grid(c.steps));
        emit(c, rho_curve_csv(curve, c.xi), out);
      } else {
        auto rep = cardioid_contains(g_point(c), eps_point(c), c.alpha);
        auto [radius, psiStar] = max_radius(c.gArg, c.epsArg);
        json j{{"command", "domain"}, {"inputs", echo_inputs(c, psiStar)}};
        j["inputs"]["alpha"] = c.alpha;
        j["inCardioid"] = rep.inCardioid;
        j["margin"] = num(rep.margin, 0.0);
        j["maxRadius"] = num(radius, 0.0);
        j["argmaxPsi"] = num(psiStar, 0.0);
        j["gamma"] = num(convergence_ratio(g_point(c), eps_point(c), psiStar), 0.0);
        emit(c, dump(j, c, start), out);
      }
    } else if (verifyCmd->parsed()) {
      std::vector<Check> checks;
      LveScheme sch;
      sch.threads = c.threads;
      sch.seed = c.seed;
      if (c.suite == "combinatorics") checks = suite_combinatorics(c.nMax);
      if (c.suite == "bkar") checks = suite_bkar(c.nMax, c.seed);
      if (c.suite == "bounds") checks = suite_bounds(c.seed);
      if (c.suite == "copies") checks = suite_copies();
      if (c.suite == "psi-invariance") checks = suite_psi(c.nMax, sch);
      if (c.suite == "oracle-equivalence") checks = suite_oracle(c.nMax, sch);
      bool all = true;
      json j{{"command", "verify"}, {"suite", c.suite}, {"nMax", c.nMax}};
      json list = json::array();
      for (const auto& ch : checks) {
        all = all && ch.pass;
        list.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
      }
      j["checks"] = list;
      j["pass"] = all;
      emit(c, dump(j, c, start), out);
      return all ? kExitOk : kExitFailure;
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace qlve
