// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "cli.hpp"
#include "oracles.hpp"

#include <igid/brownian_fpt.hpp>
#include <igid/codebook.hpp>
#include <igid/codec.hpp>
#include <igid/error_analysis.hpp>
#include <igid/ig_distribution.hpp>
#include <igid/rng.hpp>
#include <igid/stats.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace igid;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Codebooks built by the criteria below, audited again by criterion 7.
struct BuiltBook {
  Codebook book;
  double a;
  double b;
};
std::vector<BuiltBook> g_books;

Outcome sampler_law() {
  Outcome o;
  const auto start = Clock::now();
  const auto p = IGParams::make(1, 1);
  RandomStream rng(101);
  std::vector<double> z(100000);
  for (auto& x : z) x = ig_sample(p, rng);
  const double ks = ks_statistic(z, [&](double x) { return ig_cdf(p, x); });
  const double mean = summarize(z).mean;
  const double elapsed = seconds_since(start);
  o.require(ks < 0.00516, "KS=" + num(ks) + " < 0.00516");
  o.require(std::abs(mean - 1.0) < 0.02, "mean=" + num(mean));
  o.require(elapsed < 5.0, "time=" + num(elapsed) + "s < 5s");
  return o;
}

Outcome moments() {
  Outcome o;
  const auto p = IGParams::make(2, 10);
  const auto m = ig_moments(p);
  RandomStream rng(202);
  CompensatedSum acc;
  const std::size_t draws = 1000000;
  for (std::size_t k = 0; k < draws; ++k) {
    const double z = ig_sample(p, rng);
    acc.add(z * z * z * z);
  }
  const double mc = acc.value() / static_cast<double>(draws);
  o.require(std::abs(m.fourth_noncentral - 46.72) < 1e-9, "E[Z^4]=" + num(m.fourth_noncentral));
  o.require(std::abs(mc - 46.72) <= 0.05 * 46.72, "MC E[Z^4]=" + num(mc) + " within 5%");
  o.require(std::abs(m.fourth_upper_bound - 47.7757) < 1e-4 &&
                m.fourth_noncentral <= m.fourth_upper_bound,
            "bound=" + num(m.fourth_upper_bound));

  const auto q = IGParams::make(1, 1);
  const double quad = oracle::integrate_to_infinity(
      [](double z) { return std::exp(0.25 * z + oracle::ig_log_density(1, 1, z)); }, 0.0);
  const double closed = ig_mgf(q, 0.25);
  const double rel = std::abs(quad - closed) / closed;
  char mgf[128];
  std::snprintf(mgf, sizeof mgf, "MGF(0.25): quadrature=%.10g closed=%.10g", quad, closed);
  o.require(rel <= 1e-6, std::string(mgf) +
                             " rel=" + num(rel));
  return o;
}

Outcome first_passage() {
  Outcome o;
  const auto start = Clock::now();
  FptValidationOptions opt;
  opt.dt = 1e-4;
  opt.bridge_correction = true;
  opt.seed = 303;
  const auto r = validate_fpt_distribution(FluidParams::make(1, std::sqrt(0.5), 1), 10000, opt);
  const double elapsed = seconds_since(start);
  o.require(r.ks_distance < 0.03, "KS=" + num(r.ks_distance) + " < 0.03");
  o.require(std::abs(r.sample_mean - 1.0) <= 3 * r.mean_std_error,
            "mean=" + num(r.sample_mean) + " se=" + num(r.mean_std_error));
  o.require(elapsed < 60.0, "time=" + num(elapsed) + "s < 60s");
  return o;
}

Outcome identification() {
  Outcome o;
  const auto start = Clock::now();
  const auto p = IGParams::make(1, 4);
  const std::size_t n = 10000;
  const double a = 1, b = 0.5, t_max = 10;
  const auto s = scaling_quantities(n, a, b);
  const auto rule = DecodingRule::make(p, s.delta_n);

  RandomStream rng(404);
  std::vector<double> sent(n);
  for (auto& x : sent) x = t_max * rng.uniform();
  const auto tested = partner_at_distance(sent, 2 * s.r0, t_max, rng);
  const double dist = euclidean_distance(sent, tested);
  Codebook book(n, t_max, 2 * s.r0 * (1 - 1e-12));
  book.push_back(sent);
  book.push_back(tested);
  g_books.push_back({book, a, b});

  const auto e1 = estimate_type1(book, 0, p, rule, 10000, 405);
  const auto e2 = estimate_type2(book, 0, 1, p, rule, 10000, 405);
  const auto cheb = chebyshev_bounds(p, t_max, n, a, b);
  const double eta_ref = 9.0 * std::pow(1.0 + 1.0 / 4.0, 6) / (16.0 * a * a * std::sqrt(1e4));
  const double elapsed = seconds_since(start);

  o.require(std::abs(dist - 63.2456) < 1e-3, "pair distance=" + num(dist));
  o.require(e1.errors == 0 && e1.ci_upper <= 4e-4,
            "P_e1=" + num(e1.p_hat) + " upper=" + num(e1.ci_upper));
  o.require(std::abs(cheb.eta0 - eta_ref) <= 1e-9 * eta_ref, "eta0=" + num(cheb.eta0));
  o.require(e2.p_hat <= 0.01, "P_e2=" + num(e2.p_hat));
  if (cheb.type2_sum_vacuous) {
    o.detail += "; zeta0+zeta1=" + num(cheb.type2_bound()) + " vacuous, not compared";
  } else {
    o.require(e2.p_hat <= cheb.type2_bound(), "P_e2 <= zeta0+zeta1=" + num(cheb.type2_bound()));
  }
  o.require(elapsed < 120.0, "time=" + num(elapsed) + "s < 120s");
  return o;
}

Outcome capacity_bounds() {
  Outcome o;
  const double lo_lim = 0.225, up_lim = 1.6;
  bool ordered = true, lo_mono = true, up_mono = true;
  double lo_prev = INFINITY, up_prev = INFINITY;
  double lo_gap10 = 0, up_gap10 = 0, lo_gap20 = 0, up_gap20 = 0;
  double lo20 = 0, up20 = 0;
  for (int k = 4; k <= 20; ++k) {
    const auto c = count_bounds(std::size_t{1} << k, 10, 1, 0.1);
    ordered = ordered && c.rate_lower < c.rate_upper;
    // Monotone approach: each step moves toward the limit.
    lo_mono = lo_mono && std::abs(c.rate_lower - lo_lim) < std::abs(lo_prev - lo_lim);
    up_mono = up_mono && std::abs(c.rate_upper - up_lim) < std::abs(up_prev - up_lim);
    lo_prev = c.rate_lower;
    up_prev = c.rate_upper;
    if (k == 10) lo_gap10 = std::abs(c.rate_lower - lo_lim), up_gap10 = std::abs(c.rate_upper - up_lim);
    if (k == 20) {
      lo_gap20 = std::abs(c.rate_lower - lo_lim), up_gap20 = std::abs(c.rate_upper - up_lim);
      lo20 = c.rate_lower, up20 = c.rate_upper;
    }
  }
  o.require(lo_mono && up_mono, "monotone approach (k=20: lower=" + num(lo20) +
                                    " upper=" + num(up20) + ")");
  o.require(lo_gap20 < lo_gap10 && up_gap20 < up_gap10,
            "gaps k=10->20: lower " + num(lo_gap10) + "->" + num(lo_gap20) + ", upper " +
                num(up_gap10) + "->" + num(up_gap20));
  o.require(ordered, "rate_lower < rate_upper at every n");
  return o;
}

Outcome packing() {
  Outcome o;
  bool audits = true;
  for (std::size_t n = 1; n <= 3; ++n) {
    RandomStream rng(600 + n);
    const auto r = build_greedy_packing(n, 10, 2, 1000000, 2000000, rng);
    g_books.push_back({r.codebook, 1, 0.5});
    audits = audits && audit_codebook(r.codebook).ok;
    o.require(r.saturated, "n=" + std::to_string(n) + " M=" + std::to_string(r.codebook.size()) +
                               " saturated");
    const auto d = estimate_packing_density(r.codebook, 1, 400000, 610 + n);
    const double floor = std::pow(2.0, -static_cast<double>(n));
    o.require(d.value >= floor - 3 * d.std_error, "density=" + num(d.value) + " >= " + num(floor));
    const auto cover = estimate_packing_density(r.codebook, 2, 400000, 620 + n);
    o.require(cover.value >= 0.99, "2r coverage=" + num(cover.value));
  }
  for (std::size_t n : {10u, 100u, 10000u}) {
    const auto s = scaling_quantities(n, 1, 0.5);
    RandomStream rng(630 + n);
    const auto r = build_greedy_packing(n, 10, 2 * s.r0, 32, 100000, rng);
    g_books.push_back({r.codebook, 1, 0.5});
    audits = audits && audit_codebook(r.codebook).ok;
  }
  for (const auto& bb : g_books) audits = audits && audit_codebook(bb.book).ok;
  o.require(audits, "audit of " + std::to_string(g_books.size()) + " codebooks");
  return o;
}

Outcome converse() {
  Outcome o;
  bool sep = true;
  for (const auto& bb : g_books) {
    sep = sep && separation_check(bb.book, bb.book.n(), bb.a, bb.b).pass;
  }
  o.require(sep, "separation on " + std::to_string(g_books.size()) + " codebooks");

  const auto p = IGParams::make(1, 1);
  auto lemma = [&](std::size_t n) {
    const double alpha = scaling_quantities(n, 1, 0.1).alpha_n;
    std::vector<double> c1(n, 5.0), c2(n, 5.0 - alpha / 2), z(n, 0.5);
    return lemma3_bound_check(c1, c2, z, p, n, 1, 0.1);
  };
  const auto r2 = lemma(100);
  const auto r4 = lemma(10000);
  o.require(r2.within_bound, "n=100 |1-ratio|=" + num(std::abs(1 - r2.ratio)) +
                                 " <= e^tau-1=" + num(std::expm1(*r2.tau_bound)));
  o.require(std::abs(1 - r4.ratio) < std::abs(1 - r2.ratio),
            "n=1e4 |1-ratio|=" + num(std::abs(1 - r4.ratio)));

  RandomStream rng(707);
  int held = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto q = IGParams::make(0.1 + 5 * rng.uniform(), 0.1 + 20 * rng.uniform());
    const std::size_t n = 1 + static_cast<std::size_t>(1000 * rng.uniform());
    std::vector<double> c1(n), c2(n), y(n);
    for (std::size_t t = 0; t < n; ++t) {
      c1[t] = 10 * rng.uniform();
      c2[t] = 10 * rng.uniform();
      y[t] = std::max(c1[t], c2[t]) + ig_sample(q, rng);
    }
    held += log_likelihood_ratio(y, c1, c2, q).identity_holds;
  }
  o.require(held == 1000, "identity on " + std::to_string(held) + "/1000 instances");
  return o;
}

std::string run_cli_artifact(std::vector<std::string> args, int workers,
                             const std::filesystem::path& file, bool& ok) {
  args.insert(args.end(), {"--workers", std::to_string(workers), "-o", file.string(), "--force"});
  std::ostringstream out, err;
  ok = ok && cli::main_entry(args, out, err) == 0;
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "igid_acceptance";
  std::filesystem::create_directories(dir);
  bool ok = true;
  const std::vector<std::string> sim{"simulate", "--mu", "1", "--lambda", "4", "--n",
                                     "1000,10000", "--trials", "2000", "--pairs", "2",
                                     "--seed", "8"};
  const std::vector<std::string> fpt{"fpt", "--d", "1", "--v", "1", "--sigma2", "0.5", "--dt",
                                     "1e-3", "--samples", "2000", "--seed", "8"};
  for (const auto* args : {&sim, &fpt}) {
    const auto base = run_cli_artifact(*args, 1, dir / "w1.csv", ok);
    for (int w : {2, 4}) {
      const auto other = run_cli_artifact(*args, w, dir / ("w" + std::to_string(w) + ".csv"), ok);
      o.require(!base.empty() && other == base,
                (*args)[0] + " workers 1 vs " + std::to_string(w) + " byte-identical");
    }
  }
  o.require(ok, "commands exited 0");
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"sampler law", sampler_law},
      {"moments", moments},
      {"first-passage equivalence", first_passage},
      {"identification experiment", identification},
      {"capacity-bound convergence", capacity_bounds},
      {"packing properties", packing},
      {"converse machinery", converse},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
