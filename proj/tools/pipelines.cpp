#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "igid/brownian_fpt.hpp"
#include "igid/codebook.hpp"
#include "igid/codec.hpp"
#include "igid/error_analysis.hpp"
#include "igid/errors.hpp"
#include "igid/ig_distribution.hpp"
#include "igid/parallel.hpp"
#include "igid/stats.hpp"
#include "report.hpp"

namespace igid::cli {

namespace {

using u64 = std::uint64_t;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scaling_comment(const ScalingQuantities& s) {
  return "n=" + std::to_string(s.n) + " a=" + fmt(s.a) + " b=" + fmt(s.b) +
         " epsilon_n=" + fmt(s.epsilon_n) + " r0=" + fmt(s.r0) + " delta_n=" + fmt(s.delta_n) +
         " alpha_n=" + fmt(s.alpha_n);
}

std::string bounds_comment(std::size_t n, const ChebyshevBounds& c) {
  return "n=" + std::to_string(n) + " eta0=" + fmt(c.eta0) + " zeta0=" + fmt(c.zeta0) +
         " zeta1=" + fmt(c.zeta1);
}

// Artifact to --output (summary on `out`) or to `out` (summary on `err`).
void deliver(const ExperimentConfig& cfg, const Table& table, const std::string& summary,
             std::ostream& out, std::ostream& err) {
  if (cfg.output_path) {
    emit_report(table, *cfg.output_path, cfg.force, cfg.json_mirror);
    out << summary << '\n';
  } else {
    write_csv(out, table);
    err << summary << '\n';
  }
}

// ---------------------------------------------------------------------------

void run_dist(const ExperimentConfig& cfg, const DistConfig& c, std::ostream& out,
              std::ostream& err) {
  const IGParams params = IGParams::make(c.mu, c.lambda);
  const MomentSet m = ig_moments(params);
  Table t;
  t.comments.push_back("command=dist action=" + c.action + " mu=" + fmt(c.mu) +
                       " lambda=" + fmt(c.lambda));
  std::string summary;
  if (c.action == "sample") {
    std::vector<double> z(c.n_samples);
    parallel_for(z.size(), [&](std::size_t k) {
      RandomStream rng = RandomStream::substream(cfg.master_seed, StreamTag::kIgSample, k);
      z[k] = ig_sample(params, rng);
    });
    const SampleSummary s = summarize(z);
    const double ks = ks_statistic(z, [&](double x) { return ig_cdf(params, x); });
    t.columns = {"mu", "lambda", "n_samples", "sample_mean", "sample_variance",
                 "sample_fourth_moment", "ks_distance", "ks_band_99", "mean", "variance",
                 "fourth_noncentral", "seed"};
    t.add_row({c.mu, c.lambda, u64{c.n_samples}, s.mean, s.variance, s.fourth_moment, ks,
               ks_band_99(c.n_samples), m.mean, m.variance, m.fourth_noncentral,
               u64{cfg.master_seed}});
    summary = "dist sample: n=" + std::to_string(c.n_samples) + " mean=" + fmt(s.mean) +
              " variance=" + fmt(s.variance) + " ks=" + fmt(ks) +
              " band99=" + fmt(ks_band_99(c.n_samples));
  } else if (c.action == "pdf") {
    const double lo = c.z_min.value_or(0.0);
    const double hi = c.z_max.value_or(params.mu + 10.0 * std::sqrt(params.variance()));
    t.columns = {"z", "pdf", "cdf"};
    for (u64 i = 0; i < c.points; ++i) {
      const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c.points - 1);
      t.add_row({z, ig_pdf(params, z), ig_cdf(params, z)});
    }
    summary = "dist pdf: " + std::to_string(c.points) + " points on [" + fmt(lo) + ", " +
              fmt(hi) + "]";
  } else if (c.action == "moments") {
    t.columns = {"mu", "lambda", "mean", "variance", "fourth_noncentral", "fourth_upper_bound"};
    t.add_row({c.mu, c.lambda, m.mean, m.variance, m.fourth_noncentral, m.fourth_upper_bound});
    summary = "dist moments: mean=" + fmt(m.mean) + " variance=" + fmt(m.variance) +
              " E[Z^4]=" + fmt(m.fourth_noncentral) + " bound=" + fmt(m.fourth_upper_bound);
  } else {
    const double g = ig_mgf(params, c.alpha);
    t.columns = {"mu", "lambda", "alpha", "mgf"};
    t.add_row({c.mu, c.lambda, c.alpha, g});
    summary = "dist mgf: alpha=" + fmt(c.alpha) + " mgf=" + fmt(g);
  }
  deliver(cfg, t, summary, out, err);
}

void run_fpt(const ExperimentConfig& cfg, const FptConfig& c, std::ostream& out,
             std::ostream& err) {
  FluidParams fluid = FluidParams::make(c.v, c.volatility(), c.d);
  fluid.diffusion_display = c.diffusion;
  const IGParams ig = ig_params_from_fluid(fluid);
  const double dt = c.dt.value_or(ig.mu / 1e4);

  FptValidationOptions opts;
  opts.dt = dt;
  opts.bridge_correction = c.bridge;
  opts.seed = cfg.master_seed;
  opts.self_test = c.self_test;
  opts.max_steps = c.max_steps;
  const FptReport r = validate_fpt_distribution(fluid, c.samples, opts);

  for (u64 i = 0; i < c.trace_paths; ++i) {
    RandomStream rng = RandomStream::substream(cfg.master_seed, StreamTag::kFptIncrements, i);
    const PathSample path = simulate_path(fluid, dt, c.trace_t_max.value_or(10.0 * ig.mu), rng);
    const auto file = c.trace_dir / ("fpt_trace_" + std::to_string(i) + ".csv");
    check_writable(file, cfg.force);
    write_path_trace(file, path);
  }

  Table t;
  t.comments.push_back("command=fpt mu=d/v=" + fmt(ig.mu) + " lambda=d^2/sigma^2=" +
                       fmt(ig.lambda) + " dt=" + fmt(dt) + (c.bridge ? " bridge=on" : " bridge=off") +
                       (c.self_test ? " self_test=on" : ""));
  if (c.diffusion) t.comments.push_back("diffusion_display=" + fmt(*c.diffusion));
  t.columns = {"d", "v", "sigma", "mu", "lambda", "dt", "bridge", "samples",
               "ks_distance", "ks_band_99", "sample_mean", "mean_std_error", "sample_variance",
               "theoretical_mean", "theoretical_variance", "degenerate_variance", "seed"};
  t.add_row({c.d, c.v, fluid.sigma, ig.mu, ig.lambda, dt, c.bridge, u64{c.samples},
             r.ks_distance, r.ks_band_99, r.sample_mean, r.mean_std_error, r.sample_variance,
             r.theoretical_mean, r.theoretical_variance, r.degenerate_variance,
             u64{cfg.master_seed}});
  deliver(cfg, t,
          "fpt: samples=" + std::to_string(c.samples) + " ks_distance=" + fmt(r.ks_distance) +
              " mean=" + fmt(r.sample_mean) + " (theory " + fmt(r.theoretical_mean) +
              ") variance=" + fmt(r.sample_variance) + " (theory " +
              fmt(r.theoretical_variance) + ")" + (r.degenerate_variance ? " degenerate" : ""),
          out, err);
}

void run_codebook(const ExperimentConfig& cfg, const CodebookConfig& c, std::ostream& out,
                  std::ostream& err) {
  if (c.action == "build") {
    std::vector<std::string> comments{"command=codebook action=build"};
    double min_distance = 0.0;
    if (c.min_distance) {
      min_distance = *c.min_distance;
    } else {
      const ScalingQuantities s = scaling_quantities(c.n, c.a, c.b);
      comments.push_back(scaling_comment(s));
      min_distance = 2.0 * s.r0;
    }
    RandomStream rng = RandomStream::substream(cfg.master_seed, StreamTag::kPacking, 0);
    const PackingResult res =
        build_greedy_packing(c.n, c.t_max, min_distance, c.target_m, c.max_attempts, rng);
    const AuditReport audit = audit_codebook(res.codebook);
    comments.push_back("attempts=" + std::to_string(res.attempts) +
                       " saturated=" + (res.saturated ? "1" : "0") +
                       " final_acceptance_rate=" + fmt(res.final_acceptance_rate) +
                       " min_pairwise_distance=" + fmt(audit.min_pairwise_distance));
    const std::string summary =
        "codebook build: M=" + std::to_string(res.codebook.size()) + " attempts=" +
        std::to_string(res.attempts) + " saturated=" + (res.saturated ? "yes" : "no") +
        " audit=" + (audit.ok ? "pass" : "FAIL");
    if (cfg.output_path) {
      check_writable(*cfg.output_path, cfg.force);
      write_codebook_csv(*cfg.output_path, res.codebook, comments);
      out << summary << '\n';
    } else {
      write_codebook_csv(out, res.codebook, comments);
      err << summary << '\n';
    }
    return;
  }

  const Codebook book = read_codebook_csv(c.input);
  Table t;
  if (c.action == "audit") {
    const AuditReport a = audit_codebook(book);
    const SeparationReport sep = separation_check(book, book.n(), c.a, c.b);
    t.comments.push_back("command=codebook action=audit input=" + c.input.string() +
                         " a=" + fmt(c.a) + " b=" + fmt(c.b) + " alpha_n=" + fmt(sep.alpha_n));
    t.columns = {"n", "t_max", "min_distance", "M", "min_pairwise_distance", "peak_ok",
                 "distance_ok", "alpha_n", "min_max_gap", "separation_pass"};
    t.add_row({u64{book.n()}, book.t_max(), book.min_distance(), u64{book.size()},
               a.min_pairwise_distance, a.peak_ok, a.distance_ok, sep.alpha_n, sep.min_max_gap,
               sep.pass});
    deliver(cfg, t,
            std::string("codebook audit: ") + (a.ok ? "pass" : "FAIL") +
                " separation=" + (sep.pass ? "pass" : "FAIL") +
                " min_pairwise=" + fmt(a.min_pairwise_distance),
            out, err);
  } else {
    const double radius = c.radius.value_or(book.min_distance() / 2.0);
    const DensityEstimate d = estimate_packing_density(book, radius, c.mc_points, cfg.master_seed);
    const double nd = static_cast<double>(book.n());
    const double union_bound =
        std::exp2(std::log2(static_cast<double>(book.size())) + sphere_log2_volume(book.n(), radius) -
                  nd * std::log2(book.t_max()));
    t.comments.push_back("command=codebook action=density input=" + c.input.string());
    t.columns = {"n", "M", "radius", "mc_points", "density", "std_error", "floor_2_pow_minus_n",
                 "disjoint_union_volume_fraction", "seed"};
    t.add_row({u64{book.n()}, u64{book.size()}, radius, u64{c.mc_points}, d.value, d.std_error,
               std::exp2(-nd), union_bound, u64{cfg.master_seed}});
    deliver(cfg, t,
            "codebook density: estimate=" + fmt(d.value) + " +/- " + fmt(d.std_error) +
                " floor=" + fmt(std::exp2(-nd)),
            out, err);
  }
}

void run_simulate(const ExperimentConfig& cfg, const SimulateConfig& c, std::ostream& out,
                  std::ostream& err) {
  const IGParams params = IGParams::make(c.mu, c.lambda);
  Table t;
  t.comments.push_back("command=simulate mu=" + fmt(c.mu) + " lambda=" + fmt(c.lambda) +
                       " t_max=" + fmt(c.t_max) + " pair_mode=" + c.pair_mode);
  t.columns = {"n", "mu", "lambda", "a", "b", "t_max", "pair_id", "pair_distance",
               "p1_hat", "ci1", "p1_upper", "p2_hat", "ci2", "p2_upper", "eta0", "zeta0",
               "zeta1", "eta0_vacuous", "zeta_sum_vacuous", "trials", "seed"};
  std::string summary = "simulate:";
  for (std::size_t ni = 0; ni < c.n.size(); ++ni) {
    const std::size_t n = c.n[ni];
    const ScalingQuantities s = scaling_quantities(n, c.a, c.b);
    const ChebyshevBounds cheb = chebyshev_bounds(params, c.t_max, n, c.a, c.b);
    const DecodingRule rule = DecodingRule::make(params, s.delta_n);
    t.comments.push_back(scaling_comment(s));
    t.comments.push_back(bounds_comment(n, cheb));

    // Experiment seeds are pure functions of (master seed, n index, pair).
    const u64 base_seed = RandomStream::substream(cfg.master_seed, StreamTag::kGeneric, ni)
                              .engine()();
    const std::size_t wanted = c.pair_mode == "far" ? c.pairs + 1 : c.pairs;
    RandomStream packing_rng = RandomStream::substream(base_seed, StreamTag::kPacking, 0);
    Codebook book(n, c.t_max, 2.0 * s.r0);
    if (wanted >= 2) {
      book = build_greedy_packing(n, c.t_max, 2.0 * s.r0, wanted, 1000 * wanted, packing_rng)
                 .codebook;
      if (book.size() < wanted) {
        throw PackingInfeasible("could only place " + std::to_string(book.size()) + " of " +
                                std::to_string(wanted) + " codewords at distance 2 r0");
      }
    } else {
      std::vector<double> word(n);
      for (double& x : word) x = c.t_max * packing_rng.uniform();
      book.push_back(word);
    }

    for (std::size_t p = 0; p < c.pairs; ++p) {
      const auto sent = book[p];
      std::vector<double> tested;
      if (c.pair_mode == "far") {
        const auto other = book[p + 1];
        tested.assign(other.begin(), other.end());
      } else {
        RandomStream dir = RandomStream::substream(base_seed, StreamTag::kPairDirection, p);
        tested = partner_at_distance(sent, 2.0 * s.r0, c.t_max, dir);
      }
      const u64 pair_seed =
          RandomStream::substream(base_seed, StreamTag::kGeneric, p).engine()();
      const ErrorEstimate e1 = estimate_type1(sent, params, rule, c.trials, pair_seed);
      const ErrorEstimate e2 = estimate_type2(sent, tested, params, rule, c.trials, pair_seed);
      t.add_row({u64{n}, c.mu, c.lambda, c.a, c.b, c.t_max, u64{p},
                 euclidean_distance(sent, tested), e1.p_hat, e1.ci_halfwidth, e1.ci_upper,
                 e2.p_hat, e2.ci_halfwidth, e2.ci_upper, cheb.eta0, cheb.zeta0, cheb.zeta1,
                 cheb.eta0_vacuous, cheb.type2_sum_vacuous, u64{c.trials}, u64{pair_seed}});
      summary += " [n=" + std::to_string(n) + " pair=" + std::to_string(p) +
                 " p1=" + fmt(e1.p_hat) + " p2=" + fmt(e2.p_hat) + " eta0=" + fmt(cheb.eta0) +
                 "]";
    }
  }
  deliver(cfg, t, summary, out, err);
}

void run_bounds(const ExperimentConfig& cfg, const BoundsConfig& c, std::ostream& out,
                std::ostream& err) {
  Table t;
  t.comments.push_back("command=bounds t_max=" + fmt(c.t_max) + " a=" + fmt(c.a) + " b=" +
                       fmt(c.b) + " lower_limit=(1-b)/4=" + fmt((1.0 - c.b) / 4.0));
  t.columns = {"n", "log2_M_lower", "log2_M_upper", "rate_lower", "rate_upper"};
  for (auto n : c.n_grid) {
    const CountBounds cb = count_bounds(n, c.t_max, c.a, c.b);
    t.add_row({u64{n}, cb.log2_m_lower, cb.log2_m_upper, cb.rate_lower, cb.rate_upper});
  }
  std::string summary = "bounds: " + std::to_string(t.rows.size()) + " rows";
  if (!t.rows.empty()) {
    summary += " last rate_lower=" + format_cell(t.rows.back()[3]) +
               " rate_upper=" + format_cell(t.rows.back()[4]);
  }
  deliver(cfg, t, summary, out, err);
}

void run_lemma(const ExperimentConfig& cfg, const LemmaConfig& c, std::ostream& out,
               std::ostream& err) {
  Table t;
  if (c.action == "lemma3") {
    const IGParams params = IGParams::make(c.mu, c.lambda);
    const double alpha_n = c.a * c.a / std::pow(static_cast<double>(c.n), 1.0 + 2.0 * c.b);
    const double diff = c.diff_fraction * alpha_n;
    std::vector<double> c1(c.n, c.base);
    std::vector<double> c2(c.n, c.base - diff);
    std::vector<double> z(c.n, c.z);
    const LikelihoodRatioReport r = lemma3_bound_check(c1, c2, z, params, c.n, c.a, c.b);
    t.comments.push_back("command=lemma action=lemma3 alpha_n=" + fmt(alpha_n));
    t.columns = {"n", "a", "b", "mu", "lambda", "alpha_n", "diff", "z_min", "log_A", "log_B",
                 "log_ratio", "direct_log_ratio", "ratio", "abs_one_minus_ratio", "tau_bound",
                 "within_bound", "identity_holds", "regularity_ok"};
    t.add_row({u64{c.n}, c.a, c.b, c.mu, c.lambda, alpha_n, diff, *r.z_min, r.log_a, r.log_b,
               r.log_a + r.log_b, r.direct_log_ratio, r.ratio, std::abs(1.0 - r.ratio),
               *r.tau_bound, r.within_bound, r.identity_holds, r.regularity_ok});
    deliver(cfg, t,
            "lemma3: |1-ratio|=" + fmt(std::abs(1.0 - r.ratio)) + " tau=" + fmt(*r.tau_bound) +
                " within_bound=" + (r.within_bound ? "true" : "false"),
            out, err);
  } else {
    const Codebook book = read_codebook_csv(c.input);
    const SeparationReport sep = separation_check(book, book.n(), c.a, c.b);
    t.comments.push_back("command=lemma action=separation alpha_n=" + fmt(sep.alpha_n));
    t.columns = {"n", "M", "alpha_n", "min_max_gap", "pass", "worst_i", "worst_j"};
    const std::int64_t wi = sep.worst_pair ? static_cast<std::int64_t>(sep.worst_pair->first) : -1;
    const std::int64_t wj = sep.worst_pair ? static_cast<std::int64_t>(sep.worst_pair->second) : -1;
    t.add_row({u64{book.n()}, u64{book.size()}, sep.alpha_n, sep.min_max_gap, sep.pass, wi, wj});
    deliver(cfg, t,
            std::string("separation: ") + (sep.pass ? "pass" : "FAIL") +
                " min_max_gap=" + fmt(sep.min_max_gap) + " alpha_n=" + fmt(sep.alpha_n),
            out, err);
  }
}

}  // namespace

void run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (config.workers > 0) set_worker_count(config.workers);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DistConfig>) run_dist(config, c, out, err);
        if constexpr (std::is_same_v<T, FptConfig>) run_fpt(config, c, out, err);
        if constexpr (std::is_same_v<T, CodebookConfig>) run_codebook(config, c, out, err);
        if constexpr (std::is_same_v<T, SimulateConfig>) run_simulate(config, c, out, err);
        if constexpr (std::is_same_v<T, BoundsConfig>) run_bounds(config, c, out, err);
        if constexpr (std::is_same_v<T, LemmaConfig>) run_lemma(config, c, out, err);
      },
      config.params);
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    run(parse_config(args), out, err);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PackingInfeasible& e) {
    err << "infeasible packing: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const RunawayPath& e) {
    err << "runaway path: " << e.what() << '\n';
    return kExitRunaway;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace igid::cli
