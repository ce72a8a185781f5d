#include "igid/brownian_fpt.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "igid/errors.hpp"
#include "igid/parallel.hpp"
#include "igid/stats.hpp"

namespace igid {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidInput(std::string(name) + " must be finite and > 0");
  }
}

// Bridge crossing probabilities below exp(-40) are treated as zero.
constexpr double kBridgeExponentCutoff = 40.0;

}  // namespace

FluidParams FluidParams::make(double v, double sigma, double d) {
  FluidParams f{v, sigma, d, std::nullopt};
  f.validate();
  return f;
}

void FluidParams::validate() const {
  require_positive(v, "drift velocity v");
  require_positive(sigma, "volatility sigma");
  require_positive(d, "distance d");
}

IGParams ig_params_from_fluid(const FluidParams& fluid) {
  fluid.validate();
  return IGParams::make(fluid.d / fluid.v, (fluid.d * fluid.d) / (fluid.sigma * fluid.sigma));
}

double position_pdf(const FluidParams& fluid, double x, double t) {
  if (!(t > 0.0)) throw DomainError("position_pdf requires t > 0");
  const double var = fluid.sigma * fluid.sigma * t;
  const double dev = x - fluid.v * t;
  return std::exp(-dev * dev / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

PathSample simulate_path(const FluidParams& fluid, double dt, double t_max,
                         RandomStream& rng) {
  require_positive(dt, "dt");
  if (!(t_max >= dt)) throw InvalidInput("t_max must be >= dt");
  PathSample path;
  path.dt = dt;
  const double drift = fluid.v * dt;
  const double scale = fluid.sigma * std::sqrt(dt);
  const auto steps = static_cast<std::uint64_t>(std::floor(t_max / dt + 1e-9));
  path.positions.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(steps + 1, 1u << 20)));
  double x = 0.0;
  path.positions.push_back(x);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    x += drift + scale * rng.normal();
    path.positions.push_back(x);
    if (x >= fluid.d) {
      path.absorbed = true;
      path.hit_time = static_cast<double>(k) * dt;
      break;
    }
  }
  return path;
}

void write_path_trace(const std::filesystem::path& file, const PathSample& path) {
  std::ofstream out(file);
  if (!out) throw InvalidInput("cannot open trace file " + file.string());
  out << "step,t,x\n";
  char line[96];
  for (std::size_t k = 0; k < path.positions.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", k,
                  static_cast<double>(k) * path.dt, path.positions[k]);
    out << line;
  }
}

std::uint64_t default_step_cap(const FluidParams& fluid, double dt) {
  const double steps = 1e6 * (fluid.d / fluid.v) / dt;
  if (steps >= 1.8e19) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::ceil(steps));
}

double simulate_first_passage(const FluidParams& fluid, double dt,
                              RandomStream& increments, RandomStream* bridge,
                              std::uint64_t max_steps) {
  require_positive(dt, "dt");
  if (max_steps == 0) max_steps = default_step_cap(fluid, dt);
  const double level = fluid.d;
  const double drift = fluid.v * dt;
  const double scale = fluid.sigma * std::sqrt(dt);
  const double bridge_scale = 2.0 / (fluid.sigma * fluid.sigma * dt);
  double x = 0.0;
  for (std::uint64_t k = 1; k <= max_steps; ++k) {
    const double next = x + drift + scale * increments.normal();
    if (next >= level) return static_cast<double>(k) * dt;
    if (bridge != nullptr) {
      const double exponent = bridge_scale * (level - x) * (level - next);
      if (exponent < kBridgeExponentCutoff && bridge->uniform() < std::exp(-exponent)) {
        return static_cast<double>(k) * dt;
      }
    }
    x = next;
  }
  throw RunawayPath("first-passage path exceeded " + std::to_string(max_steps) +
                    " steps without reaching d; check dt and fluid parameters");
}

std::vector<double> sample_first_passage_times(const FluidParams& fluid, double dt,
                                               std::size_t n, std::uint64_t seed,
                                               bool bridge_correction,
                                               std::uint64_t max_steps) {
  fluid.validate();
  require_positive(dt, "dt");
  std::vector<double> times(n);
  parallel_for(n, [&](std::size_t k) {
    RandomStream inc = RandomStream::substream(seed, StreamTag::kFptIncrements, k);
    if (bridge_correction) {
      RandomStream br = RandomStream::substream(seed, StreamTag::kFptBridge, k);
      times[k] = simulate_first_passage(fluid, dt, inc, &br, max_steps);
    } else {
      times[k] = simulate_first_passage(fluid, dt, inc, nullptr, max_steps);
    }
  });
  return times;
}

FptReport validate_fpt_distribution(const FluidParams& fluid, std::size_t n_samples,
                                    const FptValidationOptions& options) {
  if (n_samples < 100) throw InvalidInput("validate_fpt_distribution needs n_samples >= 100");
  const IGParams ig = ig_params_from_fluid(fluid);
  const double dt = options.dt > 0.0 ? options.dt : ig.mu / 1e4;

  std::vector<double> times;
  if (options.self_test) {
    times.resize(n_samples);
    parallel_for(n_samples, [&](std::size_t k) {
      RandomStream rng = RandomStream::substream(options.seed, StreamTag::kIgSample, k);
      times[k] = ig_sample(ig, rng);
    });
  } else {
    times = sample_first_passage_times(fluid, dt, n_samples, options.seed,
                                       options.bridge_correction, options.max_steps);
  }

  const SampleSummary summary = summarize(times);
  FptReport report;
  report.samples = n_samples;
  report.sample_mean = summary.mean;
  report.sample_variance = summary.variance;
  report.mean_std_error = std::sqrt(summary.variance / static_cast<double>(n_samples));
  report.theoretical_mean = ig.mean();
  report.theoretical_variance = ig.variance();
  report.ks_band_99 = ks_band_99(n_samples);
  // Spread no wider than one grid step cannot be told apart from a point mass.
  report.degenerate_variance = !options.self_test && summary.variance <= dt * dt;
  report.ks_distance = ks_statistic(std::move(times),
                                    [&](double z) { return ig_cdf(ig, z); });
  return report;
}

}  // namespace igid
