#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "igid/ig_distribution.hpp"
#include "igid/rng.hpp"

namespace igid {

// One-dimensional drifted Brownian transport from the origin to an
// absorbing receiver at distance d.
struct FluidParams {
  double v;      // drift velocity, length/time, > 0
  double sigma;  // volatility, length/sqrt(time), > 0
  double d;      // transmitter-receiver distance, > 0
  // Diffusion coefficient as quoted alongside a scenario. Display only;
  // dynamics are driven by sigma.
  std::optional<double> diffusion_display;

  static FluidParams make(double v, double sigma, double d);
  void validate() const;
};

// mu = d / v, lambda = d^2 / sigma^2.
IGParams ig_params_from_fluid(const FluidParams& fluid);

// Gaussian position density N(v t, sigma^2 t) at time t > 0.
double position_pdf(const FluidParams& fluid, double x, double t);

struct PathSample {
  double dt = 0.0;
  std::vector<double> positions;  // positions[k] at time k*dt; positions[0] = 0
  bool absorbed = false;
  std::optional<double> hit_time;
};

// Euler-Maruyama path, stopped at the first grid point with x >= d or once
// the horizon t_max is reached.
PathSample simulate_path(const FluidParams& fluid, double dt, double t_max,
                         RandomStream& rng);

// CSV trace with columns step,t,x.
void write_path_trace(const std::filesystem::path& file, const PathSample& path);

// 1e6 * mu / dt steps, i.e. a simulated-time budget of a million means.
std::uint64_t default_step_cap(const FluidParams& fluid, double dt);

// First grid time at which the Euler path reaches d. When `bridge` is
// non-null, each non-crossing step additionally counts as a crossing with
// the Brownian-bridge probability exp(-2 (d - x_k)(d - x_{k+1}) / (sigma^2 dt)),
// using uniforms from `bridge`; increments always come from `increments`,
// so corrected and uncorrected runs can share a path. Throws RunawayPath
// once `max_steps` steps (0 = default_step_cap) pass without a hit.
double simulate_first_passage(const FluidParams& fluid, double dt,
                              RandomStream& increments, RandomStream* bridge,
                              std::uint64_t max_steps = 0);

// n first-passage times; trial k uses substreams (seed, kFptIncrements, k)
// and (seed, kFptBridge, k). OpenMP-parallel over trials.
std::vector<double> sample_first_passage_times(const FluidParams& fluid, double dt,
                                               std::size_t n, std::uint64_t seed,
                                               bool bridge_correction,
                                               std::uint64_t max_steps = 0);

struct FptReport {
  std::size_t samples = 0;
  double ks_distance = 0.0;
  double ks_band_99 = 0.0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double mean_std_error = 0.0;
  double theoretical_mean = 0.0;
  double theoretical_variance = 0.0;
  // Set when the simulated times show (numerically) no spread, e.g. sigma
  // close to zero; KS against a continuous law is then meaningless.
  bool degenerate_variance = false;
};

struct FptValidationOptions {
  double dt = 0.0;  // 0 selects mu / 1e4
  bool bridge_correction = true;
  std::uint64_t seed = 0;
  // Draw directly from the IG sampler instead of simulating paths.
  bool self_test = false;
  std::uint64_t max_steps = 0;
};

// Compares simulated first-passage times to IG(d/v, d^2/sigma^2).
// Requires n_samples >= 100.
FptReport validate_fpt_distribution(const FluidParams& fluid, std::size_t n_samples,
                                    const FptValidationOptions& options);

}  // namespace igid
