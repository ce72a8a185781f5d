#include "igid/reference.hpp"

#include <algorithm>
#include <cmath>

#include "igid/errors.hpp"

namespace igid::reference {

std::vector<double> sample_first_passage_times(const FluidParams& fluid, double dt,
                                               std::size_t n, std::uint64_t seed,
                                               bool bridge_correction,
                                               std::uint64_t max_steps) {
  std::vector<double> times;
  times.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    RandomStream inc = RandomStream::substream(seed, StreamTag::kFptIncrements, k);
    RandomStream br = RandomStream::substream(seed, StreamTag::kFptBridge, k);
    times.push_back(simulate_first_passage(fluid, dt, inc, bridge_correction ? &br : nullptr,
                                           max_steps));
  }
  return times;
}

ErrorEstimate estimate_type1(std::span<const double> sent, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed) {
  std::uint64_t errors = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    errors += type1_trial_rejects(sent, params, rule, seed, k) ? 1 : 0;
  }
  return ErrorEstimate::from_counts(errors, trials);
}

ErrorEstimate estimate_type2(std::span<const double> sent, std::span<const double> tested,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed) {
  std::uint64_t errors = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    errors += type2_trial_accepts(sent, tested, params, rule, seed, k) ? 1 : 0;
  }
  return ErrorEstimate::from_counts(errors, trials);
}

DensityEstimate estimate_packing_density(const Codebook& codebook, double r,
                                         std::uint64_t mc_points, std::uint64_t seed) {
  if (codebook.empty()) throw InvalidInput("density estimate needs a nonempty codebook");
  constexpr std::uint64_t kBlock = 4096;
  std::vector<double> point(codebook.n());
  std::uint64_t hits = 0;
  for (std::uint64_t block = 0; block * kBlock < mc_points; ++block) {
    RandomStream rng = RandomStream::substream(seed, StreamTag::kDensity, block);
    const std::uint64_t end = std::min(mc_points, (block + 1) * kBlock);
    for (std::uint64_t p = block * kBlock; p < end; ++p) {
      for (double& x : point) x = codebook.t_max() * rng.uniform();
      bool covered = false;
      for (std::size_t j = 0; j < codebook.size(); ++j) {
        const auto c = codebook[j];
        double acc = 0.0;
        for (std::size_t t = 0; t < c.size(); ++t) acc += (point[t] - c[t]) * (point[t] - c[t]);
        covered = covered || acc < r * r;
      }
      hits += covered ? 1 : 0;
    }
  }
  DensityEstimate est;
  est.points = mc_points;
  est.value = static_cast<double>(hits) / static_cast<double>(mc_points);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(mc_points));
  return est;
}

}  // namespace igid::reference
