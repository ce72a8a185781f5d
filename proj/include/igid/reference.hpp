#pragma once

// Single-threaded reference versions of the OpenMP kernels. They walk the
// same per-trial streams in index order and must agree bit for bit with
// the parallel kernels; the tests and the benchmark compare the two.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "igid/brownian_fpt.hpp"
#include "igid/codebook.hpp"
#include "igid/error_analysis.hpp"

namespace igid::reference {

std::vector<double> sample_first_passage_times(const FluidParams& fluid, double dt,
                                               std::size_t n, std::uint64_t seed,
                                               bool bridge_correction,
                                               std::uint64_t max_steps = 0);

ErrorEstimate estimate_type1(std::span<const double> sent, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed);

ErrorEstimate estimate_type2(std::span<const double> sent, std::span<const double> tested,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed);

// Point-by-point coverage test with a full distance per codeword, no early
// exit. Same block/stream layout as the parallel estimator.
DensityEstimate estimate_packing_density(const Codebook& codebook, double r,
                                         std::uint64_t mc_points, std::uint64_t seed);

}  // namespace igid::reference
