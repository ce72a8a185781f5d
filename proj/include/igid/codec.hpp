#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "igid/codebook.hpp"
#include "igid/ig_distribution.hpp"
#include "igid/rng.hpp"

namespace igid {

// Acceptance region of the distance decoder: |T(y, c)| <= delta_n with
// T(y, c) = |y - c|^2 / n - alpha and alpha = E[Z^2] = mu^2 + mu^3/lambda.
struct DecodingRule {
  double delta_n;
  double alpha;

  static DecodingRule make(const IGParams& params, double delta_n);
};

// Codeword for message i (0-based), returned verbatim.
std::span<const double> encode(const Codebook& codebook, std::size_t i);

// y_t = c_t + Z_t with Z_t drawn i.i.d. IG(mu, lambda), coordinate by
// coordinate from `rng`.
void transmit(std::span<const double> codeword, const IGParams& params,
              RandomStream& rng, std::span<double> out);
std::vector<double> transmit(std::span<const double> codeword, const IGParams& params,
                             RandomStream& rng);

double decoding_measure(std::span<const double> y, std::span<const double> c,
                        const IGParams& params);

// Identification test for one candidate; closed boundary.
bool identify(std::span<const double> y, std::span<const double> c,
              const IGParams& params, const DecodingRule& rule);

}  // namespace igid
