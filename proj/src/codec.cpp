#include "igid/codec.hpp"

#include <cmath>
#include <string>

#include "igid/errors.hpp"
#include "igid/stats.hpp"

namespace igid {

DecodingRule DecodingRule::make(const IGParams& params, double delta_n) {
  params.validate();
  if (std::isnan(delta_n) || delta_n < 0.0) {
    throw InvalidInput("decoding threshold delta_n must be >= 0");
  }
  return DecodingRule{delta_n, params.second_moment()};
}

std::span<const double> encode(const Codebook& codebook, std::size_t i) {
  return codebook.at(i);
}

void transmit(std::span<const double> codeword, const IGParams& params,
              RandomStream& rng, std::span<double> out) {
  if (out.size() != codeword.size()) throw InvalidInput("output length differs from codeword");
  for (std::size_t t = 0; t < codeword.size(); ++t) {
    out[t] = codeword[t] + ig_sample(params, rng);
  }
}

std::vector<double> transmit(std::span<const double> codeword, const IGParams& params,
                             RandomStream& rng) {
  std::vector<double> y(codeword.size());
  transmit(codeword, params, rng, y);
  return y;
}

double decoding_measure(std::span<const double> y, std::span<const double> c,
                        const IGParams& params) {
  if (y.size() != c.size()) {
    throw InvalidInput("decoding_measure: length mismatch (" + std::to_string(y.size()) +
                       " vs " + std::to_string(c.size()) + ")");
  }
  if (y.empty()) throw InvalidInput("decoding_measure: empty vectors");
  CompensatedSum sum;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double diff = y[t] - c[t];
    sum.add(diff * diff);
  }
  return sum.value() / static_cast<double>(y.size()) - params.second_moment();
}

bool identify(std::span<const double> y, std::span<const double> c,
              const IGParams& params, const DecodingRule& rule) {
  return std::abs(decoding_measure(y, c, params)) <= rule.delta_n;
}

}  // namespace igid
