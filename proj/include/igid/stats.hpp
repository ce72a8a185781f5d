#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace igid {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double second_moment = 0.0;
  double fourth_moment = 0.0;  // raw E[X^4]
};

SampleSummary summarize(std::span<const double> samples);

// One-sample Kolmogorov-Smirnov distance sup |F_n - F|.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return d;
}

// Asymptotic 99% Kolmogorov critical value 1.63 / sqrt(n).
inline double ks_band_99(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

struct WilsonInterval {
  double lower;
  double upper;
  double halfwidth;
};

// Two-sided 95% Wilson score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

}  // namespace igid
