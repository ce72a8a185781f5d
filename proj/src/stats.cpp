#include "igid/stats.hpp"

#include "igid/errors.hpp"

namespace igid {

SampleSummary summarize(std::span<const double> samples) {
  SampleSummary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  CompensatedSum sum;
  for (double x : samples) sum.add(x);
  const double n = static_cast<double>(samples.size());
  s.mean = sum.value() / n;
  CompensatedSum dev2;
  CompensatedSum raw2;
  CompensatedSum raw4;
  for (double x : samples) {
    const double d = x - s.mean;
    dev2.add(d * d);
    raw2.add(x * x);
    raw4.add(x * x * x * x);
  }
  s.variance = samples.size() > 1 ? dev2.value() / (n - 1.0) : 0.0;
  s.second_moment = raw2.value() / n;
  s.fourth_moment = raw4.value() / n;
  return s;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw InvalidInput("Wilson interval needs trials > 0");
  if (successes > trials) throw InvalidInput("successes exceed trials");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double centre = (p + 0.5 * z2n) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.lower = std::max(0.0, centre - spread);
  w.upper = std::min(1.0, centre + spread);
  w.halfwidth = 0.5 * (w.upper - w.lower);
  return w;
}

}  // namespace igid
