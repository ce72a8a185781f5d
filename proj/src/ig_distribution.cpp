#include "igid/ig_distribution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "igid/errors.hpp"
#include "igid/stats.hpp"

namespace igid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(double z, const char* what) {
  if (!std::isfinite(z)) {
    throw InvalidInput(std::string(what) + " must be finite");
  }
}

}  // namespace

IGParams IGParams::make(double mu, double lambda) {
  IGParams p{mu, lambda};
  p.validate();
  return p;
}

void IGParams::validate() const {
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw InvalidInput("IG mean mu must be finite and > 0");
  }
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw InvalidInput("IG shape lambda must be finite and > 0");
  }
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(normal_cdf(x));
  // Asymptotic series of erfc for large arguments:
  // Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8).
  const double x2 = x * x;
  const double inv = 1.0 / x2;
  const double series =
      1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double ig_log_pdf(const IGParams& params, double z) {
  require_finite(z, "z");
  if (z <= 0.0) return kNegInf;
  const double dev = z - params.mu;
  return 0.5 * std::log(params.lambda / (2.0 * std::numbers::pi)) -
         1.5 * std::log(z) -
         params.lambda * dev * dev / (2.0 * params.mu * params.mu * z);
}

double ig_pdf(const IGParams& params, double z) {
  require_finite(z, "z");
  if (z <= 0.0) return 0.0;
  return std::exp(ig_log_pdf(params, z));
}

double ig_cdf(const IGParams& params, double z) {
  if (std::isnan(z)) throw InvalidInput("z must not be NaN");
  if (z <= 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  const double root = std::sqrt(params.lambda / z);
  const double first = normal_cdf(root * (z / params.mu - 1.0));
  // exp(2 lambda/mu) overflows for large shape; combine in log space.
  const double log_second =
      2.0 * params.lambda / params.mu + log_normal_cdf(-root * (z / params.mu + 1.0));
  const double value = first + std::exp(log_second);
  return value > 1.0 ? 1.0 : value;
}

double ig_sample(const IGParams& params, RandomStream& rng) {
  const double mu = params.mu;
  const double lambda = params.lambda;
  const double g = rng.normal();
  const double y = g * g;
  const double mu_y = mu * y;
  // Larger root of the quadratic; the smaller one is mu^2 / larger, which
  // avoids cancellation when mu*y >> lambda.
  const double larger =
      mu + mu * mu_y / (2.0 * lambda) +
      (mu / (2.0 * lambda)) * std::sqrt(4.0 * lambda * mu_y + mu_y * mu_y);
  const double smaller = mu * mu / larger;
  const double u = rng.uniform();
  return (u * (mu + smaller) <= mu) ? smaller : larger;
}

double ig_mgf(const IGParams& params, double alpha) {
  require_finite(alpha, "alpha");
  const double limit = params.lambda / (2.0 * params.mu * params.mu);
  if (alpha >= limit) {
    throw DomainError("IG moment-generating function diverges for alpha >= "
                      "lambda / (2 mu^2) = " + std::to_string(limit));
  }
  const double s = 1.0 - 2.0 * params.mu * params.mu * alpha / params.lambda;
  return std::exp((params.lambda / params.mu) * (1.0 - std::sqrt(s)));
}

MomentSet ig_moments(const IGParams& params) {
  const double mu = params.mu;
  const double ratio = mu / params.lambda;
  const double mu4 = mu * mu * mu * mu;
  MomentSet m;
  m.mean = mu;
  m.variance = params.variance();
  m.fourth_noncentral =
      mu4 * (1.0 + ratio * (6.0 + ratio * (15.0 + 15.0 * ratio)));
  m.fourth_upper_bound = mu4 * std::pow(1.0 + ratio, 6);
  return m;
}

double levy_pdf(double d, double sigma, double z) {
  if (!(d > 0.0) || !(sigma > 0.0)) {
    throw InvalidInput("levy_pdf requires d > 0 and sigma > 0");
  }
  require_finite(z, "z");
  if (z <= 0.0) return 0.0;
  const double norm = d / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return norm * std::pow(z, -1.5) * std::exp(-d * d / (2.0 * sigma * sigma * z));
}

double vector_log_pdf(const IGParams& params, std::span<const double> z) {
  if (z.empty()) throw InvalidInput("noise vector must be non-empty");
  CompensatedSum sum_log;
  CompensatedSum sum_quad;
  bool outside = false;
  for (double zt : z) {
    require_finite(zt, "noise coordinate");
    if (zt <= 0.0) {
      outside = true;
      continue;
    }
    const double dev = zt - params.mu;
    sum_log.add(std::log(zt));
    sum_quad.add(dev * dev / zt);
  }
  if (outside) return kNegInf;
  const double n = static_cast<double>(z.size());
  return 0.5 * n * std::log(params.lambda / (2.0 * std::numbers::pi)) -
         1.5 * sum_log.value() -
         params.lambda / (2.0 * params.mu * params.mu) * sum_quad.value();
}

}  // namespace igid
