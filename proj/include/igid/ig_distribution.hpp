#pragma once

#include <span>

#include "igid/rng.hpp"

namespace igid {

// Inverse Gaussian law IG(mu, lambda): mean mu, shape lambda, both in
// seconds. Density
//
//   f(z) = sqrt(lambda / (2 pi z^3)) * exp(-lambda (z - mu)^2 / (2 mu^2 z))
//
// for z > 0. Variance is mu^3 / lambda.
struct IGParams {
  double mu;
  double lambda;

  // Throws InvalidInput unless both values are finite and positive.
  static IGParams make(double mu, double lambda);
  void validate() const;

  double mean() const noexcept { return mu; }
  double variance() const noexcept { return mu * mu * mu / lambda; }
  // E[Z^2] = mu^2 + mu^3 / lambda.
  double second_moment() const noexcept { return mu * mu + variance(); }
};

struct MomentSet {
  double mean;
  double variance;
  double fourth_noncentral;   // exact polynomial
  double fourth_upper_bound;  // mu^4 (1 + mu/lambda)^6
};

double normal_cdf(double x);
// log Phi(x), accurate far into the lower tail.
double log_normal_cdf(double x);

// Exact 0 for z <= 0. Throws InvalidInput for non-finite z.
double ig_pdf(const IGParams& params, double z);
// Natural log of ig_pdf; -infinity for z <= 0.
double ig_log_pdf(const IGParams& params, double z);
double ig_cdf(const IGParams& params, double z);

// Michael-Schucany-Haas: one normal and one uniform draw per variate.
double ig_sample(const IGParams& params, RandomStream& rng);

// E[exp(alpha Z)]; DomainError when alpha >= lambda / (2 mu^2).
double ig_mgf(const IGParams& params, double alpha);

MomentSet ig_moments(const IGParams& params);

// Zero-drift first-passage density (Levy law) for distance d, volatility
// sigma. Heavy tailed: the mean is infinite.
double levy_pdf(double d, double sigma, double z);

// Sum of ig_log_pdf over the coordinates; -infinity if any z_t <= 0.
// Throws InvalidInput on an empty vector or non-finite entries.
double vector_log_pdf(const IGParams& params, std::span<const double> z);

}  // namespace igid
