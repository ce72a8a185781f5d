#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "igid/codebook.hpp"
#include "igid/codec.hpp"
#include "igid/ig_distribution.hpp"

namespace igid {

// Monte Carlo probability with a 95% Wilson interval.
struct ErrorEstimate {
  double p_hat = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double ci_halfwidth = 0.0;

  static ErrorEstimate from_counts(std::uint64_t errors, std::uint64_t trials);
};

// Trial k of each estimator draws its channel noise from substream
// (seed, kType1 or kType2, k). The estimators are OpenMP-parallel over
// trials; reference.hpp has the serial loops.
bool type1_trial_rejects(std::span<const double> sent, const IGParams& params,
                         const DecodingRule& rule, std::uint64_t seed, std::uint64_t trial);
bool type2_trial_accepts(std::span<const double> sent, std::span<const double> tested,
                         const IGParams& params, const DecodingRule& rule,
                         std::uint64_t seed, std::uint64_t trial);

// P(c_i sent, identify(y, c_i) rejects). trials >= 100.
ErrorEstimate estimate_type1(const Codebook& codebook, std::size_t i, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed);
ErrorEstimate estimate_type1(std::span<const double> sent, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed);

// P(c_i sent, identify(y, c_j) accepts). Requires i != j (InvalidInput).
ErrorEstimate estimate_type2(const Codebook& codebook, std::size_t i, std::size_t j,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed);
// Unchecked pair form; the two codewords may coincide.
ErrorEstimate estimate_type2(std::span<const double> sent, std::span<const double> tested,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed);

// Chebyshev-type bounds on the identification errors. Reported unclamped;
// a value >= 1 says nothing and is flagged vacuous.
struct ChebyshevBounds {
  double eta0 = 0.0;   // type I
  double zeta0 = 0.0;  // cross-term event
  double zeta1 = 0.0;  // norm event
  bool eta0_vacuous = false;
  bool zeta0_vacuous = false;
  bool zeta1_vacuous = false;
  bool type2_sum_vacuous = false;  // zeta0 + zeta1 >= 1

  double type2_bound() const noexcept { return zeta0 + zeta1; }
};

//   eta0  = 9 mu^4 (1 + mu/lambda)^6 / (16 a^2 n^b)
//   zeta0 = 9 mu^3 t_max^2 / (a^2 lambda n^b)
//   zeta1 = mu^4 (1 + mu/lambda)^6 / (n delta_n^2), which equals eta0
ChebyshevBounds chebyshev_bounds(const IGParams& params, double t_max, std::size_t n,
                                 double a, double b);

struct RegularityReport {
  bool pass = true;
  double threshold = 0.0;  // a n^-b
  std::vector<std::size_t> violating;
  double violation_rate = 0.0;
};

// Finite-n surrogate of the noise regularity condition: every z_t must
// strictly exceed a n^-b.
RegularityReport regularity_check(std::span<const double> z, std::size_t n, double a,
                                  double b);

struct LikelihoodRatioReport {
  double log_a = 0.0;
  double log_b = 0.0;
  double ratio = 1.0;  // f_Z(y - c2) / f_Z(y - c1) = exp(log_a + log_b)
  // vector_log_pdf(y - c2) - vector_log_pdf(y - c1), evaluated directly.
  double direct_log_ratio = 0.0;
  bool identity_holds = false;  // within 1e-9 relative (absolute near 0)
  // Filled by lemma3_bound_check only. Leading explicit terms; the o(1)
  // corrections of the asymptotic argument are not modelled.
  std::optional<double> tau_bound;
  bool within_bound = false;
  std::optional<double> z_min;
  bool regularity_ok = true;
  std::size_t regularity_violations = 0;
};

// Log of the noise-density ratio split into its power and exponential
// parts. Throws DomainError unless y_t > c1_t and y_t > c2_t for all t.
LikelihoodRatioReport log_likelihood_ratio(std::span<const double> y,
                                           std::span<const double> c1,
                                           std::span<const double> c2,
                                           const IGParams& params);

// Likelihood-ratio continuity for codewords closer than alpha_n in every
// coordinate. With y = c1 + z and z_min = min z_t:
//   tau = 1.5 n alpha_n / z_min + (lambda n alpha_n / 2)(1/mu^2 + 1/z_min^2)
// and within_bound = |1 - ratio| <= exp(tau) - 1. Throws PreconditionError
// naming the first coordinate with |c1_t - c2_t| >= alpha_n. Regularity of z
// is reported, not enforced.
LikelihoodRatioReport lemma3_bound_check(std::span<const double> c1,
                                         std::span<const double> c2,
                                         std::span<const double> z, const IGParams& params,
                                         std::size_t n, double a, double b);

struct SeparationReport {
  bool pass = true;
  double alpha_n = 0.0;
  // min over pairs of max_t |c_i1,t - c_i2,t|; +inf for fewer than 2 codewords.
  double min_max_gap = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
};

// Checks that every pair differs by at least alpha_n = a^2 / n^{1+2b} in some
// coordinate (closed inequality).
SeparationReport separation_check(const Codebook& codebook, std::size_t n, double a,
                                  double b);

// A codeword at Euclidean distance `distance` from `base`, moving every
// coordinate by distance / sqrt(n) with a random sign, flipped when the move
// would leave [0, t_max]. Throws PackingInfeasible when neither sign fits.
std::vector<double> partner_at_distance(std::span<const double> base, double distance,
                                        double t_max, RandomStream& rng);

}  // namespace igid
