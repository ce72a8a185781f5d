#include "igid/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "igid/errors.hpp"
#include "igid/parallel.hpp"
#include "igid/stats.hpp"

namespace igid {

namespace {

void require_trials(std::uint64_t trials) {
  if (trials < 100) throw InvalidInput("error estimates need trials >= 100");
}

void require_constants(double a, double b) {
  if (!std::isfinite(a) || a <= 0.0) throw InvalidInput("a must be finite and > 0");
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0,1)");
}

double alpha_n_of(std::size_t n, double a, double b) {
  return a * a / std::pow(static_cast<double>(n), 1.0 + 2.0 * b);
}

template <typename TrialFn>
std::uint64_t count_parallel(std::uint64_t trials, TrialFn&& trial) {
  std::vector<unsigned char> hit(trials, 0);
  parallel_for(trials, [&](std::size_t k) { hit[k] = trial(k) ? 1 : 0; });
  std::uint64_t total = 0;
  for (auto h : hit) total += h;
  return total;
}

}  // namespace

ErrorEstimate ErrorEstimate::from_counts(std::uint64_t errors, std::uint64_t trials) {
  const WilsonInterval w = wilson_interval(errors, trials);
  ErrorEstimate e;
  e.errors = errors;
  e.trials = trials;
  e.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
  e.ci_lower = w.lower;
  e.ci_upper = w.upper;
  e.ci_halfwidth = w.halfwidth;
  return e;
}

bool type1_trial_rejects(std::span<const double> sent, const IGParams& params,
                         const DecodingRule& rule, std::uint64_t seed, std::uint64_t trial) {
  RandomStream rng = RandomStream::substream(seed, StreamTag::kType1, trial);
  const std::vector<double> y = transmit(sent, params, rng);
  return !identify(y, sent, params, rule);
}

bool type2_trial_accepts(std::span<const double> sent, std::span<const double> tested,
                         const IGParams& params, const DecodingRule& rule,
                         std::uint64_t seed, std::uint64_t trial) {
  RandomStream rng = RandomStream::substream(seed, StreamTag::kType2, trial);
  const std::vector<double> y = transmit(sent, params, rng);
  return identify(y, tested, params, rule);
}

ErrorEstimate estimate_type1(std::span<const double> sent, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed) {
  require_trials(trials);
  params.validate();
  const std::uint64_t errors = count_parallel(
      trials, [&](std::size_t k) { return type1_trial_rejects(sent, params, rule, seed, k); });
  return ErrorEstimate::from_counts(errors, trials);
}

ErrorEstimate estimate_type1(const Codebook& codebook, std::size_t i, const IGParams& params,
                             const DecodingRule& rule, std::uint64_t trials,
                             std::uint64_t seed) {
  return estimate_type1(codebook.at(i), params, rule, trials, seed);
}

ErrorEstimate estimate_type2(std::span<const double> sent, std::span<const double> tested,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed) {
  require_trials(trials);
  params.validate();
  if (sent.size() != tested.size()) throw InvalidInput("codeword length mismatch");
  const std::uint64_t errors = count_parallel(trials, [&](std::size_t k) {
    return type2_trial_accepts(sent, tested, params, rule, seed, k);
  });
  return ErrorEstimate::from_counts(errors, trials);
}

ErrorEstimate estimate_type2(const Codebook& codebook, std::size_t i, std::size_t j,
                             const IGParams& params, const DecodingRule& rule,
                             std::uint64_t trials, std::uint64_t seed) {
  if (i == j) throw InvalidInput("type II error needs distinct messages (i == j)");
  return estimate_type2(codebook.at(i), codebook.at(j), params, rule, trials, seed);
}

ChebyshevBounds chebyshev_bounds(const IGParams& params, double t_max, std::size_t n,
                                 double a, double b) {
  params.validate();
  if (n < 2) throw DomainError("Chebyshev bounds need n >= 2");
  require_constants(a, b);
  const double mu = params.mu;
  const double lambda = params.lambda;
  const double nb = std::pow(static_cast<double>(n), b);
  const double fourth_bound = ig_moments(params).fourth_upper_bound;
  const double delta_n = 4.0 * a / (3.0 * std::pow(static_cast<double>(n), (1.0 - b) / 2.0));

  ChebyshevBounds c;
  c.eta0 = 9.0 * fourth_bound / (16.0 * a * a * nb);
  c.zeta0 = 9.0 * mu * mu * mu * t_max * t_max / (a * a * lambda * nb);
  c.zeta1 = fourth_bound / (static_cast<double>(n) * delta_n * delta_n);
  c.eta0_vacuous = c.eta0 >= 1.0;
  c.zeta0_vacuous = c.zeta0 >= 1.0;
  c.zeta1_vacuous = c.zeta1 >= 1.0;
  c.type2_sum_vacuous = c.type2_bound() >= 1.0;
  return c;
}

RegularityReport regularity_check(std::span<const double> z, std::size_t n, double a,
                                  double b) {
  if (n < 1) throw DomainError("regularity check needs n >= 1");
  require_constants(a, b);
  RegularityReport r;
  r.threshold = a * std::pow(static_cast<double>(n), -b);
  for (std::size_t t = 0; t < z.size(); ++t) {
    if (!(z[t] > r.threshold)) r.violating.push_back(t);
  }
  r.pass = r.violating.empty();
  r.violation_rate =
      z.empty() ? 0.0 : static_cast<double>(r.violating.size()) / static_cast<double>(z.size());
  return r;
}

LikelihoodRatioReport log_likelihood_ratio(std::span<const double> y,
                                           std::span<const double> c1,
                                           std::span<const double> c2,
                                           const IGParams& params) {
  if (y.size() != c1.size() || y.size() != c2.size()) {
    throw InvalidInput("log_likelihood_ratio: length mismatch");
  }
  if (y.empty()) throw InvalidInput("log_likelihood_ratio: empty vectors");
  std::vector<double> z1(y.size());
  std::vector<double> z2(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    z1[t] = y[t] - c1[t];
    z2[t] = y[t] - c2[t];
    if (!(z1[t] > 0.0) || !(z2[t] > 0.0)) {
      throw DomainError("log_likelihood_ratio: y_" + std::to_string(t) +
                        " is not above both codeword coordinates");
    }
  }
  const double mu2 = params.mu * params.mu;
  CompensatedSum sum_a;
  CompensatedSum sum_b;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double diff = c1[t] - c2[t];
    sum_a.add(std::log(z1[t] / z2[t]));
    // (z2 - z1) + mu^2 (1/z2 - 1/z1) with z2 - z1 = c1 - c2.
    sum_b.add(diff - mu2 * diff / (z1[t] * z2[t]));
  }
  LikelihoodRatioReport r;
  r.log_a = 1.5 * sum_a.value();
  r.log_b = -params.lambda / (2.0 * mu2) * sum_b.value();
  r.ratio = std::exp(r.log_a + r.log_b);
  r.direct_log_ratio = vector_log_pdf(params, z2) - vector_log_pdf(params, z1);
  const double total = r.log_a + r.log_b;
  const double scale = std::max(1.0, std::abs(r.direct_log_ratio));
  r.identity_holds = std::abs(total - r.direct_log_ratio) <= 1e-9 * scale;
  return r;
}

LikelihoodRatioReport lemma3_bound_check(std::span<const double> c1,
                                         std::span<const double> c2,
                                         std::span<const double> z, const IGParams& params,
                                         std::size_t n, double a, double b) {
  require_constants(a, b);
  if (c1.size() != n || c2.size() != n || z.size() != n) {
    throw InvalidInput("lemma3_bound_check: vectors must have length n");
  }
  const double alpha_n = alpha_n_of(n, a, b);
  for (std::size_t t = 0; t < n; ++t) {
    if (!(std::abs(c1[t] - c2[t]) < alpha_n)) {
      throw PreconditionError("lemma3_bound_check: coordinate " + std::to_string(t) +
                              " has |c1 - c2| = " + std::to_string(std::abs(c1[t] - c2[t])) +
                              " >= alpha_n = " + std::to_string(alpha_n));
    }
  }
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = c1[t] + z[t];
  LikelihoodRatioReport r = log_likelihood_ratio(y, c1, c2, params);

  const RegularityReport reg = regularity_check(z, n, a, b);
  r.regularity_ok = reg.pass;
  r.regularity_violations = reg.violating.size();

  const double z_min = *std::min_element(z.begin(), z.end());
  const double n_alpha = static_cast<double>(n) * alpha_n;
  const double tau = 1.5 * n_alpha / z_min +
                     0.5 * params.lambda * n_alpha *
                         (1.0 / (params.mu * params.mu) + 1.0 / (z_min * z_min));
  r.z_min = z_min;
  r.tau_bound = tau;
  r.within_bound = std::abs(1.0 - r.ratio) <= std::expm1(tau);
  return r;
}

SeparationReport separation_check(const Codebook& codebook, std::size_t n, double a,
                                  double b) {
  if (n < 1) throw DomainError("separation check needs n >= 1");
  require_constants(a, b);
  SeparationReport r;
  r.alpha_n = alpha_n_of(n, a, b);
  r.min_max_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    for (std::size_t j = i + 1; j < codebook.size(); ++j) {
      const auto ci = codebook[i];
      const auto cj = codebook[j];
      double gap = 0.0;
      for (std::size_t t = 0; t < ci.size(); ++t) gap = std::max(gap, std::abs(ci[t] - cj[t]));
      if (gap < r.min_max_gap) {
        r.min_max_gap = gap;
        r.worst_pair = std::make_pair(i, j);
      }
    }
  }
  r.pass = codebook.size() < 2 || r.min_max_gap >= r.alpha_n;
  return r;
}

std::vector<double> partner_at_distance(std::span<const double> base, double distance,
                                        double t_max, RandomStream& rng) {
  if (base.empty()) throw InvalidInput("partner_at_distance: empty codeword");
  const double step = distance / std::sqrt(static_cast<double>(base.size()));
  std::vector<double> out(base.size());
  for (std::size_t t = 0; t < base.size(); ++t) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    double candidate = base[t] + sign * step;
    if (candidate < 0.0 || candidate > t_max) candidate = base[t] - sign * step;
    if (candidate < 0.0 || candidate > t_max) {
      throw PackingInfeasible("partner_at_distance: per-coordinate step " +
                              std::to_string(step) + " does not fit in [0, t_max]");
    }
    out[t] = candidate;
  }
  return out;
}

}  // namespace igid
