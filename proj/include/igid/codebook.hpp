#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "igid/rng.hpp"

namespace igid {

// Blocklength-indexed constants of the packing construction and the
// decoder. For blocklength n and constants a > 0, b in (0, 1):
//   epsilon_n = a n^{-(1-b)/2},  r0 = sqrt(n epsilon_n),
//   delta_n = (4/3) epsilon_n,   alpha_n = a^2 / n^{1+2b}.
struct ScalingQuantities {
  std::size_t n = 0;
  double a = 0.0;
  double b = 0.0;
  double epsilon_n = 0.0;
  double r0 = 0.0;
  double delta_n = 0.0;
  double alpha_n = 0.0;
};

ScalingQuantities scaling_quantities(std::size_t n, double a, double b);

// log2 of the volume of an n-ball of radius r, via lgamma.
double sphere_log2_volume(std::size_t n, double r);

// Codewords in the peak-constrained cube [0, t_max]^n, stored row-major.
class Codebook {
 public:
  Codebook(std::size_t n, double t_max, double min_distance);

  std::size_t n() const noexcept { return n_; }
  double t_max() const noexcept { return t_max_; }
  double min_distance() const noexcept { return min_distance_; }
  std::size_t size() const noexcept { return n_ == 0 ? 0 : data_.size() / n_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }
  // Bounds-checked access; throws InvalidInput.
  std::span<const double> at(std::size_t i) const;

  // Appends without auditing. Throws InvalidInput on a length mismatch.
  void push_back(std::span<const double> codeword);

 private:
  std::size_t n_;
  double t_max_;
  double min_distance_;
  std::vector<double> data_;
};

struct PackingResult {
  Codebook codebook;
  std::uint64_t attempts = 0;
  // Target not reached and the acceptance rate over the last
  // min(attempts, 10^4) candidates fell below 1e-3.
  bool saturated = false;
  double final_acceptance_rate = 0.0;
};

// Random sequential addition: uniform candidates in [0, t_max]^n accepted
// iff their distance to every accepted codeword is >= min_distance. Stops at
// target_m codewords or max_attempts candidates. Throws PackingInfeasible if
// fewer than two codewords are accepted.
PackingResult build_greedy_packing(std::size_t n, double t_max, double min_distance,
                                   std::size_t target_m, std::uint64_t max_attempts,
                                   RandomStream& rng);

struct CountBounds {
  std::size_t n = 0;
  double t_max = 0.0;
  double a = 0.0;
  double b = 0.0;
  double log2_m_lower = 0.0;
  double log2_m_upper = 0.0;
  double rate_lower = 0.0;
  double rate_upper = 0.0;
};

// Volume-packing bounds on log2 M for blocklength n >= 4:
//   lower = n log2(t_max / 2) - log2 Vol_n(r0)
//   upper = -0.599 n + n log2(t_max + 2 alpha_n) - log2 Vol_n(alpha_n)
// Rates are normalised by n log2 n.
CountBounds count_bounds(std::size_t n, double t_max, double a, double b);

struct DensityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t points = 0;
};

// Fraction of uniform points of [0, t_max]^n lying within distance r of some
// codeword. Points are drawn in fixed blocks, each block from substream
// (seed, kDensity, block), so the estimate does not depend on thread count.
DensityEstimate estimate_packing_density(const Codebook& codebook, double r,
                                         std::uint64_t mc_points, std::uint64_t seed);

struct AuditReport {
  bool ok = true;
  bool peak_ok = true;
  bool distance_ok = true;
  double min_pairwise_distance = 0.0;  // +inf for fewer than two codewords
  std::optional<std::pair<std::size_t, std::size_t>> closest_pair;
  std::optional<std::size_t> first_peak_violation;
};

// Exhaustive check of both codebook invariants.
AuditReport audit_codebook(const Codebook& codebook);

double euclidean_distance(std::span<const double> x, std::span<const double> y);

// Codebook CSV: optional '#' comment lines, a row "n,t_max,min_distance,M",
// then one codeword per row.
void write_codebook_csv(std::ostream& out, const Codebook& codebook,
                        std::span<const std::string> comments = {});
void write_codebook_csv(const std::filesystem::path& file, const Codebook& codebook,
                        std::span<const std::string> comments = {});
Codebook read_codebook_csv(const std::filesystem::path& file);

}  // namespace igid
