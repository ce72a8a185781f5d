#include "igid/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "igid/errors.hpp"
#include "igid/parallel.hpp"

namespace igid {

namespace {

constexpr std::uint64_t kSaturationWindow = 10000;
constexpr double kSaturationRate = 1e-3;
constexpr std::uint64_t kDensityBlock = 4096;

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidInput(std::string(name) + " must be finite and > 0");
  }
}

void require_exponent(double b) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0,1)");
}

// True when |x - y| >= threshold, bailing out as soon as the partial sum
// settles it.
bool at_least(std::span<const double> x, std::span<const double> y,
              double threshold_sq) {
  double acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double diff = x[t] - y[t];
    acc += diff * diff;
    if (acc >= threshold_sq) return true;
  }
  return acc >= threshold_sq;
}

}  // namespace

ScalingQuantities scaling_quantities(std::size_t n, double a, double b) {
  if (n < 2) throw DomainError("scaling quantities need n >= 2");
  require_positive(a, "a");
  require_exponent(b);
  const double nd = static_cast<double>(n);
  ScalingQuantities s;
  s.n = n;
  s.a = a;
  s.b = b;
  s.epsilon_n = a * std::pow(nd, -(1.0 - b) / 2.0);
  s.r0 = std::sqrt(a) * std::pow(nd, (1.0 + b) / 4.0);
  s.delta_n = 4.0 * a / (3.0 * std::pow(nd, (1.0 - b) / 2.0));
  s.alpha_n = a * a / std::pow(nd, 1.0 + 2.0 * b);
  return s;
}

double sphere_log2_volume(std::size_t n, double r) {
  if (n < 1) throw DomainError("sphere volume needs n >= 1");
  require_positive(r, "radius");
  const double nd = static_cast<double>(n);
  return 0.5 * nd * std::log2(std::numbers::pi) -
         std::lgamma(0.5 * nd + 1.0) / std::numbers::ln2 + nd * std::log2(r);
}

Codebook::Codebook(std::size_t n, double t_max, double min_distance)
    : n_(n), t_max_(t_max), min_distance_(min_distance) {
  if (n == 0) throw InvalidInput("codebook blocklength must be >= 1");
  require_positive(t_max, "t_max");
  if (!std::isfinite(min_distance) || min_distance < 0.0) {
    throw InvalidInput("min_distance must be finite and >= 0");
  }
}

std::span<const double> Codebook::at(std::size_t i) const {
  if (i >= size()) {
    throw InvalidInput("codeword index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(size()) + ")");
  }
  return (*this)[i];
}

void Codebook::push_back(std::span<const double> codeword) {
  if (codeword.size() != n_) throw InvalidInput("codeword length differs from n");
  data_.insert(data_.end(), codeword.begin(), codeword.end());
}

PackingResult build_greedy_packing(std::size_t n, double t_max, double min_distance,
                                   std::size_t target_m, std::uint64_t max_attempts,
                                   RandomStream& rng) {
  require_positive(min_distance, "min_distance");
  if (target_m < 2) throw InvalidInput("target_M must be >= 2");
  PackingResult result{Codebook(n, t_max, min_distance)};
  Codebook& book = result.codebook;
  const double threshold_sq = min_distance * min_distance;
  std::vector<double> candidate(n);
  std::deque<bool> window;
  std::uint64_t window_accepts = 0;

  while (result.attempts < max_attempts && book.size() < target_m) {
    for (double& c : candidate) c = t_max * rng.uniform();
    ++result.attempts;
    bool accept = true;
    for (std::size_t j = 0; j < book.size() && accept; ++j) {
      accept = at_least(candidate, book[j], threshold_sq);
    }
    if (accept) book.push_back(candidate);
    window.push_back(accept);
    window_accepts += accept ? 1 : 0;
    if (window.size() > kSaturationWindow) {
      window_accepts -= window.front() ? 1 : 0;
      window.pop_front();
    }
  }
  if (book.size() < 2) {
    throw PackingInfeasible("only " + std::to_string(book.size()) +
                            " codeword(s) accepted in " + std::to_string(result.attempts) +
                            " attempts; min_distance too large for t_max and n");
  }
  result.final_acceptance_rate =
      window.empty() ? 0.0
                     : static_cast<double>(window_accepts) / static_cast<double>(window.size());
  result.saturated =
      book.size() < target_m && result.final_acceptance_rate < kSaturationRate;
  return result;
}

CountBounds count_bounds(std::size_t n, double t_max, double a, double b) {
  if (n < 4) throw DomainError("count bounds need n >= 4");
  require_positive(t_max, "t_max");
  require_positive(a, "a");
  require_exponent(b);
  const ScalingQuantities s = scaling_quantities(n, a, b);
  const double nd = static_cast<double>(n);
  CountBounds c;
  c.n = n;
  c.t_max = t_max;
  c.a = a;
  c.b = b;
  c.log2_m_lower = nd * std::log2(t_max / 2.0) - sphere_log2_volume(n, s.r0);
  c.log2_m_upper = -0.599 * nd + nd * std::log2(t_max + 2.0 * s.alpha_n) -
                   sphere_log2_volume(n, s.alpha_n);
  const double norm = nd * std::log2(nd);
  c.rate_lower = c.log2_m_lower / norm;
  c.rate_upper = c.log2_m_upper / norm;
  return c;
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("vector length mismatch");
  double acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double diff = x[t] - y[t];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

DensityEstimate estimate_packing_density(const Codebook& codebook, double r,
                                         std::uint64_t mc_points, std::uint64_t seed) {
  if (codebook.empty()) throw InvalidInput("density estimate needs a nonempty codebook");
  require_positive(r, "radius");
  if (mc_points == 0) throw InvalidInput("mc_points must be > 0");
  const std::size_t n = codebook.n();
  const double r_sq = r * r;
  const std::uint64_t blocks = (mc_points + kDensityBlock - 1) / kDensityBlock;
  std::vector<std::uint64_t> hits(blocks, 0);

  parallel_for(blocks, [&](std::size_t block) {
    RandomStream rng = RandomStream::substream(seed, StreamTag::kDensity, block);
    const std::uint64_t begin = block * kDensityBlock;
    const std::uint64_t end = std::min(mc_points, begin + kDensityBlock);
    std::vector<double> point(n);
    std::uint64_t local = 0;
    for (std::uint64_t p = begin; p < end; ++p) {
      for (double& x : point) x = codebook.t_max() * rng.uniform();
      for (std::size_t j = 0; j < codebook.size(); ++j) {
        if (!at_least(point, codebook[j], r_sq)) {
          ++local;
          break;
        }
      }
    }
    hits[block] = local;
  });

  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  DensityEstimate est;
  est.points = mc_points;
  est.value = static_cast<double>(total) / static_cast<double>(mc_points);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(mc_points));
  return est;
}

AuditReport audit_codebook(const Codebook& codebook) {
  AuditReport report;
  report.min_pairwise_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < codebook.size() && report.peak_ok; ++i) {
    for (double c : codebook[i]) {
      if (!(c >= 0.0 && c <= codebook.t_max())) {
        report.peak_ok = false;
        report.first_peak_violation = i;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    for (std::size_t j = i + 1; j < codebook.size(); ++j) {
      const double dist = euclidean_distance(codebook[i], codebook[j]);
      if (dist < report.min_pairwise_distance) {
        report.min_pairwise_distance = dist;
        report.closest_pair = std::make_pair(i, j);
      }
    }
  }
  report.distance_ok = report.min_pairwise_distance >= codebook.min_distance();
  report.ok = report.peak_ok && report.distance_ok;
  return report;
}

void write_codebook_csv(const std::filesystem::path& file, const Codebook& codebook,
                        std::span<const std::string> comments) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open codebook file " + file.string());
  write_codebook_csv(out, codebook, comments);
}

void write_codebook_csv(std::ostream& out, const Codebook& codebook,
                        std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  char buf[64];
  out << codebook.n() << ',';
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,", codebook.t_max(), codebook.min_distance());
  out << buf << codebook.size() << '\n';
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const auto row = codebook[i];
    for (std::size_t t = 0; t < row.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", row[t]);
      out << (t ? "," : "") << buf;
    }
    out << '\n';
  }
}

Codebook read_codebook_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidInput("cannot open codebook file " + file.string());
  std::string line;
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  auto split = [](const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidInput("malformed number '" + cell + "' in codebook CSV");
      }
    }
    return values;
  };
  if (!next_data_line()) throw InvalidInput("codebook CSV has no header row");
  const auto header = split(line);
  if (header.size() != 4) throw InvalidInput("codebook CSV header must be n,t_max,min_distance,M");
  const auto n = static_cast<std::size_t>(header[0]);
  const auto m = static_cast<std::size_t>(header[3]);
  Codebook book(n, header[1], header[2]);
  while (next_data_line()) {
    const auto row = split(line);
    if (row.size() != n) throw InvalidInput("codeword row length differs from n");
    book.push_back(row);
  }
  if (book.size() != m) throw InvalidInput("codebook CSV row count differs from M");
  return book;
}

}  // namespace igid
