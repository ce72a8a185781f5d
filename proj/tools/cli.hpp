#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace igid::cli {

// Exit codes of ig-ident.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitRunaway = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DistConfig {
  std::string action = "sample";  // sample | pdf | moments | mgf
  double mu = 0.0;
  double lambda = 0.0;
  std::uint64_t n_samples = 100000;
  std::optional<double> z_min;
  std::optional<double> z_max;
  std::uint64_t points = 201;
  double alpha = 0.0;
};

struct FptConfig {
  double d = 0.0;
  double v = 0.0;
  std::optional<double> sigma;
  std::optional<double> sigma2;
  std::optional<double> diffusion;  // display only
  std::optional<double> dt;         // default mu / 1e4
  std::uint64_t samples = 10000;
  bool bridge = true;
  bool self_test = false;
  std::uint64_t trace_paths = 0;
  std::filesystem::path trace_dir = ".";
  std::optional<double> trace_t_max;  // default 10 mu
  std::uint64_t max_steps = 0;        // 0: 1e6 mu / dt

  double volatility() const { return sigma ? *sigma : std::sqrt(*sigma2); }
};

struct CodebookConfig {
  std::string action = "build";  // build | audit | density
  std::uint64_t n = 0;
  double t_max = 10.0;
  double a = 1.0;
  double b = 0.5;
  std::optional<double> min_distance;  // default 2 r0
  std::uint64_t target_m = 64;
  std::uint64_t max_attempts = 100000;
  std::filesystem::path input;
  std::optional<double> radius;  // default min_distance / 2
  std::uint64_t mc_points = 100000;
};

struct SimulateConfig {
  double mu = 0.0;
  double lambda = 0.0;
  std::vector<std::uint64_t> n{10000};
  double a = 1.0;
  double b = 0.5;
  double t_max = 10.0;
  std::uint64_t trials = 10000;
  std::uint64_t pairs = 1;
  std::string pair_mode = "min";  // min | far
};

struct BoundsConfig {
  double t_max = 10.0;
  double a = 1.0;
  double b = 0.1;
  std::vector<std::uint64_t> n_grid;
};

struct LemmaConfig {
  std::string action = "lemma3";  // lemma3 | separation
  std::uint64_t n = 100;
  double a = 1.0;
  double b = 0.1;
  double mu = 1.0;
  double lambda = 1.0;
  double z = 0.5;
  double diff_fraction = 0.5;
  double base = 5.0;
  std::filesystem::path input;
};

using CommandConfig = std::variant<DistConfig, FptConfig, CodebookConfig, SimulateConfig,
                                   BoundsConfig, LemmaConfig>;

struct ExperimentConfig {
  std::string command;
  CommandConfig params;
  std::uint64_t master_seed = 0;
  std::optional<std::filesystem::path> output_path;
  bool force = false;
  bool json_mirror = false;
  int workers = 0;  // 0: IG_IDENT_WORKERS or the OpenMP default
};

// Parses argv-style arguments (without the program name). A JSON file given
// with --config supplies option values that flags on the command line
// override; unknown keys are rejected. Throws UsageError naming the field and
// the violated constraint.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// Runs the pipeline. Artifacts go to output_path (or `out` when absent) and
// a one-line summary to `out` (or `err` when the artifact went to `out`).
// Library exceptions propagate.
void run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// parse_config + run with exceptions mapped to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "lo..hi" (powers of two from lo to hi) or a comma list.
std::vector<std::uint64_t> parse_n_grid(const std::string& text);

}  // namespace igid::cli
