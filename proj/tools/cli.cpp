#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "igid/brownian_fpt.hpp"
#include "igid/codebook.hpp"
#include "igid/codec.hpp"
#include "igid/error_analysis.hpp"
#include "igid/errors.hpp"
#include "igid/ig_distribution.hpp"
#include "igid/parallel.hpp"
#include "igid/stats.hpp"
#include "report.hpp"

namespace igid::cli {

namespace {

const std::set<std::string> kCommands = {"dist", "fpt", "codebook", "simulate", "bounds", "lemma"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Validators

const CLI::Validator kOpenUnit(
    [](std::string& input) -> std::string {
      try {
        const double v = std::stod(input);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value " + input + " must lie in the open interval (0,1)";
    },
    "in (0,1)");

const CLI::Validator kPositive(
    [](std::string& input) -> std::string {
      try {
        const double v = std::stod(input);
        if (std::isfinite(v) && v > 0.0) return {};
      } catch (const std::exception&) {
      }
      return "value " + input + " must be finite and > 0";
    },
    "> 0");

struct Common {
  std::uint64_t seed = 0;
  std::string output;
  bool force = false;
  bool json = false;
  int workers = 0;
  std::string config;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--seed", common.seed, "master seed (64-bit)");
  sub->add_option("-o,--output", common.output, "artifact path (stdout if omitted)");
  sub->add_flag("--force", common.force, "overwrite existing artifacts");
  sub->add_flag("--json", common.json, "also write <output>.json");
  sub->add_option("--workers", common.workers, "OpenMP workers (default IG_IDENT_WORKERS)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--config", common.config, "JSON config file; flags override");
}

struct Parsed {
  DistConfig dist;
  FptConfig fpt;
  CodebookConfig codebook;
  SimulateConfig simulate;
  BoundsConfig bounds;
  std::string n_grid = "16..1048576";
  LemmaConfig lemma;
  double fpt_sigma = 0.0, fpt_sigma2 = 0.0, fpt_diffusion = 0.0, fpt_dt = 0.0, fpt_trace_t = 0.0;
  double dist_zmin = 0.0, dist_zmax = 0.0;
  double cb_min_distance = 0.0, cb_radius = 0.0;
  std::map<std::string, Common> common;
};

void build_app(CLI::App& app, Parsed& p) {
  app.require_subcommand(1);

  auto* dist = app.add_subcommand("dist", "IG distribution: sample, pdf, moments, mgf");
  dist->add_option("action", p.dist.action, "sample | pdf | moments | mgf")
      ->check(CLI::IsMember({"sample", "pdf", "moments", "mgf"}));
  dist->add_option("--mu", p.dist.mu, "IG mean")->required()->check(kPositive);
  dist->add_option("--lambda", p.dist.lambda, "IG shape")->required()->check(kPositive);
  dist->add_option("--n-samples", p.dist.n_samples, "draws for 'sample'")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  dist->add_option("--z-min", p.dist_zmin, "pdf grid start");
  dist->add_option("--z-max", p.dist_zmax, "pdf grid end");
  dist->add_option("--points", p.dist.points, "pdf grid size")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000000}));
  dist->add_option("--alpha", p.dist.alpha, "MGF argument");

  auto* fpt = app.add_subcommand("fpt", "first-passage simulation vs the IG law");
  fpt->add_option("--d", p.fpt.d, "distance")->required()->check(kPositive);
  fpt->add_option("--v", p.fpt.v, "drift velocity")->required()->check(kPositive);
  auto* sig = fpt->add_option("--sigma", p.fpt_sigma, "volatility")->check(kPositive);
  auto* sig2 = fpt->add_option("--sigma2", p.fpt_sigma2, "squared volatility")->check(kPositive);
  sig->excludes(sig2);
  fpt->add_option("--diffusion", p.fpt_diffusion, "diffusion coefficient (display only)");
  fpt->add_option("--dt", p.fpt_dt, "time step (default mu/1e4)")->check(kPositive);
  fpt->add_option("--samples", p.fpt.samples, "number of first-passage draws")
      ->check(CLI::Range(std::uint64_t{100}, std::uint64_t{1} << 40));
  fpt->add_flag("--bridge,!--no-bridge", p.fpt.bridge, "Brownian-bridge crossing correction");
  fpt->add_flag("--self-test", p.fpt.self_test, "draw from the IG sampler instead");
  fpt->add_option("--trace-paths", p.fpt.trace_paths, "number of traced paths");
  fpt->add_option("--trace-dir", p.fpt.trace_dir, "directory for trace CSVs");
  fpt->add_option("--max-steps", p.fpt.max_steps, "per-path step cap (0: 1e6 mu/dt)");
  fpt->add_option("--trace-t-max", p.fpt_trace_t, "trace horizon (default 10 mu)")
      ->check(kPositive);

  auto* cb = app.add_subcommand("codebook", "greedy packings: build, audit, density");
  cb->add_option("action", p.codebook.action, "build | audit | density")
      ->check(CLI::IsMember({"build", "audit", "density"}));
  cb->add_option("--n", p.codebook.n, "blocklength")->check(CLI::PositiveNumber);
  cb->add_option("--t-max", p.codebook.t_max, "peak constraint")->check(kPositive);
  cb->add_option("--a", p.codebook.a, "scale constant")->check(kPositive);
  cb->add_option("--b", p.codebook.b, "exponent constant")->check(kOpenUnit);
  cb->add_option("--min-distance", p.cb_min_distance, "default 2 r0")->check(kPositive);
  cb->add_option("--target-m", p.codebook.target_m, "codewords wanted")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{10000}));
  cb->add_option("--max-attempts", p.codebook.max_attempts, "candidate budget")
      ->check(CLI::PositiveNumber);
  cb->add_option("--input", p.codebook.input, "codebook CSV (audit, density)");
  cb->add_option("--radius", p.cb_radius, "density radius (default min_distance/2)")
      ->check(kPositive);
  cb->add_option("--mc-points", p.codebook.mc_points, "Monte Carlo points")
      ->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "type I / type II identification experiment");
  sim->add_option("--mu", p.simulate.mu, "IG mean")->required()->check(kPositive);
  sim->add_option("--lambda", p.simulate.lambda, "IG shape")->required()->check(kPositive);
  sim->add_option("--n", p.simulate.n, "blocklength(s), comma separated")
      ->delimiter(',')
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000000}));
  sim->add_option("--a", p.simulate.a, "scale constant")->check(kPositive);
  sim->add_option("--b", p.simulate.b, "exponent constant")->check(kOpenUnit);
  sim->add_option("--t-max", p.simulate.t_max, "peak constraint")->check(kPositive);
  sim->add_option("--trials", p.simulate.trials, "Monte Carlo trials per estimate")
      ->check(CLI::Range(std::uint64_t{100}, std::uint64_t{1} << 40));
  sim->add_option("--pairs", p.simulate.pairs, "codeword pairs per blocklength")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{10000}));
  sim->add_option("--pair-mode", p.simulate.pair_mode, "min: partner at exactly 2 r0; far: packing neighbour")
      ->check(CLI::IsMember({"min", "far"}));

  auto* bounds = app.add_subcommand("bounds", "codebook-size and rate bound sweep");
  bounds->add_option("--t-max", p.bounds.t_max, "peak constraint")->check(kPositive);
  bounds->add_option("--a", p.bounds.a, "scale constant")->check(kPositive);
  bounds->add_option("--b", p.bounds.b, "exponent constant")->check(kOpenUnit);
  bounds->add_option("--n-grid", p.n_grid, "lo..hi (powers of two) or comma list");

  auto* lemma = app.add_subcommand("lemma", "converse checks: lemma3, separation");
  lemma->add_option("action", p.lemma.action, "lemma3 | separation")
      ->check(CLI::IsMember({"lemma3", "separation"}));
  lemma->add_option("--n", p.lemma.n, "blocklength")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  lemma->add_option("--a", p.lemma.a, "scale constant")->check(kPositive);
  lemma->add_option("--b", p.lemma.b, "exponent constant")->check(kOpenUnit);
  lemma->add_option("--mu", p.lemma.mu, "IG mean")->check(kPositive);
  lemma->add_option("--lambda", p.lemma.lambda, "IG shape")->check(kPositive);
  lemma->add_option("--z", p.lemma.z, "constant noise realisation")->check(kPositive);
  lemma->add_option("--diff-fraction", p.lemma.diff_fraction, "|c1-c2| as a fraction of alpha_n")
      ->check(CLI::Range(0.0, 1.0));
  lemma->add_option("--base", p.lemma.base, "coordinate value of c1");
  lemma->add_option("--input", p.lemma.input, "codebook CSV (separation)");

  for (auto* sub : {dist, fpt, cb, sim, bounds, lemma}) add_common(sub, p.common[sub->get_name()]);
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return fmt(v.get<double>());
  throw UsageError("config values must be scalars or arrays of scalars");
}

bool flag_given(const std::vector<std::string>& args, const std::string& name) {
  const std::string eq = name + "=";
  for (const auto& a : args) {
    if (a == name || a.rfind(eq, 0) == 0) return true;
  }
  return false;
}

// Appends the config file's values as flags unless the flag is already
// present on the command line.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args,
                                           const CLI::App& app) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::string command;
  for (const auto& a : args) {
    if (kCommands.count(a)) {
      command = a;
      break;
    }
  }
  if (command.empty()) throw UsageError("a subcommand is required");
  const CLI::App* sub = app.get_subcommand(command);

  std::ifstream in(config_path);
  if (!in) throw UsageError("config: cannot read " + config_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw UsageError("config: invalid JSON in " + config_path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: top level must be a JSON object");

  std::vector<std::string> merged = args;
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (key == "config" || sub->get_option_no_throw(flag) == nullptr) {
      throw UsageError("config: unknown key '" + raw_key + "' for command '" + command + "'");
    }
    if (flag_given(args, flag)) continue;
    if (value.is_boolean()) {
      merged.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
    } else if (value.is_array()) {
      merged.push_back(flag);
      for (const auto& item : value) merged.push_back(json_scalar(item));
    } else {
      merged.push_back(flag + "=" + json_scalar(value));
    }
  }
  return merged;
}

int env_workers() {
  if (const char* env = std::getenv("IG_IDENT_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
    throw UsageError("IG_IDENT_WORKERS must be a positive integer");
  }
  return 0;
}

// Checks that cross-field and module preconditions hold before any work.
void validate(const ExperimentConfig& cfg) {
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      throw UsageError(std::string(field) + ": " + e.what());
    }
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DistConfig>) {
          wrap("--mu/--lambda", [&] { IGParams::make(c.mu, c.lambda); });
          if (c.action == "mgf") {
            const double limit = c.lambda / (2.0 * c.mu * c.mu);
            if (!(c.alpha < limit)) {
              throw UsageError("--alpha: must be < lambda/(2 mu^2) = " + fmt(limit));
            }
          }
          if (c.z_min && c.z_max && !(*c.z_min < *c.z_max)) {
            throw UsageError("--z-min/--z-max: z-min must be < z-max");
          }
        } else if constexpr (std::is_same_v<T, FptConfig>) {
          if (!c.sigma && !c.sigma2) throw UsageError("--sigma or --sigma2 is required");
          wrap("--v/--sigma/--d", [&] { FluidParams::make(c.v, c.volatility(), c.d); });
        } else if constexpr (std::is_same_v<T, CodebookConfig>) {
          if (c.action == "build") {
            if (c.n == 0) throw UsageError("--n: required for 'codebook build'");
            if (!c.min_distance && c.n < 2) {
              throw UsageError("--n: must be >= 2 unless --min-distance is given");
            }
          } else if (c.input.empty()) {
            throw UsageError("--input: required for 'codebook " + c.action + "'");
          }
        } else if constexpr (std::is_same_v<T, SimulateConfig>) {
          wrap("--mu/--lambda", [&] { IGParams::make(c.mu, c.lambda); });
          if (c.n.empty()) throw UsageError("--n: at least one blocklength");
        } else if constexpr (std::is_same_v<T, BoundsConfig>) {
          for (auto n : c.n_grid) {
            if (n < 4) throw UsageError("--n-grid: every n must be >= 4");
          }
        } else if constexpr (std::is_same_v<T, LemmaConfig>) {
          if (c.action == "separation" && c.input.empty()) {
            throw UsageError("--input: required for 'lemma separation'");
          }
        }
      },
      cfg.params);
}

}  // namespace

std::vector<std::uint64_t> parse_n_grid(const std::string& text) {
  std::vector<std::uint64_t> grid;
  auto to_u64 = [&](const std::string& s) -> std::uint64_t {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--n-grid: '" + s + "' is not a positive integer");
    }
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = to_u64(text.substr(0, dots));
    const auto hi = to_u64(text.substr(dots + 2));
    if (lo == 0 || hi < lo) throw UsageError("--n-grid: need 0 < lo <= hi");
    for (std::uint64_t n = lo; n <= hi; n *= 2) {
      grid.push_back(n);
      if (n > (UINT64_MAX / 2)) break;
    }
    return grid;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(to_u64(item));
  if (grid.empty()) throw UsageError("--n-grid: empty grid");
  return grid;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  Parsed p;
  CLI::App app{"Identification coding over inverse Gaussian timing channels", "ig-ident"};
  build_app(app, p);
  const std::vector<std::string> merged = merge_config_file(args, app);

  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig cfg;
  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  const Common& common = p.common.at(cfg.command);
  cfg.master_seed = common.seed;
  if (!common.output.empty()) cfg.output_path = common.output;
  cfg.force = common.force;
  cfg.json_mirror = common.json;
  cfg.workers = common.workers > 0 ? common.workers : env_workers();
  if (cfg.json_mirror && !cfg.output_path) throw UsageError("--json: requires --output");

  auto given = [&](const char* flag) { return sub->count(flag) > 0; };
  if (cfg.command == "dist") {
    if (given("--z-min")) p.dist.z_min = p.dist_zmin;
    if (given("--z-max")) p.dist.z_max = p.dist_zmax;
    cfg.params = p.dist;
  } else if (cfg.command == "fpt") {
    if (given("--sigma")) p.fpt.sigma = p.fpt_sigma;
    if (given("--sigma2")) p.fpt.sigma2 = p.fpt_sigma2;
    if (given("--diffusion")) p.fpt.diffusion = p.fpt_diffusion;
    if (given("--dt")) p.fpt.dt = p.fpt_dt;
    if (given("--trace-t-max")) p.fpt.trace_t_max = p.fpt_trace_t;
    cfg.params = p.fpt;
  } else if (cfg.command == "codebook") {
    if (given("--min-distance")) p.codebook.min_distance = p.cb_min_distance;
    if (given("--radius")) p.codebook.radius = p.cb_radius;
    cfg.params = p.codebook;
  } else if (cfg.command == "simulate") {
    cfg.params = p.simulate;
  } else if (cfg.command == "bounds") {
    p.bounds.n_grid = parse_n_grid(p.n_grid);
    cfg.params = p.bounds;
  } else {
    cfg.params = p.lemma;
  }
  validate(cfg);
  return cfg;
}

}  // namespace igid::cli
