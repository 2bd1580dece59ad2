#pragma once

#include "suregp/covariance.hpp"
#include "suregp/drift.hpp"
#include "suregp/optimize.hpp"
#include "suregp/shrinkage.hpp"
#include "suregp/sure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace suregp {

enum class Command { Simulate, Sweep, Optimize, Denoise, Validate };

Command parse_command(const std::string& name);
std::string command_name(Command c);

/// How the centre α(·) is searched: fixed (λ only), constant level, or slope α·t.
enum class CentreSearch { Fixed, Level, Slope };

/// Raw key-value configuration: section.key → value, as read from the config file.
/// Unknown sections and keys are rejected.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

/// Every key accepted in a config file, with its default (empty when it has none).
const std::map<std::string, std::string>& config_schema();

/// Fully resolved run: every field set and checked before any computation.
struct ScenarioConfig {
  std::string scenario = "simple";
  Command command = Command::Optimize;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::optional<std::string> input_path;

  CovarianceModel model = CovarianceModel::ornstein_uhlenbeck(0.5, 0.05, 1.0);
  DriftFunction drift;
  std::vector<double> grid;
  /// Canonical γ⁻¹dt unless configured otherwise; Lebesgue for zero-noise models.
  RiskMeasure measure = RiskMeasure::lebesgue(0.0, 1.0);

  CentreSearch centre = CentreSearch::Fixed;
  double fixed_alpha = 0.0;
  SearchSpace search;
  double level_bandwidth = 0.0;

  ThresholdSpec denoise;

  std::size_t n_reps = 400;
  unsigned statistics = 0;
  std::vector<double> soft_lambdas;
  std::vector<double> hard_lambdas;
  std::vector<double> bound_lambdas;
  double coverage_r = 1.5;
  std::vector<double> coverage_horizons;
  double coverage_step = 0.05;

  /// Canonical "section.key=value" lines of the resolved entries, sorted, seed excluded.
  std::string canonical_text;
  /// FNV-1a 64 of canonical_text.
  std::uint64_t hash = 0;

  /// "# suregp <command> config_hash=<hex> seed=<n>" line written at the top of every output.
  std::string header(const std::string& command) const;
};

/// Overrides applied after the file: command-line flags win over environment variables,
/// which win over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> command;
};

/// Reads SURE_SEED and SURE_OUT into `base` where the flag is absent.
Overrides with_environment(Overrides base);

ScenarioConfig resolve_config(const ConfigEntries& entries, const Overrides& overrides = {});

std::uint64_t fnv1a(const std::string& text);

}  // namespace suregp
