#pragma once

#include "suregp/config.hpp"
#include "suregp/montecarlo.hpp"
#include "suregp/optimize.hpp"
#include "suregp/simulate.hpp"

#include <string>
#include <vector>

namespace suregp {

struct CommandResult {
  int exit_code = 0;
  /// Files written, in write order.
  std::vector<std::string> files;
  /// One-paragraph human summary for the terminal.
  std::string summary;
};

/// Shortest decimal text that round-trips, so reruns produce identical bytes.
std::string format_number(double v);

/// Reads a `t,x[,u]` CSV; lines starting with '#' and a non-numeric first row are skipped.
SamplePath read_path_csv(const std::string& file);

/// The configured input path, or a simulated path for the configured seed.
SamplePath obtain_path(const ScenarioConfig& cfg);

/// Grid scan plus optional refinement for the configured centre search.
OptimResult run_search(const ScenarioConfig& cfg, const SamplePath& path, bool refine);

/// Monte Carlo suite selected by cfg.statistics; seeds start at cfg.seed.
McReport run_validation(const ScenarioConfig& cfg);

CommandResult cmd_simulate(const ScenarioConfig& cfg);
/// surface.csv (alpha,lambda,sure,baseline,quadratic,correction) and
/// levels.csv (lambda,occupation,local_time) at the best grid centre.
CommandResult cmd_sweep(const ScenarioConfig& cfg);
/// optimum.txt, denoised.csv (t,x_denoised) and trace.csv.
CommandResult cmd_optimize(const ScenarioConfig& cfg);
/// denoised.csv for the fixed estimator in [denoise].
CommandResult cmd_denoise(const ScenarioConfig& cfg);
/// validation.txt and validation.csv; exit code 1 when any check fails.
CommandResult cmd_validate(const ScenarioConfig& cfg);

CommandResult run_command(const ScenarioConfig& cfg);

}  // namespace suregp
