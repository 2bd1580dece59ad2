#include "suregp/commands.hpp"

#include "suregp/error.hpp"
#include "suregp/pathstats.hpp"
#include "suregp/shrinkage.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace suregp {

namespace {

namespace fs = std::filesystem;

std::string write_output(const ScenarioConfig& cfg, const std::string& name, const std::string& body) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path file = dir / name;
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << body;
  out.close();
  if (!out) throw IoError("failed while writing '" + file.string() + "'");
  return file.string();
}

std::string path_table(const ScenarioConfig& cfg, const std::string& cmd, const SamplePath& path) {
  std::string out = cfg.header(cmd) + "\n";
  const bool has_u = path.meta.drift.has_value();
  out += has_u ? "t,x,u\n" : "t,x\n";
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    out += format_number(path.grid[i]) + "," + format_number(path.values[i]);
    if (has_u) out += "," + format_number((*path.meta.drift)[i]);
    out += "\n";
  }
  return out;
}

std::string denoised_table(const ScenarioConfig& cfg, const std::string& cmd, const SamplePath& estimate) {
  std::string out = cfg.header(cmd) + "\nt,x_denoised\n";
  for (std::size_t i = 0; i < estimate.grid.size(); ++i)
    out += format_number(estimate.grid[i]) + "," + format_number(estimate.values[i]) + "\n";
  return out;
}

std::string trace_row(const TracePoint& p) {
  return fmt::format("{},{},{},{},{},{}", format_number(p.alpha), format_number(p.lambda), format_number(p.sure),
                     format_number(p.baseline), format_number(p.quadratic), format_number(p.correction));
}

AlphaVariant variant_of(CentreSearch c) { return c == CentreSearch::Slope ? AlphaVariant::Slope : AlphaVariant::Level; }

DriftFunction centre_of(const ScenarioConfig& cfg, double alpha) {
  if (cfg.centre == CentreSearch::Fixed) return DriftFunction::constant(alpha);
  return make_alpha(variant_of(cfg.centre), alpha);
}

std::string centre_name(CentreSearch c) {
  switch (c) {
    case CentreSearch::Fixed: return "fixed";
    case CentreSearch::Level: return "level";
    case CentreSearch::Slope: return "slope";
  }
  return "?";
}

void require_noise(const ScenarioConfig& cfg) {
  if (cfg.model.degenerate()) throw DomainError("the zero-noise model has no risk surface");
  if (!cfg.measure.is_canonical())
    throw DomainError("risk surfaces are computed for the canonical measure (measure.kind = canonical)");
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

SamplePath read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read input path '" + file + "'");
  SamplePath path;
  std::vector<double> u;
  bool all_u = true;
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(c, &used));
        numeric = numeric && c.find_first_not_of(" \t\r", used) == std::string::npos;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first_data) {
        first_data = false;
        continue;
      }
      throw ValidationError(fmt::format("{}:{}: non-numeric row", file, line_no));
    }
    first_data = false;
    if (nums.size() < 2) throw ValidationError(fmt::format("{}:{}: expected t,x[,u]", file, line_no));
    path.grid.push_back(nums[0]);
    path.values.push_back(nums[1]);
    if (nums.size() >= 3) u.push_back(nums[2]);
    else all_u = false;
  }
  if (all_u && !u.empty()) path.meta.drift = std::move(u);
  path.meta.model_id = "input:" + file;
  validate_path(path);
  return path;
}

SamplePath obtain_path(const ScenarioConfig& cfg) {
  if (cfg.input_path) return read_path_csv(*cfg.input_path);
  return simulate(cfg.model, cfg.drift, cfg.grid, cfg.seed);
}

OptimResult run_search(const ScenarioConfig& cfg, const SamplePath& path, bool refine) {
  SearchSpace space = cfg.search;
  space.refine = refine;
  if (cfg.centre == CentreSearch::Fixed)
    return minimize_lambda(path, DriftFunction::constant(cfg.fixed_alpha), space, cfg.model);
  return minimize_joint(path, variant_of(cfg.centre), space, cfg.model);
}

McReport run_validation(const ScenarioConfig& cfg) {
  McConfig mc{cfg.n_reps, cfg.seed, McScenario{cfg.model, cfg.drift, cfg.grid, cfg.measure}, cfg.statistics};
  if (mc.n_reps < 2) throw DomainError("Monte Carlo needs n_reps >= 2");
  const auto centre = centre_of(cfg, cfg.fixed_alpha);
  McReport report;
  if (cfg.statistics & kUnbiasedness) {
    for (double lam : cfg.soft_lambdas)
      report.append(run_unbiasedness(mc, ThresholdSpec{ThresholdKind::Soft, centre, lam}));
    if (cfg.measure.is_canonical())
      for (double lam : cfg.hard_lambdas)
        report.append(run_unbiasedness(mc, ThresholdSpec{ThresholdKind::Hard, centre, lam}));
  }
  if (cfg.statistics & kRiskBound) report.append(run_risk_bound(mc, centre, cfg.bound_lambdas));
  if (cfg.statistics & kCoverage) {
    CoverageOptions options;
    options.r = cfg.coverage_r;
    options.horizons = cfg.coverage_horizons;
    options.time_step = cfg.coverage_step;
    // Centre at the true drift so Z is the standardized noise itself.
    options.alpha = cfg.drift;
    report.append(run_coverage(mc, options));
  }
  if (cfg.statistics & kBaselineEfficiency) {
    report.append(run_baseline_efficiency(mc));
    if (cfg.measure.is_canonical()) report.append(run_sure_efficiency(mc, centre, cfg.search));
  }
  return report;
}

CommandResult cmd_simulate(const ScenarioConfig& cfg) {
  const auto path = simulate(cfg.model, cfg.drift, cfg.grid, cfg.seed);
  CommandResult result;
  result.files.push_back(write_output(cfg, "path.csv", path_table(cfg, "simulate", path)));
  result.summary = fmt::format("simulated {} points of {} (seed {})", path.grid.size(), cfg.model.id(), cfg.seed);
  return result;
}

CommandResult cmd_sweep(const ScenarioConfig& cfg) {
  require_noise(cfg);
  const auto path = obtain_path(cfg);
  const auto opt = run_search(cfg, path, false);

  std::string surface = cfg.header("sweep") + "\nalpha,lambda,sure,baseline,quadratic,correction\n";
  for (const auto& p : opt.trace) surface += trace_row(p) + "\n";

  const auto best = best_point(opt.trace);
  const auto z = standardize(path, centre_of(cfg, best.alpha), cfg.model);
  const double eps = cfg.level_bandwidth > 0.0 ? cfg.level_bandwidth : default_bandwidth(z);
  const auto levels = cfg.search.lambda_grid(cfg.search.n_lambda);
  std::string level_table = cfg.header("sweep") + "\nlambda,occupation,local_time\n";
  for (const auto& e : level_sweep(z, levels, eps))
    level_table += fmt::format("{},{},{}\n", format_number(e.level), format_number(e.occupation),
                               format_number(e.local_time));

  CommandResult result;
  result.files.push_back(write_output(cfg, "surface.csv", surface));
  result.files.push_back(write_output(cfg, "levels.csv", level_table));
  result.summary = fmt::format("{} surface rows; grid minimum SURE {} at alpha={}, lambda={}", opt.trace.size(),
                               format_number(best.sure), format_number(best.alpha), format_number(best.lambda));
  return result;
}

CommandResult cmd_optimize(const ScenarioConfig& cfg) {
  const auto path = obtain_path(cfg);
  CommandResult result;
  std::string summary = cfg.header("optimize") + "\n";
  summary += fmt::format("scenario = {}\nmodel = {}\ncentre = {}\n", cfg.scenario, cfg.model.id(), centre_name(cfg.centre));

  if (cfg.model.degenerate()) {
    // Without noise the observation is the drift; every threshold is zero.
    summary += "degenerate = true\nalpha_star = 0\nlambda_star = 0\nalternates = 0\n";
    result.files.push_back(write_output(cfg, "optimum.txt", summary));
    result.files.push_back(write_output(cfg, "denoised.csv", denoised_table(cfg, "optimize", path)));
    result.summary = "zero-noise model: denoised path equals the observation";
    return result;
  }
  require_noise(cfg);

  const auto opt = run_search(cfg, path, cfg.search.refine);
  const auto grid_best = best_point(opt.trace);
  const double scale_end = std::sqrt(cfg.model.variance(path.grid.back()));
  summary += fmt::format(
      "degenerate = false\nalpha_star = {}\nlambda_star = {}\nthreshold_x_units_at_end = {}\nsure_min = {}\n"
      "grid_alpha = {}\ngrid_lambda = {}\ngrid_sure = {}\ngradient_alpha = {}\ngradient_lambda = {}\n"
      "alternates = {}\n",
      format_number(opt.alpha_star), format_number(opt.lambda_star), format_number(opt.lambda_star * scale_end),
      format_number(opt.sure_min), format_number(grid_best.alpha), format_number(grid_best.lambda),
      format_number(grid_best.sure), format_number(opt.gradient_at_min[0]), format_number(opt.gradient_at_min[1]),
      opt.alternates.size());
  for (std::size_t k = 0; k < opt.alternates.size(); ++k) {
    const auto& a = opt.alternates[k];
    summary += fmt::format("alternate_{} = alpha={} lambda={} sure={}\n", k, format_number(a.alpha),
                           format_number(a.lambda), format_number(a.sure));
  }

  const ThresholdSpec spec{ThresholdKind::Soft, centre_of(cfg, opt.alpha_star), opt.lambda_star};
  const auto estimate = apply_estimator(path, spec, cfg.model);

  std::string trace = cfg.header("optimize") + "\nalpha,lambda,sure,baseline,quadratic,correction,stage\n";
  for (const auto& p : opt.trace) trace += trace_row(p) + ",grid\n";
  for (const auto& p : opt.refinement) trace += trace_row(p) + ",refine\n";

  result.files.push_back(write_output(cfg, "optimum.txt", summary));
  result.files.push_back(write_output(cfg, "denoised.csv", denoised_table(cfg, "optimize", estimate)));
  result.files.push_back(write_output(cfg, "trace.csv", trace));
  result.summary = fmt::format("alpha* = {}, lambda* = {}, SURE min = {}, {} alternates", format_number(opt.alpha_star),
                               format_number(opt.lambda_star), format_number(opt.sure_min), opt.alternates.size());
  return result;
}

CommandResult cmd_denoise(const ScenarioConfig& cfg) {
  const auto path = obtain_path(cfg);
  const auto estimate = apply_estimator(path, cfg.denoise, cfg.model);
  CommandResult result;
  result.files.push_back(write_output(cfg, "denoised.csv", denoised_table(cfg, "denoise", estimate)));
  result.summary = fmt::format("{} threshold, centre {}, lambda {}",
                               cfg.denoise.kind == ThresholdKind::Soft ? "soft" : "hard", cfg.denoise.alpha.id(),
                               format_number(cfg.denoise.lambda));
  return result;
}

CommandResult cmd_validate(const ScenarioConfig& cfg) {
  const auto report = run_validation(cfg);
  CommandResult result;
  result.files.push_back(write_output(cfg, "validation.txt", cfg.header("validate") + "\n" + report.to_text()));
  result.files.push_back(write_output(cfg, "validation.csv", cfg.header("validate") + "\n" + report.to_csv()));
  result.exit_code = report.all_passed() ? 0 : 1;
  result.summary = report.to_text();
  return result;
}

CommandResult run_command(const ScenarioConfig& cfg) {
  switch (cfg.command) {
    case Command::Simulate: return cmd_simulate(cfg);
    case Command::Sweep: return cmd_sweep(cfg);
    case Command::Optimize: return cmd_optimize(cfg);
    case Command::Denoise: return cmd_denoise(cfg);
    case Command::Validate: return cmd_validate(cfg);
  }
  throw ValidationError("unknown command");
}

}  // namespace suregp
