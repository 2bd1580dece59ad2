#include "suregp/config.hpp"

#include "suregp/error.hpp"
#include "suregp/montecarlo.hpp"
#include "suregp/simulate.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace suregp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ValidationError(fmt::format("{}: expected a finite number, got '{}'", key, text));
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  return static_cast<std::size_t>(to_u64(key, text));
}

bool to_bool(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  return out;
}

unsigned to_statistics(const std::string& key, const std::string& text) {
  unsigned flags = 0;
  for (const auto& item : split_list(text)) {
    if (item == "unbiasedness") flags |= kUnbiasedness;
    else if (item == "risk_bound") flags |= kRiskBound;
    else if (item == "coverage") flags |= kCoverage;
    else if (item == "baseline_efficiency") flags |= kBaselineEfficiency;
    else if (item == "all") flags |= kAllStatistics;
    else throw ValidationError(fmt::format("{}: unknown statistic '{}'", key, item));
  }
  return flags;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "sweep") return Command::Sweep;
  if (name == "optimize") return Command::Optimize;
  if (name == "denoise") return Command::Denoise;
  if (name == "validate") return Command::Validate;
  throw ValidationError("unknown command '" + name + "' (simulate, sweep, optimize, denoise, validate)");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Optimize: return "optimize";
    case Command::Denoise: return "denoise";
    case Command::Validate: return "validate";
  }
  return "?";
}

const std::map<std::string, std::string>& config_schema() {
  // Empty defaults are filled in per scenario by resolve_config.
  static const std::map<std::string, std::string> schema{
      {"run.scenario", "simple"},
      {"run.command", "optimize"},
      {"run.seed", "1"},
      {"run.out", "out"},
      {"run.input", ""},
      {"model.kind", "ou"},
      {"model.rate", "0.5"},
      {"model.sigma", "0.05"},
      {"model.horizon", "1"},
      {"model.start_offset", ""},
      {"grid.n_points", "1000"},
      {"grid.start", ""},
      {"drift.kind", ""},
      {"drift.value", "0"},
      {"measure.kind", "canonical"},
      {"search.centre", ""},
      {"search.alpha", "0"},
      {"search.lambda_max", "3"},
      {"search.n_lambda", "200"},
      {"search.alpha_min", "0"},
      {"search.alpha_max", "0.6"},
      {"search.n_alpha", "60"},
      {"search.n_lambda_joint", "60"},
      {"search.refine", "true"},
      {"search.alternate_tolerance", "0.05"},
      {"search.level_bandwidth", ""},
      {"denoise.kind", "soft"},
      {"denoise.centre", "level"},
      {"denoise.alpha", "0"},
      {"denoise.lambda", "1"},
      {"validate.n_reps", "400"},
      {"validate.statistics", "all"},
      {"validate.soft_lambdas", "0.3,1.0"},
      {"validate.hard_lambdas", "0.5"},
      {"validate.bound_lambdas", "0.5,1,2"},
      {"validate.coverage_r", "1.5"},
      {"validate.coverage_horizons", "10,100,1000"},
      {"validate.coverage_step", "0.05"},
  };
  return schema;
}

ConfigEntries parse_config_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  const auto& schema = config_schema();
  ConfigEntries entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("config: key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!schema.contains(full)) throw ValidationError("config: unknown key '" + full + "'");
      entries[full] = trim(value.get_value<std::string>());
    }
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ScenarioConfig::header(const std::string& cmd) const {
  return fmt::format("# suregp {} config_hash={:016x} seed={}", cmd, hash, seed);
}

Overrides with_environment(Overrides base) {
  if (!base.seed) {
    if (const char* s = std::getenv("SURE_SEED"); s && *s) base.seed = to_u64("SURE_SEED", s);
  }
  if (!base.out_dir) {
    if (const char* s = std::getenv("SURE_OUT"); s && *s) base.out_dir = std::string(s);
  }
  return base;
}

ScenarioConfig resolve_config(const ConfigEntries& entries, const Overrides& overrides) {
  const auto& schema = config_schema();
  for (const auto& [key, value] : entries) {
    if (!schema.contains(key)) throw ValidationError("config: unknown key '" + key + "'");
  }
  std::map<std::string, std::string> v;
  for (const auto& [key, def] : schema) {
    const auto it = entries.find(key);
    v[key] = it != entries.end() ? it->second : def;
  }

  ScenarioConfig cfg;
  cfg.scenario = v["run.scenario"];
  const bool custom = cfg.scenario == "custom";
  std::optional<Scenario> named;
  if (!custom) named = parse_scenario(cfg.scenario);

  cfg.command = parse_command(overrides.command ? *overrides.command : v["run.command"]);
  cfg.seed = overrides.seed ? *overrides.seed : to_u64("run.seed", v["run.seed"]);
  cfg.out_dir = overrides.out_dir ? *overrides.out_dir : v["run.out"];
  if (cfg.out_dir.empty()) throw ValidationError("run.out must not be empty");
  if (!v["run.input"].empty()) cfg.input_path = v["run.input"];

  // Noise model.
  const double horizon = to_double("model.horizon", v["model.horizon"]);
  const double sigma = to_double("model.sigma", v["model.sigma"]);
  if (v["model.kind"] == "ou") {
    cfg.model = CovarianceModel::ornstein_uhlenbeck(to_double("model.rate", v["model.rate"]), sigma, horizon);
  } else if (v["model.kind"] == "brownian") {
    const double offset = v["model.start_offset"].empty() ? -1.0 : to_double("model.start_offset", v["model.start_offset"]);
    cfg.model = CovarianceModel::brownian(sigma, horizon, offset);
  } else {
    throw ValidationError("model.kind must be ou or brownian, got '" + v["model.kind"] + "'");
  }

  // Observation grid. The slope centre divides by t, so its default grid skips t = 0.
  const std::size_t n = to_count("grid.n_points", v["grid.n_points"]);
  if (n < 2) throw DomainError("grid.n_points must be at least 2");
  std::string centre = v["search.centre"];
  if (centre.empty()) centre = named == Scenario::Level ? "level" : named == Scenario::Slope ? "slope" : "fixed";
  if (centre == "fixed") cfg.centre = CentreSearch::Fixed;
  else if (centre == "level") cfg.centre = CentreSearch::Level;
  else if (centre == "slope") cfg.centre = CentreSearch::Slope;
  else throw ValidationError("search.centre must be fixed, level or slope, got '" + centre + "'");

  double start = cfg.model.start();
  if (!v["grid.start"].empty()) {
    start = to_double("grid.start", v["grid.start"]);
  } else if (cfg.centre == CentreSearch::Slope) {
    start = cfg.model.start() + (horizon - cfg.model.start()) / static_cast<double>(n);
  }
  if (!(start >= cfg.model.start() && start < horizon))
    throw DomainError(fmt::format("grid.start must lie in [{}, {})", cfg.model.start(), horizon));
  cfg.grid = uniform_grid(start, horizon, n);

  // True drift.
  std::string drift_kind = v["drift.kind"];
  if (drift_kind.empty()) drift_kind = custom ? "zero" : cfg.scenario;
  const double drift_value = to_double("drift.value", v["drift.value"]);
  if (drift_kind == "zero") cfg.drift = DriftFunction::zero();
  else if (drift_kind == "constant") cfg.drift = DriftFunction::constant(drift_value);
  else if (drift_kind == "linear") cfg.drift = DriftFunction::linear(drift_value);
  else cfg.drift = DriftFunction::scenario(parse_scenario(drift_kind));

  // Risk measure.
  if (cfg.model.degenerate()) {
    cfg.measure = RiskMeasure::lebesgue(cfg.model.start(), horizon);
  } else if (v["measure.kind"] == "canonical") {
    cfg.measure = RiskMeasure::canonical(cfg.model);
  } else if (v["measure.kind"] == "lebesgue") {
    cfg.measure = RiskMeasure::lebesgue(cfg.model.start(), horizon);
  } else {
    throw ValidationError("measure.kind must be canonical or lebesgue, got '" + v["measure.kind"] + "'");
  }

  // Search space.
  cfg.fixed_alpha = to_double("search.alpha", v["search.alpha"]);
  cfg.search.lambda_max = to_double("search.lambda_max", v["search.lambda_max"]);
  cfg.search.n_lambda = to_count("search.n_lambda", v["search.n_lambda"]);
  cfg.search.alpha_min = to_double("search.alpha_min", v["search.alpha_min"]);
  cfg.search.alpha_max = to_double("search.alpha_max", v["search.alpha_max"]);
  cfg.search.n_alpha = to_count("search.n_alpha", v["search.n_alpha"]);
  cfg.search.n_lambda_joint = to_count("search.n_lambda_joint", v["search.n_lambda_joint"]);
  cfg.search.refine = to_bool("search.refine", v["search.refine"]);
  cfg.search.alternate_tolerance = to_double("search.alternate_tolerance", v["search.alternate_tolerance"]);
  if (!(cfg.search.alternate_tolerance >= 0.0)) throw DomainError("search.alternate_tolerance must be >= 0");
  if (!(cfg.search.lambda_max > 0.0)) throw DomainError("search.lambda_max must be > 0");
  if (cfg.search.n_lambda < 2 || cfg.search.n_lambda_joint < 2) throw DomainError("λ grids need at least 2 points");
  if (cfg.search.n_alpha < 1 || !(cfg.search.alpha_max >= cfg.search.alpha_min))
    throw DomainError("α search range is empty");
  cfg.level_bandwidth =
      v["search.level_bandwidth"].empty() ? 0.0 : to_double("search.level_bandwidth", v["search.level_bandwidth"]);
  if (cfg.level_bandwidth < 0.0) throw DomainError("search.level_bandwidth must be >= 0");

  // Fixed estimator for the denoise command.
  if (v["denoise.kind"] == "soft") cfg.denoise.kind = ThresholdKind::Soft;
  else if (v["denoise.kind"] == "hard") cfg.denoise.kind = ThresholdKind::Hard;
  else throw ValidationError("denoise.kind must be soft or hard");
  AlphaVariant denoise_variant = AlphaVariant::Level;
  if (v["denoise.centre"] == "slope") denoise_variant = AlphaVariant::Slope;
  else if (v["denoise.centre"] != "level") throw ValidationError("denoise.centre must be level or slope");
  cfg.denoise.alpha = make_alpha(denoise_variant, to_double("denoise.alpha", v["denoise.alpha"]));
  cfg.denoise.lambda = to_double("denoise.lambda", v["denoise.lambda"]);
  if (cfg.denoise.lambda < 0.0) throw DomainError("denoise.lambda must be >= 0");

  // Validation suite.
  cfg.n_reps = to_count("validate.n_reps", v["validate.n_reps"]);
  if (cfg.n_reps < 2) throw DomainError("validate.n_reps must be at least 2");
  cfg.statistics = to_statistics("validate.statistics", v["validate.statistics"]);
  cfg.soft_lambdas = to_doubles("validate.soft_lambdas", v["validate.soft_lambdas"]);
  cfg.hard_lambdas = to_doubles("validate.hard_lambdas", v["validate.hard_lambdas"]);
  cfg.bound_lambdas = to_doubles("validate.bound_lambdas", v["validate.bound_lambdas"]);
  cfg.coverage_r = to_double("validate.coverage_r", v["validate.coverage_r"]);
  cfg.coverage_horizons = to_doubles("validate.coverage_horizons", v["validate.coverage_horizons"]);
  cfg.coverage_step = to_double("validate.coverage_step", v["validate.coverage_step"]);
  if (!(cfg.coverage_step > 0.0)) throw DomainError("validate.coverage_step must be > 0");

  std::string canonical;
  for (const auto& [key, value] : v) {
    if (key == "run.seed" || key == "run.out" || key == "run.command") continue;
    canonical += key + "=" + value + "\n";
  }
  cfg.canonical_text = std::move(canonical);
  cfg.hash = fnv1a(cfg.canonical_text);
  return cfg;
}

}  // namespace suregp
