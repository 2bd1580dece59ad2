#include "suregp/commands.hpp"
#include "suregp/config.hpp"
#include "suregp/error.hpp"
#include "suregp/montecarlo.hpp"
#include "suregp/optimize.hpp"
#include "suregp/pathstats.hpp"
#include "suregp/shrinkage.hpp"
#include "suregp/simulate.hpp"
#include "suregp/sure.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace suregp;

namespace {

std::vector<double> as_vector(const py::iterable& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(py::cast<double>(x));
  return out;
}

SamplePath make_path(const py::iterable& grid, const py::iterable& values) {
  SamplePath p{as_vector(grid), as_vector(values), {}};
  validate_path(p);
  return p;
}

}  // namespace

PYBIND11_MODULE(_suregp, m) {
  m.doc() = "SURE-tuned threshold denoising of Gaussian-process paths";

  auto base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<TypeError>(m, "TypeError", PyExc_TypeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)base;

  py::enum_<Scenario>(m, "Scenario")
      .value("Simple", Scenario::Simple)
      .value("Level", Scenario::Level)
      .value("Slope", Scenario::Slope);
  py::enum_<ThresholdKind>(m, "ThresholdKind").value("Soft", ThresholdKind::Soft).value("Hard", ThresholdKind::Hard);
  py::enum_<AlphaVariant>(m, "AlphaVariant").value("Level", AlphaVariant::Level).value("Slope", AlphaVariant::Slope);

  py::class_<CovarianceModel>(m, "CovarianceModel")
      .def_static("ornstein_uhlenbeck", &CovarianceModel::ornstein_uhlenbeck, py::arg("rate"), py::arg("sigma"),
                  py::arg("horizon"))
      .def_static("brownian", static_cast<CovarianceModel (*)(double, double, double)>(&CovarianceModel::brownian),
                  py::arg("sigma"), py::arg("horizon"),
                  py::arg("start_offset") = -1.0)
      .def("__call__", &CovarianceModel::operator(), py::arg("s"), py::arg("t"))
      .def("variance", &CovarianceModel::variance, py::arg("t"))
      .def_property_readonly("horizon", &CovarianceModel::horizon)
      .def_property_readonly("start", &CovarianceModel::start)
      .def_property_readonly("degenerate", &CovarianceModel::degenerate)
      .def("__repr__", &CovarianceModel::id);

  py::class_<RiskMeasure>(m, "RiskMeasure")
      .def_static("lebesgue", &RiskMeasure::lebesgue, py::arg("lower"), py::arg("upper"))
      .def_static("canonical", &RiskMeasure::canonical, py::arg("model"))
      .def_static("density", &RiskMeasure::density, py::arg("f"), py::arg("lower"), py::arg("upper"),
                  py::arg("name") = "density")
      .def("is_canonical", &RiskMeasure::is_canonical)
      .def("__repr__", &RiskMeasure::id);
  m.def("baseline_risk", &baseline_risk, py::arg("model"), py::arg("measure"));

  py::class_<DriftFunction>(m, "DriftFunction")
      .def_static("zero", &DriftFunction::zero)
      .def_static("constant", &DriftFunction::constant, py::arg("level"))
      .def_static("linear", &DriftFunction::linear, py::arg("slope"))
      .def_static("scenario", &DriftFunction::scenario, py::arg("scenario"))
      .def_static("tabulated", &DriftFunction::tabulated, py::arg("grid"), py::arg("values"))
      .def("__call__", &DriftFunction::operator(), py::arg("t"))
      .def("__repr__", &DriftFunction::id);

  py::class_<SamplePath>(m, "SamplePath")
      .def(py::init(&make_path), py::arg("grid"), py::arg("values"))
      .def_readonly("grid", &SamplePath::grid)
      .def_readonly("values", &SamplePath::values)
      .def_property_readonly("seed", [](const SamplePath& p) { return p.meta.seed; })
      .def_property_readonly("drift", [](const SamplePath& p) { return p.meta.drift; })
      .def("__len__", [](const SamplePath& p) { return p.grid.size(); });

  m.def("uniform_grid", &uniform_grid, py::arg("start"), py::arg("end"), py::arg("n"));
  using Grid = const std::vector<double>&;
  m.def("simulate", [](const CovarianceModel& c, const DriftFunction& d, Grid g, std::uint64_t seed) {
        return simulate(c, d, g, seed);
      }, py::arg("model"), py::arg("drift"), py::arg("grid"), py::arg("seed"));
  m.def("simulate_ou", [](const CovarianceModel& c, const DriftFunction& d, Grid g, std::uint64_t seed) {
        return simulate_ou(c, d, g, seed);
      }, py::arg("model"), py::arg("drift"), py::arg("grid"), py::arg("seed"));
  m.def("simulate_cholesky", [](const CovarianceModel& c, const DriftFunction& d, Grid g, std::uint64_t seed) {
        return simulate_cholesky(c, d, g, seed);
      }, py::arg("model"), py::arg("drift"), py::arg("grid"), py::arg("seed"));
  m.def("simulate_kl",
        [](const CovarianceModel& c, const DriftFunction& d, Grid g, std::size_t n_terms, std::uint64_t seed) {
          return simulate_kl(c, d, g, n_terms, seed);
        },
        py::arg("model"), py::arg("drift"), py::arg("grid"), py::arg("n_terms"), py::arg("seed"));

  py::class_<StandardizedPath>(m, "StandardizedPath")
      .def_static("from_values", &StandardizedPath::from_values, py::arg("grid"), py::arg("z"))
      .def_readonly("grid", &StandardizedPath::grid)
      .def_readonly("z", &StandardizedPath::z);
  m.def("standardize", &standardize, py::arg("path"), py::arg("alpha"), py::arg("model"));
  m.def("occupation_time", &occupation_time, py::arg("z"), py::arg("lam"));
  m.def("clipped_square_integral", &clipped_square_integral, py::arg("z"), py::arg("lam"));

  py::class_<LocalTimeEstimate>(m, "LocalTimeEstimate")
      .def_readonly("level", &LocalTimeEstimate::level)
      .def_readonly("occupation", &LocalTimeEstimate::occupation)
      .def_readonly("local_time", &LocalTimeEstimate::local_time)
      .def_readonly("bandwidth", &LocalTimeEstimate::bandwidth)
      .def_readonly("bandwidth_warning", &LocalTimeEstimate::bandwidth_warning);
  m.def("default_bandwidth", &default_bandwidth, py::arg("z"));
  m.def("local_time", &local_time, py::arg("z"), py::arg("lam"), py::arg("bandwidth"));

  py::class_<SureReport>(m, "SureReport")
      .def_readonly("value", &SureReport::value)
      .def_readonly("baseline", &SureReport::baseline)
      .def_readonly("quadratic", &SureReport::quadratic)
      .def_readonly("correction", &SureReport::correction)
      .def_readonly("lam", &SureReport::lambda)
      .def_readonly("bandwidth", &SureReport::bandwidth)
      .def_readonly("bandwidth_warning", &SureReport::bandwidth_warning);
  m.def("sure_soft", &sure_soft, py::arg("path"), py::arg("alpha"), py::arg("lam"), py::arg("model"),
        py::arg("measure"));
  m.def("sure_soft_occupation",
        py::overload_cast<const SamplePath&, const DriftFunction&, double, const CovarianceModel&>(
            &sure_soft_occupation),
        py::arg("path"), py::arg("alpha"), py::arg("lam"), py::arg("model"));
  m.def("sure_hard",
        py::overload_cast<const SamplePath&, const DriftFunction&, double, const CovarianceModel&,
                          std::optional<double>>(&sure_hard),
        py::arg("path"), py::arg("alpha"), py::arg("lam"), py::arg("model"), py::arg("bandwidth") = py::none());
  m.def("sure_generic", &sure_generic, py::arg("path"), py::arg("xi"), py::arg("dxi"), py::arg("model"),
        py::arg("measure"));
  m.def("sure_grad_lambda",
        py::overload_cast<const SamplePath&, const DriftFunction&, double, const CovarianceModel&, double>(
            &sure_grad_lambda),
        py::arg("path"), py::arg("alpha"), py::arg("lam"), py::arg("model"), py::arg("bandwidth"));
  m.def("sure_grad_alpha", &sure_grad_alpha, py::arg("path"), py::arg("alpha"), py::arg("lam"), py::arg("model"),
        py::arg("variant"), py::arg("bandwidth"));
  m.def("squared_error", [](const SamplePath& e, Grid truth, const RiskMeasure& mu) { return squared_error(e, truth, mu); },
        py::arg("estimate"), py::arg("truth"), py::arg("measure"));

  py::class_<ThresholdSpec>(m, "ThresholdSpec")
      .def(py::init([](ThresholdKind kind, DriftFunction alpha, double lam) {
             return ThresholdSpec{kind, std::move(alpha), lam};
           }),
           py::arg("kind"), py::arg("alpha"), py::arg("lam"))
      .def_readwrite("kind", &ThresholdSpec::kind)
      .def_readwrite("alpha", &ThresholdSpec::alpha)
      .def_readwrite("lam", &ThresholdSpec::lambda);
  m.def("shrink", &shrink, py::arg("kind"), py::arg("x"), py::arg("centre"), py::arg("band"));
  m.def("apply_estimator", &apply_estimator, py::arg("path"), py::arg("spec"), py::arg("model"));

  py::class_<LevelBound>(m, "LevelBound")
      .def_readonly("value", &LevelBound::value)
      .def_readonly("warning", &LevelBound::warning);
  m.def("c_of_t", &c_of_t, py::arg("horizon"), py::arg("r"), py::arg("floor") = 3.0);

  py::class_<SearchSpace>(m, "SearchSpace")
      .def(py::init<>())
      .def_readwrite("lambda_max", &SearchSpace::lambda_max)
      .def_readwrite("n_lambda", &SearchSpace::n_lambda)
      .def_readwrite("alpha_min", &SearchSpace::alpha_min)
      .def_readwrite("alpha_max", &SearchSpace::alpha_max)
      .def_readwrite("n_alpha", &SearchSpace::n_alpha)
      .def_readwrite("n_lambda_joint", &SearchSpace::n_lambda_joint)
      .def_readwrite("refine", &SearchSpace::refine)
      .def_readwrite("alternate_tolerance", &SearchSpace::alternate_tolerance);

  py::class_<TracePoint>(m, "TracePoint")
      .def_readonly("alpha", &TracePoint::alpha)
      .def_readonly("lam", &TracePoint::lambda)
      .def_readonly("sure", &TracePoint::sure);
  py::class_<OptimResult>(m, "OptimResult")
      .def_readonly("alpha_star", &OptimResult::alpha_star)
      .def_readonly("lambda_star", &OptimResult::lambda_star)
      .def_readonly("sure_min", &OptimResult::sure_min)
      .def_readonly("trace", &OptimResult::trace)
      .def_readonly("refinement", &OptimResult::refinement)
      .def_readonly("gradient_at_min", &OptimResult::gradient_at_min)
      .def_readonly("alternates", &OptimResult::alternates);
  m.def("minimize_lambda", &minimize_lambda, py::arg("path"), py::arg("alpha"), py::arg("space"), py::arg("model"));
  m.def("minimize_joint", &minimize_joint, py::arg("path"), py::arg("variant"), py::arg("space"), py::arg("model"));

  py::class_<McScenario>(m, "McScenario")
      .def_static("experiment", &McScenario::experiment, py::arg("scenario"), py::arg("n_points") = 1000)
      .def_readwrite("model", &McScenario::model)
      .def_readwrite("drift", &McScenario::drift)
      .def_readwrite("grid", &McScenario::grid)
      .def_readwrite("measure", &McScenario::measure);
  py::class_<McConfig>(m, "McConfig")
      .def(py::init([](const McScenario& sc, std::size_t n_reps, std::uint64_t seed_base) {
             return McConfig{n_reps, seed_base, sc, kAllStatistics};
           }),
           py::arg("scenario"), py::arg("n_reps") = 400, py::arg("seed_base") = 1)
      .def_readwrite("n_reps", &McConfig::n_reps)
      .def_readwrite("seed_base", &McConfig::seed_base);
  py::class_<McStatistic>(m, "McStatistic")
      .def_readonly("name", &McStatistic::name)
      .def_readonly("rule", &McStatistic::rule)
      .def_readonly("mean", &McStatistic::mean)
      .def_readonly("std_error", &McStatistic::std_error)
      .def_readonly("bound", &McStatistic::bound)
      .def_readonly("passed", &McStatistic::passed)
      .def_readonly("n_reps", &McStatistic::n_reps);
  py::class_<McReport>(m, "McReport")
      .def_readonly("statistics", &McReport::statistics)
      .def("all_passed", &McReport::all_passed)
      .def("find", &McReport::find, py::arg("name"), py::return_value_policy::reference_internal)
      .def("to_text", &McReport::to_text)
      .def("to_csv", &McReport::to_csv);
  py::class_<CoverageOptions>(m, "CoverageOptions")
      .def(py::init<>())
      .def_readwrite("r", &CoverageOptions::r)
      .def_readwrite("horizons", &CoverageOptions::horizons)
      .def_readwrite("time_step", &CoverageOptions::time_step)
      .def_readwrite("alpha", &CoverageOptions::alpha);

  m.def("run_unbiasedness", &run_unbiasedness, py::arg("config"), py::arg("spec"), py::arg("bandwidth") = py::none());
  m.def("run_risk_bound", [](const McConfig& c, const DriftFunction& a, Grid lams) { return run_risk_bound(c, a, lams); },
        py::arg("config"), py::arg("alpha"), py::arg("lambdas"));
  m.def("run_coverage", &run_coverage, py::arg("config"), py::arg("options"));
  m.def("run_baseline_efficiency", &run_baseline_efficiency, py::arg("config"));
  m.def("run_sure_efficiency", &run_sure_efficiency, py::arg("config"), py::arg("alpha"), py::arg("space"));

  m.def(
      "run_config",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out,
         std::optional<std::string> command) {
        const auto cfg = resolve_config(parse_config_text(text), Overrides{seed, out, command});
        const auto res = run_command(cfg);
        return py::make_tuple(res.exit_code, res.files, res.summary);
      },
      py::arg("text"), py::arg("seed") = py::none(), py::arg("out") = py::none(), py::arg("command") = py::none(),
      "Run a CLI command from INI text; returns (exit_code, files, summary).");
}
