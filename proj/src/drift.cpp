#include "suregp/drift.hpp"

#include "suregp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace suregp {

namespace {

double sign(double x) { return static_cast<double>((0.0 < x) - (x < 0.0)); }

double bump(double t) { return std::max(0.0, std::sin(3.0 * std::numbers::pi * t)); }

}  // namespace

Scenario parse_scenario(std::string_view name) {
  if (name == "simple") return Scenario::Simple;
  if (name == "level") return Scenario::Level;
  if (name == "slope") return Scenario::Slope;
  throw ValidationError("unknown scenario '" + std::string(name) + "' (expected simple, level or slope)");
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Simple: return "simple";
    case Scenario::Level: return "level";
    case Scenario::Slope: return "slope";
  }
  return "simple";
}

DriftFunction DriftFunction::constant(double level) {
  DriftFunction d;
  d.kind_ = Kind::Constant;
  d.param_ = level;
  return d;
}

DriftFunction DriftFunction::linear(double slope) {
  DriftFunction d;
  d.kind_ = Kind::Linear;
  d.param_ = slope;
  return d;
}

DriftFunction DriftFunction::tabulated(std::vector<double> grid, std::vector<double> values) {
  if (grid.empty() || grid.size() != values.size())
    throw ValidationError("tabulated drift needs matching non-empty grid and values");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("tabulated drift grid must be strictly increasing");
  DriftFunction d;
  d.kind_ = Kind::Tabulated;
  d.table_ = std::make_shared<const Table>(Table{std::move(grid), std::move(values)});
  return d;
}

DriftFunction DriftFunction::scenario(Scenario s) {
  DriftFunction d;
  d.kind_ = Kind::Scenario;
  d.scenario_ = s;
  return d;
}

double DriftFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return param_;
    case Kind::Linear: return param_ * t;
    case Kind::Scenario: {
      const double shape = 0.2 * bump(t);
      switch (scenario_) {
        case Scenario::Simple: return shape;
        case Scenario::Level: return 0.3 + sign(std::sin(2.0 * std::numbers::pi * t)) * shape;
        case Scenario::Slope: return 0.3 * t + sign(std::sin(2.0 * std::numbers::pi * t)) * shape;
      }
      return 0.0;
    }
    case Kind::Tabulated: {
      const auto& g = table_->grid;
      const auto& v = table_->values;
      if (t < g.front() || t > g.back()) {
        std::ostringstream msg;
        msg << "tabulated drift evaluated at t=" << t << " outside its grid";
        throw DomainError(msg.str());
      }
      if (g.size() == 1) return v.front();
      auto it = std::upper_bound(g.begin(), g.end(), t);
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - g.begin()) - 1, g.size() - 2);
      if (t == g[i]) return v[i];
      const double w = (t - g[i]) / (g[i + 1] - g[i]);
      return (1.0 - w) * v[i] + w * v[i + 1];
    }
  }
  return 0.0;
}

std::vector<double> DriftFunction::on_grid(std::span<const double> grid) const {
  if (kind_ == Kind::Tabulated && table_->grid.size() != grid.size())
    throw ValidationError("tabulated drift length does not match the grid length");
  std::vector<double> out(grid.size());
  if (kind_ == Kind::Tabulated && std::equal(grid.begin(), grid.end(), table_->grid.begin())) {
    out = table_->values;
    return out;
  }
  std::transform(grid.begin(), grid.end(), out.begin(), [this](double t) { return (*this)(t); });
  return out;
}

std::string DriftFunction::id() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::Zero: out << "zero"; break;
    case Kind::Constant: out << "constant(" << param_ << ")"; break;
    case Kind::Linear: out << "linear(" << param_ << ")"; break;
    case Kind::Tabulated: out << "tabulated(n=" << table_->grid.size() << ")"; break;
    case Kind::Scenario: out << "scenario(" << scenario_name(scenario_) << ")"; break;
  }
  return out.str();
}

}  // namespace suregp
