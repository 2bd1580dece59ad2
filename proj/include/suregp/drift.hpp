#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace suregp {

/// The experiment drifts:
///   simple: 0.2·max(0, sin 3πt)
///   level:  0.3 + 0.2·sign(sin 2πt)·max(0, sin 3πt)
///   slope:  0.3t + 0.2·sign(sin 2πt)·max(0, sin 3πt)
enum class Scenario { Simple, Level, Slope };

Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

/// Deterministic function of time, used both as a true drift u_t and as a shrinkage centre α(t).
class DriftFunction {
 public:
  enum class Kind { Zero, Constant, Linear, Tabulated, Scenario };

  DriftFunction() = default;

  static DriftFunction zero() { return {}; }
  static DriftFunction constant(double level);
  static DriftFunction linear(double slope);
  /// Linear interpolation of `values` on `grid`; only evaluable on [grid.front(), grid.back()].
  static DriftFunction tabulated(std::vector<double> grid, std::vector<double> values);
  static DriftFunction scenario(Scenario s);

  Kind kind() const { return kind_; }
  /// Level for Constant, slope for Linear.
  double parameter() const { return param_; }

  double operator()(double t) const;

  /// Values at every grid time. A Tabulated drift must have been built on a grid of the same length.
  std::vector<double> on_grid(std::span<const double> grid) const;

  std::string id() const;

 private:
  struct Table {
    std::vector<double> grid;
    std::vector<double> values;
  };

  Kind kind_ = Kind::Zero;
  double param_ = 0.0;
  Scenario scenario_ = Scenario::Simple;
  std::shared_ptr<const Table> table_;
};

}  // namespace suregp
