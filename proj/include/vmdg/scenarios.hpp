#pragma once

#include "vmdg/fields.hpp"
#include "vmdg/projection.hpp"
#include "vmdg/timestepper.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vmdg {

struct ExactSolution {
  std::function<double(const Point&, double)> f;
  std::function<Vec3(double, double)> e;
  std::function<Vec3(double, double)> b;
};

/// Initial data, domain and optional closed-form solution of one run.
struct Scenario {
  std::string name;
  std::string description;
  int dim_v = 1;
  ComponentMask mask;
  VelocityMapping mapping = VelocityMapping::classical;
  AxisPartition x;
  std::vector<AxisPartition> v;
  /// Resolution the scenario is advertised for (cells per v axis).
  int coarsest_v_cells = 8;
  bool evolve_f = true;
  bool evolve_em = true;

  ScalarFunction f0;
  VectorFunction e0;
  VectorFunction b0;
  std::optional<ExactSolution> exact;
  SourceTerms sources;

  bool has_exact() const { return exact.has_value(); }
};

std::vector<std::string> scenario_names();

/// Throws std::invalid_argument for unknown names.
Scenario lookup(std::string_view name);

struct ScenarioReport {
  std::string name;
  bool has_exact = false;
  int points = 0;
  double max_relative_residual = 0.0;
  /// Distance from the numerical support of f0 (where f0 > 1e-12 max f0) to
  /// the v boundary, in coarsest-resolution v cells.
  double support_margin_cells = 0.0;
  bool passed = false;
};

/// Finite-difference spot check of the declared PDE (with sources) at random
/// space-time points, plus the support-margin check on f0.
ScenarioReport verify_scenario(const Scenario& s, int points = 100, std::uint64_t seed = 12345,
                               double tolerance = 1e-6);

}  // namespace vmdg
