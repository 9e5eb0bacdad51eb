#pragma once

#include "vmdg/diagnostics.hpp"
#include "vmdg/scenarios.hpp"
#include "vmdg/timestepper.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vmdg {

struct RunConfig {
  std::string scenario = "free_streaming";
  int k = 2;
  int nx = 0;               ///< 0: scenario default
  std::vector<int> nv;      ///< per v axis; one entry is broadcast; empty: scenario default
  double cfl = 0.0;         ///< <= 0: 0.3 / (2k + 1)
  double t_final = 1.0;
  MaxwellFluxKind flux = MaxwellFluxKind::upwind;
  std::optional<VelocityMapping> mapping;  ///< empty: scenario default
  long stride = 1;
  std::string output;       ///< empty or "-": stdout
  std::uint64_t seed = 7;
  bool adaptive_dt = false;
  bool sources = true;
};

enum class StudyMode { spatial, temporal, coupled };

StudyMode parse_study_mode(std::string_view name);
VelocityMapping parse_mapping(std::string_view name);
std::string to_string(VelocityMapping m);

struct StudyConfig {
  RunConfig base;
  int levels = 4;
  StudyMode mode = StudyMode::spatial;
};

/// Everything needed to start a run, derived from a RunConfig.
struct Setup {
  Scenario scenario;
  RunConfig config;
  VelocityMapping mapping;
  std::shared_ptr<const PhaseSpace> phase;
  std::shared_ptr<const FieldSpace> field;
  std::shared_ptr<const VlasovMaxwellSystem> system;
  CoupledState initial;
  CflPolicy policy;
  double rho_i = 0.0;
  /// Refinement length used in convergence tables.
  double h = 0.0;
};

/// Returns the warning text when k is below ceil((d_x + 1) / 2), else empty.
std::string theory_regime_warning(int k);

/// Throws std::invalid_argument on inconsistent configuration.
Setup make_setup(const RunConfig& config);

struct RunOutput {
  std::vector<DiagnosticRecord> records;
  RunResult result;
};

/// Throws BlowUpError on nonfinite states.
RunOutput run_simulation(const RunConfig& config);
RunOutput run_simulation(const Setup& setup, std::optional<double> tau = std::nullopt);

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  /// Divergence residual ||d_x E1 - (rho_h - rho_i)|| at t_final per level.
  std::vector<double> div_e;
  /// Temporal mode: error of the reference solution against the exact one.
  std::optional<double> spatial_error;
  std::optional<bool> pollution_check_passed;
  std::vector<std::string> notes;

  /// Final-row EOC of sqrt(err_f^2 + err_E^2 + err_B^2).
  double combined_eoc() const;
};

/// Refinement ladder. Spatial mode keeps tau proportional to h for k <= 2
/// and shrinks it like h^((k+1/2)/3) for k >= 3; coupled mode always keeps
/// tau proportional to h; temporal mode halves tau on the base mesh and
/// measures errors against a reference run with tau / 8 of the finest level.
/// Every scenario with an exact solution must pass verify_scenario first.
StudyResult converge(const StudyConfig& study);

struct IdentityCase {
  std::string name;
  int trials = 0;
  int passes = 0;
  double worst = 0.0;  ///< largest normalized defect seen
};

struct IdentityReport {
  std::vector<IdentityCase> cases;
  bool all_passed() const;
};

/// Randomized a_h dissipation identity (k in {0,1,2} x {1D1V, 1D2V}) and
/// Maxwell energy identities (upwind, central, both alternating).
IdentityReport verify_identities(std::uint64_t seed, int trials, double tolerance = 1e-10);

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticRecord>& records);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

/// Random coefficients in [-1, 1] (deterministic for a given engine state).
template <class Engine>
Eigen::VectorXd random_coefficients(Index n, Engine& rng);

}  // namespace vmdg

#include <random>

namespace vmdg {

template <class Engine>
Eigen::VectorXd random_coefficients(Index n, Engine& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace vmdg
