#pragma once

#include "vmdg/fields.hpp"
#include "vmdg/maxwell.hpp"
#include "vmdg/projection.hpp"
#include "vmdg/timestepper.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace vmdg {

struct DiagnosticRecord {
  double time = 0.0;
  double l2_f = 0.0;
  double l2_E = 0.0;
  double l2_B = 0.0;
  double mass = 0.0;
  double energy_kinetic = 0.0;
  double energy_em = 0.0;
  double div_E_residual = 0.0;
  double div_B_residual = 0.0;
  std::optional<double> min_cell_value;
};

/// sqrt(sum_K sum_q w (u_h - exact)^2) with a (k+4)-point tensor rule.
double l2_error(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                const Eigen::Ref<const Eigen::VectorXd>& coeffs, const ScalarFunction& exact);

double l2_error(const DistributionField& f, const ScalarFunction& exact);

struct FieldErrors {
  double e = 0.0;
  double b = 0.0;
};

/// Errors of the active components only.
FieldErrors l2_error(const EMField& em, const VectorFunction& exact_e, const VectorFunction& exact_b);

/// int f dx dv.
double total_mass(const DistributionField& f);

struct Energy {
  double kinetic = 0.0;
  double electromagnetic = 0.0;
};

/// kinetic = int f |v|^2 (classical) or int f (sqrt(1+|v|^2) - 1)
/// (relativistic); electromagnetic = int |E|^2 + |B|^2.
Energy total_energy(const DistributionField& f, const EMField& em, VelocityMapping mapping);

struct DivergenceResiduals {
  double div_e = 0.0;   ///< || d_x E1 - (rho_h - rho_i) || over cells
  double div_b = 0.0;   ///< || d_x B1 || over cells
  double jump_e = 0.0;  ///< L2 norm of the normal jumps [E1] over faces
  double jump_b = 0.0;  ///< same for B1
};

DivergenceResiduals divergence_residuals(const EMField& em, const MomentPair& moments, double rho_i);

/// Smallest value of f at the assembly quadrature nodes.
double min_node_value(const DistributionField& f);

DiagnosticRecord collect_diagnostics(const CoupledState& state, VelocityMapping mapping, double rho_i,
                                     bool with_min_value = false);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  double err_f = 0.0;
  double err_E = 0.0;
  double err_B = 0.0;
  double eoc_f = 0.0;
  double eoc_E = 0.0;
  double eoc_B = 0.0;
};

enum class RefinementParameter { h, tau };

/// Fills the eoc_* columns: log(err_prev / err) / log(p_prev / p) for the
/// chosen refinement parameter p (log2 of the error ratio for dyadic
/// refinement). Undefined entries (first row, nonpositive errors) are NaN.
std::vector<ConvergenceRow> eoc(std::vector<ConvergenceRow> rows,
                                RefinementParameter by = RefinementParameter::h);

/// Single-column variant.
double eoc(double err_coarse, double err_fine, double ratio = 2.0);

}  // namespace vmdg
