#pragma once

#include "vmdg/fields.hpp"

#include <Eigen/Core>

#include <array>
#include <memory>
#include <string>
#include <string_view>

namespace vmdg {

enum class MaxwellFluxKind { upwind, central, alternating_EmBp, alternating_EpBm };

MaxwellFluxKind parse_flux_kind(std::string_view name);
std::string to_string(MaxwellFluxKind kind);

/// Charge and current densities projected on the spatial DG space; each
/// vector is laid out [cell][mode]. j holds J1..J3 (J3 is always zero for
/// d_v <= 2).
struct MomentPair {
  std::shared_ptr<const FieldSpace> space;
  Eigen::VectorXd rho;
  std::array<Eigen::VectorXd, 3> j;

  static MomentPair zero(std::shared_ptr<const FieldSpace> space);
};

/// v-integrals of f and f * u(v), tested against the spatial basis. Exact
/// for the classical mapping (polynomial integrand of degree <= 2k+1).
MomentPair compute_moments(const DistributionField& f, VelocityMapping mapping,
                           std::shared_ptr<const FieldSpace> field_space);

/// Constant rho_i = (int rho_h dx) / |Omega_x| making the system neutral.
double background_density(const MomentPair& moments, const AxisPartition& x);

/// Throws std::invalid_argument unless every tangential pair (E2, B3) and
/// (E3, B2) is either fully active or fully inactive, since the curl couples
/// the two members of a pair and no flux kind can be formed from one alone.
void validate_flux_mask(const ComponentMask& mask, MaxwellFluxKind flux);

/// DG residual of Ampere-Faraday in one space dimension. The returned
/// coefficients R satisfy R . (U, V) = b_h(E, B, f; U, V).
class MaxwellOperator {
 public:
  MaxwellOperator(std::shared_ptr<const FieldSpace> space, MaxwellFluxKind flux);

  MaxwellFluxKind flux() const { return flux_; }

  void apply(const EMField& em, const MomentPair& moments, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const EMField& em, const MomentPair& moments) const;

 private:
  std::shared_ptr<const FieldSpace> space_;
  MaxwellFluxKind flux_;
};

Eigen::VectorXd apply_bh(const EMField& em, const MomentPair& moments, MaxwellFluxKind flux);

/// int J_h . E_h dx.
double current_work(const EMField& em, const MomentPair& moments);

/// int_{E_x} |[E_h]_tan|^2 + |[B_h]_tan|^2 ds_x, from pointwise face traces.
double tangential_jump_energy(const EMField& em);

}  // namespace vmdg
