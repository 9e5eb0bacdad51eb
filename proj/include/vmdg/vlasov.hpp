#pragma once

#include "vmdg/fields.hpp"

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace vmdg {

using Velocity = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

/// Upwind flux of q * f through a face with normal speed a_dot_n, seen from
/// the owner cell: {q f} n + |a.n|/2 [f] n.
inline double upwind_flux(double a_dot_n, double f_owner, double f_neighbor) {
  return 0.5 * a_dot_n * (f_owner + f_neighbor) + 0.5 * std::abs(a_dot_n) * (f_owner - f_neighbor);
}

inline double upwind_flux_x(double v_dot_n, double f_minus, double f_plus) {
  return upwind_flux(v_dot_n, f_minus, f_plus);
}

/// On a cutoff boundary pass f_plus = 0.
inline double upwind_flux_v(double a_dot_n, double f_minus, double f_plus) {
  return upwind_flux(a_dot_n, f_minus, f_plus);
}

/// E + u x B restricted to the d_v resolved velocity components. With one
/// resolved component only E1 acts; with two the force is
/// (E1 + u2 B3, E2 - u1 B3). Other components cannot act on resolved
/// velocities because u3 = 0.
Velocity lorentz_acceleration(const Vec3& e, const Vec3& b, const Velocity& u);

/// (E_h + u x B_h) . n_v at reference coordinate xi_x of x_cell and
/// velocity v, for the face normal +/- e_{v_axis}.
double field_at_face(const EMField& em, Index x_cell, double xi_x, const Velocity& v, int v_axis,
                     int normal_sign, VelocityMapping mapping);

/// Evaluates the phase-space DG residual a_h(f, E, B; .) with upwind fluxes.
/// The returned coefficients R satisfy R . g = a_h(f; g) for every g, so
/// df/dt = R under the orthonormal basis.
class VlasovOperator {
 public:
  VlasovOperator(std::shared_ptr<const PhaseSpace> space, VelocityMapping mapping);

  const PhaseSpace& space() const { return *space_; }
  VelocityMapping mapping() const { return mapping_; }

  /// em may have an empty mask (free streaming). Throws std::invalid_argument
  /// on mesh mismatch.
  void apply(const DistributionField& f, const EMField& em, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const DistributionField& f, const EMField& em) const;

  /// Largest |transport velocity| over the velocity domain.
  double max_transport_speed() const;

 private:
  void check_compatible(const DistributionField& f, const EMField& em) const;

  std::shared_ptr<const PhaseSpace> space_;
  VelocityMapping mapping_;
  std::vector<int> volume_x_node_;                    // volume node -> x GL node
  std::array<std::vector<int>, kMaxDims> face_x_node_;  // v-face node -> x GL node
};

Eigen::VectorXd apply_ah(const DistributionField& f, const EMField& em, VelocityMapping mapping);

/// Upwind jump dissipation integrals
///   x: int_{T_h^v} int_{E_x} |u . n_x| |[f]_x|^2,
///   v: int_{T_h^x} int_{E_v} |(E + u x B) . n_v| |[f]_v|^2,
/// assembled face by face from pointwise traces.
struct JumpDissipation {
  double x = 0.0;
  double v = 0.0;
  double total() const { return x + v; }
};

JumpDissipation jump_dissipation(const DistributionField& f, const EMField& em,
                                 VelocityMapping mapping);

}  // namespace vmdg
