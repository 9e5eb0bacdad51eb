#pragma once

#include "vmdg/basis.hpp"
#include "vmdg/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <memory>
#include <string>
#include <string_view>

namespace vmdg {

/// A point of phase space (x, v1[, v2]) or of the spatial line (x).
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDims, 1>;
using Vec3 = Eigen::Vector3d;

/// Immutable tables shared by every distribution field on one mesh and degree.
struct PhaseSpace {
  struct FaceTables {
    QuadratureRule<double> rule;
    Eigen::MatrixXd values;  // (face node, mode)
  };

  PhaseSpace(PhaseMesh mesh, int degree);

  PhaseMesh mesh;
  ReferenceBasis<double> basis;
  int points_per_axis;
  QuadratureRule<double> volume;
  Eigen::MatrixXd volume_values;
  std::array<Eigen::MatrixXd, kMaxDims> volume_derivatives;
  std::array<std::array<FaceTables, 2>, kMaxDims> faces;  // [axis][side]

  int degree() const { return basis.degree(); }
  int dim() const { return mesh.dim(); }
  Index num_modes() const { return basis.size(); }
  /// Physical coordinates of reference point xi in cell.
  Point to_physical(Index cell, const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// Scale between reference-normalized values and physical values:
  /// f(x) = sum_m c_m phi_m(xi) / sqrt(J) with J = |K| / 2^d.
  double inv_sqrt_jacobian() const;
};

/// Immutable tables for fields on the spatial mesh (the x-projection).
struct FieldSpace {
  FieldSpace(AxisPartition x, int degree);

  AxisPartition x;
  ReferenceBasis<double> basis;
  int points_per_axis;
  QuadratureRule<double> volume;
  Eigen::MatrixXd volume_values;
  Eigen::MatrixXd volume_derivatives;
  Eigen::RowVectorXd low_values;   // phi_m(-1)
  Eigen::RowVectorXd high_values;  // phi_m(+1)

  int degree() const { return basis.degree(); }
  Index num_cells() const { return x.n_cells; }
  Index num_modes() const { return basis.size(); }
  double inv_sqrt_jacobian() const;
};

std::shared_ptr<const PhaseSpace> make_phase_space(const PhaseMesh& mesh, int degree);
std::shared_ptr<const FieldSpace> make_field_space(const AxisPartition& x, int degree);

enum class VelocityMapping { classical, relativistic };

/// Transport velocity: v, or v / sqrt(1 + |v|^2).
template <typename V>
V transport_velocity(VelocityMapping mapping, const V& v) {
  if (mapping == VelocityMapping::classical) return v;
  return v / std::sqrt(1.0 + v.squaredNorm());
}

/// Distribution function coefficients, cell-major, in the orthonormal basis
/// of each phase cell.
class DistributionField {
 public:
  DistributionField() = default;
  explicit DistributionField(std::shared_ptr<const PhaseSpace> space);
  DistributionField(std::shared_ptr<const PhaseSpace> space, Eigen::VectorXd coeffs);

  const PhaseSpace& space() const { return *space_; }
  const std::shared_ptr<const PhaseSpace>& space_ptr() const { return space_; }
  const PhaseMesh& mesh() const { return space_->mesh; }

  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  auto cell(Index c) { return coeffs_.segment(c * space_->num_modes(), space_->num_modes()); }
  auto cell(Index c) const { return coeffs_.segment(c * space_->num_modes(), space_->num_modes()); }

  /// Value at a reference point of a cell.
  double value(Index cell, const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  double l2_norm() const { return coeffs_.norm(); }

 private:
  std::shared_ptr<const PhaseSpace> space_;
  Eigen::VectorXd coeffs_;
};

enum class Component : int { E1 = 0, E2, E3, B1, B2, B3 };

/// Subset of {E1, E2, E3, B1, B2, B3} carrying degrees of freedom.
class ComponentMask {
 public:
  ComponentMask() { slots_.fill(-1); }
  ComponentMask(std::initializer_list<Component> comps);

  /// Parses "E1,E2,B3"; empty string gives the empty mask.
  static ComponentMask parse(std::string_view text);
  std::string to_string() const;

  bool active(Component c) const { return slots_[static_cast<int>(c)] >= 0; }
  int slot(Component c) const { return slots_[static_cast<int>(c)]; }
  int count() const { return count_; }
  bool operator==(const ComponentMask& o) const { return slots_ == o.slots_; }

 private:
  void add(Component c);
  std::array<int, 6> slots_{};
  int count_ = 0;
};

/// Electromagnetic field coefficients laid out [cell][active slot][mode].
/// Inactive components read as zero.
class EMField {
 public:
  EMField() = default;
  EMField(std::shared_ptr<const FieldSpace> space, ComponentMask mask);

  const FieldSpace& space() const { return *space_; }
  const std::shared_ptr<const FieldSpace>& space_ptr() const { return space_; }
  const ComponentMask& mask() const { return mask_; }

  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Index block_size() const { return space_->num_modes(); }
  Index offset(Index cell, Component c) const {
    return (cell * mask_.count() + mask_.slot(c)) * block_size();
  }
  auto component(Index cell, Component c) { return coeffs_.segment(offset(cell, c), block_size()); }
  auto component(Index cell, Component c) const {
    return coeffs_.segment(offset(cell, c), block_size());
  }

  double value(Component c, Index cell, double xi) const;
  /// (E, B) at reference coordinate xi of cell.
  std::pair<Vec3, Vec3> evaluate(Index cell, double xi) const;
  double l2_norm() const { return coeffs_.norm(); }
  double l2_norm_E() const;
  double l2_norm_B() const;

 private:
  std::shared_ptr<const FieldSpace> space_;
  ComponentMask mask_;
  Eigen::VectorXd coeffs_;
};

constexpr std::array<Component, 3> kElectric{Component::E1, Component::E2, Component::E3};
constexpr std::array<Component, 3> kMagnetic{Component::B1, Component::B2, Component::B3};

}  // namespace vmdg
