#pragma once

#include "vmdg/basis.hpp"
#include "vmdg/fields.hpp"
#include "vmdg/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>

namespace vmdg {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Vec3(double x)>;

/// Per-cell coefficients c_m = int_K g psi_m for the orthonormal basis psi_m
/// of every cell of the tensor grid spanned by axes (row-major, last axis
/// fastest). The rule is on the reference cell.
Eigen::VectorXd l2_project(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                           const QuadratureRule<double>& rule, const ScalarFunction& g);

/// Projection with a (k+4)-point tensor rule.
Eigen::VectorXd l2_project(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                           const ScalarFunction& g);

DistributionField project_distribution(std::shared_ptr<const PhaseSpace> space,
                                       const ScalarFunction& g);

/// Projects the active components of (E(x), B(x)).
EMField project_em(std::shared_ptr<const FieldSpace> space, ComponentMask mask,
                   const VectorFunction& e, const VectorFunction& b);

/// sum_m c_m psi_m(point) for a physical point in the closure of cell.
double eval_field_at(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                     const Eigen::Ref<const Eigen::VectorXd>& coeffs, Index cell, const Point& point);

/// Maps a physical point to reference coordinates of the given cell.
Point to_reference(std::span<const AxisPartition> axes, Index cell, const Point& point);

}  // namespace vmdg
