#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <vector>

namespace vmdg {

using Index = Eigen::Index;

enum class BoundaryKind { periodic, cutoff };
enum class Side { low, high };

/// Uniform partition of one coordinate interval.
struct AxisPartition {
  double lo = 0.0;
  double hi = 1.0;
  int n_cells = 1;
  BoundaryKind boundary = BoundaryKind::periodic;

  double length() const { return hi - lo; }
  double width() const { return (hi - lo) / n_cells; }
  double cell_lo(int i) const { return lo + i * width(); }
  double cell_center(int i) const { return lo + (i + 0.5) * width(); }
  /// Maps a reference coordinate in [-1, 1] of cell i to physical space.
  double to_physical(int i, double xi) const { return cell_center(i) + 0.5 * width() * xi; }
};

/// A face of a cell seen from that cell. neighbor_cell is empty only on a
/// cutoff boundary.
struct EdgeRef {
  int axis = 0;
  Side side = Side::low;
  Index owner_cell = 0;
  std::optional<Index> neighbor_cell;
  int normal_sign = -1;
};

constexpr int kMaxDims = 3;
using MultiIndex = std::array<int, kMaxDims>;

/// Cartesian tensor mesh of Omega_x x Omega_v. Axis 0 is x, axes 1..d_v are
/// the velocity axes. Cells are numbered row-major with the last axis fastest,
/// so cell = x_cell * num_v_cells() + v_cell.
class PhaseMesh {
 public:
  PhaseMesh(AxisPartition x, std::vector<AxisPartition> v);

  int dim() const { return 1 + dim_v(); }
  int dim_x() const { return 1; }
  int dim_v() const { return static_cast<int>(v_.size()); }

  const AxisPartition& axis(int a) const { return a == 0 ? x_ : v_[a - 1]; }
  const AxisPartition& x_axis() const { return x_; }
  const std::vector<AxisPartition>& v_axes() const { return v_; }
  std::vector<AxisPartition> axes() const;

  Index num_cells() const { return num_x_cells() * num_v_cells(); }
  Index num_x_cells() const { return x_.n_cells; }
  Index num_v_cells() const;

  MultiIndex multi_index(Index cell) const;
  Index linear_index(const MultiIndex& idx) const;
  Index x_cell(Index cell) const { return cell / num_v_cells(); }
  Index v_cell(Index cell) const { return cell % num_v_cells(); }

  EdgeRef edge(Index cell, int axis, Side side) const;
  std::vector<EdgeRef> edges(Index cell) const;

  double h_x() const { return x_.width(); }
  double h_v() const;
  double h() const;
  double cell_measure() const;
  double domain_measure() const;

  /// Halves every cell width.
  PhaseMesh refined() const;

 private:
  AxisPartition x_;
  std::vector<AxisPartition> v_;
};

/// Validates axis counts, widths and boundary kinds and builds the mesh.
/// Throws std::invalid_argument unless d_x = 1 and d_v is 1 or 2.
PhaseMesh build_mesh(const std::vector<AxisPartition>& x_axes,
                     const std::vector<AxisPartition>& v_axes);

std::optional<Index> neighbor(const PhaseMesh& mesh, Index cell, const EdgeRef& edge);

/// The face of the neighbor that coincides with edge (seen from the neighbor).
std::optional<EdgeRef> mirrored(const PhaseMesh& mesh, const EdgeRef& edge);

}  // namespace vmdg
