#include "vmdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vmdg {
namespace {

void check_axis(const AxisPartition& a, const char* name) {
  if (a.n_cells < 1) throw std::invalid_argument(std::string(name) + ": n_cells must be >= 1");
  if (!(a.hi > a.lo) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
    throw std::invalid_argument(std::string(name) + ": need finite hi > lo");
}

}  // namespace

PhaseMesh::PhaseMesh(AxisPartition x, std::vector<AxisPartition> v) : x_(x), v_(std::move(v)) {
  if (v_.empty() || v_.size() > 2)
    throw std::invalid_argument("PhaseMesh: d_v must be 1 or 2");
  check_axis(x_, "x axis");
  if (x_.boundary != BoundaryKind::periodic)
    throw std::invalid_argument("x axis must be periodic");
  for (const auto& a : v_) {
    check_axis(a, "v axis");
    if (a.boundary != BoundaryKind::cutoff)
      throw std::invalid_argument("v axes must use the cutoff boundary");
  }
}

std::vector<AxisPartition> PhaseMesh::axes() const {
  std::vector<AxisPartition> out{x_};
  out.insert(out.end(), v_.begin(), v_.end());
  return out;
}

Index PhaseMesh::num_v_cells() const {
  Index n = 1;
  for (const auto& a : v_) n *= a.n_cells;
  return n;
}

MultiIndex PhaseMesh::multi_index(Index cell) const {
  MultiIndex idx{0, 0, 0};
  for (int a = dim() - 1; a >= 0; --a) {
    const int n = axis(a).n_cells;
    idx[a] = static_cast<int>(cell % n);
    cell /= n;
  }
  return idx;
}

Index PhaseMesh::linear_index(const MultiIndex& idx) const {
  Index cell = 0;
  for (int a = 0; a < dim(); ++a) cell = cell * axis(a).n_cells + idx[a];
  return cell;
}

EdgeRef PhaseMesh::edge(Index cell, int ax, Side side) const {
  EdgeRef e;
  e.axis = ax;
  e.side = side;
  e.owner_cell = cell;
  e.normal_sign = side == Side::high ? 1 : -1;
  MultiIndex idx = multi_index(cell);
  const AxisPartition& a = axis(ax);
  int j = idx[ax] + e.normal_sign;
  if (j < 0 || j >= a.n_cells) {
    if (a.boundary == BoundaryKind::cutoff) return e;
    j = (j + a.n_cells) % a.n_cells;
  }
  idx[ax] = j;
  e.neighbor_cell = linear_index(idx);
  return e;
}

std::vector<EdgeRef> PhaseMesh::edges(Index cell) const {
  std::vector<EdgeRef> out;
  out.reserve(static_cast<std::size_t>(2 * dim()));
  for (int a = 0; a < dim(); ++a) {
    out.push_back(edge(cell, a, Side::low));
    out.push_back(edge(cell, a, Side::high));
  }
  return out;
}

double PhaseMesh::h_v() const {
  double h = 0.0;
  for (const auto& a : v_) h = std::max(h, a.width());
  return h;
}

double PhaseMesh::h() const { return std::max(h_x(), h_v()); }

double PhaseMesh::cell_measure() const {
  double m = x_.width();
  for (const auto& a : v_) m *= a.width();
  return m;
}

double PhaseMesh::domain_measure() const {
  double m = x_.length();
  for (const auto& a : v_) m *= a.length();
  return m;
}

PhaseMesh PhaseMesh::refined() const {
  AxisPartition x = x_;
  x.n_cells *= 2;
  std::vector<AxisPartition> v = v_;
  for (auto& a : v) a.n_cells *= 2;
  return PhaseMesh(x, v);
}

PhaseMesh build_mesh(const std::vector<AxisPartition>& x_axes,
                     const std::vector<AxisPartition>& v_axes) {
  if (x_axes.size() != 1) throw std::invalid_argument("build_mesh: only d_x = 1 is supported");
  if (v_axes.empty() || v_axes.size() > 2)
    throw std::invalid_argument("build_mesh: d_v must be 1 or 2");
  return PhaseMesh(x_axes.front(), v_axes);
}

std::optional<Index> neighbor(const PhaseMesh& mesh, Index cell, const EdgeRef& edge) {
  return mesh.edge(cell, edge.axis, edge.side).neighbor_cell;
}

std::optional<EdgeRef> mirrored(const PhaseMesh& mesh, const EdgeRef& edge) {
  if (!edge.neighbor_cell) return std::nullopt;
  return mesh.edge(*edge.neighbor_cell, edge.axis,
                   edge.side == Side::low ? Side::high : Side::low);
}

}  // namespace vmdg
