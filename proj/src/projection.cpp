#include "vmdg/projection.hpp"

#include "vmdg/parallel.hpp"

#include <cmath>

namespace vmdg {
namespace {

struct GridShape {
  std::span<const AxisPartition> axes;

  Index num_cells() const {
    Index n = 1;
    for (const auto& a : axes) n *= a.n_cells;
    return n;
  }
  MultiIndex unravel(Index cell) const {
    MultiIndex idx{0, 0, 0};
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(cell % axes[a].n_cells);
      cell /= axes[a].n_cells;
    }
    return idx;
  }
  double jacobian() const {
    double j = 1.0;
    for (const auto& a : axes) j *= 0.5 * a.width();
    return j;
  }
};

}  // namespace

Eigen::VectorXd l2_project(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                           const QuadratureRule<double>& rule, const ScalarFunction& g) {
  const GridShape grid{axes};
  const int d = static_cast<int>(axes.size());
  const Index nm = basis.size();
  const Eigen::MatrixXd table = basis.values(rule.nodes);
  // int_K g psi_m = J * sum_q w_q g(x_q) phi_m(xi_q) / sqrt(J)
  const double scale = std::sqrt(grid.jacobian());
  Eigen::VectorXd out(grid.num_cells() * nm);
  parallel_for(grid.num_cells(), [&](Index begin, Index end) {
    Eigen::VectorXd wg(rule.size());
    Point p(d);
    for (Index c = begin; c < end; ++c) {
      const MultiIndex idx = grid.unravel(c);
      for (Index q = 0; q < rule.size(); ++q) {
        for (int a = 0; a < d; ++a) p[a] = axes[a].to_physical(idx[a], rule.nodes(a, q));
        wg[q] = rule.weights[q] * g(p);
      }
      out.segment(c * nm, nm).noalias() = scale * (table.transpose() * wg);
    }
  });
  return out;
}

Eigen::VectorXd l2_project(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                           const ScalarFunction& g) {
  return l2_project(axes, basis,
                    tensor_gauss_legendre<double>(basis.degree() + 4, static_cast<int>(axes.size())), g);
}

DistributionField project_distribution(std::shared_ptr<const PhaseSpace> space,
                                       const ScalarFunction& g) {
  const auto axes = space->mesh.axes();
  Eigen::VectorXd c = l2_project(axes, space->basis, g);
  return DistributionField(std::move(space), std::move(c));
}

EMField project_em(std::shared_ptr<const FieldSpace> space, ComponentMask mask,
                   const VectorFunction& e, const VectorFunction& b) {
  EMField em(space, mask);
  const std::array<AxisPartition, 1> axes{space->x};
  for (int i = 0; i < 6; ++i) {
    const auto comp = static_cast<Component>(i);
    if (!mask.active(comp)) continue;
    const Eigen::VectorXd c = l2_project(axes, space->basis, [&](const Point& p) {
      return i < 3 ? e(p[0])[i] : b(p[0])[i - 3];
    });
    const Index nm = space->num_modes();
    for (Index cell = 0; cell < space->num_cells(); ++cell)
      em.component(cell, comp) = c.segment(cell * nm, nm);
  }
  return em;
}

Point to_reference(std::span<const AxisPartition> axes, Index cell, const Point& point) {
  const GridShape grid{axes};
  const MultiIndex idx = grid.unravel(cell);
  Point xi(static_cast<Index>(axes.size()));
  for (std::size_t a = 0; a < axes.size(); ++a)
    xi[a] = 2.0 * (point[a] - axes[a].cell_center(idx[a])) / axes[a].width();
  return xi;
}

double eval_field_at(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                     const Eigen::Ref<const Eigen::VectorXd>& coeffs, Index cell, const Point& point) {
  const GridShape grid{axes};
  const Point xi = to_reference(axes, cell, point);
  const Index nm = basis.size();
  double s = 0.0;
  for (Index m = 0; m < nm; ++m) s += coeffs[cell * nm + m] * basis.value(m, xi);
  return s / std::sqrt(grid.jacobian());
}

}  // namespace vmdg
