#include "vmdg/diagnostics.hpp"

#include "vmdg/parallel.hpp"

#include <cmath>
#include <limits>

namespace vmdg {
namespace {

Index grid_cells(std::span<const AxisPartition> axes) {
  Index n = 1;
  for (const auto& a : axes) n *= a.n_cells;
  return n;
}

}  // namespace

double l2_error(std::span<const AxisPartition> axes, const ReferenceBasis<double>& basis,
                const Eigen::Ref<const Eigen::VectorXd>& coeffs, const ScalarFunction& exact) {
  const int d = static_cast<int>(axes.size());
  const auto rule = tensor_gauss_legendre<double>(basis.degree() + 4, d);
  const Eigen::MatrixXd table = basis.values(rule.nodes);
  double jac = 1.0;
  for (const auto& a : axes) jac *= 0.5 * a.width();
  const double inv_sqrt_jac = 1.0 / std::sqrt(jac);
  const Index nm = basis.size();
  const Index ncells = grid_cells(axes);
  std::vector<double> per_cell(ncells);
  parallel_for(ncells, [&](Index begin, Index end) {
    Point p(d);
    Eigen::VectorXd uh(rule.size());
    for (Index c = begin; c < end; ++c) {
      Index rem = c;
      MultiIndex idx{0, 0, 0};
      for (int a = d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % axes[a].n_cells);
        rem /= axes[a].n_cells;
      }
      uh.noalias() = inv_sqrt_jac * (table * coeffs.segment(c * nm, nm));
      double s = 0.0;
      for (Index q = 0; q < rule.size(); ++q) {
        for (int a = 0; a < d; ++a) p[a] = axes[a].to_physical(idx[a], rule.nodes(a, q));
        const double diff = uh[q] - exact(p);
        s += rule.weights[q] * diff * diff;
      }
      per_cell[c] = jac * s;
    }
  });
  return std::sqrt(pairwise_sum(per_cell));
}

double l2_error(const DistributionField& f, const ScalarFunction& exact) {
  const auto axes = f.mesh().axes();
  return l2_error(axes, f.space().basis, f.coeffs(), exact);
}

FieldErrors l2_error(const EMField& em, const VectorFunction& exact_e, const VectorFunction& exact_b) {
  const FieldSpace& fs = em.space();
  const std::array<AxisPartition, 1> axes{fs.x};
  const Index nm = fs.num_modes();
  FieldErrors out;
  for (int i = 0; i < 6; ++i) {
    const auto comp = static_cast<Component>(i);
    if (!em.mask().active(comp)) continue;
    Eigen::VectorXd c(fs.num_cells() * nm);
    for (Index cell = 0; cell < fs.num_cells(); ++cell) c.segment(cell * nm, nm) = em.component(cell, comp);
    const double err = l2_error(axes, fs.basis, c, [&](const Point& p) {
      return i < 3 ? exact_e(p[0])[i] : exact_b(p[0])[i - 3];
    });
    (i < 3 ? out.e : out.b) += err * err;
  }
  out.e = std::sqrt(out.e);
  out.b = std::sqrt(out.b);
  return out;
}

double total_mass(const DistributionField& f) {
  const Index nm = f.space().num_modes();
  const double sqrt_measure = std::sqrt(f.mesh().cell_measure());
  std::vector<double> per_cell(f.mesh().num_cells());
  for (Index c = 0; c < f.mesh().num_cells(); ++c) per_cell[c] = f.coeffs()[c * nm] * sqrt_measure;
  return pairwise_sum(per_cell);
}

Energy total_energy(const DistributionField& f, const EMField& em, VelocityMapping mapping) {
  const PhaseSpace& sp = f.space();
  const PhaseMesh& mesh = sp.mesh;
  const int dv = mesh.dim_v();
  const Index nm = sp.num_modes();
  // int_K f w = sqrt(J) sum_q w_q f~_q w(v_q)
  const double scale = 1.0 / sp.inv_sqrt_jacobian();
  std::vector<double> per_cell(mesh.num_cells());
  parallel_for(mesh.num_cells(), [&](Index begin, Index end) {
    Eigen::VectorXd fq(sp.volume.size());
    Velocity v(dv);
    for (Index c = begin; c < end; ++c) {
      const MultiIndex idx = mesh.multi_index(c);
      fq.noalias() = sp.volume_values * f.coeffs().segment(c * nm, nm);
      double s = 0.0;
      for (Index q = 0; q < sp.volume.size(); ++q) {
        for (int j = 0; j < dv; ++j) v[j] = mesh.axis(j + 1).to_physical(idx[j + 1], sp.volume.nodes(j + 1, q));
        const double v2 = v.squaredNorm();
        const double weight = mapping == VelocityMapping::classical ? v2 : std::sqrt(1.0 + v2) - 1.0;
        s += sp.volume.weights[q] * fq[q] * weight;
      }
      per_cell[c] = scale * s;
    }
  });
  Energy out;
  out.kinetic = pairwise_sum(per_cell);
  if (em.space_ptr()) out.electromagnetic = em.coeffs().squaredNorm();
  return out;
}

DivergenceResiduals divergence_residuals(const EMField& em, const MomentPair& moments, double rho_i) {
  DivergenceResiduals out;
  if (!em.space_ptr()) return out;
  const FieldSpace& fs = em.space();
  const Index nx = fs.num_cells();
  const Index nm = fs.num_modes();
  const auto rule = tensor_gauss_legendre<double>(fs.degree() + 4, 1);
  const Eigen::MatrixXd values = fs.basis.values(rule.nodes) * fs.inv_sqrt_jacobian();
  const Eigen::MatrixXd derivs =
      fs.basis.derivatives(rule.nodes, 0) * (fs.inv_sqrt_jacobian() * 2.0 / fs.x.width());
  const double jac = 0.5 * fs.x.width();
  const bool has_e1 = em.mask().active(Component::E1);
  const bool has_b1 = em.mask().active(Component::B1);
  std::vector<double> re(nx, 0.0), rb(nx, 0.0), je(nx, 0.0), jb(nx, 0.0);
  for (Index c = 0; c < nx; ++c) {
    Eigen::VectorXd r = -(values * moments.rho.segment(c * nm, nm)).array() + rho_i;
    if (has_e1) r += derivs * em.component(c, Component::E1);
    re[c] = jac * rule.weights.dot(r.cwiseAbs2());
    if (has_b1) {
      const Eigen::VectorXd db = derivs * em.component(c, Component::B1);
      rb[c] = jac * rule.weights.dot(db.cwiseAbs2());
    }
    const Index next = (c + 1) % nx;
    const double dje = em.value(Component::E1, c, 1.0) - em.value(Component::E1, next, -1.0);
    const double djb = em.value(Component::B1, c, 1.0) - em.value(Component::B1, next, -1.0);
    je[c] = dje * dje;
    jb[c] = djb * djb;
  }
  out.div_e = std::sqrt(pairwise_sum(re));
  out.div_b = std::sqrt(pairwise_sum(rb));
  out.jump_e = std::sqrt(pairwise_sum(je));
  out.jump_b = std::sqrt(pairwise_sum(jb));
  return out;
}

double min_node_value(const DistributionField& f) {
  const PhaseSpace& sp = f.space();
  const Index nm = sp.num_modes();
  double m = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < sp.mesh.num_cells(); ++c)
    m = std::min(m, (sp.volume_values * f.coeffs().segment(c * nm, nm)).minCoeff() * sp.inv_sqrt_jacobian());
  return m;
}

DiagnosticRecord collect_diagnostics(const CoupledState& state, VelocityMapping mapping, double rho_i,
                                     bool with_min_value) {
  DiagnosticRecord r;
  r.time = state.time;
  r.l2_f = state.f.l2_norm();
  r.mass = total_mass(state.f);
  const Energy en = total_energy(state.f, state.em, mapping);
  r.energy_kinetic = en.kinetic;
  r.energy_em = en.electromagnetic;
  if (state.em.space_ptr()) {
    r.l2_E = state.em.l2_norm_E();
    r.l2_B = state.em.l2_norm_B();
    const MomentPair moments = compute_moments(state.f, mapping, state.em.space_ptr());
    const DivergenceResiduals div = divergence_residuals(state.em, moments, rho_i);
    r.div_E_residual = div.div_e;
    r.div_B_residual = div.div_b;
  }
  if (with_min_value) r.min_cell_value = min_node_value(state.f);
  return r;
}

double eoc(double err_coarse, double err_fine, double ratio) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0) || !(ratio > 1.0))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

std::vector<ConvergenceRow> eoc(std::vector<ConvergenceRow> rows, RefinementParameter by) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    if (i == 0) {
      r.eoc_f = r.eoc_E = r.eoc_B = nan;
      continue;
    }
    const auto& p = rows[i - 1];
    const double ratio = by == RefinementParameter::h ? p.h / r.h : p.tau / r.tau;
    r.eoc_f = eoc(p.err_f, r.err_f, ratio);
    r.eoc_E = eoc(p.err_E, r.err_E, ratio);
    r.eoc_B = eoc(p.err_B, r.err_B, ratio);
  }
  return rows;
}

}  // namespace vmdg
