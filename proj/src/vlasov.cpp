#include "vmdg/vlasov.hpp"

#include "vmdg/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace vmdg {
namespace {

int match_node(const QuadratureRule<double>& line, double xi) {
  for (Index j = 0; j < line.size(); ++j)
    if (std::abs(line.nodes(0, j) - xi) < 1e-13) return static_cast<int>(j);
  throw std::logic_error("quadrature node is not a tensor node");
}

bool has_fields(const EMField& em) { return em.space_ptr() && em.mask().count() > 0; }

/// E and B at every (x cell, x Gauss node) pair, laid out cell-major.
struct NodalFields {
  std::vector<Vec3> e;
  std::vector<Vec3> b;
};

NodalFields fields_at_nodes(const EMField& em, const QuadratureRule<double>& line, Index nx) {
  const Index np = line.size();
  NodalFields out{std::vector<Vec3>(nx * np, Vec3::Zero()), std::vector<Vec3>(nx * np, Vec3::Zero())};
  if (!has_fields(em)) return out;
  const Eigen::MatrixXd table = em.space().basis.values(line.nodes) * em.space().inv_sqrt_jacobian();
  for (Index c = 0; c < nx; ++c)
    for (int i = 0; i < 3; ++i) {
      if (em.mask().active(kElectric[i])) {
        const Eigen::VectorXd v = table * em.component(c, kElectric[i]);
        for (Index j = 0; j < np; ++j) out.e[c * np + j][i] = v[j];
      }
      if (em.mask().active(kMagnetic[i])) {
        const Eigen::VectorXd v = table * em.component(c, kMagnetic[i]);
        for (Index j = 0; j < np; ++j) out.b[c * np + j][i] = v[j];
      }
    }
  return out;
}

}  // namespace

Velocity lorentz_acceleration(const Vec3& e, const Vec3& b, const Velocity& u) {
  Velocity a(u.size());
  if (u.size() == 1) {
    a[0] = e[0];
  } else {
    a[0] = e[0] + u[1] * b[2];
    a[1] = e[1] - u[0] * b[2];
  }
  return a;
}

double field_at_face(const EMField& em, Index x_cell, double xi_x, const Velocity& v, int v_axis,
                     int normal_sign, VelocityMapping mapping) {
  if (v_axis < 0 || v_axis >= v.size())
    throw std::invalid_argument("field_at_face: velocity axis out of range");
  const auto [e, b] = em.evaluate(x_cell, xi_x);
  const Velocity a = lorentz_acceleration(e, b, transport_velocity(mapping, v));
  return normal_sign * a[v_axis];
}

VlasovOperator::VlasovOperator(std::shared_ptr<const PhaseSpace> space, VelocityMapping mapping)
    : space_(std::move(space)), mapping_(mapping) {
  const auto line = gauss_legendre<double>(space_->points_per_axis);
  const auto& vol = space_->volume;
  volume_x_node_.resize(vol.size());
  for (Index q = 0; q < vol.size(); ++q) volume_x_node_[q] = match_node(line, vol.nodes(0, q));
  for (int a = 1; a < space_->dim(); ++a) {
    const auto& rule = space_->faces[a][0].rule;
    face_x_node_[a].resize(rule.size());
    for (Index q = 0; q < rule.size(); ++q) face_x_node_[a][q] = match_node(line, rule.nodes(0, q));
  }
}

void VlasovOperator::check_compatible(const DistributionField& f, const EMField& em) const {
  if (f.space_ptr().get() != space_.get() &&
      (f.mesh().num_cells() != space_->mesh.num_cells() || f.space().degree() != space_->degree()))
    throw std::invalid_argument("VlasovOperator: distribution lives on a different phase space");
  if (has_fields(em)) {
    const AxisPartition& a = em.space().x;
    const AxisPartition& b = space_->mesh.x_axis();
    if (a.n_cells != b.n_cells || a.lo != b.lo || a.hi != b.hi)
      throw std::invalid_argument("VlasovOperator: EM field is not on the x-projection of the mesh");
  }
}

double VlasovOperator::max_transport_speed() const {
  Velocity corner(space_->mesh.dim_v());
  for (int j = 0; j < corner.size(); ++j) {
    const auto& a = space_->mesh.v_axes()[j];
    corner[j] = std::max(std::abs(a.lo), std::abs(a.hi));
  }
  return transport_velocity(mapping_, corner).norm();
}

Eigen::VectorXd VlasovOperator::apply(const DistributionField& f, const EMField& em) const {
  Eigen::VectorXd out;
  apply(f, em, out);
  return out;
}

void VlasovOperator::apply(const DistributionField& f, const EMField& em, Eigen::VectorXd& out) const {
  check_compatible(f, em);
  const PhaseSpace& sp = *space_;
  const PhaseMesh& mesh = sp.mesh;
  const int dim = mesh.dim();
  const int dv = mesh.dim_v();
  const Index nm = sp.num_modes();
  const Index np = sp.points_per_axis;
  const auto line = gauss_legendre<double>(sp.points_per_axis);
  const NodalFields nodal = fields_at_nodes(em, line, mesh.num_x_cells());
  const bool with_fields = has_fields(em);

  std::array<double, kMaxDims> inv_half_width{};
  for (int a = 0; a < dim; ++a) inv_half_width[a] = 2.0 / mesh.axis(a).width();

  out.resize(f.coeffs().size());
  const Eigen::VectorXd& coeffs = f.coeffs();

  parallel_for(mesh.num_cells(), [&](Index begin, Index end) {
    const Index nq = sp.volume.size();
    Eigen::VectorXd fq(nq);
    std::array<Eigen::VectorXd, kMaxDims> s;
    for (int a = 0; a < dim; ++a) s[a].resize(nq);
    Eigen::VectorXd own, nb, flux;
    Velocity v(dv);
    Eigen::VectorXd r(nm);

    for (Index c = begin; c < end; ++c) {
      const MultiIndex idx = mesh.multi_index(c);
      const Index ix = idx[0];
      const auto fc = coeffs.segment(c * nm, nm);

      // Volume: int_K f (u . grad_x g + A . grad_v g)
      fq.noalias() = sp.volume_values * fc;
      for (Index q = 0; q < nq; ++q) {
        for (int j = 0; j < dv; ++j) v[j] = mesh.axis(j + 1).to_physical(idx[j + 1], sp.volume.nodes(j + 1, q));
        const Velocity u = transport_velocity(mapping_, v);
        const double wf = sp.volume.weights[q] * fq[q];
        s[0][q] = wf * u[0] * inv_half_width[0];
        if (with_fields) {
          const Index node = ix * np + volume_x_node_[q];
          const Velocity acc = lorentz_acceleration(nodal.e[node], nodal.b[node], u);
          for (int j = 0; j < dv; ++j) s[j + 1][q] = wf * acc[j] * inv_half_width[j + 1];
        } else {
          for (int j = 0; j < dv; ++j) s[j + 1][q] = 0.0;
        }
      }
      r.noalias() = sp.volume_derivatives[0].transpose() * s[0];
      if (with_fields)
        for (int a = 1; a < dim; ++a) r.noalias() += sp.volume_derivatives[a].transpose() * s[a];

      // Faces: - int_{dK} flux g
      for (int a = 0; a < dim; ++a) {
        if (a > 0 && !with_fields) continue;  // zero normal acceleration, zero flux
        for (int side = 0; side < 2; ++side) {
          const auto& face = sp.faces[a][side];
          const auto& opposite = sp.faces[a][1 - side];
          const int sign = side == 1 ? 1 : -1;
          const EdgeRef e = mesh.edge(c, a, side == 1 ? Side::high : Side::low);
          own.noalias() = face.values * fc;
          if (e.neighbor_cell)
            nb.noalias() = opposite.values * coeffs.segment(*e.neighbor_cell * nm, nm);
          else
            nb.setZero(own.size());
          flux.resize(own.size());
          for (Index q = 0; q < own.size(); ++q) {
            for (int j = 0; j < dv; ++j)
              v[j] = mesh.axis(j + 1).to_physical(idx[j + 1], face.rule.nodes(j + 1, q));
            const Velocity u = transport_velocity(mapping_, v);
            double an;
            if (a == 0) {
              an = sign * u[0];
            } else {
              const Index node = ix * np + face_x_node_[a][q];
              an = sign * lorentz_acceleration(nodal.e[node], nodal.b[node], u)[a - 1];
            }
            flux[q] = face.rule.weights[q] * upwind_flux(an, own[q], nb[q]);
          }
          r.noalias() -= inv_half_width[a] * (face.values.transpose() * flux);
        }
      }
      out.segment(c * nm, nm) = r;
    }
  });
}

Eigen::VectorXd apply_ah(const DistributionField& f, const EMField& em, VelocityMapping mapping) {
  return VlasovOperator(f.space_ptr(), mapping).apply(f, em);
}

JumpDissipation jump_dissipation(const DistributionField& f, const EMField& em,
                                 VelocityMapping mapping) {
  const PhaseSpace& sp = f.space();
  const PhaseMesh& mesh = sp.mesh;
  const int dim = mesh.dim();
  const int dv = mesh.dim_v();
  std::vector<double> per_cell_x(mesh.num_cells(), 0.0), per_cell_v(mesh.num_cells(), 0.0);

  parallel_for(mesh.num_cells(), [&](Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      const MultiIndex idx = mesh.multi_index(c);
      for (int a = 0; a < dim; ++a) {
        double face_jac = 1.0;
        for (int b = 0; b < dim; ++b)
          if (b != a) face_jac *= 0.5 * mesh.axis(b).width();
        // Each interior face once (from its low-side cell); cutoff faces from
        // the only cell that owns them.
        std::vector<Side> sides{Side::high};
        if (a > 0 && idx[a] == 0) sides.push_back(Side::low);
        for (Side side : sides) {
          const EdgeRef e = mesh.edge(c, a, side);
          const auto rule = face_gauss_legendre<double>(sp.points_per_axis, dim, a, side);
          double acc = 0.0;
          for (Index q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd xi = rule.nodes.col(q);
            const double f_own = f.value(c, xi);
            double f_nb = 0.0;
            if (e.neighbor_cell) {
              Eigen::VectorXd xi_nb = xi;
              xi_nb[a] = -xi[a];
              f_nb = f.value(*e.neighbor_cell, xi_nb);
            }
            const Point p = sp.to_physical(c, xi);
            Velocity v(dv);
            for (int j = 0; j < dv; ++j) v[j] = p[j + 1];
            const Velocity u = transport_velocity(mapping, v);
            double speed;
            if (a == 0) {
              speed = std::abs(u[0]);
            } else if (em.space_ptr() && em.mask().count() > 0) {
              const auto [ef, bf] = em.evaluate(mesh.x_cell(c), xi[0]);
              speed = std::abs(lorentz_acceleration(ef, bf, u)[a - 1]);
            } else {
              speed = 0.0;
            }
            const double jump = f_own - f_nb;
            acc += rule.weights[q] * speed * jump * jump;
          }
          (a == 0 ? per_cell_x : per_cell_v)[c] += face_jac * acc;
        }
      }
    }
  });
  return {pairwise_sum(per_cell_x), pairwise_sum(per_cell_v)};
}

}  // namespace vmdg
