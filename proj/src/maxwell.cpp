#include "vmdg/maxwell.hpp"

#include "vmdg/parallel.hpp"
#include "vmdg/vlasov.hpp"

#include <cmath>
#include <stdexcept>

namespace vmdg {
namespace {

/// e1 x w
Vec3 cross_e1(const Vec3& w) { return Vec3(0.0, -w[2], w[1]); }

struct Traces {
  Vec3 e = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

/// Reference-normalized traces (sqrt(J) times physical values).
Traces trace(const EMField& em, Index cell, const Eigen::RowVectorXd& values) {
  Traces t;
  for (int i = 0; i < 3; ++i) {
    if (em.mask().active(kElectric[i])) t.e[i] = values.dot(em.component(cell, kElectric[i]));
    if (em.mask().active(kMagnetic[i])) t.b[i] = values.dot(em.component(cell, kMagnetic[i]));
  }
  return t;
}

}  // namespace

MaxwellFluxKind parse_flux_kind(std::string_view name) {
  if (name == "upwind") return MaxwellFluxKind::upwind;
  if (name == "central") return MaxwellFluxKind::central;
  if (name == "alternating_EmBp" || name == "alternating") return MaxwellFluxKind::alternating_EmBp;
  if (name == "alternating_EpBm") return MaxwellFluxKind::alternating_EpBm;
  throw std::invalid_argument("unknown Maxwell flux kind '" + std::string(name) + "'");
}

std::string to_string(MaxwellFluxKind kind) {
  switch (kind) {
    case MaxwellFluxKind::upwind: return "upwind";
    case MaxwellFluxKind::central: return "central";
    case MaxwellFluxKind::alternating_EmBp: return "alternating_EmBp";
    case MaxwellFluxKind::alternating_EpBm: return "alternating_EpBm";
  }
  return "?";
}

MomentPair MomentPair::zero(std::shared_ptr<const FieldSpace> space) {
  MomentPair m;
  const Index n = space->num_cells() * space->num_modes();
  m.space = std::move(space);
  m.rho = Eigen::VectorXd::Zero(n);
  for (auto& j : m.j) j = Eigen::VectorXd::Zero(n);
  return m;
}

MomentPair compute_moments(const DistributionField& f, VelocityMapping mapping,
                           std::shared_ptr<const FieldSpace> field_space) {
  const PhaseSpace& sp = f.space();
  const PhaseMesh& mesh = sp.mesh;
  if (field_space->x.n_cells != mesh.x_axis().n_cells)
    throw std::invalid_argument("compute_moments: spatial mesh mismatch");
  MomentPair out = MomentPair::zero(field_space);
  const int dv = mesh.dim_v();
  const Index nm = sp.num_modes();
  const Index nmx = field_space->num_modes();
  const Index nq = sp.volume.size();

  // phi^x_m at the x coordinate of every phase volume node.
  Eigen::MatrixXd xtable(nq, nmx);
  for (Index q = 0; q < nq; ++q)
    for (Index m = 0; m < nmx; ++m)
      xtable(q, m) = field_space->basis.value(m, std::array<double, 1>{sp.volume.nodes(0, q)});

  double jac_v = 1.0;
  for (const auto& a : mesh.v_axes()) jac_v *= 0.5 * a.width();
  const double scale = std::sqrt(jac_v);

  parallel_for(mesh.num_x_cells(), [&](Index begin, Index end) {
    Eigen::VectorXd fq(nq), w0(nq);
    std::array<Eigen::VectorXd, 2> wj{Eigen::VectorXd(nq), Eigen::VectorXd(nq)};
    std::vector<Eigen::VectorXd> u_nodes;
    Velocity v(dv);
    for (Index ix = begin; ix < end; ++ix) {
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(nmx);
      std::array<Eigen::VectorXd, 2> j{Eigen::VectorXd::Zero(nmx), Eigen::VectorXd::Zero(nmx)};
      for (Index iv = 0; iv < mesh.num_v_cells(); ++iv) {
        const Index c = ix * mesh.num_v_cells() + iv;
        const MultiIndex idx = mesh.multi_index(c);
        fq.noalias() = sp.volume_values * f.coeffs().segment(c * nm, nm);
        for (Index q = 0; q < nq; ++q) {
          for (int d = 0; d < dv; ++d) v[d] = mesh.axis(d + 1).to_physical(idx[d + 1], sp.volume.nodes(d + 1, q));
          const Velocity u = transport_velocity(mapping, v);
          w0[q] = sp.volume.weights[q] * fq[q];
          for (int d = 0; d < dv; ++d) wj[d][q] = w0[q] * u[d];
        }
        rho.noalias() += xtable.transpose() * w0;
        for (int d = 0; d < dv; ++d) j[d].noalias() += xtable.transpose() * wj[d];
      }
      out.rho.segment(ix * nmx, nmx) = scale * rho;
      for (int d = 0; d < dv; ++d) out.j[d].segment(ix * nmx, nmx) = scale * j[d];
    }
  });
  return out;
}

double background_density(const MomentPair& moments, const AxisPartition& x) {
  const Index nm = moments.space->num_modes();
  const double sqrt_h = std::sqrt(x.width());
  std::vector<double> cell_charge(x.n_cells);
  // int_K rho_h = c_0 * int_K psi_0 = c_0 * sqrt(h)
  for (Index c = 0; c < x.n_cells; ++c) cell_charge[c] = moments.rho[c * nm] * sqrt_h;
  return pairwise_sum(cell_charge) / x.length();
}

void validate_flux_mask(const ComponentMask& mask, MaxwellFluxKind flux) {
  const auto paired = [&](Component a, Component b) { return mask.active(a) == mask.active(b); };
  if (!paired(Component::E2, Component::B3) || !paired(Component::E3, Component::B2))
    throw std::invalid_argument("flux '" + to_string(flux) + "' needs tangential pairs (E2,B3) and (E3,B2) "
                                "active together; mask is " + mask.to_string());
}

MaxwellOperator::MaxwellOperator(std::shared_ptr<const FieldSpace> space, MaxwellFluxKind flux)
    : space_(std::move(space)), flux_(flux) {}

Eigen::VectorXd MaxwellOperator::apply(const EMField& em, const MomentPair& moments) const {
  Eigen::VectorXd out;
  apply(em, moments, out);
  return out;
}

void MaxwellOperator::apply(const EMField& em, const MomentPair& moments, Eigen::VectorXd& out) const {
  validate_flux_mask(em.mask(), flux_);
  const FieldSpace& fs = em.space();
  if (fs.num_cells() != space_->num_cells() || fs.degree() != space_->degree())
    throw std::invalid_argument("MaxwellOperator: field space mismatch");
  const Index nx = fs.num_cells();
  const Index nm = fs.num_modes();
  const double scale = 2.0 / fs.x.width();
  const ComponentMask& mask = em.mask();

  // Numerical traces (E_hat, B_hat) on face i + 1/2, i.e. between cells i and i+1.
  std::vector<Traces> hat(nx);
  for (Index i = 0; i < nx; ++i) {
    const Traces left = trace(em, i, fs.high_values);
    const Traces right = trace(em, (i + 1) % nx, fs.low_values);
    Traces& h = hat[i];
    switch (flux_) {
      case MaxwellFluxKind::upwind:
        // [W]_tan = W_L x n_L + W_R x n_R = (W_L - W_R) x e1
        h.e = 0.5 * (left.e + right.e) + 0.5 * (left.b - right.b).cross(Vec3::UnitX());
        h.b = 0.5 * (left.b + right.b) - 0.5 * (left.e - right.e).cross(Vec3::UnitX());
        break;
      case MaxwellFluxKind::central:
        h.e = 0.5 * (left.e + right.e);
        h.b = 0.5 * (left.b + right.b);
        break;
      case MaxwellFluxKind::alternating_EmBp:
        h.e = left.e;
        h.b = right.b;
        break;
      case MaxwellFluxKind::alternating_EpBm:
        h.e = right.e;
        h.b = left.b;
        break;
    }
  }

  out.resize(em.coeffs().size());
  out.setZero();
  parallel_for(nx, [&](Index begin, Index end) {
    const Index nq = fs.volume.size();
    Eigen::VectorXd wq(nq);
    for (Index c = begin; c < end; ++c) {
      const Traces& lo = hat[(c + nx - 1) % nx];
      const Traces& hi = hat[c];
      // Outward normals: +e1 on the high face, -e1 on the low face.
      const Vec3 nb_hi = cross_e1(hi.b), nb_lo = -cross_e1(lo.b);
      const Vec3 ne_hi = cross_e1(hi.e), ne_lo = -cross_e1(lo.e);
      for (int i = 0; i < 3; ++i) {
        // curl(psi e_i) = psi' (e1 x e_i): i=1 -> 0, i=2 -> e3, i=3 -> -e2.
        const auto curl_partner = [&](const std::array<Component, 3>& group, double& sign) {
          sign = i == 1 ? 1.0 : -1.0;
          return i == 1 ? group[2] : group[1];
        };
        const Component ec = kElectric[i];
        if (mask.active(ec)) {
          Eigen::VectorXd r = Eigen::VectorXd::Zero(nm);
          if (i > 0) {
            double sign;
            const Component partner = curl_partner(kMagnetic, sign);
            if (mask.active(partner)) {
              wq.noalias() = fs.volume.weights.cwiseProduct(fs.volume_values * em.component(c, partner));
              r.noalias() += (sign * scale) * (fs.volume_derivatives.transpose() * wq);
            }
          }
          r += scale * (nb_hi[i] * fs.high_values.transpose() + nb_lo[i] * fs.low_values.transpose());
          r -= moments.j[i].segment(c * nm, nm);
          out.segment(em.offset(c, ec), nm) = r;
        }
        const Component bc = kMagnetic[i];
        if (mask.active(bc)) {
          Eigen::VectorXd r = Eigen::VectorXd::Zero(nm);
          if (i > 0) {
            double sign;
            const Component partner = curl_partner(kElectric, sign);
            if (mask.active(partner)) {
              wq.noalias() = fs.volume.weights.cwiseProduct(fs.volume_values * em.component(c, partner));
              r.noalias() -= (sign * scale) * (fs.volume_derivatives.transpose() * wq);
            }
          }
          r -= scale * (ne_hi[i] * fs.high_values.transpose() + ne_lo[i] * fs.low_values.transpose());
          out.segment(em.offset(c, bc), nm) = r;
        }
      }
    }
  });
}

Eigen::VectorXd apply_bh(const EMField& em, const MomentPair& moments, MaxwellFluxKind flux) {
  return MaxwellOperator(em.space_ptr(), flux).apply(em, moments);
}

double current_work(const EMField& em, const MomentPair& moments) {
  const Index nm = em.space().num_modes();
  std::vector<double> per_cell(em.space().num_cells(), 0.0);
  for (Index c = 0; c < em.space().num_cells(); ++c)
    for (int i = 0; i < 3; ++i)
      if (em.mask().active(kElectric[i]))
        per_cell[c] += em.component(c, kElectric[i]).dot(moments.j[i].segment(c * nm, nm));
  return pairwise_sum(per_cell);
}

double tangential_jump_energy(const EMField& em) {
  const FieldSpace& fs = em.space();
  const Index nx = fs.num_cells();
  std::vector<double> per_face(nx);
  for (Index i = 0; i < nx; ++i) {
    const auto [el, bl] = em.evaluate(i, 1.0);
    const auto [er, br] = em.evaluate((i + 1) % nx, -1.0);
    const Vec3 je = el.cross(Vec3::UnitX()) - er.cross(Vec3::UnitX());
    const Vec3 jb = bl.cross(Vec3::UnitX()) - br.cross(Vec3::UnitX());
    per_face[i] = je.squaredNorm() + jb.squaredNorm();
  }
  return pairwise_sum(per_face);
}

}  // namespace vmdg
