#include "vmdg/fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vmdg {

PhaseSpace::PhaseSpace(PhaseMesh m, int degree)
    : mesh(std::move(m)),
      basis(degree, mesh.dim()),
      points_per_axis(degree + 2),
      volume(tensor_gauss_legendre<double>(points_per_axis, mesh.dim())) {
  volume_values = basis.values(volume.nodes);
  for (int a = 0; a < mesh.dim(); ++a) {
    volume_derivatives[a] = basis.derivatives(volume.nodes, a);
    for (int s = 0; s < 2; ++s) {
      auto& face = faces[a][s];
      face.rule = face_gauss_legendre<double>(points_per_axis, mesh.dim(), a,
                                              s == 0 ? Side::low : Side::high);
      face.values = basis.values(face.rule.nodes);
    }
  }
}

Point PhaseSpace::to_physical(Index cell, const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const MultiIndex idx = mesh.multi_index(cell);
  Point p(mesh.dim());
  for (int a = 0; a < mesh.dim(); ++a) p[a] = mesh.axis(a).to_physical(idx[a], xi[a]);
  return p;
}

double PhaseSpace::inv_sqrt_jacobian() const {
  return 1.0 / std::sqrt(mesh.cell_measure() / std::pow(2.0, mesh.dim()));
}

FieldSpace::FieldSpace(AxisPartition axis, int degree)
    : x(axis),
      basis(degree, 1),
      points_per_axis(degree + 2),
      volume(tensor_gauss_legendre<double>(points_per_axis, 1)) {
  volume_values = basis.values(volume.nodes);
  volume_derivatives = basis.derivatives(volume.nodes, 0);
  low_values.resize(basis.size());
  high_values.resize(basis.size());
  for (Index m = 0; m < basis.size(); ++m) {
    low_values(m) = basis.value(m, std::array<double, 1>{-1.0});
    high_values(m) = basis.value(m, std::array<double, 1>{1.0});
  }
}

double FieldSpace::inv_sqrt_jacobian() const { return 1.0 / std::sqrt(0.5 * x.width()); }

std::shared_ptr<const PhaseSpace> make_phase_space(const PhaseMesh& mesh, int degree) {
  return std::make_shared<const PhaseSpace>(mesh, degree);
}

std::shared_ptr<const FieldSpace> make_field_space(const AxisPartition& x, int degree) {
  return std::make_shared<const FieldSpace>(x, degree);
}

DistributionField::DistributionField(std::shared_ptr<const PhaseSpace> space)
    : space_(std::move(space)),
      coeffs_(Eigen::VectorXd::Zero(space_->mesh.num_cells() * space_->num_modes())) {}

DistributionField::DistributionField(std::shared_ptr<const PhaseSpace> space, Eigen::VectorXd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_->mesh.num_cells() * space_->num_modes())
    throw std::invalid_argument("DistributionField: coefficient count mismatch");
}

double DistributionField::value(Index c, const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  double s = 0.0;
  const auto block = cell(c);
  for (Index m = 0; m < block.size(); ++m) s += block[m] * space_->basis.value(m, xi);
  return s * space_->inv_sqrt_jacobian();
}

ComponentMask::ComponentMask(std::initializer_list<Component> comps) {
  slots_.fill(-1);
  for (Component c : comps) add(c);
}

void ComponentMask::add(Component c) {
  if (active(c)) return;
  // Slots follow the canonical component order regardless of insertion order.
  slots_[static_cast<int>(c)] = 0;
  count_ = 0;
  for (int i = 0; i < 6; ++i)
    if (slots_[i] >= 0) slots_[i] = count_++;
}

ComponentMask ComponentMask::parse(std::string_view text) {
  ComponentMask mask;
  std::string token;
  auto flush = [&] {
    static constexpr std::array<std::string_view, 6> names{"E1", "E2", "E3", "B1", "B2", "B3"};
    if (token.empty()) return;
    for (int i = 0; i < 6; ++i)
      if (token == names[i]) {
        mask.add(static_cast<Component>(i));
        token.clear();
        return;
      }
    throw std::invalid_argument("unknown field component '" + token + "'");
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ')
      flush();
    else
      token.push_back(ch);
  }
  flush();
  return mask;
}

std::string ComponentMask::to_string() const {
  static constexpr std::array<const char*, 6> names{"E1", "E2", "E3", "B1", "B2", "B3"};
  std::string out;
  for (int i = 0; i < 6; ++i)
    if (slots_[i] >= 0) {
      if (!out.empty()) out += ',';
      out += names[i];
    }
  return out;
}

EMField::EMField(std::shared_ptr<const FieldSpace> space, ComponentMask mask)
    : space_(std::move(space)),
      mask_(mask),
      coeffs_(Eigen::VectorXd::Zero(space_->num_cells() * mask_.count() * space_->num_modes())) {}

double EMField::value(Component c, Index cell, double xi) const {
  if (!mask_.active(c)) return 0.0;
  const auto block = component(cell, c);
  const std::array<double, 1> p{xi};
  double s = 0.0;
  for (Index m = 0; m < block.size(); ++m) s += block[m] * space_->basis.value(m, p);
  return s * space_->inv_sqrt_jacobian();
}

std::pair<Vec3, Vec3> EMField::evaluate(Index cell, double xi) const {
  Vec3 e, b;
  for (int i = 0; i < 3; ++i) {
    e[i] = value(kElectric[i], cell, xi);
    b[i] = value(kMagnetic[i], cell, xi);
  }
  return {e, b};
}

namespace {
double group_norm(const EMField& em, const std::array<Component, 3>& group) {
  double s = 0.0;
  for (Index c = 0; c < em.space().num_cells(); ++c)
    for (Component comp : group)
      if (em.mask().active(comp)) s += em.component(c, comp).squaredNorm();
  return std::sqrt(s);
}
}  // namespace

double EMField::l2_norm_E() const { return group_norm(*this, kElectric); }
double EMField::l2_norm_B() const { return group_norm(*this, kMagnetic); }

}  // namespace vmdg
