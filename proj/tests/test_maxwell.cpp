#include "oracles.hpp"
#include "vmdg/harness.hpp"
#include "vmdg/maxwell.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace vmdg;

namespace {

const ComponentMask kAll{Component::E1, Component::E2, Component::E3, Component::B1, Component::B2, Component::B3};
constexpr std::array kFluxes{MaxwellFluxKind::upwind, MaxwellFluxKind::central, MaxwellFluxKind::alternating_EmBp,
                             MaxwellFluxKind::alternating_EpBm};

double eval_x(const FieldSpace& fs, const Eigen::VectorXd& coeffs, double x) {
  const std::vector<AxisPartition> xs{fs.x};
  const Index cell = std::min<Index>(fs.num_cells() - 1, static_cast<Index>((x - fs.x.lo) / fs.x.width()));
  Point p(1);
  p << x;
  return eval_field_at(xs, fs.basis, coeffs, cell, p);
}

// Tangential jump energy from pointwise traces at the right end of every cell.
double jump_energy(const EMField& em) {
  const FieldSpace& fs = em.space();
  double s = 0.0;
  for (Index c = 0; c < fs.num_cells(); ++c) {
    const auto [el, bl] = em.evaluate(c, 1.0);
    const auto [er, br] = em.evaluate((c + 1) % fs.num_cells(), -1.0);
    for (int i : {1, 2}) s += (el[i] - er[i]) * (el[i] - er[i]) + (bl[i] - br[i]) * (bl[i] - br[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("flux kind names") {
  for (auto k : kFluxes) CHECK(parse_flux_kind(to_string(k)) == k);
  CHECK(parse_flux_kind("alternating") == MaxwellFluxKind::alternating_EmBp);
  CHECK_THROWS_AS(parse_flux_kind("lax"), std::invalid_argument);
}

TEST_CASE("component masks") {
  const ComponentMask m = ComponentMask::parse("B3, E1,E2");
  CHECK(m.count() == 3);
  CHECK(m.to_string() == "E1,E2,B3");
  CHECK(m.slot(Component::E1) == 0);
  CHECK(m.slot(Component::B3) == 2);
  CHECK_FALSE(m.active(Component::E3));
  CHECK(ComponentMask::parse("").count() == 0);
  CHECK_THROWS_AS(ComponentMask::parse("E4"), std::invalid_argument);
  CHECK_THROWS_AS(validate_flux_mask(ComponentMask{Component::E2}, MaxwellFluxKind::upwind), std::invalid_argument);
  CHECK_THROWS_AS(validate_flux_mask(ComponentMask{Component::E3, Component::B3}, MaxwellFluxKind::central), std::invalid_argument);
  CHECK_NOTHROW(validate_flux_mask(ComponentMask{Component::E1, Component::E2, Component::B3}, MaxwellFluxKind::upwind));
}

TEST_CASE("EMField layout") {
  const auto fs = make_field_space({0.0, 1.0, 4, BoundaryKind::periodic}, 2);
  const EMField em(fs, ComponentMask{Component::E2, Component::B3});
  CHECK(em.coeffs().size() == 4 * 2 * 3);
  CHECK(em.value(Component::E1, 2, 0.3) == 0.0);
}

TEST_CASE("moments of simple distributions") {
  const AxisPartition x{0.0, 1.0, 3, BoundaryKind::periodic};
  const double L = 1.5;
  for (int dv = 1; dv <= 2; ++dv) {
    std::vector<AxisPartition> v(dv, AxisPartition{-L, L, 4, BoundaryKind::cutoff});
    const auto phase = make_phase_space(build_mesh({x}, v), 2);
    const auto fs = make_field_space(x, 2);
    const DistributionField f = project_distribution(phase, [](const Point&) { return 0.7; });
    for (auto mapping : {VelocityMapping::classical, VelocityMapping::relativistic}) {
      const MomentPair m = compute_moments(f, mapping, fs);
      for (double xx : {0.1, 0.5, 0.95}) CHECK(eval_x(*fs, m.rho, xx) == doctest::Approx(0.7 * std::pow(2 * L, dv)));
      for (int i = 0; i < 3; ++i) CHECK(m.j[i].cwiseAbs().maxCoeff() <= 1e-13);
    }
    const MomentPair zero = compute_moments(DistributionField(phase, Eigen::VectorXd::Zero(f.coeffs().size())),
                                            VelocityMapping::classical, fs);
    CHECK(zero.rho.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.j[0].cwiseAbs().maxCoeff() == 0.0);
  }

  // g(x) v has total degree 3, so k = 3 represents it exactly.
  const auto phase = make_phase_space(build_mesh({x}, {AxisPartition{-1.0, 1.0, 3, BoundaryKind::cutoff}}), 3);
  const auto fs = make_field_space(x, 3);
  const auto g = [](double xx) { return 1.0 + xx - 0.5 * xx * xx; };
  const DistributionField f = project_distribution(phase, [&](const Point& p) { return g(p[0]) * p[1]; });
  const MomentPair m = compute_moments(f, VelocityMapping::classical, fs);
  CHECK(m.rho.cwiseAbs().maxCoeff() <= 1e-13);
  for (double xx : {0.05, 0.4, 0.77}) CHECK(eval_x(*fs, m.j[0], xx) == doctest::Approx(2.0 / 3.0 * g(xx)).epsilon(1e-12));
}

TEST_CASE("charge equals mass") {
  std::mt19937_64 rng(2);
  const AxisPartition x{0.0, 2.0, 4, BoundaryKind::periodic};
  const auto phase = make_phase_space(build_mesh({x}, {AxisPartition{-1.0, 1.0, 3, BoundaryKind::cutoff}, AxisPartition{-2.0, 2.0, 2, BoundaryKind::cutoff}}), 2);
  const auto fs = make_field_space(x, 2);
  DistributionField f(phase);
  f.coeffs() = random_coefficients(f.coeffs().size(), rng);
  const MomentPair m = compute_moments(f, VelocityMapping::classical, fs);
  double charge = 0.0;
  for (Index c = 0; c < 4; ++c) charge += m.rho[c * fs->num_modes()] * std::sqrt(x.width());
  CHECK(charge == doctest::Approx(total_mass(f)).epsilon(1e-13));
  CHECK(background_density(m, x) == doctest::Approx(total_mass(f) / 2.0).epsilon(1e-13));
}

TEST_CASE("background density examples") {
  const AxisPartition x{0.0, 1.0, 5, BoundaryKind::periodic};
  const auto fs = make_field_space(x, 2);
  MomentPair m = MomentPair::zero(fs);
  CHECK(background_density(m, x) == 0.0);
  const std::vector<AxisPartition> xs{x};
  m.rho = l2_project(xs, fs->basis, [](const Point&) { return 2.0; });
  CHECK(background_density(m, x) == doctest::Approx(2.0));
  m.rho = l2_project(xs, fs->basis, tensor_gauss_legendre<double>(10, 1),
                     [](const Point& p) { return 1.0 + std::cos(2 * std::numbers::pi * p[0]); });
  CHECK(background_density(m, x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("steady Maxwell states") {
  const AxisPartition x{0.0, 1.0, 4, BoundaryKind::periodic};
  const auto fs = make_field_space(x, 2);
  for (auto flux : kFluxes) {
    const EMField zero(fs, ComponentMask{Component::E2, Component::B3});
    CHECK(apply_bh(zero, MomentPair::zero(fs), flux).cwiseAbs().maxCoeff() == 0.0);
    const EMField c = project_em(fs, ComponentMask{Component::E2, Component::B3}, [](double) { return Vec3(0, 1.5, 0); },
                                 [](double) { return Vec3(0, 0, -0.4); });
    CHECK(apply_bh(c, MomentPair::zero(fs), flux).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("b_h matches the naive assembler") {
  std::mt19937_64 rng(31);
  for (int k = 0; k <= 2; ++k)
    for (int dv = 1; dv <= 2; ++dv) {
      const AxisPartition x{0.0, 1.0, 4, BoundaryKind::periodic};
      std::vector<AxisPartition> v(dv, AxisPartition{-1.0, 1.0, 2, BoundaryKind::cutoff});
      const auto phase = make_phase_space(build_mesh({x}, v), k);
      const auto fs = make_field_space(x, k);
      DistributionField f(phase);
      f.coeffs() = random_coefficients(f.coeffs().size(), rng);
      for (auto mapping : {VelocityMapping::classical, VelocityMapping::relativistic})
        for (auto flux : kFluxes)
          for (const ComponentMask& mask : {kAll, ComponentMask{Component::E1, Component::E2, Component::B3}}) {
            EMField em(fs, mask);
            em.coeffs() = random_coefficients(em.coeffs().size(), rng);
            const Eigen::VectorXd r = apply_bh(em, compute_moments(f, mapping, fs), flux);
            const Eigen::VectorXd ref = oracle::Assembler(f, em, flux, mapping).maxwell();
            CHECK((r - ref).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + ref.cwiseAbs().maxCoeff()));
          }
    }
}

TEST_CASE("energy identities") {
  std::mt19937_64 rng(37);
  for (int k = 0; k <= 3; ++k) {
    const AxisPartition x{-1.0, 2.0, 5, BoundaryKind::periodic};
    const auto phase = make_phase_space(build_mesh({x}, {AxisPartition{-1.0, 1.0, 2, BoundaryKind::cutoff}, AxisPartition{-1.0, 1.0, 2, BoundaryKind::cutoff}}), k);
    const auto fs = make_field_space(x, k);
    for (int t = 0; t < 4; ++t) {
      DistributionField f(phase);
      f.coeffs() = random_coefficients(f.coeffs().size(), rng);
      EMField em(fs, kAll);
      em.coeffs() = random_coefficients(em.coeffs().size(), rng);
      const MomentPair m = compute_moments(f, VelocityMapping::classical, fs);
      const double work = current_work(em, m);
      const double jumps = jump_energy(em);
      CHECK(tangential_jump_energy(em) == doctest::Approx(jumps).epsilon(1e-12));
      for (auto flux : kFluxes) {
        const double b = apply_bh(em, m, flux).dot(em.coeffs());
        const double extra = flux == MaxwellFluxKind::upwind ? 0.5 * jumps : 0.0;
        CHECK(std::abs(b + work + extra) <= 1e-10 * (1.0 + std::abs(b) + std::abs(work) + extra));
      }
    }
  }
}

TEST_CASE("b_h is bilinear and linear in J") {
  std::mt19937_64 rng(41);
  const AxisPartition x{0.0, 1.0, 3, BoundaryKind::periodic};
  const auto fs = make_field_space(x, 2);
  EMField a(fs, kAll), b(fs, kAll), c(fs, kAll);
  a.coeffs() = random_coefficients(a.coeffs().size(), rng);
  b.coeffs() = random_coefficients(b.coeffs().size(), rng);
  c.coeffs() = 2.0 * a.coeffs() - 0.5 * b.coeffs();
  MomentPair j = MomentPair::zero(fs);
  for (auto& comp : j.j) comp = random_coefficients(comp.size(), rng);
  MomentPair j2 = j;
  for (auto& comp : j2.j) comp *= 3.0;
  const MomentPair zero = MomentPair::zero(fs);
  for (auto flux : kFluxes) {
    const Eigen::VectorXd lhs = apply_bh(c, zero, flux);
    const Eigen::VectorXd rhs = 2.0 * apply_bh(a, zero, flux) - 0.5 * apply_bh(b, zero, flux);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::VectorXd dj = apply_bh(a, j, flux) - apply_bh(a, zero, flux);
    const Eigen::VectorXd dj2 = apply_bh(a, j2, flux) - apply_bh(a, zero, flux);
    CHECK((dj2 - 3.0 * dj).cwiseAbs().maxCoeff() <= 1e-12);
    // Testing against the E1 unit vector picks -J1.
    CHECK(dj[a.offset(1, Component::E1)] == doctest::Approx(-j.j[0][1 * fs->num_modes()]));
  }
}
