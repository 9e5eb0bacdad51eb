#include "vmdg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vmdg {

StudyMode parse_study_mode(std::string_view name) {
  if (name == "spatial") return StudyMode::spatial;
  if (name == "temporal") return StudyMode::temporal;
  if (name == "coupled") return StudyMode::coupled;
  throw std::invalid_argument("unknown study mode '" + std::string(name) + "'");
}

VelocityMapping parse_mapping(std::string_view name) {
  if (name == "classical") return VelocityMapping::classical;
  if (name == "relativistic") return VelocityMapping::relativistic;
  throw std::invalid_argument("unknown velocity mapping '" + std::string(name) + "'");
}

std::string to_string(VelocityMapping m) {
  return m == VelocityMapping::classical ? "classical" : "relativistic";
}

std::string theory_regime_warning(int k) {
  constexpr int d_x = 1;
  const int k_min = (d_x + 2) / 2;  // ceil((d_x + 1) / 2)
  if (k >= k_min) return {};
  return "degree k = " + std::to_string(k) + " is below ceil((d_x+1)/2) = " + std::to_string(k_min) +
         "; the error estimate does not cover this regime";
}

Setup make_setup(const RunConfig& config) {
  if (config.k < 0) throw std::invalid_argument("k must be >= 0");
  if (!(config.t_final >= 0.0)) throw std::invalid_argument("t_final must be >= 0");
  if (config.stride < 1) throw std::invalid_argument("stride must be >= 1");
  Setup s;
  s.scenario = lookup(config.scenario);
  s.config = config;
  s.mapping = config.mapping.value_or(s.scenario.mapping);

  AxisPartition x = s.scenario.x;
  if (config.nx > 0) x.n_cells = config.nx;
  std::vector<AxisPartition> v = s.scenario.v;
  // f is frozen in field-only scenarios, so refining v would only slow the current evaluation
  if (!config.nv.empty() && s.scenario.evolve_f) {
    if (config.nv.size() != 1 && config.nv.size() != v.size())
      throw std::invalid_argument("nv needs 1 or d_v entries");
    for (std::size_t a = 0; a < v.size(); ++a) v[a].n_cells = config.nv.size() == 1 ? config.nv[0] : config.nv[a];
  }
  const PhaseMesh mesh = build_mesh({x}, v);
  s.phase = make_phase_space(mesh, config.k);
  s.field = make_field_space(x, config.k);

  VlasovMaxwellSystem::Options opt;
  opt.flux = config.flux;
  opt.mapping = s.mapping;
  opt.evolve_f = s.scenario.evolve_f;
  opt.evolve_em = s.scenario.evolve_em;
  if (config.sources) opt.sources = s.scenario.sources;
  s.system = std::make_shared<const VlasovMaxwellSystem>(s.phase, s.field, s.scenario.mask, opt);

  s.initial.f = project_distribution(s.phase, s.scenario.f0);
  s.initial.em = project_em(s.field, s.scenario.mask, s.scenario.e0, s.scenario.b0);
  s.initial.time = 0.0;
  s.rho_i = background_density(compute_moments(s.initial.f, s.mapping, s.field), x);

  s.policy.cfl_number = config.cfl > 0.0 ? config.cfl : 0.3 / (2 * config.k + 1);
  double bound = 0.0;
  if (opt.evolve_f) bound = std::max(bound, s.system->vlasov().max_transport_speed());
  if (opt.evolve_em && s.scenario.mask.count() > 0) bound = std::max(bound, 1.0);
  s.policy.velocity_bound = bound;
  s.h = opt.evolve_f ? mesh.h() : mesh.h_x();
  return s;
}

RunOutput run_simulation(const Setup& setup, std::optional<double> tau) {
  RunOutput out;
  RunOptions options;
  options.adaptive_dt = setup.config.adaptive_dt;
  options.tau = tau;
  options.observer_stride = setup.config.stride;
  const Observer record = [&](const CoupledState& s, long) {
    out.records.push_back(collect_diagnostics(s, setup.mapping, setup.rho_i));
  };
  out.result = run(setup.initial, setup.config.t_final, setup.policy, *setup.system, options, {record});
  return out;
}

RunOutput run_simulation(const RunConfig& config) { return run_simulation(make_setup(config)); }

double StudyResult::combined_eoc() const {
  if (rows.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto combined = [](const ConvergenceRow& r) {
    return std::sqrt(r.err_f * r.err_f + r.err_E * r.err_E + r.err_B * r.err_B);
  };
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  const bool temporal = a.h == b.h;
  return eoc(combined(a), combined(b), temporal ? a.tau / b.tau : a.h / b.h);
}

namespace {

double uniform_tau(double span, double tau) {
  const long n = std::max<long>(1, count_steps(span, tau));
  return span / static_cast<double>(n);
}

struct LevelErrors {
  double f = 0.0, e = 0.0, b = 0.0;
};

LevelErrors exact_errors(const Setup& s, const CoupledState& state) {
  const ExactSolution& ex = *s.scenario.exact;
  const double t = state.time;
  LevelErrors err;
  err.f = l2_error(state.f, [&](const Point& p) { return ex.f(p, t); });
  const FieldErrors fe = l2_error(
      state.em, [&](double x) { return ex.e(x, t); }, [&](double x) { return ex.b(x, t); });
  err.e = fe.e;
  err.b = fe.b;
  return err;
}

double group_difference(const EMField& a, const EMField& b, const std::array<Component, 3>& group) {
  double s = 0.0;
  for (Index c = 0; c < a.space().num_cells(); ++c)
    for (Component comp : group)
      if (a.mask().active(comp)) s += (a.component(c, comp) - b.component(c, comp)).squaredNorm();
  return std::sqrt(s);
}

}  // namespace

StudyResult converge(const StudyConfig& study) {
  if (study.levels < 2) throw std::invalid_argument("converge needs at least 2 levels");
  const Scenario scenario = lookup(study.base.scenario);
  if (!scenario.has_exact())
    throw std::invalid_argument("scenario '" + scenario.name + "' has no exact solution");
  const ScenarioReport check = verify_scenario(scenario);
  if (!check.passed)
    throw std::runtime_error("scenario '" + scenario.name + "' failed its PDE spot check");

  StudyResult result;
  const RunConfig& base = study.base;
  const int base_nx = base.nx > 0 ? base.nx : scenario.x.n_cells;
  std::vector<int> base_nv = base.nv;
  if (base_nv.empty())
    for (const auto& a : scenario.v) base_nv.push_back(a.n_cells);

  if (study.mode == StudyMode::temporal) {
    const Setup setup = make_setup(base);
    const double span = base.t_final;
    const double tau0 = uniform_tau(span, compute_dt(setup.initial, setup.policy, setup.mapping));
    std::vector<CoupledState> finals;
    std::vector<double> taus;
    for (int l = 0; l < study.levels; ++l) {
      const double tau = tau0 / std::pow(2.0, l);
      finals.push_back(run_simulation(setup, tau).result.state);
      taus.push_back(tau);
    }
    const double tau_ref = taus.back() / 8.0;
    const CoupledState ref = run_simulation(setup, tau_ref).result.state;
    for (int l = 0; l < study.levels; ++l) {
      ConvergenceRow row;
      row.level = l;
      row.h = setup.h;
      row.tau = taus[l];
      row.err_f = (finals[l].f.coeffs() - ref.f.coeffs()).norm();
      row.err_E = group_difference(finals[l].em, ref.em, kElectric);
      row.err_B = group_difference(finals[l].em, ref.em, kMagnetic);
      result.rows.push_back(row);
      const MomentPair m = compute_moments(finals[l].f, setup.mapping, setup.field);
      result.div_e.push_back(divergence_residuals(finals[l].em, m, setup.rho_i).div_e);
    }
    const LevelErrors spatial = exact_errors(setup, ref);
    result.spatial_error = std::sqrt(spatial.f * spatial.f + spatial.e * spatial.e + spatial.b * spatial.b);
    const auto& r0 = result.rows.front();
    const double coarsest = std::sqrt(r0.err_f * r0.err_f + r0.err_E * r0.err_E + r0.err_B * r0.err_B);
    result.pollution_check_passed = *result.spatial_error <= 0.01 * coarsest;
    std::ostringstream note;
    note << "temporal errors measured against a reference run with tau = " << tau_ref
         << "; spatial error of the reference " << *result.spatial_error << " vs 1% of coarsest temporal error "
         << 0.01 * coarsest;
    result.notes.push_back(note.str());
    result.rows = eoc(std::move(result.rows), RefinementParameter::tau);
    return result;
  }

  double tau_base = 0.0, h_base = 0.0;
  const double order_exponent = (base.k + 0.5) / 3.0;
  for (int l = 0; l < study.levels; ++l) {
    RunConfig cfg = base;
    const int scale = 1 << l;
    cfg.nx = base_nx * scale;
    cfg.nv = base_nv;
    if (scenario.evolve_f)
      for (int& n : cfg.nv) n *= scale;
    const Setup setup = make_setup(cfg);
    double tau = compute_dt(setup.initial, setup.policy, setup.mapping);
    if (l == 0) {
      tau_base = tau;
      h_base = setup.h;
    }
    if (study.mode == StudyMode::spatial && base.k >= 3) {
      tau = tau_base * std::pow(setup.h / h_base, order_exponent);
      if (l == 0) result.notes.push_back("k >= 3: tau scaled like h^((k+1/2)/3)");
    }
    tau = uniform_tau(cfg.t_final, tau);
    const CoupledState final_state = run_simulation(setup, tau).result.state;
    const LevelErrors err = exact_errors(setup, final_state);
    ConvergenceRow row;
    row.level = l;
    row.h = setup.h;
    row.tau = tau;
    row.err_f = err.f;
    row.err_E = err.e;
    row.err_B = err.b;
    result.rows.push_back(row);
    const MomentPair m = compute_moments(final_state.f, setup.mapping, setup.field);
    result.div_e.push_back(divergence_residuals(final_state.em, m, setup.rho_i).div_e);
  }
  result.rows = eoc(std::move(result.rows), RefinementParameter::h);
  return result;
}

bool IdentityReport::all_passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const IdentityCase& c) { return c.passes == c.trials; });
}

IdentityReport verify_identities(std::uint64_t seed, int trials, double tolerance) {
  IdentityReport report;
  std::mt19937_64 rng(seed);
  const ComponentMask vlasov_mask{Component::E1, Component::E2, Component::B3};

  for (int dv = 1; dv <= 2; ++dv)
    for (int k = 0; k <= 2; ++k) {
      IdentityCase c;
      c.name = "a_h dissipation k=" + std::to_string(k) + (dv == 1 ? " 1D1V" : " 1D2V");
      const AxisPartition x{0.0, 1.0, 3, BoundaryKind::periodic};
      std::vector<AxisPartition> v(dv, AxisPartition{-2.0, 2.0, dv == 1 ? 4 : 3, BoundaryKind::cutoff});
      const auto phase = make_phase_space(build_mesh({x}, v), k);
      const auto field = make_field_space(x, k);
      for (int t = 0; t < trials; ++t) {
        DistributionField f(phase);
        f.coeffs() = random_coefficients(f.coeffs().size(), rng);
        EMField em(field, vlasov_mask);
        em.coeffs() = random_coefficients(em.coeffs().size(), rng);
        const double lhs = apply_ah(f, em, VelocityMapping::classical).dot(f.coeffs());
        const JumpDissipation jd = jump_dissipation(f, em, VelocityMapping::classical);
        const double defect = std::abs(lhs + 0.5 * jd.total()) / (1.0 + std::abs(lhs));
        c.worst = std::max(c.worst, defect);
        c.trials++;
        if (defect <= tolerance && lhs <= tolerance * (1.0 + std::abs(lhs))) c.passes++;
      }
      report.cases.push_back(c);
    }

  const ComponentMask all{Component::E1, Component::E2, Component::E3,
                          Component::B1, Component::B2, Component::B3};
  for (MaxwellFluxKind flux : {MaxwellFluxKind::upwind, MaxwellFluxKind::central,
                               MaxwellFluxKind::alternating_EmBp, MaxwellFluxKind::alternating_EpBm}) {
    IdentityCase c;
    c.name = "b_h energy " + to_string(flux);
    for (int t = 0; t < trials; ++t) {
      const int k = t % 3;
      const AxisPartition x{0.0, 1.0, 4, BoundaryKind::periodic};
      const auto phase = make_phase_space(
          build_mesh({x}, {AxisPartition{-1.0, 1.0, 2, BoundaryKind::cutoff},
                           AxisPartition{-1.0, 1.0, 2, BoundaryKind::cutoff}}),
          k);
      const auto field = make_field_space(x, k);
      DistributionField f(phase);
      f.coeffs() = random_coefficients(f.coeffs().size(), rng);
      EMField em(field, all);
      em.coeffs() = random_coefficients(em.coeffs().size(), rng);
      const MomentPair moments = compute_moments(f, VelocityMapping::classical, field);
      const double b = apply_bh(em, moments, flux).dot(em.coeffs());
      const double work = current_work(em, moments);
      const double jumps = flux == MaxwellFluxKind::upwind ? tangential_jump_energy(em) : 0.0;
      const double defect = std::abs(b + work + 0.5 * jumps) / (1.0 + std::abs(b) + std::abs(work) + jumps);
      c.worst = std::max(c.worst, defect);
      c.trials++;
      if (defect <= tolerance) c.passes++;
    }
    report.cases.push_back(c);
  }
  return report;
}

namespace {

void write_number(std::ostream& os, double v) {
  if (std::isnan(v))
    os << "nan";
  else
    os << v;
}

}  // namespace

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticRecord>& records) {
  const auto flags = os.flags();
  const auto precision = os.precision(17);
  os.unsetf(std::ios::floatfield);
  os << "time,l2_f,l2_E,l2_B,mass,energy_kin,energy_em,div_e,div_b\n";
  for (const auto& r : records) {
    const double values[] = {r.time, r.l2_f, r.l2_E, r.l2_B, r.mass,
                             r.energy_kinetic, r.energy_em, r.div_E_residual, r.div_B_residual};
    for (std::size_t i = 0; i < std::size(values); ++i) {
      if (i) os << ',';
      write_number(os, values[i]);
    }
    os << '\n';
  }
  os.precision(precision);
  os.flags(flags);
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  const auto flags = os.flags();
  const auto precision = os.precision(17);
  os.unsetf(std::ios::floatfield);
  os << "level,h,tau,err_f,err_E,err_B,eoc_f,eoc_E,eoc_B\n";
  for (const auto& r : rows) {
    os << r.level;
    for (double v : {r.h, r.tau, r.err_f, r.err_E, r.err_B, r.eoc_f, r.eoc_E, r.eoc_B}) {
      os << ',';
      write_number(os, v);
    }
    os << '\n';
  }
  os.precision(precision);
  os.flags(flags);
}

}  // namespace vmdg
