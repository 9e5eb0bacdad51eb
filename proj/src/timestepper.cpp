#include "vmdg/timestepper.hpp"

#include "vmdg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vmdg {

VlasovMaxwellSystem::VlasovMaxwellSystem(std::shared_ptr<const PhaseSpace> phase,
                                         std::shared_ptr<const FieldSpace> field, ComponentMask mask,
                                         Options options)
    : phase_(std::move(phase)),
      field_(std::move(field)),
      mask_(mask),
      options_(std::move(options)),
      vlasov_(phase_, options_.mapping),
      maxwell_(field_, options_.flux) {
  validate_flux_mask(mask_, options_.flux);
}

Index VlasovMaxwellSystem::f_size() const { return phase_->mesh.num_cells() * phase_->num_modes(); }
Index VlasovMaxwellSystem::em_size() const { return field_->num_cells() * mask_.count() * field_->num_modes(); }

Eigen::VectorXd VlasovMaxwellSystem::pack(const CoupledState& s) const {
  Eigen::VectorXd out(f_size() + em_size());
  out.head(f_size()) = s.f.coeffs();
  out.tail(em_size()) = s.em.coeffs();
  return out;
}

CoupledState VlasovMaxwellSystem::unpack(const Eigen::VectorXd& packed, double time) const {
  CoupledState s{DistributionField(phase_, packed.head(f_size())), EMField(field_, mask_), time};
  s.em.coeffs() = packed.tail(em_size());
  return s;
}

Eigen::VectorXd VlasovMaxwellSystem::rhs(const Eigen::VectorXd& packed, double t) const {
  const CoupledState s = unpack(packed, t);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(packed.size());
  const bool forced = sources_enabled_ && !options_.sources.empty();
  if (options_.evolve_f) {
    Eigen::VectorXd rf;
    vlasov_.apply(s.f, s.em, rf);
    if (forced && options_.sources.f) {
      const auto axes = phase_->mesh.axes();
      rf += l2_project(axes, phase_->basis, [&](const Point& p) { return options_.sources.f(p, t); });
    }
    out.head(f_size()) = rf;
  }
  if (options_.evolve_em && mask_.count() > 0) {
    const MomentPair moments = compute_moments(s.f, options_.mapping, field_);
    Eigen::VectorXd rem;
    maxwell_.apply(s.em, moments, rem);
    if (forced && (options_.sources.e || options_.sources.b)) {
      const auto zero = [](double, double) { return Vec3::Zero().eval(); };
      const auto& se = options_.sources.e ? options_.sources.e : std::function<Vec3(double, double)>(zero);
      const auto& sb = options_.sources.b ? options_.sources.b : std::function<Vec3(double, double)>(zero);
      rem += project_em(
                 field_, mask_, [&](double x) { return se(x, t); }, [&](double x) { return sb(x, t); })
                 .coeffs();
    }
    out.tail(em_size()) = rem;
  }
  return out;
}

namespace {

Eigen::VectorXd step_increment(const Eigen::VectorXd& un, double t, double tau,
                               const VlasovMaxwellSystem& system) {
  if (!un.allFinite()) throw std::invalid_argument("rk3_step: nonfinite state");
  return ssp_rk3_increment(un, t, tau, [&](const Eigen::VectorXd& u, double s) { return system.rhs(u, s); });
}

}  // namespace

CoupledState rk3_step(const CoupledState& state, double tau, const VlasovMaxwellSystem& system) {
  const Eigen::VectorXd un = system.pack(state);
  return system.unpack(un + step_increment(un, state.time, tau, system), state.time + tau);
}

CoupledState rk3_step(const CoupledState& state, double tau, MaxwellFluxKind flux,
                      VelocityMapping mapping) {
  VlasovMaxwellSystem::Options opt;
  opt.flux = flux;
  opt.mapping = mapping;
  const VlasovMaxwellSystem system(state.f.space_ptr(), state.em.space_ptr(), state.em.mask(), opt);
  return rk3_step(state, tau, system);
}

double compute_dt(const CoupledState& state, const CflPolicy& policy, VelocityMapping mapping) {
  const PhaseMesh& mesh = state.f.mesh();
  const int dv = mesh.dim_v();
  double lambda_v = policy.acceleration_floor;
  if (state.em.space_ptr() && state.em.mask().count() > 0) {
    const PhaseSpace& sp = state.f.space();
    for (Index c = 0; c < mesh.num_cells(); ++c) {
      const MultiIndex idx = mesh.multi_index(c);
      for (int a = 1; a <= dv; ++a)
        for (int side = 0; side < 2; ++side) {
          const auto& rule = sp.faces[a][side].rule;
          for (Index q = 0; q < rule.size(); ++q) {
            const auto [e, b] = state.em.evaluate(idx[0], rule.nodes(0, q));
            Velocity v(dv);
            for (int j = 0; j < dv; ++j) v[j] = mesh.axis(j + 1).to_physical(idx[j + 1], rule.nodes(j + 1, q));
            lambda_v = std::max(lambda_v, lorentz_acceleration(e, b, transport_velocity(mapping, v)).norm());
          }
        }
    }
  }
  double h_v_min = std::numeric_limits<double>::infinity();
  for (const auto& a : mesh.v_axes()) h_v_min = std::min(h_v_min, a.width());
  const double lambda_x = std::max(policy.velocity_bound, policy.acceleration_floor);
  const double tau = policy.cfl_number * std::min(mesh.h_x() / lambda_x, h_v_min / lambda_v);
  return std::min(tau, policy.cfl_number * mesh.h());
}

long count_steps(double span, double tau) {
  if (span <= 0.0) return 0;
  return static_cast<long>(std::ceil(span / tau * (1.0 - 1e-12)));
}

RunResult run(const CoupledState& initial, double t_final, const CflPolicy& policy,
              const VlasovMaxwellSystem& system, const RunOptions& options,
              const std::vector<Observer>& observers) {
  if (t_final < initial.time) throw std::invalid_argument("run: t_final precedes the initial time");
  const auto notify = [&](const CoupledState& s, long step) {
    for (const auto& obs : observers) obs(s, step);
  };
  RunResult result{initial, 0, 0.0};
  const VelocityMapping mapping = system.options().mapping;
  double tau = options.tau ? *options.tau : compute_dt(initial, policy, mapping);
  result.tau = tau;
  notify(result.state, 0);
  const double t0 = initial.time;
  const long stride = std::max<long>(1, options.observer_stride);
  const long fixed_steps = count_steps(t_final - t0, tau);
  long step = 0;
  Eigen::VectorXd packed = system.pack(initial);
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(packed.size());
  while (true) {
    double dt;
    if (options.adaptive_dt) {
      if (!(result.state.time < t_final) || t_final - result.state.time <= 1e-12 * tau) break;
      if (step > 0) tau = compute_dt(result.state, policy, mapping);
      dt = std::min(tau, t_final - result.state.time);
    } else {
      if (step >= fixed_steps) break;
      dt = step + 1 < fixed_steps ? tau : t_final - (t0 + step * tau);
    }
    // Kahan summation of the increments; carry holds the lost low-order bits.
    const Eigen::VectorXd y = step_increment(packed, result.state.time, dt, system) - carry;
    const Eigen::VectorXd sum = packed + y;
    carry = (sum - packed) - y;
    packed = sum;
    CoupledState next = system.unpack(packed, result.state.time + dt);
    ++step;
    next.time = options.adaptive_dt ? result.state.time + dt : (step == fixed_steps ? t_final : t0 + step * tau);
    if (!next.f.coeffs().allFinite() || !next.em.coeffs().allFinite())
      throw BlowUpError(step, "nonfinite state after step " + std::to_string(step));
    result.state = std::move(next);
    const bool last = options.adaptive_dt ? !(t_final - result.state.time > 1e-12 * tau) : step == fixed_steps;
    if (step % stride == 0 || last) notify(result.state, step);
  }
  result.steps = step;
  return result;
}

}  // namespace vmdg
