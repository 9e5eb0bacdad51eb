#pragma once

#include "vmdg/fields.hpp"
#include "vmdg/maxwell.hpp"
#include "vmdg/vlasov.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace vmdg {

/// u_s = initial_weight * u^n + stage_weight * u_{s-1} + step_factor * tau * L(u_{s-1}).
/// time_offset is the time of u_s in units of tau after t^n.
struct StageCoefficients {
  double initial_weight;
  double stage_weight;
  double step_factor;
  double time_offset;
};

/// Third-order strong-stability-preserving Runge-Kutta (Shu-Osher form).
inline constexpr std::array<StageCoefficients, 3> kSspRk3Stages{{
    {1.0, 0.0, 1.0, 1.0},
    {3.0 / 4.0, 1.0 / 4.0, 1.0 / 4.0, 0.5},
    {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0},
}};

/// One SSP-RK3 step for any vector-like state (double, Eigen vectors, ...).
/// rhs(u, t) returns L(u) at time t.
template <class Vec, class Rhs>
Vec ssp_rk3_step(const Vec& un, double t, double tau, Rhs&& rhs) {
  Vec stage = un;
  double stage_time = t;
  for (const StageCoefficients& s : kSspRk3Stages) {
    const Vec l = rhs(stage, stage_time);
    stage = s.initial_weight * un + s.stage_weight * stage + (s.step_factor * tau) * l;
    stage_time = t + s.time_offset * tau;
  }
  return stage;
}

/// The same step written for the increment w = u^{n+1} - u^n. Each stage has
/// initial_weight + stage_weight = 1, so w_s = stage_weight * w_{s-1} +
/// step_factor * tau * L(u^n + w_{s-1}). Adding w to u^n with compensated
/// summation keeps rounding from piling up over long runs.
template <class Vec, class Rhs>
Vec ssp_rk3_increment(const Vec& un, double t, double tau, Rhs&& rhs) {
  Vec w = 0.0 * un;
  double stage_time = t;
  for (const StageCoefficients& s : kSspRk3Stages) {
    const Vec l = rhs(un + w, stage_time);
    w = s.stage_weight * w + (s.step_factor * tau) * l;
    stage_time = t + s.time_offset * tau;
  }
  return w;
}

struct CoupledState {
  DistributionField f;
  EMField em;
  double time = 0.0;
};

/// Optional forcing added to the right-hand sides (projected at stage time).
struct SourceTerms {
  std::function<double(const Point&, double)> f;
  std::function<Vec3(double, double)> e;
  std::function<Vec3(double, double)> b;

  bool empty() const { return !f && !e && !b; }
};

/// The semi-discrete Vlasov-Maxwell system du/dt = L(u, t) acting on the
/// packed coefficient vector [f; em].
class VlasovMaxwellSystem {
 public:
  struct Options {
    MaxwellFluxKind flux = MaxwellFluxKind::upwind;
    VelocityMapping mapping = VelocityMapping::classical;
    bool evolve_f = true;
    bool evolve_em = true;
    SourceTerms sources;
  };

  VlasovMaxwellSystem(std::shared_ptr<const PhaseSpace> phase, std::shared_ptr<const FieldSpace> field,
                      ComponentMask mask, Options options);

  const Options& options() const { return options_; }
  const VlasovOperator& vlasov() const { return vlasov_; }
  const std::shared_ptr<const PhaseSpace>& phase_space() const { return phase_; }
  const std::shared_ptr<const FieldSpace>& field_space() const { return field_; }
  const ComponentMask& mask() const { return mask_; }
  Index f_size() const;
  Index em_size() const;

  Eigen::VectorXd pack(const CoupledState& s) const;
  CoupledState unpack(const Eigen::VectorXd& packed, double time) const;
  Eigen::VectorXd rhs(const Eigen::VectorXd& packed, double t) const;
  Eigen::VectorXd rhs(const CoupledState& s) const { return rhs(pack(s), s.time); }

  /// Disables or re-enables the source terms (e.g. for a source-free window).
  void set_sources_enabled(bool on) { sources_enabled_ = on; }

 private:
  std::shared_ptr<const PhaseSpace> phase_;
  std::shared_ptr<const FieldSpace> field_;
  ComponentMask mask_;
  Options options_;
  VlasovOperator vlasov_;
  MaxwellOperator maxwell_;
  bool sources_enabled_ = true;
};

/// Advances state by tau. Each stage evaluates a_h and b_h on the same stage
/// values, with J_h recomputed from that stage's f_h.
CoupledState rk3_step(const CoupledState& state, double tau, const VlasovMaxwellSystem& system);
CoupledState rk3_step(const CoupledState& state, double tau, MaxwellFluxKind flux,
                      VelocityMapping mapping);

struct CflPolicy {
  double cfl_number = 0.1;
  /// Max |transport velocity| (and the light speed 1 when Maxwell is evolved).
  double velocity_bound = 1.0;
  double acceleration_floor = 1e-12;
};

/// tau = cfl * min(h_x / Lambda_x, h_v,min / Lambda_v), capped at cfl * h,
/// where Lambda_v is the largest |E + u x B| over v-face quadrature nodes.
double compute_dt(const CoupledState& state, const CflPolicy& policy,
                  VelocityMapping mapping = VelocityMapping::classical);

struct BlowUpError : std::runtime_error {
  BlowUpError(long step, const std::string& what) : std::runtime_error(what), step(step) {}
  long step;
};

struct RunOptions {
  bool adaptive_dt = false;
  /// Fixed step; when empty it is computed once from the initial state.
  std::optional<double> tau;
  long observer_stride = 1;
};

using Observer = std::function<void(const CoupledState&, long step)>;

struct RunResult {
  CoupledState state;
  long steps = 0;
  double tau = 0.0;
};

/// Steps to t_final, shortening the last step to land on it. Observers see
/// the initial state, every observer_stride-th step and the final state.
RunResult run(const CoupledState& initial, double t_final, const CflPolicy& policy,
              const VlasovMaxwellSystem& system, const RunOptions& options = {},
              const std::vector<Observer>& observers = {});

/// Number of steps of length tau needed to cover span (the last one may be shorter).
long count_steps(double span, double tau);

}  // namespace vmdg
