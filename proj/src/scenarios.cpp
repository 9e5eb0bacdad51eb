#include "vmdg/scenarios.hpp"

#include "vmdg/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vmdg {
namespace {

constexpr double kPi = std::numbers::pi;

AxisPartition periodic(double lo, double hi, int n) { return {lo, hi, n, BoundaryKind::periodic}; }
AxisPartition cutoff(double lo, double hi, int n) { return {lo, hi, n, BoundaryKind::cutoff}; }

Velocity velocity_of(const Point& p) {
  Velocity v(p.size() - 1);
  for (Index j = 0; j + 1 < p.size(); ++j) v[j] = p[j + 1];
  return v;
}

/// Composite Gauss-Legendre integral of g over [lo, hi].
double integrate(const std::function<double(double)>& g, double lo, double hi, int panels = 64) {
  static const auto rule = gauss_legendre<double>(10);
  const double w = (hi - lo) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (Index q = 0; q < rule.size(); ++q)
      s += 0.5 * w * rule.weights[q] * g(lo + w * (p + 0.5 + 0.5 * rule.nodes(0, q)));
  return s;
}

Scenario free_streaming(VelocityMapping mapping) {
  Scenario s;
  s.name = mapping == VelocityMapping::classical ? "free_streaming" : "free_streaming_relativistic";
  s.description = "1D1V transport with E = B = 0; f(x,v,t) = f0(x - u(v) t, v)";
  s.dim_v = 1;
  s.mapping = mapping;
  s.x = periodic(0.0, 2.0 * kPi, 8);
  s.v = {cutoff(-6.0, 6.0, 8)};
  s.coarsest_v_cells = 8;
  s.evolve_em = false;
  const auto profile = [](double x, double v) { return std::exp(-v * v / 0.25) * (1.0 + 0.5 * std::sin(x)); };
  s.f0 = [profile](const Point& p) { return profile(p[0], p[1]); };
  s.e0 = [](double) { return Vec3::Zero().eval(); };
  s.b0 = s.e0;
  ExactSolution ex;
  ex.f = [profile, mapping](const Point& p, double t) {
    const double u = transport_velocity(mapping, velocity_of(p))[0];
    return profile(p[0] - u * t, p[1]);
  };
  ex.e = [](double, double) { return Vec3::Zero().eval(); };
  ex.b = ex.e;
  s.exact = ex;
  return s;
}

Scenario maxwell_vacuum() {
  Scenario s;
  s.name = "maxwell_vacuum_1d";
  s.description = "plane wave E2 = B3 = cos(2 pi (x - t)) in vacuum, f = 0";
  s.dim_v = 1;
  s.mask = {Component::E2, Component::B3};
  s.x = periodic(0.0, 1.0, 8);
  s.v = {cutoff(-1.0, 1.0, 1)};
  s.coarsest_v_cells = 1;
  s.evolve_f = false;
  s.f0 = [](const Point&) { return 0.0; };
  const auto wave = [](double x, double t) {
    const double c = std::cos(2.0 * kPi * (x - t));
    return Vec3(0.0, c, 0.0);
  };
  const auto bwave = [](double x, double t) {
    const double c = std::cos(2.0 * kPi * (x - t));
    return Vec3(0.0, 0.0, c);
  };
  s.e0 = [wave](double x) { return wave(x, 0.0); };
  s.b0 = [bwave](double x) { return bwave(x, 0.0); };
  ExactSolution ex;
  ex.f = [](const Point&, double) { return 0.0; };
  ex.e = wave;
  ex.b = bwave;
  s.exact = ex;
  return s;
}

/// f = M(v) (2 + sin(x-t) + v cos(x-t) / 2), M = exp(-v^2 / s2),
/// E1 = -m0 cos(x-t) so that d_x E1 = rho - rho_i, plus a transverse vacuum
/// wave E2 = B3 = cos(x-t) / 2 that f does not feel. S_f and S_E1 close the
/// system.
Scenario manufactured(VelocityMapping mapping) {
  Scenario s;
  s.name = mapping == VelocityMapping::classical ? "manufactured_coupled" : "manufactured_coupled_relativistic";
  s.description = "forced 1D1V Vlasov-Maxwell with closed-form solution";
  s.dim_v = 1;
  s.mapping = mapping;
  s.mask = {Component::E1, Component::E2, Component::B3};
  s.x = periodic(0.0, 2.0 * kPi, 8);
  const double L = 6.0;
  s.v = {cutoff(-L, L, 8)};
  s.coarsest_v_cells = 8;

  constexpr double s2 = 0.25;
  const auto M = [](double v) { return std::exp(-v * v / s2); };
  const auto u_of = [mapping](double v) {
    return mapping == VelocityMapping::classical ? v : v / std::sqrt(1.0 + v * v);
  };
  const double m0 = std::sqrt(kPi * s2) * std::erf(L / std::sqrt(s2));
  // int u(v) v M(v) dv over the truncated domain.
  const double mu = mapping == VelocityMapping::classical
                        ? 0.5 * s2 * m0 - s2 * L * std::exp(-L * L / s2)
                        : integrate([&](double v) { return u_of(v) * v * M(v); }, -L, L, 256);

  const auto f = [M](double x, double v, double t) {
    return M(v) * (2.0 + std::sin(x - t) + 0.5 * v * std::cos(x - t));
  };
  const auto e_exact = [m0](double x, double t) {
    const double c = std::cos(x - t);
    return Vec3(-m0 * c, 0.5 * c, 0.0);
  };
  const auto b_exact = [](double x, double t) { return Vec3(0.0, 0.0, 0.5 * std::cos(x - t)); };

  s.f0 = [f](const Point& p) { return f(p[0], p[1], 0.0); };
  s.e0 = [e_exact](double x) { return e_exact(x, 0.0); };
  s.b0 = [b_exact](double x) { return b_exact(x, 0.0); };
  ExactSolution ex;
  ex.f = [f](const Point& p, double t) { return f(p[0], p[1], t); };
  ex.e = e_exact;
  ex.b = b_exact;
  s.exact = ex;

  s.sources.f = [M, m0, u_of](const Point& p, double t) {
    const double x = p[0], v = p[1];
    const double sn = std::sin(x - t), cs = std::cos(x - t);
    const double m = M(v);
    const double dt = m * (-cs + 0.5 * v * sn);
    const double dx = m * (cs - 0.5 * v * sn);
    const double dv = -2.0 * v / s2 * m * (2.0 + sn + 0.5 * v * cs) + m * 0.5 * cs;
    const double e1 = -m0 * cs;
    return dt + u_of(v) * dx + e1 * dv;
  };
  // dE1/dt = -J1 + S_E1 with J1 = mu cos(x-t) / 2.
  s.sources.e = [m0, mu](double x, double t) {
    return Vec3(-m0 * std::sin(x - t) + 0.5 * mu * std::cos(x - t), 0.0, 0.0);
  };
  return s;
}

Scenario weibel() {
  Scenario s;
  s.name = "weibel_1d2v";
  s.description = "reduced 1D2V Weibel setup with anisotropic Maxwellian; no exact solution";
  s.dim_v = 2;
  s.mask = {Component::E1, Component::E2, Component::B3};
  const double k0 = 1.25, beta = 0.01, tr = 12.0, alpha = 1e-4;
  s.x = periodic(0.0, 2.0 * kPi / k0, 16);
  s.v = {cutoff(-3.0, 3.0, 16), cutoff(-3.0, 3.0, 16)};
  s.coarsest_v_cells = 16;
  s.f0 = [beta, tr](const Point& p) {
    const double v1 = p[1], v2 = p[2];
    return std::exp(-(v1 * v1 + v2 * v2 / tr) / beta) / (kPi * beta * std::sqrt(tr));
  };
  s.e0 = [](double) { return Vec3::Zero().eval(); };
  s.b0 = [alpha, k0](double x) { return Vec3(0.0, 0.0, alpha * std::sin(k0 * x)); };
  return s;
}

/// Fourth-order central difference.
double derivative(const std::function<double(double)>& g, double at, double h) {
  return (-g(at + 2 * h) + 8 * g(at + h) - 8 * g(at - h) + g(at - 2 * h)) / (12 * h);
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"free_streaming",       "free_streaming_relativistic",      "maxwell_vacuum_1d",
          "manufactured_coupled", "manufactured_coupled_relativistic", "weibel_1d2v"};
}

Scenario lookup(std::string_view name) {
  if (name == "free_streaming") return free_streaming(VelocityMapping::classical);
  if (name == "free_streaming_relativistic") return free_streaming(VelocityMapping::relativistic);
  if (name == "maxwell_vacuum_1d") return maxwell_vacuum();
  if (name == "manufactured_coupled") return manufactured(VelocityMapping::classical);
  if (name == "manufactured_coupled_relativistic") return manufactured(VelocityMapping::relativistic);
  if (name == "weibel_1d2v") return weibel();
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

ScenarioReport verify_scenario(const Scenario& s, int points, std::uint64_t seed, double tolerance) {
  ScenarioReport report;
  report.name = s.name;
  report.has_exact = s.has_exact();

  // Support margin of f0 on a sampling grid.
  {
    const int nx = 32, nv = s.dim_v == 1 ? 2001 : 241;
    double fmax = 0.0;
    std::vector<std::pair<Point, double>> samples;
    Point p(1 + s.dim_v);
    for (int i = 0; i < nx; ++i) {
      p[0] = s.x.lo + (i + 0.5) * s.x.length() / nx;
      const int total = s.dim_v == 1 ? nv : nv * nv;
      for (int j = 0; j < total; ++j) {
        p[1] = s.v[0].lo + (j % nv) * s.v[0].length() / (nv - 1);
        if (s.dim_v == 2) p[2] = s.v[1].lo + (j / nv) * s.v[1].length() / (nv - 1);
        const double val = std::abs(s.f0(p));
        fmax = std::max(fmax, val);
        samples.emplace_back(p, val);
      }
    }
    double margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < s.dim_v; ++a) {
      const double w = s.v[a].length() / s.coarsest_v_cells;
      double lo = s.v[a].hi, hi = s.v[a].lo;
      for (const auto& [q, val] : samples)
        if (val > 1e-12 * fmax) {
          lo = std::min(lo, q[a + 1]);
          hi = std::max(hi, q[a + 1]);
        }
      if (fmax > 0.0) margin = std::min(margin, std::min(lo - s.v[a].lo, s.v[a].hi - hi) / w);
    }
    report.support_margin_cells = margin;
  }

  bool ok = report.support_margin_cells >= 2.0;
  if (!s.has_exact()) {
    report.passed = ok;
    return report;
  }

  const ExactSolution& ex = *s.exact;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double hstep = 1e-3;
  double worst = 0.0;
  for (int n = 0; n < points; ++n) {
    const double t = 0.1 + 0.8 * unit(rng);
    Point p(1 + s.dim_v);
    p[0] = s.x.lo + s.x.length() * unit(rng);
    for (int a = 0; a < s.dim_v; ++a) {
      // Stay clear of the cutoff boundary so the stencil is inside the domain.
      const double margin = 5 * hstep;
      p[a + 1] = s.v[a].lo + margin + (s.v[a].length() - 2 * margin) * unit(rng);
    }
    const auto [e, b] = std::pair{ex.e(p[0], t), ex.b(p[0], t)};

    if (s.evolve_f) {
      const Velocity u = transport_velocity(s.mapping, velocity_of(p));
      const Velocity acc = lorentz_acceleration(e, b, u);
      const double dt = derivative([&](double tt) { return ex.f(p, tt); }, t, hstep);
      const double dx = derivative([&](double xx) { Point q = p; q[0] = xx; return ex.f(q, t); }, p[0], hstep);
      double terms = std::abs(dt) + std::abs(u[0] * dx);
      double residual = dt + u[0] * dx;
      for (int a = 0; a < s.dim_v; ++a) {
        const double dv = derivative([&](double vv) { Point q = p; q[a + 1] = vv; return ex.f(q, t); },
                                     p[a + 1], hstep);
        residual += acc[a] * dv;
        terms += std::abs(acc[a] * dv);
      }
      const double src = s.sources.f ? s.sources.f(p, t) : 0.0;
      residual -= src;
      terms += std::abs(src);
      worst = std::max(worst, std::abs(residual) / (terms + 1e-10));
    }

    if (s.evolve_em && s.mask.count() > 0) {
      // J from the exact f by quadrature over the velocity domain.
      Vec3 j = Vec3::Zero();
      if (s.evolve_f) {
        if (s.dim_v == 1) {
          j[0] = integrate([&](double v) {
            Point q(2);
            q << p[0], v;
            return transport_velocity(s.mapping, velocity_of(q))[0] * ex.f(q, t);
          }, s.v[0].lo, s.v[0].hi, 128);
        } else {
          for (int c = 0; c < 2; ++c)
            j[c] = integrate([&](double v1) {
              return integrate([&](double v2) {
                Point q(3);
                q << p[0], v1, v2;
                return transport_velocity(s.mapping, velocity_of(q))[c] * ex.f(q, t);
              }, s.v[1].lo, s.v[1].hi, 32);
            }, s.v[0].lo, s.v[0].hi, 32);
        }
      }
      const auto d_t = [&](bool electric, int i) {
        return derivative([&](double tt) { return electric ? ex.e(p[0], tt)[i] : ex.b(p[0], tt)[i]; }, t, hstep);
      };
      const auto d_x = [&](bool electric, int i) {
        return derivative([&](double xx) { return electric ? ex.e(xx, t)[i] : ex.b(xx, t)[i]; }, p[0], hstep);
      };
      const Vec3 se = s.sources.e ? s.sources.e(p[0], t) : Vec3::Zero().eval();
      const Vec3 sb = s.sources.b ? s.sources.b(p[0], t) : Vec3::Zero().eval();
      // curl W = (0, -d_x W3, d_x W2)
      const Vec3 curl_b(0.0, -d_x(false, 2), d_x(false, 1));
      const Vec3 curl_e(0.0, -d_x(true, 2), d_x(true, 1));
      for (int i = 0; i < 3; ++i) {
        if (s.mask.active(kElectric[i])) {
          const double et = d_t(true, i);
          const double r = et - curl_b[i] + j[i] - se[i];
          const double terms = std::abs(et) + std::abs(curl_b[i]) + std::abs(j[i]) + std::abs(se[i]);
          worst = std::max(worst, std::abs(r) / (terms + 1e-10));
        }
        if (s.mask.active(kMagnetic[i])) {
          const double bt = d_t(false, i);
          const double r = bt + curl_e[i] - sb[i];
          const double terms = std::abs(bt) + std::abs(curl_e[i]) + std::abs(sb[i]);
          worst = std::max(worst, std::abs(r) / (terms + 1e-10));
        }
      }
    }
  }
  report.points = points;
  report.max_relative_residual = worst;
  report.passed = ok && worst <= tolerance;
  return report;
}

}  // namespace vmdg
