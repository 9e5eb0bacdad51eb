#include "vmdg/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <thread>

using namespace vmdg;

TEST_CASE("catalog lookups") {
  CHECK(lookup("free_streaming").has_exact());
  CHECK_FALSE(lookup("weibel_1d2v").has_exact());
  CHECK(lookup("weibel_1d2v").dim_v == 2);
  CHECK(lookup("free_streaming_relativistic").mapping == VelocityMapping::relativistic);
  CHECK_THROWS_AS(lookup("landau"), std::invalid_argument);
  for (const auto& name : scenario_names()) CHECK(lookup(name).name == name);
}

TEST_CASE("every scenario passes its spot check") {
  for (const auto& name : scenario_names()) {
    const ScenarioReport r = verify_scenario(lookup(name));
    CAPTURE(name);
    CHECK(r.passed);
    CHECK(r.support_margin_cells >= 2.0);
    if (r.has_exact) {
      CHECK(r.points == 100);
      CHECK(r.max_relative_residual <= 1e-6);
    }
  }
  CHECK(verify_scenario(lookup("maxwell_vacuum_1d")).max_relative_residual <= 1e-6);
}

TEST_CASE("spot check catches a wrong solution") {
  Scenario s = lookup("maxwell_vacuum_1d");
  s.exact->b = [](double x, double t) { return Vec3(0, 0, std::cos(2 * M_PI * (x + t))); };
  CHECK_FALSE(verify_scenario(s).passed);

  Scenario m = lookup("manufactured_coupled");
  m.sources.f = nullptr;
  CHECK_FALSE(verify_scenario(m).passed);
}

TEST_CASE("exact solutions start from the initial data") {
  for (const auto& name : scenario_names()) {
    const Scenario s = lookup(name);
    if (!s.has_exact()) continue;
    for (double x : {0.1, 0.7, 2.0}) {
      Point p(1 + s.dim_v);
      p[0] = x;
      for (int j = 0; j < s.dim_v; ++j) p[1 + j] = 0.3 - 0.2 * j;
      CHECK(s.exact->f(p, 0.0) == doctest::Approx(s.f0(p)));
      CHECK((s.exact->e(x, 0.0) - s.e0(x)).norm() <= 1e-14);
      CHECK((s.exact->b(x, 0.0) - s.b0(x)).norm() <= 1e-14);
    }
  }
}

TEST_CASE("manufactured fields satisfy Gauss's law") {
  for (const char* name : {"manufactured_coupled", "manufactured_coupled_relativistic"}) {
    const Scenario s = lookup(name);
    // rho - rho_i from a fine composite v integral; rho_i is the x-average.
    const auto rho = [&](double x, double t) {
      const int n = 4000;
      const double lo = s.v[0].lo, w = (s.v[0].hi - lo) / n;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        Point p(2);
        p << x, lo + (i + 0.5) * w;
        sum += s.exact->f(p, t) * w;
      }
      return sum;
    };
    double mean = 0.0;
    for (int i = 0; i < 64; ++i) mean += rho(s.x.lo + (i + 0.5) * s.x.length() / 64, 0.3) / 64;
    for (double x : {0.4, 1.9, 4.4}) {
      const double eps = 1e-4;
      const double dE = (s.exact->e(x + eps, 0.3)[0] - s.exact->e(x - eps, 0.3)[0]) / (2 * eps);
      CHECK(dE == doctest::Approx(rho(x, 0.3) - mean).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("callables are safe to evaluate concurrently") {
  const Scenario s = lookup("manufactured_coupled_relativistic");
  std::vector<double> out(4, 0.0);
  {
    std::vector<std::jthread> threads;
    for (int i = 0; i < 4; ++i)
      threads.emplace_back([&, i] {
        double acc = 0.0;
        for (int j = 0; j < 200; ++j) {
          Point p(2);
          p << 0.01 * j, -1.0 + 0.01 * j;
          acc += s.exact->f(p, 0.5) + s.sources.f(p, 0.5) + s.sources.e(0.01 * j, 0.5)[0];
        }
        out[i] = acc;
      });
  }
  for (int i = 1; i < 4; ++i) CHECK(out[i] == out[0]);
}
