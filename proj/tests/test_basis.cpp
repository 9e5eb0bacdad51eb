#include "oracles.hpp"
#include "vmdg/diagnostics.hpp"
#include "vmdg/projection.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace vmdg;

namespace {

// P_n(x) = 2^-n sum_j C(n,j)^2 (x-1)^(n-j) (x+1)^j, normalized.
double legendre_monomial(int n, double x) {
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double c = std::tgamma(n + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(n - j + 1.0));
    s += c * c * std::pow(x - 1.0, n - j) * std::pow(x + 1.0, j);
  }
  return std::sqrt(n + 0.5) * s / std::pow(2.0, n);
}

// Composite Gauss integral of g over [a, b].
template <class G>
double composite(G&& g, double a, double b, int pieces = 64) {
  const oracle::Rule1d r = oracle::gauss(7);
  const double w = (b - a) / pieces;
  double s = 0.0;
  for (int p = 0; p < pieces; ++p)
    for (std::size_t q = 0; q < r.x.size(); ++q) s += 0.5 * w * r.w[q] * g(a + (p + 0.5 + 0.5 * r.x[q]) * w);
  return s;
}

}  // namespace

TEST_CASE("mode counts") {
  CHECK(make_basis(0, 2).size() == 1);
  CHECK(make_basis(2, 2).size() == 6);
  CHECK(make_basis(3, 3).size() == 20);
  for (int k = 0; k <= 4; ++k)
    for (int d = 1; d <= 3; ++d) CHECK(make_basis(k, d).size() == num_modes(k, d));
  CHECK_THROWS_AS(make_basis(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_basis(1, 4), std::invalid_argument);
}

TEST_CASE("mode 0 is the constant and degrees are total") {
  const auto b = make_basis(3, 3);
  CHECK(b.modes()[0] == MultiIndex{0, 0, 0});
  for (const auto& m : b.modes()) CHECK(m[0] + m[1] + m[2] <= 3);
}

TEST_CASE("Gram matrix is the identity") {
  for (auto [k, d] : {std::pair{3, 3}, std::pair{2, 2}, std::pair{4, 1}, std::pair{0, 3}}) {
    const auto b = make_basis(k, d);
    // Independent rule: boost Gauss nodes, k+1 points per axis.
    const oracle::Rule1d r = oracle::gauss(k + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(b.size(), b.size());
    std::vector<int> idx(d, 0);
    while (true) {
      Point xi(d);
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        xi[a] = r.x[idx[a]];
        w *= r.w[idx[a]];
      }
      for (Index i = 0; i < b.size(); ++i)
        for (Index j = 0; j < b.size(); ++j) gram(i, j) += w * b.value(i, xi) * b.value(j, xi);
      int a = 0;
      while (a < d && ++idx[a] == static_cast<int>(r.x.size())) idx[a++] = 0;
      if (a == d) break;
    }
    CHECK((gram - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Gauss-Legendre nodes and weights match boost") {
  for (int n = 1; n <= 7; ++n) {
    const auto rule = gauss_legendre<double>(n);
    const oracle::Rule1d ref = oracle::gauss(n);
    REQUIRE(rule.size() == static_cast<Index>(ref.x.size()));
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
      bool found = false;
      for (Index q = 0; q < rule.size(); ++q)
        if (std::abs(rule.nodes(0, q) - ref.x[i]) < 1e-14) {
          found = true;
          CHECK(std::abs(rule.weights[q] - ref.w[i]) < 1e-14);
        }
      CHECK(found);
    }
    CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("tensor rules integrate total degree 2k+3 exactly") {
  for (int k = 0; k <= 3; ++k)
    for (int d = 1; d <= 3; ++d) {
      const auto rule = tensor_gauss_legendre<double>(k + 2, d);
      CHECK(rule.weights.sum() == doctest::Approx(std::pow(2.0, d)).epsilon(1e-14));
      // Monomials x^a y^b z^c with a+b+c <= 2k+3: exact value prod 2/(e+1) for even e, else 0.
      const int top = 2 * k + 3;
      for (int a = 0; a <= top; ++a)
        for (int b = 0; b <= (d > 1 ? top - a : 0); ++b)
          for (int c = 0; c <= (d > 2 ? top - a - b : 0); ++c) {
            const std::array<int, 3> e{a, b, c};
            double exact = 1.0, approx = 0.0;
            for (int ax = 0; ax < d; ++ax) exact *= e[ax] % 2 ? 0.0 : 2.0 / (e[ax] + 1);
            for (Index q = 0; q < rule.size(); ++q) {
              double m = rule.weights[q];
              for (int ax = 0; ax < d; ++ax) m *= std::pow(rule.nodes(ax, q), e[ax]);
              approx += m;
            }
            CHECK(std::abs(approx - exact) <= 1e-13);
          }
    }
}

TEST_CASE("long double rules") {
  const auto rule = gauss_legendre<long double>(5);
  long double s = 0;
  for (Index q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.nodes(0, q), 8);
  CHECK(std::abs(static_cast<double>(s - 2.0L / 9.0L)) < 1e-17);
  const ReferenceBasis<long double> b(2, 2);
  CHECK(b.size() == 6);
}

TEST_CASE("projection of a constant") {
  const std::vector<AxisPartition> axes{{0.0, 2.0, 3, BoundaryKind::periodic}, {-1.0, 1.0, 2, BoundaryKind::cutoff}};
  const auto b = make_basis(2, 2);
  const Eigen::VectorXd c = l2_project(axes, b, [](const Point&) { return 5.0; });
  const double measure = (2.0 / 3) * 1.0;
  for (Index cell = 0; cell < 6; ++cell) {
    CHECK(c[cell * b.size()] == doctest::Approx(5.0 * std::sqrt(measure)).epsilon(1e-13));
    for (Index m = 1; m < b.size(); ++m) CHECK(std::abs(c[cell * b.size() + m]) <= 1e-12);
  }
}

TEST_CASE("projection reproduces polynomials") {
  const std::vector<AxisPartition> axes{{0.0, 1.0, 1, BoundaryKind::periodic}};
  for (int k = 1; k <= 3; ++k) {
    const auto b = make_basis(k, 1);
    const Eigen::VectorXd c = l2_project(axes, b, [](const Point& p) { return p[0]; });
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
      Point p(1);
      p << x;
      CHECK(std::abs(eval_field_at(axes, b, c, 0, p) - x) <= 1e-12);
    }
  }
}

TEST_CASE("k=0 projection of sin is the cell average") {
  const std::vector<AxisPartition> axes{{0.0, 2 * std::numbers::pi, 8, BoundaryKind::periodic}};
  const auto b = make_basis(0, 1);
  const Eigen::VectorXd c = l2_project(axes, b, [](const Point& p) { return std::sin(p[0]); });
  const double h = std::numbers::pi / 4;
  const double integral = composite([](double x) { return std::sin(x); }, 0.0, h);
  CHECK(std::abs(integral - (1.0 - std::cos(h))) < 1e-14);
  // The default projection rule has k+4 = 4 points, exact to degree 7.
  CHECK(c[0] == doctest::Approx(integral / std::sqrt(h)).epsilon(1e-9));
  const Eigen::VectorXd rich = l2_project(axes, b, tensor_gauss_legendre<double>(12, 1), [](const Point& p) { return std::sin(p[0]); });
  CHECK(rich[0] == doctest::Approx(integral / std::sqrt(h)).epsilon(1e-14));
}

TEST_CASE("eval_field_at") {
  const std::vector<AxisPartition> axes{{0.0, 1.0, 2, BoundaryKind::periodic}, {-1.0, 1.0, 2, BoundaryKind::cutoff}};
  const auto b = make_basis(3, 2);
  const Index nm = b.size();
  Point p(2);
  p << 0.3, -0.4;
  CHECK(eval_field_at(axes, b, Eigen::VectorXd::Zero(4 * nm), 0, p) == 0.0);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(4 * nm);
  c[0] = 1.7;
  for (double x : {0.0, 0.2, 0.5})
    for (double v : {-1.0, -0.3, 0.0}) {
      Point q(2);
      q << x, v;
      CHECK(eval_field_at(axes, b, c, 0, q) == doctest::Approx(1.7 / std::sqrt(0.5)).epsilon(1e-14));
    }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    for (Index i = 0; i < c.size(); ++i) c[i] = u(rng);
    const Index cell = 3;  // x in [0.5, 1], v in [0, 1]
    const double xi = u(rng), eta = u(rng);
    Point q(2);
    q << 0.75 + 0.25 * xi, 0.5 + 0.5 * eta;
    double expect = 0.0;
    for (Index m = 0; m < nm; ++m)
      expect += c[cell * nm + m] * legendre_monomial(b.modes()[m][0], xi) * legendre_monomial(b.modes()[m][1], eta);
    expect /= std::sqrt(0.25 * 0.5);
    CHECK(eval_field_at(axes, b, c, cell, q) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("projection is idempotent") {
  const std::vector<AxisPartition> axes{{0.0, 1.0, 3, BoundaryKind::periodic}, {-2.0, 2.0, 4, BoundaryKind::cutoff}};
  const auto b = make_basis(2, 2);
  const Eigen::VectorXd c = l2_project(axes, b, [](const Point& p) { return std::exp(p[0]) * std::cos(p[1]); });
  const PhaseMesh mesh(axes[0], {axes[1]});
  const Eigen::VectorXd again = l2_project(axes, b, [&](const Point& p) {
    for (Index cell = 0; cell < mesh.num_cells(); ++cell) {
      const MultiIndex idx = mesh.multi_index(cell);
      bool inside = true;
      for (int a = 0; a < 2; ++a) {
        const double lo = axes[a].cell_lo(idx[a]);
        inside = inside && p[a] >= lo && p[a] <= lo + axes[a].width();
      }
      if (inside) return eval_field_at(axes, b, c, cell, p);
    }
    return 0.0;
  });
  CHECK((again - c).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projection error decays like h^(k+1)") {
  for (int k = 0; k <= 2; ++k) {
    const auto b = make_basis(k, 2);
    const ScalarFunction g = [](const Point& p) { return std::sin(p[0]) * std::exp(-p[1] * p[1]); };
    std::vector<double> err;
    for (int n = 4; n <= 32; n *= 2) {
      const std::vector<AxisPartition> axes{{0.0, 2 * std::numbers::pi, n, BoundaryKind::periodic},
                                            {-3.0, 3.0, n, BoundaryKind::cutoff}};
      err.push_back(l2_error(axes, b, l2_project(axes, b, g), g));
    }
    const double slope = std::log2(err[err.size() - 2] / err.back());
    CHECK(slope >= k + 0.9);
  }
}

TEST_CASE("assembly rule is exact for phi_a phi_b times an affine function of v") {
  for (int k = 0; k <= 3; ++k) {
    const auto b = make_basis(k, 2);
    const auto assembly = tensor_gauss_legendre<double>(k + 2, 2);
    const auto rich = tensor_gauss_legendre<double>(k + 6, 2);
    const auto integrate = [&](const QuadratureRule<double>& r, Index i, Index j) {
      double s = 0.0;
      for (Index q = 0; q < r.size(); ++q) {
        Point xi = r.nodes.col(q);
        s += r.weights[q] * b.value(i, xi) * b.value(j, xi) * (0.3 + 1.7 * xi[1]);
      }
      return s;
    };
    for (Index i = 0; i < b.size(); ++i)
      for (Index j = 0; j < b.size(); ++j) CHECK(std::abs(integrate(assembly, i, j) - integrate(rich, i, j)) < 1e-13);
  }
}
