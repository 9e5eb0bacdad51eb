#pragma once

#include "vmdg/mesh.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vmdg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Nodes (one column per point) and weights on the reference cell [-1, 1]^dim.
template <typename Scalar = double>
struct QuadratureRule {
  int dim = 0;
  MatrixX<Scalar> nodes;
  VectorX<Scalar> weights;

  Index size() const { return weights.size(); }
};

/// Orthonormal Legendre polynomial sqrt((2n+1)/2) P_n on [-1, 1] and its
/// derivative, by the three-term recurrence.
template <typename Scalar>
void legendre_normalized(int n, Scalar x, Scalar& value, Scalar& derivative) {
  Scalar p0 = 1, p1 = x, d0 = 0, d1 = 1;
  if (n == 0) {
    p1 = p0;
    d1 = d0;
  }
  for (int j = 2; j <= n; ++j) {
    const Scalar p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    const Scalar d2 = d0 + (2 * j - 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  const Scalar scale = std::sqrt(Scalar(2 * n + 1) / 2);
  value = scale * p1;
  derivative = scale * d1;
}

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule<Scalar> rule;
  rule.dim = 1;
  rule.nodes.resize(1, n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = std::cos(std::numbers::pi_v<Scalar> * (i + Scalar(0.75)) / (n + Scalar(0.5)));
    Scalar p1 = 0, dp = 1;
    for (int it = 0; it < 100; ++it) {
      // p1 = P_n(x), p0 = P_{n-1}(x)
      Scalar p0 = 1;
      p1 = x;
      for (int j = 2; j <= n; ++j) {
        const Scalar p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 2 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes(0, i) = -x;
    rule.nodes(0, n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(0, n / 2) = 0;
  return rule;
}

/// Tensor product of n-point Gauss-Legendre rules; axis dim-1 varies fastest.
template <typename Scalar = double>
QuadratureRule<Scalar> tensor_gauss_legendre(int n, int dim) {
  const QuadratureRule<Scalar> line = gauss_legendre<Scalar>(n);
  QuadratureRule<Scalar> rule;
  rule.dim = dim;
  Index total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  rule.nodes.resize(dim, total);
  rule.weights.resize(total);
  for (Index q = 0; q < total; ++q) {
    Index rem = q;
    Scalar w = 1;
    for (int d = dim - 1; d >= 0; --d) {
      const Index i = rem % n;
      rem /= n;
      rule.nodes(d, q) = line.nodes(0, i);
      w *= line.weights(i);
    }
    rule.weights(q) = w;
  }
  return rule;
}

/// Rule on the reference face {xi_axis = -1 or +1} of [-1, 1]^dim, built
/// from n points per tangential axis. Weights integrate over the face.
template <typename Scalar = double>
QuadratureRule<Scalar> face_gauss_legendre(int n, int dim, int axis, Side side) {
  QuadratureRule<Scalar> rule;
  rule.dim = dim;
  if (dim == 1) {
    rule.nodes.resize(1, 1);
    rule.nodes(0, 0) = side == Side::high ? 1 : -1;
    rule.weights = VectorX<Scalar>::Ones(1);
    return rule;
  }
  const QuadratureRule<Scalar> tangential = tensor_gauss_legendre<Scalar>(n, dim - 1);
  rule.nodes.resize(dim, tangential.size());
  rule.weights = tangential.weights;
  for (Index q = 0; q < tangential.size(); ++q) {
    int t = 0;
    for (int d = 0; d < dim; ++d)
      rule.nodes(d, q) = d == axis ? Scalar(side == Side::high ? 1 : -1) : tangential.nodes(t++, q);
  }
  return rule;
}

/// Number of multi-indices alpha in N^d with |alpha| <= k, i.e. C(k+d, d).
constexpr Index num_modes(int k, int d) {
  Index r = 1;
  for (int i = 1; i <= d; ++i) r = r * (k + i) / i;
  return r;
}

/// Products of orthonormal Legendre polynomials of total degree <= k on
/// [-1, 1]^d. Modes are ordered by total degree, then lexicographically, so
/// mode 0 is the constant.
template <typename Scalar = double>
class ReferenceBasis {
 public:
  ReferenceBasis(int degree, int dim) : degree_(degree), dim_(dim) {
    if (degree < 0) throw std::invalid_argument("ReferenceBasis: degree must be >= 0");
    if (dim < 1 || dim > kMaxDims) throw std::invalid_argument("ReferenceBasis: dim must be 1..3");
    for (int total = 0; total <= degree; ++total) {
      MultiIndex a{0, 0, 0};
      enumerate(a, 0, total);
    }
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  Index size() const { return static_cast<Index>(modes_.size()); }
  const std::vector<MultiIndex>& modes() const { return modes_; }

  template <typename Point>
  Scalar value(Index m, const Point& xi) const {
    Scalar v = 1;
    for (int d = 0; d < dim_; ++d) {
      Scalar p, dp;
      legendre_normalized<Scalar>(modes_[m][d], xi[d], p, dp);
      v *= p;
    }
    return v;
  }

  /// Derivative with respect to the reference coordinate xi_axis.
  template <typename Point>
  Scalar derivative(Index m, int axis, const Point& xi) const {
    Scalar v = 1;
    for (int d = 0; d < dim_; ++d) {
      Scalar p, dp;
      legendre_normalized<Scalar>(modes_[m][d], xi[d], p, dp);
      v *= d == axis ? dp : p;
    }
    return v;
  }

  /// Table T(q, m) = phi_m(node_q).
  MatrixX<Scalar> values(const MatrixX<Scalar>& nodes) const {
    MatrixX<Scalar> t(nodes.cols(), size());
    for (Index q = 0; q < nodes.cols(); ++q)
      for (Index m = 0; m < size(); ++m) t(q, m) = value(m, nodes.col(q));
    return t;
  }

  MatrixX<Scalar> derivatives(const MatrixX<Scalar>& nodes, int axis) const {
    MatrixX<Scalar> t(nodes.cols(), size());
    for (Index q = 0; q < nodes.cols(); ++q)
      for (Index m = 0; m < size(); ++m) t(q, m) = derivative(m, axis, nodes.col(q));
    return t;
  }

 private:
  void enumerate(MultiIndex& a, int d, int remaining) {
    if (d == dim_ - 1) {
      a[d] = remaining;
      modes_.push_back(a);
      return;
    }
    for (int j = remaining; j >= 0; --j) {
      a[d] = j;
      enumerate(a, d + 1, remaining - j);
    }
    a[d] = 0;
  }

  int degree_;
  int dim_;
  std::vector<MultiIndex> modes_;
};

template <typename Scalar = double>
ReferenceBasis<Scalar> make_basis(int k, int d) {
  return ReferenceBasis<Scalar>(k, d);
}

}  // namespace vmdg
