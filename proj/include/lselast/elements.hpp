#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <vector>

#include "lselast/mesh.hpp"
#include "lselast/quadrature.hpp"

namespace lselast {

struct DegenerateCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reference triangle: vertices v0=(0,0), v1=(1,0), v2=(0,1).
// Local edges opposite each vertex, traversed in cell order:
//   E0: v1->v2,  E1: v2->v0,  E2: v0->v1.
// Outward unit normal of an edge is its direction rotated by -90 degrees.
namespace ref {

inline constexpr std::array<std::array<int, 2>, 3> edge_vertices{{{1, 2}, {2, 0}, {0, 1}}};

inline Eigen::Vector2d vertex(int i) {
  switch (i) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace ref

/// Raviart-Thomas RT1 on the reference triangle: 8 basis functions, dual to
/// two normal moments per edge (constant and linear Legendre weight along the
/// edge direction) plus two interior average moments.
class RT1ReferenceBasis {
 public:
  static constexpr int n_dofs = 8;

  RT1ReferenceBasis() {
    // span: P1^2 plus x * (homogeneous linear scalars)
    // generators g_k with divergences
    Eigen::Matrix<double, n_dofs, n_dofs> vandermonde;
    const GaussRule1D gauss = gauss_rule_1d(3);
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d a = ref::vertex(ref::edge_vertices[e][0]);
      const Eigen::Vector2d b = ref::vertex(ref::edge_vertices[e][1]);
      const Eigen::Vector2d d = b - a;
      const double len = d.norm();
      const Eigen::Vector2d normal = Eigen::Vector2d(d.y(), -d.x()) / len;
      for (int k = 0; k < n_dofs; ++k) {
        double m0 = 0.0, m1 = 0.0;
        for (int q = 0; q < static_cast<int>(gauss.points.size()); ++q) {
          const double t = gauss.points[q];
          const Eigen::Vector2d x = a + 0.5 * (t + 1.0) * d;
          const double vn = generator(k, x).dot(normal);
          m0 += gauss.weights[q] * vn * (len / 2.0);
          m1 += gauss.weights[q] * vn * t * (len / 2.0);
        }
        vandermonde(2 * e, k) = m0;
        vandermonde(2 * e + 1, k) = m1;
      }
    }
    const QuadRule cellq = quadrature_rule(2);
    for (int k = 0; k < n_dofs; ++k) {
      Eigen::Vector2d m = Eigen::Vector2d::Zero();
      for (int q = 0; q < cellq.size(); ++q)
        m += cellq.weights[q] * generator(k, {cellq.points[q].x, cellq.points[q].y});
      vandermonde(6, k) = m.x();
      vandermonde(7, k) = m.y();
    }
    coeff_ = vandermonde.inverse();
  }

  /// Values and divergences of the 8 basis functions at a reference point.
  void evaluate(const Eigen::Vector2d& x, std::array<Eigen::Vector2d, n_dofs>& values,
                std::array<double, n_dofs>& divs) const {
    for (int j = 0; j < n_dofs; ++j) {
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      double dv = 0.0;
      for (int k = 0; k < n_dofs; ++k) {
        v += coeff_(k, j) * generator(k, x);
        dv += coeff_(k, j) * generator_div(k, x);
      }
      values[j] = v;
      divs[j] = dv;
    }
  }

  static Eigen::Vector2d generator(int k, const Eigen::Vector2d& p) {
    const double x = p.x(), y = p.y();
    switch (k) {
      case 0: return {1.0, 0.0};
      case 1: return {x, 0.0};
      case 2: return {y, 0.0};
      case 3: return {0.0, 1.0};
      case 4: return {0.0, x};
      case 5: return {0.0, y};
      case 6: return {x * x, x * y};
      default: return {x * y, y * y};
    }
  }

  static double generator_div(int k, const Eigen::Vector2d& p) {
    switch (k) {
      case 1: return 1.0;
      case 5: return 1.0;
      case 6: return 3.0 * p.x();
      case 7: return 3.0 * p.y();
      default: return 0.0;
    }
  }

 private:
  Eigen::Matrix<double, n_dofs, n_dofs> coeff_;  // column j = coefficients of basis j
};

/// Scalar Lagrange P2: nodes at the 3 vertices then the 3 edge midpoints
/// (edge order as in ref::edge_vertices).
struct P2ReferenceBasis {
  static constexpr int n_dofs = 6;

  static void evaluate(const Eigen::Vector2d& p, std::array<double, n_dofs>& values,
                       std::array<Eigen::Vector2d, n_dofs>& grads) {
    const double x = p.x(), y = p.y();
    const double l0 = 1.0 - x - y, l1 = x, l2 = y;
    const Eigen::Vector2d g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
    const double l[3] = {l0, l1, l2};
    const Eigen::Vector2d g[3] = {g0, g1, g2};
    for (int i = 0; i < 3; ++i) {
      values[i] = l[i] * (2.0 * l[i] - 1.0);
      grads[i] = (4.0 * l[i] - 1.0) * g[i];
    }
    for (int e = 0; e < 3; ++e) {
      const int a = ref::edge_vertices[e][0], b = ref::edge_vertices[e][1];
      values[3 + e] = 4.0 * l[a] * l[b];
      grads[3 + e] = 4.0 * (l[a] * g[b] + l[b] * g[a]);
    }
  }
};

/// Discontinuous P1: nodal at the 3 vertices, per cell.
struct P1dReferenceBasis {
  static constexpr int n_dofs = 3;

  static void evaluate(const Eigen::Vector2d& p, std::array<double, n_dofs>& values) {
    values[0] = 1.0 - p.x() - p.y();
    values[1] = p.x();
    values[2] = p.y();
  }
};

/// Affine map from the reference triangle onto a mesh cell.
struct CellGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d jacobian_inv;
  double det = 0.0;

  CellGeometry(const TriangleMesh& mesh, int cell) {
    const auto& c = mesh.cells[cell];
    const Vec2 p0 = mesh.vertices[c[0]], p1 = mesh.vertices[c[1]], p2 = mesh.vertices[c[2]];
    origin = {p0.x, p0.y};
    jacobian << p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y;
    det = jacobian.determinant();
    if (det <= 0.0) throw DegenerateCellError("cell map has non-positive Jacobian");
    jacobian_inv = jacobian.inverse();
  }

  Eigen::Vector2d map(const Eigen::Vector2d& ref) const { return origin + jacobian * ref; }

  /// Contravariant Piola transform of an H(div) basis value.
  Eigen::Vector2d piola(const Eigen::Vector2d& ref_value) const {
    return (jacobian * ref_value) / det;
  }
  double piola_div(double ref_div) const { return ref_div / det; }

  /// Covariant transform of a scalar basis gradient.
  Eigen::Vector2d grad(const Eigen::Vector2d& ref_grad) const {
    return jacobian_inv.transpose() * ref_grad;
  }
};

}  // namespace lselast
