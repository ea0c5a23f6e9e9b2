#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <vector>

#include "lselast/dofmap.hpp"
#include "lselast/elements.hpp"
#include "lselast/material.hpp"
#include "lselast/mesh.hpp"
#include "lselast/quadrature.hpp"

namespace lselast {

using SparseMat = Eigen::SparseMatrix<double>;

/// Assembled generalized eigenproblem  A x = omega B x.
///
/// Unknown layout: [sigma | u | (psi) | constraint multipliers]. The lhs is
/// symmetric; the rhs is nonzero only in the (sigma-equations x u-unknowns)
/// block. Zero-mean constraints are bordered symmetrically with zero diagonal.
struct BlockSystem {
  SparseMat lhs;
  SparseMat rhs;
  int n_sigma = 0;
  int n_u = 0;
  int n_psi = 0;
  int n_constraints = 0;

  int dim() const { return n_sigma + n_u + n_psi + n_constraints; }
  int sigma_begin() const { return 0; }
  int u_begin() const { return n_sigma; }
  int psi_begin() const { return n_sigma + n_u; }
  int multiplier_begin() const { return n_sigma + n_u + n_psi; }
};

namespace detail {

/// Reference basis tables evaluated at the quadrature points of one rule.
struct BasisTables {
  QuadRule quad;
  std::vector<std::array<Eigen::Vector2d, 8>> rt_values;
  std::vector<std::array<double, 8>> rt_divs;
  std::vector<std::array<double, 6>> p2_values;
  std::vector<std::array<Eigen::Vector2d, 6>> p2_grads;
  std::vector<std::array<double, 3>> p1_values;

  explicit BasisTables(int degree) : quad(quadrature_rule(degree)) {
    const RT1ReferenceBasis rt1;
    const int nq = quad.size();
    rt_values.resize(nq);
    rt_divs.resize(nq);
    p2_values.resize(nq);
    p2_grads.resize(nq);
    p1_values.resize(nq);
    for (int q = 0; q < nq; ++q) {
      const Eigen::Vector2d p{quad.points[q].x, quad.points[q].y};
      rt1.evaluate(p, rt_values[q], rt_divs[q]);
      P2ReferenceBasis::evaluate(p, p2_values[q], p2_grads[q]);
      P1dReferenceBasis::evaluate(p, p1_values[q]);
    }
  }
};

inline const BasisTables& assembly_tables() {
  static const BasisTables tables(5);
  return tables;
}

/// Physical per-point evaluations for one cell at one quadrature point.
struct CellPointBasis {
  std::array<Eigen::Matrix2d, 16> stress;       // tensor basis values
  std::array<Eigen::Matrix2d, 16> a_stress;     // compliance applied
  std::array<Eigen::Vector2d, 16> div_stress;   // divergence (vector)
  std::array<Eigen::Matrix2d, 12> u_grad;       // displacement gradients
  std::array<Eigen::Vector2d, 12> u_value;
  std::array<double, 3> psi;
};

inline void evaluate_cell_point(const BasisTables& tables, const CellGeometry& geom,
                                const std::vector<double>& rt_signs, const Material& material,
                                int q, CellPointBasis& out) {
  std::array<Eigen::Vector2d, 8> row_values;
  std::array<double, 8> row_divs;
  for (int j = 0; j < 8; ++j) {
    row_values[j] = rt_signs[j] * geom.piola(tables.rt_values[q][j]);
    row_divs[j] = rt_signs[j] * geom.piola_div(tables.rt_divs[q][j]);
  }
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < 8; ++j) {
      const int i = 8 * r + j;
      Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
      t.row(r) = row_values[j];
      out.stress[i] = t;
      out.a_stress[i] = material.compliance(t);
      out.div_stress[i] = Eigen::Vector2d::Unit(r) * row_divs[j];
    }
  for (int ln = 0; ln < 6; ++ln) {
    const Eigen::Vector2d g = geom.grad(tables.p2_grads[q][ln]);
    const double v = tables.p2_values[q][ln];
    for (int comp = 0; comp < 2; ++comp) {
      const int i = 2 * ln + comp;
      Eigen::Matrix2d gm = Eigen::Matrix2d::Zero();
      gm.row(comp) = g;
      out.u_grad[i] = gm;
      out.u_value[i] = Eigen::Vector2d::Unit(comp) * v;
    }
  }
  out.psi = tables.p1_values[q];
}

inline double frob(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  return a.cwiseProduct(b).sum();
}

struct TripletList {
  std::vector<Eigen::Triplet<double>> data;
  void add(int i, int j, double v) {
    if (i >= 0 && j >= 0 && v != 0.0) data.emplace_back(i, j, v);
  }
  void add_sym(int i, int j, double v) {
    add(i, j, v);
    add(j, i, v);
  }
};

}  // namespace detail

/// Entries of the zero-mean-trace constraint over the stress dofs:
/// row_j = integral of tr(Phi_j) over the domain.
inline Eigen::VectorXd trace_constraint_row(const TriangleMesh& mesh, const DofMap& sigma_map) {
  const auto& tables = detail::assembly_tables();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(sigma_map.dim);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom(mesh, c);
    const auto& dofs = sigma_map.cell_dofs[c];
    const auto& signs = sigma_map.cell_signs[c];
    for (int q = 0; q < tables.quad.size(); ++q) {
      const double w = tables.quad.weights[q] * geom.det;
      for (int r = 0; r < 2; ++r)
        for (int j = 0; j < 8; ++j) {
          const Eigen::Vector2d v = signs[8 * r + j] * geom.piola(tables.rt_values[q][j]);
          row[dofs[8 * r + j]] += w * v[r];  // tr(e_r ⊗ v) = v_r
        }
    }
  }
  return row;
}

enum class Formulation { TwoField, ThreeField };

inline const char* formulation_name(Formulation f) {
  return f == Formulation::TwoField ? "two" : "three";
}

/// Assembles the least-squares eigenproblem for either formulation with
/// Gamma_D = boundary everywhere. `with_constraints` borders the zero-mean
/// trace row (and, three-field, the zero-mean vorticity row); dropping it
/// exposes the degenerate constant-trace mode of the incompressible limit.
inline BlockSystem assemble(Formulation formulation, const TriangleMesh& mesh,
                            const Material& material, bool with_constraints = true) {
  const bool three = formulation == Formulation::ThreeField;
  const DofMap sigma_map = build_dof_map(SpaceFamily::RT1Tensor, mesh);
  const DofMap u_map = build_dof_map(SpaceFamily::P2Vector, mesh, /*dirichlet=*/true);
  const DofMap psi_map = three ? build_dof_map(SpaceFamily::P1dScalar, mesh) : DofMap{};

  BlockSystem sys;
  sys.n_sigma = sigma_map.dim;
  sys.n_u = u_map.dim;
  sys.n_psi = three ? psi_map.dim : 0;
  sys.n_constraints = with_constraints ? (three ? 2 : 1) : 0;

  const auto& tables = detail::assembly_tables();
  detail::TripletList lhs, rhs;

  detail::CellPointBasis basis;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom(mesh, c);
    const auto& sd = sigma_map.cell_dofs[c];
    const auto& ud = u_map.cell_dofs[c];

    Eigen::Matrix<double, 16, 16> k_ss = Eigen::Matrix<double, 16, 16>::Zero();
    Eigen::Matrix<double, 16, 12> k_su = Eigen::Matrix<double, 16, 12>::Zero();
    Eigen::Matrix<double, 12, 12> k_uu = Eigen::Matrix<double, 12, 12>::Zero();
    Eigen::Matrix<double, 16, 12> b_su = Eigen::Matrix<double, 16, 12>::Zero();
    Eigen::Matrix<double, 16, 3> k_sp = Eigen::Matrix<double, 16, 3>::Zero();
    Eigen::Matrix<double, 12, 3> k_up = Eigen::Matrix<double, 12, 3>::Zero();
    Eigen::Matrix<double, 3, 3> k_pp = Eigen::Matrix<double, 3, 3>::Zero();

    for (int q = 0; q < tables.quad.size(); ++q) {
      detail::evaluate_cell_point(tables, geom, sigma_map.cell_signs[c], material, q, basis);
      const double w = tables.quad.weights[q] * geom.det;

      // the two-field functional couples through symgrad(u); the three-field
      // functional's first residual is A sigma - grad u + chi psi, so its
      // u couplings use the full gradient
      std::array<Eigen::Matrix2d, 12> u_coupling;
      for (int i = 0; i < 12; ++i)
        u_coupling[i] = three ? basis.u_grad[i] : symmetrize(basis.u_grad[i]);

      for (int i = 0; i < 16; ++i) {
        for (int j = i; j < 16; ++j) {
          double v = detail::frob(basis.a_stress[i], basis.a_stress[j]) +
                     basis.div_stress[i].dot(basis.div_stress[j]);
          if (three) v += detail::frob(skew_part(basis.stress[i]), skew_part(basis.stress[j]));
          k_ss(i, j) += w * v;
          if (j != i) k_ss(j, i) = k_ss(i, j);
        }
        for (int j = 0; j < 12; ++j) {
          k_su(i, j) -= w * detail::frob(basis.a_stress[i], u_coupling[j]);
          b_su(i, j) -= w * basis.u_value[j].dot(basis.div_stress[i]);
        }
      }
      for (int i = 0; i < 12; ++i)
        for (int j = i; j < 12; ++j) {
          k_uu(i, j) += w * detail::frob(u_coupling[i], u_coupling[j]);
          if (j != i) k_uu(j, i) = k_uu(i, j);
        }
      if (three) {
        std::array<Eigen::Matrix2d, 3> chi;
        for (int j = 0; j < 3; ++j) chi[j] = chi_times(basis.psi[j]);
        for (int i = 0; i < 16; ++i)
          for (int j = 0; j < 3; ++j) k_sp(i, j) += w * detail::frob(basis.a_stress[i], chi[j]);
        for (int i = 0; i < 12; ++i)
          for (int j = 0; j < 3; ++j) k_up(i, j) -= w * detail::frob(chi[j], basis.u_grad[i]);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) k_pp(i, j) += w * detail::frob(chi[i], chi[j]);
      }
    }

    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) lhs.add(sd[i], sd[j], k_ss(i, j));
      for (int j = 0; j < 12; ++j) {
        if (ud[j] < 0) continue;
        lhs.add_sym(sd[i], sys.u_begin() + ud[j], k_su(i, j));
        rhs.add(sd[i], sys.u_begin() + ud[j], b_su(i, j));
      }
    }
    for (int i = 0; i < 12; ++i) {
      if (ud[i] < 0) continue;
      for (int j = 0; j < 12; ++j)
        if (ud[j] >= 0) lhs.add(sys.u_begin() + ud[i], sys.u_begin() + ud[j], k_uu(i, j));
    }
    if (three) {
      const auto& pd = psi_map.cell_dofs[c];
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 16; ++i) lhs.add_sym(sd[i], sys.psi_begin() + pd[j], k_sp(i, j));
        for (int i = 0; i < 12; ++i)
          if (ud[i] >= 0) lhs.add_sym(sys.u_begin() + ud[i], sys.psi_begin() + pd[j], k_up(i, j));
        for (int i = 0; i < 3; ++i)
          lhs.add(sys.psi_begin() + pd[i], sys.psi_begin() + pd[j], k_pp(i, j));
      }
    }
  }

  if (with_constraints) {
    const Eigen::VectorXd trace_row = trace_constraint_row(mesh, sigma_map);
    const int mrow = sys.multiplier_begin();
    for (int j = 0; j < sys.n_sigma; ++j) lhs.add_sym(mrow, j, trace_row[j]);
    if (three) {
      // zero-mean vorticity: integral of each P1d basis function = area/3
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const double third = mesh.cell_area(c) / 3.0;
        for (int j : psi_map.cell_dofs[c]) lhs.add_sym(mrow + 1, sys.psi_begin() + j, third);
      }
    }
  }

  sys.lhs.resize(sys.dim(), sys.dim());
  sys.rhs.resize(sys.dim(), sys.dim());
  sys.lhs.setFromTriplets(lhs.data.begin(), lhs.data.end());
  sys.rhs.setFromTriplets(rhs.data.begin(), rhs.data.end());
  return sys;
}

inline BlockSystem assemble_two_field(const TriangleMesh& mesh, const Material& material,
                                      bool with_constraints = true) {
  return assemble(Formulation::TwoField, mesh, material, with_constraints);
}

inline BlockSystem assemble_three_field(const TriangleMesh& mesh, const Material& material,
                                        bool with_constraints = true) {
  return assemble(Formulation::ThreeField, mesh, material, with_constraints);
}

/// Load vector of the source problem: entries -(f, div tau) on sigma rows.
inline Eigen::VectorXd assemble_load(const BlockSystem& sys, const TriangleMesh& mesh,
                                     const std::function<Eigen::Vector2d(Eigen::Vector2d)>& f) {
  const DofMap sigma_map = build_dof_map(SpaceFamily::RT1Tensor, mesh);
  const auto& tables = detail::assembly_tables();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(sys.dim());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom(mesh, c);
    const auto& sd = sigma_map.cell_dofs[c];
    const auto& signs = sigma_map.cell_signs[c];
    for (int q = 0; q < tables.quad.size(); ++q) {
      const double w = tables.quad.weights[q] * geom.det;
      const Eigen::Vector2d fx = f(geom.map({tables.quad.points[q].x, tables.quad.points[q].y}));
      for (int r = 0; r < 2; ++r)
        for (int j = 0; j < 8; ++j) {
          const double dv = signs[8 * r + j] * geom.piola_div(tables.rt_divs[q][j]);
          load[sd[8 * r + j]] -= w * fx[r] * dv;
        }
    }
  }
  return load;
}

/// Interpolates a 2x2 tensor field into the stress space via the RT1 dof
/// functionals (edge normal moments and interior averages), row by row.
inline Eigen::VectorXd interpolate_stress(
    const TriangleMesh& mesh, const std::function<Eigen::Matrix2d(Eigen::Vector2d)>& field) {
  const int row_dim = 2 * mesh.num_edges() + 2 * mesh.num_cells();
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(2 * row_dim);
  const GaussRule1D gauss = gauss_rule_1d(4);

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 a = mesh.vertices[mesh.edges[e][0]];
    const Vec2 b = mesh.vertices[mesh.edges[e][1]];
    const Eigen::Vector2d pa(a.x, a.y), pb(b.x, b.y);
    const Eigen::Vector2d d = pb - pa;
    const double len = d.norm();
    const Eigen::Vector2d normal = Eigen::Vector2d(d.y(), -d.x()) / len;
    for (int q = 0; q < static_cast<int>(gauss.points.size()); ++q) {
      const double t = gauss.points[q];
      const Eigen::Matrix2d tau = field(pa + 0.5 * (t + 1.0) * d);
      for (int r = 0; r < 2; ++r) {
        const double vn = tau.row(r).dot(normal);
        coeffs[r * row_dim + 2 * e] += gauss.weights[q] * vn * (len / 2.0);
        coeffs[r * row_dim + 2 * e + 1] += gauss.weights[q] * vn * t * (len / 2.0);
      }
    }
  }
  const QuadRule cellq = quadrature_rule(5);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom(mesh, c);
    for (int q = 0; q < cellq.size(); ++q) {
      const Eigen::Vector2d ref{cellq.points[q].x, cellq.points[q].y};
      const Eigen::Matrix2d tau = field(geom.map(ref));
      for (int r = 0; r < 2; ++r) {
        // interior moments act on the Piola pull-back
        const Eigen::Vector2d pulled = geom.det * geom.jacobian_inv * tau.row(r).transpose();
        coeffs[r * row_dim + 2 * mesh.num_edges() + 2 * c] += cellq.weights[q] * pulled.x();
        coeffs[r * row_dim + 2 * mesh.num_edges() + 2 * c + 1] += cellq.weights[q] * pulled.y();
      }
    }
  }
  return coeffs;
}

/// L2 error of a discrete displacement (coefficients over the Dirichlet-
/// reduced P2 vector space) against an exact field.
inline double displacement_l2_error(const TriangleMesh& mesh, const DofMap& u_map,
                                    const Eigen::VectorXd& coeffs,
                                    const std::function<Eigen::Vector2d(Eigen::Vector2d)>& exact) {
  const auto& tables = detail::assembly_tables();
  double err2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom(mesh, c);
    const auto& ud = u_map.cell_dofs[c];
    for (int q = 0; q < tables.quad.size(); ++q) {
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      for (int ln = 0; ln < 6; ++ln)
        for (int comp = 0; comp < 2; ++comp) {
          const int g = ud[2 * ln + comp];
          if (g >= 0) uh[comp] += coeffs[g] * tables.p2_values[q][ln];
        }
      const Eigen::Vector2d ex = exact(geom.map({tables.quad.points[q].x, tables.quad.points[q].y}));
      err2 += tables.quad.weights[q] * geom.det * (uh - ex).squaredNorm();
    }
  }
  return std::sqrt(err2);
}

}  // namespace lselast
