#pragma once

#include <array>
#include <vector>

#include "lselast/mesh.hpp"

namespace lselast {

enum class SpaceFamily {
  RT1Row,     // one H(div) Raviart-Thomas field (a single stress row)
  RT1Tensor,  // d=2 independent RT1 rows, the stress space Sigma_h
  P2Vector,   // continuous quadratic displacement field
  P1dScalar,  // discontinuous linear vorticity field
};

/// Cell-to-global numbering with the orientation signs RT1 needs.
///
/// Per-cell dof order:
///   RT1Row:    [e0 const, e0 lin, e1 const, e1 lin, e2 const, e2 lin, i0, i1]
///   RT1Tensor: row 0's 8 dofs then row 1's 8 dofs
///   P2Vector:  [(node0,x),(node0,y),...,(node5,x),(node5,y)], nodes =
///              3 vertices then 3 edge midpoints; -1 marks eliminated
///              Dirichlet dofs
///   P1dScalar: the 3 vertex-nodal dofs of the cell
struct DofMap {
  SpaceFamily family;
  int dim = 0;
  std::vector<std::vector<int>> cell_dofs;
  std::vector<std::vector<double>> cell_signs;  // RT1 families only

  int dofs_per_cell() const { return static_cast<int>(cell_dofs.front().size()); }
};

namespace detail {

inline DofMap build_rt1_row(const TriangleMesh& mesh) {
  DofMap map;
  map.family = SpaceFamily::RT1Row;
  const int ne = mesh.num_edges();
  map.dim = 2 * ne + 2 * mesh.num_cells();
  map.cell_dofs.resize(mesh.num_cells());
  map.cell_signs.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& dofs = map.cell_dofs[c];
    auto& signs = map.cell_signs[c];
    dofs.resize(8);
    signs.resize(8);
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell_edges[c][le];
      dofs[2 * le] = 2 * e;
      dofs[2 * le + 1] = 2 * e + 1;
      // only the constant normal moment flips with edge direction; the
      // linear moment flips twice (normal and edge parameter)
      signs[2 * le] = mesh.cell_edge_signs[c][le];
      signs[2 * le + 1] = 1.0;
    }
    dofs[6] = 2 * ne + 2 * c;
    dofs[7] = 2 * ne + 2 * c + 1;
    signs[6] = signs[7] = 1.0;
  }
  return map;
}

}  // namespace detail

inline DofMap build_dof_map(SpaceFamily family, const TriangleMesh& mesh, bool dirichlet = false) {
  DofMap map;
  map.family = family;
  switch (family) {
    case SpaceFamily::RT1Row:
      return detail::build_rt1_row(mesh);

    case SpaceFamily::RT1Tensor: {
      const DofMap row = detail::build_rt1_row(mesh);
      map.dim = 2 * row.dim;
      map.cell_dofs.resize(mesh.num_cells());
      map.cell_signs.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c) {
        auto& dofs = map.cell_dofs[c];
        auto& signs = map.cell_signs[c];
        dofs.resize(16);
        signs.resize(16);
        for (int r = 0; r < 2; ++r)
          for (int j = 0; j < 8; ++j) {
            dofs[8 * r + j] = r * row.dim + row.cell_dofs[c][j];
            signs[8 * r + j] = row.cell_signs[c][j];
          }
      }
      return map;
    }

    case SpaceFamily::P2Vector: {
      // nodes: vertices then edge midpoints; Dirichlet strips boundary nodes
      const int nv = mesh.num_vertices();
      const int ne = mesh.num_edges();
      std::vector<char> vertex_on_boundary(nv, 0);
      for (int e = 0; e < ne; ++e)
        if (mesh.edge_on_boundary[e]) {
          vertex_on_boundary[mesh.edges[e][0]] = 1;
          vertex_on_boundary[mesh.edges[e][1]] = 1;
        }
      std::vector<int> node_index(nv + ne, -1);
      int next = 0;
      for (int v = 0; v < nv; ++v)
        if (!dirichlet || !vertex_on_boundary[v]) node_index[v] = next++;
      for (int e = 0; e < ne; ++e)
        if (!dirichlet || !mesh.edge_on_boundary[e]) node_index[nv + e] = next++;
      map.dim = 2 * next;
      map.cell_dofs.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c) {
        auto& dofs = map.cell_dofs[c];
        dofs.resize(12);
        for (int ln = 0; ln < 6; ++ln) {
          const int node =
              ln < 3 ? node_index[mesh.cells[c][ln]] : node_index[nv + mesh.cell_edges[c][ln - 3]];
          for (int comp = 0; comp < 2; ++comp)
            dofs[2 * ln + comp] = node < 0 ? -1 : 2 * node + comp;
        }
      }
      return map;
    }

    case SpaceFamily::P1dScalar: {
      map.dim = 3 * mesh.num_cells();
      map.cell_dofs.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c)
        map.cell_dofs[c] = {3 * c, 3 * c + 1, 3 * c + 2};
      return map;
    }
  }
  return map;
}

}  // namespace lselast
