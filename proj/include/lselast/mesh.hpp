#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lselast {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct DegenerateMeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Triangulation with globally oriented edge connectivity.
///
/// Edges are stored with ascending vertex indices; a cell's orientation sign
/// for a local edge is +1 when the cell traverses the edge in ascending
/// direction. Interior edges are therefore traversed in opposite directions
/// by their two cells, which pins the H(div) normal-continuity convention.
struct TriangleMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise
  std::vector<std::array<int, 2>> edges;  // ascending vertex pairs
  std::vector<std::array<int, 3>> cell_edges;
  std::vector<std::array<int, 3>> cell_edge_signs;
  std::vector<char> edge_on_boundary;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  int num_boundary_edges() const {
    int n = 0;
    for (char b : edge_on_boundary) n += b;
    return n;
  }

  double cell_area(int c) const {
    const Vec2 a = vertices[cells[c][0]];
    const Vec2 b = vertices[cells[c][1]];
    const Vec2 d = vertices[cells[c][2]];
    return 0.5 * cross(b - a, d - a);
  }

  double total_area() const {
    double s = 0.0;
    for (int c = 0; c < num_cells(); ++c) s += cell_area(c);
    return s;
  }

  bool vertex_on_boundary(int v) const {
    for (int e = 0; e < num_edges(); ++e)
      if (edge_on_boundary[e] && (edges[e][0] == v || edges[e][1] == v)) return true;
    return false;
  }
};

enum class MeshKind { Crossed, Right, NonUniform, LShapeUniform };

struct MeshFamily {
  MeshKind kind = MeshKind::Crossed;
  int n = 1;
  unsigned seed = 0;       // NonUniform only
  double perturbation = 0; // fraction of h, NonUniform only
};

/// Deduplicates edges, assigns orientation signs by the ascending-vertex
/// convention and flags boundary edges (single cell adjacency).
inline TriangleMesh build_connectivity(std::vector<Vec2> vertices,
                                       std::vector<std::array<int, 3>> cells) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  const int nv = mesh.num_vertices();
  std::map<std::array<int, 2>, int> edge_index;
  std::map<std::array<int, 3>, int> seen_cells;
  std::vector<int> adjacency;

  mesh.cell_edges.resize(mesh.cells.size());
  mesh.cell_edge_signs.resize(mesh.cells.size());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int v : cell)
      if (v < 0 || v >= nv) throw std::invalid_argument("cell references invalid vertex");

    std::array<int, 3> key = cell;
    std::sort(key.begin(), key.end());
    if (key[0] == key[1] || key[1] == key[2])
      throw DegenerateMeshError("cell with repeated vertex");
    if (!seen_cells.emplace(key, c).second) throw DegenerateMeshError("duplicate cell");
    if (mesh.cell_area(c) <= 0.0)
      throw DegenerateMeshError("cell with non-positive area (not counterclockwise?)");

    // local edges opposite each vertex: (1,2), (2,0), (0,1)
    for (int le = 0; le < 3; ++le) {
      const int a = cell[(le + 1) % 3];
      const int b = cell[(le + 2) % 3];
      const std::array<int, 2> sorted{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.emplace(sorted, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back(sorted);
        adjacency.push_back(0);
      }
      const int e = it->second;
      ++adjacency[e];
      mesh.cell_edges[c][le] = e;
      mesh.cell_edge_signs[c][le] = (a < b) ? 1 : -1;
    }
  }

  mesh.edge_on_boundary.resize(mesh.edges.size());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (adjacency[e] < 1 || adjacency[e] > 2)
      throw DegenerateMeshError("edge shared by more than two cells");
    mesh.edge_on_boundary[e] = (adjacency[e] == 1);
  }
  return mesh;
}

/// Structured mesh of ]0,1[^2 with N subdivisions per side.
/// Right: each square split by its ascending diagonal (2N^2 cells).
/// Crossed: each square split into 4 by both diagonals (center vertex added).
inline TriangleMesh unit_square_mesh(MeshKind kind, int n) {
  if (n < 1) throw std::invalid_argument("subdivision count must be >= 1");
  if (kind != MeshKind::Crossed && kind != MeshKind::Right)
    throw std::invalid_argument("unit_square_mesh expects Crossed or Right");

  const double h = 1.0 / n;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  auto grid = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.push_back({i * h, j * h});

  if (kind == MeshKind::Right) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int v00 = grid(i, j), v10 = grid(i + 1, j);
        const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      }
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int v00 = grid(i, j), v10 = grid(i + 1, j);
        const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
        const int c = static_cast<int>(vertices.size());
        vertices.push_back({(i + 0.5) * h, (j + 0.5) * h});
        cells.push_back({v00, v10, c});
        cells.push_back({v10, v11, c});
        cells.push_back({v11, v01, c});
        cells.push_back({v01, v00, c});
      }
  }
  return build_connectivity(std::move(vertices), std::move(cells));
}

/// Uniform mesh of the L-shaped domain ]-1,1[^2 \ [0,1]x[-1,0] with mesh
/// size h = 2/N: three unit squares, each subdivided (N/2)x(N/2) with the
/// Right pattern, 3N^2/2 cells. N counts subdivisions of the full edge
/// [-1,1], matching the unit-square convention h = side/N, so N must be even.
inline TriangleMesh l_shape_mesh(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("subdivision count must be even and >= 2");
  n /= 2;  // per unit square

  const double h = 1.0 / n;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::map<std::pair<int, int>, int> lattice; // integer lattice keyed at spacing h

  auto vertex_at = [&](int i, int j) {
    auto [it, inserted] = lattice.emplace(std::make_pair(i, j), static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back({i * h, j * h});
    return it->second;
  };
  auto fill_square = [&](int i0, int j0) { // square [i0,i0+n] x [j0,j0+n] in lattice units
    for (int j = j0; j < j0 + n; ++j)
      for (int i = i0; i < i0 + n; ++i) {
        const int v00 = vertex_at(i, j), v10 = vertex_at(i + 1, j);
        const int v01 = vertex_at(i, j + 1), v11 = vertex_at(i + 1, j + 1);
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      }
  };
  fill_square(-n, -n); // [-1,0] x [-1,0]
  fill_square(-n, 0);  // [-1,0] x [0,1]
  fill_square(0, 0);   // [0,1]  x [0,1]
  return build_connectivity(std::move(vertices), std::move(cells));
}

/// Seeded pseudo-random displacement of interior vertices by at most
/// perturbation*h per coordinate; boundary vertices stay put. Deterministic
/// for a fixed seed. Any inverted cell gets its vertex displacement halved;
/// if inversion persists the mesh is rejected.
inline TriangleMesh perturbed_mesh(const TriangleMesh& base, unsigned seed, double perturbation) {
  if (perturbation < 0.0 || perturbation >= 0.5)
    throw std::invalid_argument("perturbation must lie in [0, 0.5)");

  TriangleMesh mesh = base;
  if (perturbation == 0.0) return mesh;

  // h = shortest edge of the base mesh
  double h = std::numeric_limits<double>::infinity();
  for (const auto& e : base.edges)
    h = std::min(h, norm(base.vertices[e[1]] - base.vertices[e[0]]));

  std::vector<char> on_boundary(base.num_vertices(), 0);
  for (int e = 0; e < base.num_edges(); ++e)
    if (base.edge_on_boundary[e]) {
      on_boundary[base.edges[e][0]] = 1;
      on_boundary[base.edges[e][1]] = 1;
    }

  std::vector<std::vector<int>> vertex_cells(base.num_vertices());
  for (int c = 0; c < base.num_cells(); ++c)
    for (int v : base.cells[c]) vertex_cells[v].push_back(c);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int v = 0; v < base.num_vertices(); ++v) {
    const double dx = unit(rng) * perturbation * h;
    const double dy = unit(rng) * perturbation * h;
    if (on_boundary[v]) continue; // draw anyway: displacement stream independent of topology use
    Vec2 d{dx, dy};
    for (int attempt = 0; attempt < 40; ++attempt) {
      mesh.vertices[v] = base.vertices[v] + d;
      bool ok = true;
      for (int c : vertex_cells[v]) ok = ok && (mesh.cell_area(c) > 0.0);
      if (ok) break;
      d = 0.5 * d;
      mesh.vertices[v] = base.vertices[v];
      if (attempt == 39) throw DegenerateMeshError("perturbation inverts a cell");
    }
  }
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_area(c) <= 0.0) throw DegenerateMeshError("perturbation inverts a cell");
  return mesh;
}

inline TriangleMesh make_mesh(const MeshFamily& family) {
  switch (family.kind) {
    case MeshKind::Crossed:
      return unit_square_mesh(MeshKind::Crossed, family.n);
    case MeshKind::Right:
      return unit_square_mesh(MeshKind::Right, family.n);
    case MeshKind::NonUniform:
      // crossed base: its x<->y symmetry keeps the double eigenvalues nearly
      // double, so the random perturbation decides how they split
      return perturbed_mesh(unit_square_mesh(MeshKind::Crossed, family.n), family.seed,
                            family.perturbation);
    case MeshKind::LShapeUniform:
      return l_shape_mesh(family.n);
  }
  throw std::invalid_argument("unknown mesh kind");
}

inline std::string mesh_kind_name(MeshKind kind) {
  switch (kind) {
    case MeshKind::Crossed: return "crossed";
    case MeshKind::Right: return "right";
    case MeshKind::NonUniform: return "nonunif";
    case MeshKind::LShapeUniform: return "lshape";
  }
  return "?";
}

}  // namespace lselast
