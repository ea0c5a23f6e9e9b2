#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lselast/assembly.hpp"
#include "lselast/io.hpp"
#include "lselast/mesh.hpp"

using namespace lselast;

TEST_CASE("compliance tensor") {
  SUBCASE("Stokes limit annihilates the identity") {
    const Material m = Material::stokes_limit();
    CHECK(m.compliance(Eigen::Matrix2d::Identity()).norm() == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("lambda = 0 gives tau / (2 mu)") {
    const Material m = Material::lame(1.0, 0.0);
    Eigen::Matrix2d tau;
    tau << 1, 2, 3, 4;
    CHECK((m.compliance(tau) - 0.5 * tau).norm() == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("Stokes limit on an off-diagonal tensor") {
    const Material m = Material::stokes_limit();
    Eigen::Matrix2d tau;
    tau << 0, 1, 0, 0;
    Eigen::Matrix2d expected;
    expected << 0, 0.5, 0, 0;
    CHECK((m.compliance(tau) - expected).norm() == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("compliance inverts stiffness on traceless tensors") {
    const Material m = Material::lame(1.3, 2.7);
    Eigen::Matrix2d tau;
    tau << 0.4, -0.9, 0.2, -0.4;
    CHECK((m.compliance(m.stiffness(tau)) - tau).norm() < 1e-14);
  }
}

TEST_CASE("pointwise tensor operations") {
  Eigen::Matrix2d g;
  g << 1, 2, 3, 4;
  Eigen::Matrix2d sym_expected;
  sym_expected << 1, 2.5, 2.5, 4;
  CHECK((symmetrize(g) - sym_expected).norm() == doctest::Approx(0.0).scale(1.0));
  CHECK(skew_part(symmetrize(g)).norm() == doctest::Approx(0.0).scale(1.0));
  // chi rotates by 90 degrees: || chi * 1 ||_F = sqrt(2)
  CHECK(chi_times(1.0).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(chi_times(1.0).trace() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("system dimensions on the smallest crossed mesh") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
  const auto two = assemble_two_field(mesh, Material::stokes_limit());
  CHECK(two.n_sigma == 48);
  CHECK(two.n_u == 10);
  CHECK(two.n_psi == 0);
  CHECK(two.n_constraints == 1);
  CHECK(two.dim() == 59);

  const auto three = assemble_three_field(mesh, Material::stokes_limit());
  CHECK(three.n_sigma == 48);
  CHECK(three.n_u == 10);
  CHECK(three.n_psi == 12);
  CHECK(three.n_constraints == 2);
  CHECK(three.dim() == 72);
}

TEST_CASE("lhs symmetric, rhs intentionally one-sided") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 2);
  for (auto f : {Formulation::TwoField, Formulation::ThreeField}) {
    const auto sys = assemble(f, mesh, Material::stokes_limit());
    const Eigen::SparseMatrix<double> diff =
        Eigen::SparseMatrix<double>(sys.lhs.transpose()) - sys.lhs;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-12);
    // the non-symmetric rhs is what admits complex eigenvalues
    const Eigen::SparseMatrix<double> bdiff =
        Eigen::SparseMatrix<double>(sys.rhs.transpose()) - sys.rhs;
    CHECK(bdiff.coeffs().cwiseAbs().maxCoeff() > 0.1);
  }
}

TEST_CASE("trace constraint row integrates the matrix trace") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 2);
  const Eigen::VectorXd row =
      trace_constraint_row(mesh, build_dof_map(SpaceFamily::RT1Tensor, mesh));

  const Eigen::VectorXd id_coeffs =
      interpolate_stress(mesh, [](Eigen::Vector2d) { return Eigen::Matrix2d::Identity(); });
  CHECK(row.dot(id_coeffs) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::Matrix2d traceless;
  traceless << 1.0, 0.3, -0.8, -1.0;
  const Eigen::VectorXd t_coeffs =
      interpolate_stress(mesh, [&](Eigen::Vector2d) { return traceless; });
  CHECK(row.dot(t_coeffs) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // on the L-shape (area 3) the identity integrates to 6
  const auto lmesh = l_shape_mesh(2);
  const Eigen::VectorXd lrow =
      trace_constraint_row(lmesh, build_dof_map(SpaceFamily::RT1Tensor, lmesh));
  const Eigen::VectorXd lid =
      interpolate_stress(lmesh, [](Eigen::Vector2d) { return Eigen::Matrix2d::Identity(); });
  CHECK(lrow.dot(lid) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("identity stress lies in the kernel of the unconstrained Stokes operator") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
  const auto sys = assemble_two_field(mesh, Material::stokes_limit(), /*with_constraints=*/false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dim());
  x.head(sys.n_sigma) =
      interpolate_stress(mesh, [](Eigen::Vector2d) { return Eigen::Matrix2d::Identity(); });
  CHECK((sys.lhs * x).norm() < 1e-12);

  // the bordered system removes that kernel vector
  const auto bordered = assemble_two_field(mesh, Material::stokes_limit());
  Eigen::VectorXd xb = Eigen::VectorXd::Zero(bordered.dim());
  xb.head(sys.n_sigma) = x.head(sys.n_sigma);
  CHECK((bordered.lhs * xb).norm() > 1e-6);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(bordered.lhs);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
  CHECK(lu.isInvertible());
}

TEST_CASE("right-hand side couples only stress rows with displacement columns") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
  for (auto f : {Formulation::TwoField, Formulation::ThreeField}) {
    const auto sys = assemble(f, mesh, Material::stokes_limit());
    for (int k = 0; k < sys.rhs.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.rhs, k); it; ++it) {
        if (it.value() == 0.0) continue;
        const bool row_sigma = it.row() < sys.n_sigma;
        const bool col_sigma = it.col() < sys.n_sigma;
        const bool row_u = it.row() >= sys.u_begin() && it.row() < sys.u_begin() + sys.n_u;
        const bool col_u = it.col() >= sys.u_begin() && it.col() < sys.u_begin() + sys.n_u;
        CHECK(((row_sigma && col_u) || (row_u && col_sigma)));
      }
  }
}

TEST_CASE("asymmetry penalty vanishes on symmetric stress interpolants") {
  // difference of the three- and two-field sigma-sigma blocks in the Stokes
  // limit is the (as tau, as tau) form; a symmetric field must annihilate it
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
  const auto two = assemble_two_field(mesh, Material::stokes_limit(), false);
  const auto three = assemble_three_field(mesh, Material::stokes_limit(), false);
  const int ns = two.n_sigma;
  const Eigen::MatrixXd penalty = Eigen::MatrixXd(three.lhs).topLeftCorner(ns, ns) -
                                  Eigen::MatrixXd(two.lhs).topLeftCorner(ns, ns);

  Eigen::Matrix2d sym;
  sym << 0.7, -0.2, -0.2, 1.1;
  const Eigen::VectorXd s = interpolate_stress(mesh, [&](Eigen::Vector2d) { return sym; });
  CHECK(std::abs(s.dot(penalty * s)) < 1e-12);

  Eigen::Matrix2d skew;
  skew << 0, 1, -1, 0;
  const Eigen::VectorXd a = interpolate_stress(mesh, [&](Eigen::Vector2d) { return skew; });
  CHECK(a.dot(penalty * a) == doctest::Approx(2.0).epsilon(1e-10));  // ||as tau||^2 = 2*|Omega|
}

TEST_CASE("constrained operator is positive definite on the constraint complement") {
  for (auto f : {Formulation::TwoField, Formulation::ThreeField}) {
    const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
    const auto sys = assemble(f, mesh, Material::stokes_limit(), /*with_constraints=*/false);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(sys.lhs);

    // build the constraint rows and project onto their nullspace
    const auto bordered = assemble(f, mesh, Material::stokes_limit());
    const int nc = bordered.n_constraints;
    const int n = sys.dim();
    const Eigen::MatrixXd full = Eigen::MatrixXd(bordered.lhs);
    const Eigen::MatrixXd C = full.block(n, 0, nc, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    const Eigen::MatrixXd Z = lu.kernel();

    const Eigen::MatrixXd reduced = Z.transpose() * dense * Z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (reduced + reduced.transpose()));
    CAPTURE(formulation_name(f));
    CHECK(es.eigenvalues().minCoeff() > 1e-12);
  }
}

TEST_CASE("manufactured source problem converges") {
  // u = (sin(pi x) sin(pi y), sin(pi x) sin(pi y)) with Lame mu = lambda = 1
  const Material mat = Material::lame(1.0, 1.0);
  const double pi = std::acos(-1.0);
  auto exact_u = [&](Eigen::Vector2d p) {
    const double s = std::sin(pi * p.x()) * std::sin(pi * p.y());
    return Eigen::Vector2d{s, s};
  };
  auto body_force = [&](Eigen::Vector2d p) {
    const double sxsy = std::sin(pi * p.x()) * std::sin(pi * p.y());
    const double cxcy = std::cos(pi * p.x()) * std::cos(pi * p.y());
    const double f = pi * pi * (2.0 * sxsy - 2.0 * (cxcy - sxsy));
    return Eigen::Vector2d{f, f};
  };

  double prev = -1.0;
  for (int n : {2, 4, 8}) {
    const auto mesh = unit_square_mesh(MeshKind::Crossed, n);
    const auto sys = assemble_two_field(mesh, mat);
    const Eigen::VectorXd load = assemble_load(sys, mesh, body_force);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver(sys.lhs);
    REQUIRE(solver.info() == Eigen::Success);
    const Eigen::VectorXd sol = solver.solve(load);
    const DofMap u_map = build_dof_map(SpaceFamily::P2Vector, mesh, /*dirichlet=*/true);
    const double err =
        displacement_l2_error(mesh, u_map, sol.segment(sys.u_begin(), sys.n_u), exact_u);
    CAPTURE(n);
    if (prev >= 0.0) CHECK(err < 0.5 * prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("matrix market export round-trips structure") {
  const auto mesh = unit_square_mesh(MeshKind::Crossed, 1);
  const auto sys = assemble_two_field(mesh, Material::stokes_limit());
  const std::string path = "test_mm_out.mtx";
  {
    std::ofstream out(path);
    write_matrix_market(out, sys.lhs);
  }

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows = 0, cols = 0;
  long nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == sys.dim());
  CHECK(cols == sys.dim());
  CHECK(nnz == sys.lhs.nonZeros());
  long count = 0;
  int r = 0, c = 0;
  double v = 0.0;
  double checksum = 0.0;
  while (in >> r >> c >> v) {
    CHECK(r >= 1);
    CHECK(r <= rows);
    CHECK(c >= 1);
    CHECK(c <= cols);
    checksum += v * ((r + 2 * c) % 7);
    ++count;
  }
  CHECK(count == nnz);
  double expected = 0.0;
  for (int k = 0; k < sys.lhs.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.lhs, k); it; ++it)
      expected += it.value() * ((it.row() + 1 + 2 * (it.col() + 1)) % 7);
  CHECK(checksum == doctest::Approx(expected).epsilon(1e-9));
  std::remove(path.c_str());
}
