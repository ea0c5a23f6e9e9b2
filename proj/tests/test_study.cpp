#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lselast/study.hpp"

using namespace lselast;

TEST_CASE("convergence rate formula") {
  SUBCASE("errors from a published two-field refinement pair give a rate near 4") {
    const double ref = 52.344691168;
    const double e4 = 52.618734 - ref;
    const double e6 = 52.400609 - ref;
    const auto r = rate(e4, e6, 4, 6);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(3.9).epsilon(0.05));
  }

  SUBCASE("error halving under mesh doubling is first order") {
    const auto r = rate(0.2, 0.1, 4, 8);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("stagnating error gives rate zero") {
    const auto r = rate(0.1, 0.1, 4, 8);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("non-positive errors or non-increasing N are undefined") {
    CHECK(!rate(0.0, 0.1, 4, 8).has_value());
    CHECK(!rate(0.1, -0.1, 4, 8).has_value());
    CHECK(!rate(0.1, 0.05, 8, 8).has_value());
  }
}

TEST_CASE("reference values") {
  CHECK(ReferenceValue::unit_square().value == doctest::Approx(52.344691168).epsilon(1e-12));
  CHECK(ReferenceValue::l_shape().value == doctest::Approx(32.13269464746).epsilon(1e-12));
  CHECK(ReferenceValue::for_mesh(MeshKind::Crossed).domain ==
        ReferenceValue::Domain::UnitSquare);
  CHECK(ReferenceValue::for_mesh(MeshKind::LShapeUniform).domain ==
        ReferenceValue::Domain::LShape);
}

TEST_CASE("run_convergence on a coarse sweep") {
  const MeshFamily family{MeshKind::Crossed, 0, 0, 0.0};
  const RateTable table = run_convergence(Formulation::TwoField, family, {2, 4},
                                          Material::stokes_limit());
  REQUIRE(table.rows.size() == 2);
  CHECK(!table.any_failed());
  CHECK(table.reference == doctest::Approx(52.344691168));
  CHECK(table.rows[0].n == 2);
  CHECK(!table.rows[0].rate.has_value());
  REQUIRE(table.rows[1].rate.has_value());
  CHECK(table.rows[1].error < table.rows[0].error);
  // N=4 must land on the published crossed-mesh value
  CHECK(table.rows[1].omega.real() == doctest::Approx(52.618734).epsilon(1e-6));

  CHECK_THROWS_AS(
      run_convergence(Formulation::TwoField, family, {4, 4}, Material::stokes_limit()),
      std::invalid_argument);
}

TEST_CASE("rate table CSV is deterministic and well-formed") {
  const MeshFamily family{MeshKind::Crossed, 0, 0, 0.0};
  const RateTable table = run_convergence(Formulation::TwoField, family, {2, 4},
                                          Material::stokes_limit());
  std::ostringstream a, b;
  write_rate_table_csv(a, table);
  const RateTable again = run_convergence(Formulation::TwoField, family, {2, 4},
                                          Material::stokes_limit());
  write_rate_table_csv(b, again);
  CHECK(a.str() == b.str());  // byte-identical reruns

  std::istringstream in(a.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "formulation,mesh,N,omega_re,omega_im,error,rate,residual");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("two,crossed,", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == 2);

  std::ostringstream md;
  write_rate_table_markdown(md, table);
  CHECK(md.str().rfind("| N | omega | error | rate |", 0) == 0);
}

TEST_CASE("spectrum report flags complex conjugate members") {
  const MeshFamily family{MeshKind::Crossed, 2, 0, 0.0};
  const auto entries = spectrum_report(Formulation::TwoField, family, 3,
                                       Material::stokes_limit());
  REQUIRE(entries.size() == 3);
  for (const auto& e : entries) {
    // symmetric pencil on a symmetric mesh: everything real
    CHECK(!e.conjugate_pair_member);
    CHECK(std::abs(e.omega.imag()) <= 1e-9 * std::abs(e.omega));
    CHECK(e.residual <= 1e-9);
  }
  CHECK(entries[0].omega.real() > 0.0);
  CHECK(std::abs(entries[0].omega) <= std::abs(entries[1].omega));
}
