#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lselast/assembly.hpp"
#include "lselast/gevp.hpp"
#include "lselast/io.hpp"
#include "lselast/mesh.hpp"

namespace lselast {

/// First-eigenvalue references: unit square from the Stokes literature,
/// L-shape from the benchmark estimate the experiments compare against.
struct ReferenceValue {
  enum class Domain { UnitSquare, LShape };
  Domain domain;
  double value;

  static ReferenceValue unit_square() { return {Domain::UnitSquare, 52.344691168}; }
  static ReferenceValue l_shape() { return {Domain::LShape, 32.13269464746}; }

  static ReferenceValue for_mesh(MeshKind kind) {
    return kind == MeshKind::LShapeUniform ? l_shape() : unit_square();
  }
};

/// rate = ln(e_prev / e) / ln(N / N_prev); empty when either error is
/// non-positive (the rate is undefined there).
inline std::optional<double> rate(double e_prev, double e, int n_prev, int n) {
  if (e_prev <= 0.0 || e <= 0.0 || n <= n_prev) return std::nullopt;
  return std::log(e_prev / e) / std::log(static_cast<double>(n) / n_prev);
}

struct RateRow {
  int n = 0;
  std::complex<double> omega;
  double error = 0.0;
  std::optional<double> rate;
  double residual = 0.0;
  bool failed = false;
  std::string message;
};

struct RateTable {
  Formulation formulation;
  MeshFamily family;
  double reference = 0.0;
  std::vector<RateRow> rows;

  bool any_failed() const {
    for (const auto& r : rows)
      if (r.failed) return true;
    return false;
  }
};

/// One mesh-refinement sweep: assemble, solve for the smallest eigenvalue
/// with non-vanishing displacement, tabulate errors and rates against the
/// domain's reference value. Solver failures mark the row and the run
/// continues.
inline RateTable run_convergence(Formulation formulation, MeshFamily family,
                                 const std::vector<int>& ns, const Material& material,
                                 std::optional<double> reference_override = std::nullopt) {
  for (size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw std::invalid_argument("refinement list must increase strictly");

  RateTable table;
  table.formulation = formulation;
  table.family = family;
  table.reference =
      reference_override ? *reference_override : ReferenceValue::for_mesh(family.kind).value;

  for (int n : ns) {
    RateRow row;
    row.n = n;
    try {
      MeshFamily f = family;
      f.n = n;
      const TriangleMesh mesh = make_mesh(f);
      const BlockSystem sys = assemble(formulation, mesh, material);
      const Spectrum spectrum = filter_u_nonvanishing(solve_smallest(sys, 1), sys);
      if (spectrum.finite.empty()) throw ConvergenceError("no eigenpair with nonzero u");
      row.omega = spectrum.finite.front().omega;
      row.residual = spectrum.finite.front().residual;
      row.error = std::abs(row.omega.real() - table.reference);
      if (!table.rows.empty() && !table.rows.back().failed)
        row.rate = rate(table.rows.back().error, row.error, table.rows.back().n, n);
    } catch (const std::exception& e) {
      row.failed = true;
      row.message = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// CSV schema: formulation,mesh,N,omega_re,omega_im,error,rate,residual
inline void write_rate_table_csv(std::ostream& os, const RateTable& table) {
  os << "formulation,mesh,N,omega_re,omega_im,error,rate,residual\n";
  for (const auto& row : table.rows) {
    os << formulation_name(table.formulation) << "," << mesh_kind_name(table.family.kind) << ","
       << row.n << ",";
    if (row.failed) {
      os << ",,,,\n";
      continue;
    }
    os << detail::fmt_double(row.omega.real()) << "," << detail::fmt_double(row.omega.imag())
       << "," << detail::fmt_double(row.error) << ",";
    if (row.rate) os << detail::fmt_double(*row.rate, "%.2f");
    os << "," << detail::fmt_double(row.residual) << "\n";
  }
}

/// Markdown mirror of the CSV, one table row per refinement level.
inline void write_rate_table_markdown(std::ostream& os, const RateTable& table) {
  os << "| N | omega | error | rate |\n|---|---|---|---|\n";
  for (const auto& row : table.rows) {
    if (row.failed) {
      os << "| " << row.n << " | failed: " << row.message << " | | |\n";
      continue;
    }
    os << "| " << row.n << " | " << detail::fmt_double(row.omega.real(), "%.6f");
    if (std::abs(row.omega.imag()) > 1e-9 * std::abs(row.omega))
      os << " + " << detail::fmt_double(row.omega.imag(), "%.3e") << "i";
    os << " | " << detail::fmt_double(row.error, "%.3e") << " | ";
    if (row.rate) os << detail::fmt_double(*row.rate, "%.1f");
    os << " |\n";
  }
}

struct SpectrumReportEntry {
  std::complex<double> omega;
  double residual = 0.0;
  bool conjugate_pair_member = false;
};

/// k smallest finite eigenvalues with conjugate-pair flags
/// (|Im omega| > 1e-9 |omega|).
inline std::vector<SpectrumReportEntry> spectrum_report(Formulation formulation,
                                                        const MeshFamily& family, int k,
                                                        const Material& material) {
  const TriangleMesh mesh = make_mesh(family);
  const BlockSystem sys = assemble(formulation, mesh, material);
  const Spectrum spectrum = filter_u_nonvanishing(solve_smallest(sys, k), sys);
  std::vector<SpectrumReportEntry> entries;
  for (const auto& pair : spectrum.finite) {
    SpectrumReportEntry e;
    e.omega = pair.omega;
    e.residual = pair.residual;
    e.conjugate_pair_member = std::abs(pair.omega.imag()) > 1e-9 * std::abs(pair.omega);
    entries.push_back(e);
  }
  if (entries.size() > static_cast<size_t>(k)) entries.resize(k);
  return entries;
}

}  // namespace lselast
