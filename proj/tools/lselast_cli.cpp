#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lselast/lselast.hpp"

namespace {

struct CommonOptions {
  std::string formulation = "two";
  std::string mesh = "crossed";
  std::string material = "stokes";
  unsigned seed = 1;
  double perturbation = 0.2;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--formulation", opts.formulation, "two | three")
      ->check(CLI::IsMember({"two", "three"}));
  cmd->add_option("--mesh", opts.mesh, "crossed | right | nonunif | lshape")
      ->check(CLI::IsMember({"crossed", "right", "nonunif", "lshape"}));
  cmd->add_option("--material", opts.material, "stokes | lame:MU,LAMBDA");
  cmd->add_option("--seed", opts.seed, "random seed (nonunif mesh only)");
  cmd->add_option("--perturbation", opts.perturbation,
                  "relative vertex perturbation in [0, 0.5) (nonunif mesh only)");
}

lselast::Formulation parse_formulation(const std::string& s) {
  return s == "three" ? lselast::Formulation::ThreeField : lselast::Formulation::TwoField;
}

lselast::MeshKind parse_mesh_kind(const std::string& s) {
  if (s == "crossed") return lselast::MeshKind::Crossed;
  if (s == "right") return lselast::MeshKind::Right;
  if (s == "nonunif") return lselast::MeshKind::NonUniform;
  return lselast::MeshKind::LShapeUniform;
}

lselast::Material parse_material(const std::string& s) {
  if (s == "stokes") return lselast::Material::stokes_limit();
  if (s.rfind("lame:", 0) == 0) {
    double mu = 0.0, lambda = 0.0;
    char extra = 0;
    if (std::sscanf(s.c_str() + 5, "%lf,%lf%c", &mu, &lambda, &extra) != 2)
      throw CLI::ValidationError("--material", "expected lame:MU,LAMBDA");
    return lselast::Material::lame(mu, lambda);
  }
  throw CLI::ValidationError("--material", "expected 'stokes' or 'lame:MU,LAMBDA'");
}

lselast::MeshFamily make_family(const CommonOptions& opts, int n) {
  return {parse_mesh_kind(opts.mesh), n, opts.seed, opts.perturbation};
}

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> ns;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    const int n = std::stoi(item, &pos);
    if (pos != item.size() || n < 1) throw std::invalid_argument("bad n-list entry: " + item);
    ns.push_back(n);
  }
  if (ns.empty()) throw std::invalid_argument("n-list must contain at least one level");
  return ns;
}

int cmd_run(const CommonOptions& opts, const std::string& n_list, const std::string& out,
            std::optional<double> reference, bool strict) {
  const auto ns = parse_n_list(n_list);
  const lselast::RateTable table = lselast::run_convergence(
      parse_formulation(opts.formulation), make_family(opts, 0), ns, parse_material(opts.material),
      reference);

  const bool markdown = out.size() > 3 && out.rfind(".md") == out.size() - 3;
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "error: cannot open output file " << out << "\n";
      return 1;
    }
  }
  std::ostream& os = out.empty() ? std::cout : file;
  if (markdown)
    lselast::write_rate_table_markdown(os, table);
  else
    lselast::write_rate_table_csv(os, table);

  if (table.any_failed()) {
    for (const auto& row : table.rows)
      if (row.failed) std::cerr << "N=" << row.n << " failed: " << row.message << "\n";
    if (strict) return 1;
  }
  return 0;
}

int cmd_spectrum(const CommonOptions& opts, int n, int k, const std::string& out) {
  const lselast::TriangleMesh mesh = lselast::make_mesh(make_family(opts, n));
  const lselast::BlockSystem sys = lselast::assemble(
      parse_formulation(opts.formulation), mesh, parse_material(opts.material));
  const lselast::Spectrum spectrum =
      lselast::filter_u_nonvanishing(lselast::solve_smallest(sys, k), sys);

  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) {
      std::cerr << "error: cannot open output file " << out << "\n";
      return 1;
    }
    lselast::write_spectrum_csv(file, spectrum, sys);
  }

  std::printf("# %s-field, %s mesh, N=%d, dim=%d, %d infinite mode(s)\n",
              opts.formulation.c_str(), opts.mesh.c_str(), n, sys.dim(), spectrum.n_infinite);
  int index = 1;
  for (const auto& pair : spectrum.finite) {
    const bool complex_pair = std::abs(pair.omega.imag()) > 1e-9 * std::abs(pair.omega);
    std::printf("%2d  %.15g %+.15gi  residual %.3e%s\n", index++, pair.omega.real(),
                pair.omega.imag(), pair.residual, complex_pair ? "  (conjugate pair)" : "");
  }
  return 0;
}

int cmd_classify(const CommonOptions& opts, int n) {
  const lselast::TriangleMesh mesh = lselast::make_mesh(make_family(opts, n));
  const lselast::BlockSystem sys = lselast::assemble(
      parse_formulation(opts.formulation), mesh, parse_material(opts.material));
  const lselast::PencilClass cls = lselast::classify_pencil(sys);
  std::printf("case %s\n", lselast::pencil_case_name(cls.pencil_case));
  std::printf("dim %d, rank B %d, dim(ker A \\cap ker B) %d, coupling rank %d\n", sys.dim(),
              cls.rank_B, cls.dim_ker_A_cap_ker_B, lselast::coupling_block_rank(sys));
  return 0;
}

int cmd_export(const CommonOptions& opts, int n, const std::string& prefix) {
  const lselast::TriangleMesh mesh = lselast::make_mesh(make_family(opts, n));
  const lselast::BlockSystem sys = lselast::assemble(
      parse_formulation(opts.formulation), mesh, parse_material(opts.material));
  auto write = [&](const std::string& suffix, const lselast::SparseMat& matrix) {
    std::ofstream file(prefix + suffix);
    if (!file) {
      std::cerr << "error: cannot open output file " << prefix + suffix << "\n";
      return false;
    }
    lselast::write_matrix_market(file, matrix);
    return true;
  };
  if (!write("_lhs.mtx", sys.lhs) || !write("_rhs.mtx", sys.rhs)) return 1;
  std::ofstream meshfile(prefix + "_mesh.txt");
  lselast::write_mesh_dump(meshfile, mesh);
  std::printf("wrote %s_lhs.mtx, %s_rhs.mtx, %s_mesh.txt (dim %d)\n", prefix.c_str(),
              prefix.c_str(), prefix.c_str(), sys.dim());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares finite element solver for the plane elasticity eigenvalue problem"};
  app.require_subcommand(1);

  CommonOptions run_opts, spec_opts, cls_opts, exp_opts;

  auto* run = app.add_subcommand("run", "convergence sweep over a list of refinement levels");
  add_common(run, run_opts);
  std::string n_list, run_out;
  std::optional<double> reference;
  bool strict = false;
  run->add_option("--n-list", n_list, "comma-separated refinement levels, e.g. 4,6,8")
      ->required();
  run->add_option("--out", run_out, "output file (.csv or .md); stdout CSV when omitted");
  run->add_option("--reference", reference, "override the built-in reference eigenvalue");
  run->add_flag("--strict", strict, "exit nonzero if any row fails");

  auto* spectrum = app.add_subcommand("spectrum", "k smallest eigenvalues on one mesh");
  add_common(spectrum, spec_opts);
  int spec_n = 4, spec_k = 5;
  std::string spec_out;
  spectrum->add_option("--n", spec_n, "refinement level")->required();
  spectrum->add_option("--k", spec_k, "number of eigenvalues")->check(CLI::PositiveNumber);
  spectrum->add_option("--out", spec_out, "also write a spectrum CSV here");

  auto* classify = app.add_subcommand("classify", "dense pencil diagnosis (small N)");
  add_common(classify, cls_opts);
  int cls_n = 1;
  classify->add_option("--n", cls_n, "refinement level (dense solve, keep small)")->required();

  auto* exp = app.add_subcommand("export-matrices", "write the assembled pencil to disk");
  add_common(exp, exp_opts);
  int exp_n = 1;
  std::string exp_out = "lselast", exp_format = "matrixmarket";
  exp->add_option("--n", exp_n, "refinement level")->required();
  exp->add_option("--out", exp_out, "output path prefix");
  exp->add_option("--format", exp_format, "matrix format")
      ->check(CLI::IsMember({"matrixmarket"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts, n_list, run_out, reference, strict);
    if (spectrum->parsed()) return cmd_spectrum(spec_opts, spec_n, spec_k, spec_out);
    if (classify->parsed()) return cmd_classify(cls_opts, cls_n);
    if (exp->parsed()) return cmd_export(exp_opts, exp_n, exp_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
