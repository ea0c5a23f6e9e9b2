#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "lselast/assembly.hpp"

namespace lselast {

struct SingularLhsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenPair {
  std::complex<double> omega;
  Eigen::VectorXcd vector;
  double residual = 0.0;  // ||Ax - omega Bx|| / (||Ax|| + |omega| ||Bx||)
};

struct Spectrum {
  std::vector<EigenPair> finite;  // sorted by |omega| ascending
  int n_infinite = 0;
  int n_degenerate = 0;
  double shift = 0.0;
  int krylov_dim = 0;
  int iterations = 0;
};

/// Section-3 pencil cases for A x = omega B x.
enum class PencilCase {
  Regular = 1,          // B invertible
  Degenerate = 2,       // ker A and ker B intersect nontrivially
  InfinitePresent = 3,  // B singular, A singular, kernels disjoint
  RoleSwap = 4,         // B singular, A invertible: solve B x = gamma A x
};

struct PencilClass {
  int rank_B = 0;
  int dim_ker_A_cap_ker_B = 0;
  PencilCase pencil_case = PencilCase::RoleSwap;
};

inline const char* pencil_case_name(PencilCase c) {
  switch (c) {
    case PencilCase::Regular: return "Regular(1)";
    case PencilCase::Degenerate: return "Degenerate(2)";
    case PencilCase::InfinitePresent: return "InfinitePresent(3)";
    case PencilCase::RoleSwap: return "RoleSwap(4)";
  }
  return "?";
}

namespace detail {

constexpr double kGammaCutoffRel = 1e-10;  // |gamma| below this (relative) counts as infinite

inline double pencil_residual(const SparseMat& a, const SparseMat& b, std::complex<double> omega,
                              const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd ax =
      (a * x.real()).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * (a * x.imag()).cast<std::complex<double>>();
  const Eigen::VectorXcd bx =
      (b * x.real()).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * (b * x.imag()).cast<std::complex<double>>();
  const double denom = ax.norm() + std::abs(omega) * bx.norm();
  return denom > 0 ? (ax - omega * bx).norm() / denom : 0.0;
}

inline void sort_by_abs_omega(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& p, const EigenPair& q) {
    if (std::abs(p.omega) != std::abs(q.omega)) return std::abs(p.omega) < std::abs(q.omega);
    return p.omega.imag() < q.omega.imag();
  });
}

inline int svd_rank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double cutoff = 1e-10 * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += (sv[i] > cutoff);
  return rank;
}

}  // namespace detail

/// All finite eigenvalues by dense role-swap: full spectral decomposition of
/// A^{-1} B, gamma below the relative cutoff counted as omega = infinity.
/// Brute-force oracle for small systems.
inline Spectrum dense_full_solve(const BlockSystem& sys) {
  const int n = sys.dim();
  if (n > 2000) throw std::invalid_argument("dense_full_solve limited to dimension <= 2000");

  const Eigen::MatrixXd a = Eigen::MatrixXd(sys.lhs);
  const Eigen::MatrixXd b = Eigen::MatrixXd(sys.rhs);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw SingularLhsError("lhs is singular: pencil Case (2) or (3), role swap unavailable");
  const Eigen::MatrixXd op = lu.solve(b);

  Eigen::EigenSolver<Eigen::MatrixXd> eig(op);
  const auto& gammas = eig.eigenvalues();
  const double gmax = gammas.cwiseAbs().maxCoeff();

  Spectrum spectrum;
  if (gmax == 0.0) {  // B maps everything to zero: all modes infinite
    spectrum.n_infinite = n;
    return spectrum;
  }
  const double cutoff = detail::kGammaCutoffRel * gmax;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> gamma = gammas[i];
    if (std::abs(gamma) < cutoff) {
      ++spectrum.n_infinite;
      continue;
    }
    EigenPair pair;
    pair.omega = 1.0 / gamma;
    pair.vector = eig.eigenvectors().col(i);
    pair.residual = detail::pencil_residual(sys.lhs, sys.rhs, pair.omega, pair.vector);
    spectrum.finite.push_back(std::move(pair));
  }
  detail::sort_by_abs_omega(spectrum.finite);
  return spectrum;
}

/// The k smallest-|omega| finite eigenvalues via shift-and-invert Arnoldi on
/// the role-swapped pencil B x = gamma A x: a single sparse factorization of
/// the lhs, Krylov iteration on y -> A^{-1} B y, omega = 1/gamma from the
/// largest-|gamma| Ritz values. Explicitly restarted until the requested
/// pairs meet the residual tolerance.
inline Spectrum solve_smallest(const BlockSystem& sys, int k, double tol = 1e-9,
                               double shift = 0.0) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int n = sys.dim();

  Eigen::SparseLU<SparseMat> lu;
  if (shift == 0.0) {
    lu.compute(sys.lhs);
  } else {
    const SparseMat shifted = sys.lhs - shift * sys.rhs;
    lu.compute(shifted);
  }
  if (lu.info() != Eigen::Success)
    throw SingularLhsError("lhs factorization failed: pencil Case (2) or (3)");

  const int m = std::min(n, std::max(4 * k, 40));
  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);

  std::mt19937 rng(20240901u);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start[i] = gauss(rng);

  Spectrum spectrum;
  spectrum.shift = shift;
  spectrum.krylov_dim = m;

  const int max_restarts = 60;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    ++spectrum.iterations;
    v.col(0) = start.normalized();
    int steps = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = lu.solve(sys.rhs * v.col(j));
      for (int pass = 0; pass < 2; ++pass)  // MGS with one reorthogonalization
        for (int i = 0; i <= j; ++i) {
          const double proj = v.col(i).dot(w);
          if (pass == 0)
            h(i, j) = proj;
          else
            h(i, j) += proj;
          w -= proj * v.col(i);
        }
      const double beta = w.norm();
      h(j + 1, j) = beta;
      if (beta < 1e-14) {  // invariant subspace found
        steps = j + 1;
        break;
      }
      v.col(j + 1) = w / beta;
    }

    const Eigen::MatrixXd hm = h.topLeftCorner(steps, steps);
    Eigen::EigenSolver<Eigen::MatrixXd> eig(hm);
    const Eigen::VectorXcd thetas = eig.eigenvalues();
    const double gmax = thetas.cwiseAbs().maxCoeff();
    if (gmax == 0.0) {
      spectrum.n_infinite = steps;
      return spectrum;
    }
    const double cutoff = detail::kGammaCutoffRel * gmax;

    std::vector<int> order(steps);
    for (int i = 0; i < steps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(thetas[a]) > std::abs(thetas[b]); });

    // assemble candidate Ritz pairs for the k largest |gamma|
    std::vector<EigenPair> candidates;
    int n_small = 0;
    for (int idx : order) {
      if (std::abs(thetas[idx]) < cutoff) {
        ++n_small;
        continue;
      }
      if (static_cast<int>(candidates.size()) >= k) continue;
      EigenPair pair;
      const std::complex<double> gamma = thetas[idx];
      pair.omega = shift + 1.0 / gamma;
      Eigen::VectorXcd y = eig.eigenvectors().col(idx);
      Eigen::VectorXcd x = v.leftCols(steps) * y;
      x /= x.norm();
      pair.vector = std::move(x);
      pair.residual = detail::pencil_residual(sys.lhs, sys.rhs, pair.omega, pair.vector);
      candidates.push_back(std::move(pair));
    }

    bool converged = static_cast<int>(candidates.size()) == std::min(k, steps - n_small);
    for (const auto& pair : candidates) converged = converged && pair.residual <= tol;

    if (converged || steps < m || restart == max_restarts) {
      if (!converged && !(steps < m)) {
        std::string msg = "Arnoldi did not converge; residuals:";
        for (const auto& pair : candidates) msg += " " + std::to_string(pair.residual);
        throw ConvergenceError(msg);
      }
      spectrum.finite = std::move(candidates);
      spectrum.n_infinite = n_small;
      detail::sort_by_abs_omega(spectrum.finite);
      return spectrum;
    }

    // explicit restart: combine the wanted Ritz directions
    start.setZero();
    for (const auto& pair : candidates) start += pair.vector.real() + pair.vector.imag();
    if (start.norm() < 1e-300) {
      for (int i = 0; i < n; ++i) start[i] = gauss(rng);
    }
    h.setZero();
  }
  throw ConvergenceError("Arnoldi did not converge");
}

/// Rank/kernel diagnosis of the pencil, dense (dimension <= 2000).
inline PencilClass classify_pencil(const BlockSystem& sys) {
  const int n = sys.dim();
  if (n > 2000) throw std::invalid_argument("classify_pencil limited to dimension <= 2000");

  const Eigen::MatrixXd a = Eigen::MatrixXd(sys.lhs);
  const Eigen::MatrixXd b = Eigen::MatrixXd(sys.rhs);

  PencilClass result;
  result.rank_B = detail::svd_rank(b);
  Eigen::MatrixXd stacked(2 * n, n);
  stacked.topRows(n) = a;
  stacked.bottomRows(n) = b;
  result.dim_ker_A_cap_ker_B = n - detail::svd_rank(stacked);

  const bool a_invertible = detail::svd_rank(a) == n;
  if (result.rank_B == n)
    result.pencil_case = PencilCase::Regular;
  else if (result.dim_ker_A_cap_ker_B > 0)
    result.pencil_case = PencilCase::Degenerate;
  else if (a_invertible)
    result.pencil_case = PencilCase::RoleSwap;
  else
    result.pencil_case = PencilCase::InfinitePresent;
  return result;
}

/// Numeric rank of the rhs coupling block (sigma-equation rows, u columns).
inline int coupling_block_rank(const BlockSystem& sys) {
  const Eigen::MatrixXd b = Eigen::MatrixXd(sys.rhs);
  return detail::svd_rank(b.block(0, sys.u_begin(), sys.n_sigma, sys.n_u));
}

/// Drops finite eigenpairs whose displacement block nearly vanishes.
inline Spectrum filter_u_nonvanishing(const Spectrum& spectrum, const BlockSystem& sys,
                                      double tol = 1e-8) {
  Spectrum out = spectrum;
  out.finite.clear();
  for (const auto& pair : spectrum.finite) {
    const double u_norm = pair.vector.segment(sys.u_begin(), sys.n_u).norm();
    if (u_norm >= tol * pair.vector.norm()) out.finite.push_back(pair);
  }
  return out;
}

}  // namespace lselast
