#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace lselast {

/// Compliance law for plane (d=2) elasticity. StokesLimit is the
/// incompressible limit lambda -> infinity with mu = 1.
struct Material {
  enum class Mode { Lame, StokesLimit };
  Mode mode = Mode::StokesLimit;
  double mu = 1.0;
  double lambda = 0.0;

  static Material stokes_limit() { return Material{Mode::StokesLimit, 1.0, 0.0}; }
  static Material lame(double mu, double lambda) {
    if (mu <= 0.0) throw std::invalid_argument("shear modulus must be positive");
    if (lambda < 0.0) throw std::invalid_argument("first Lame parameter must be >= 0");
    return Material{Mode::Lame, mu, lambda};
  }

  /// A tau = 1/(2 mu) (tau - lambda/(2 mu + d lambda) tr(tau) I), d = 2;
  /// the Stokes limit is (tau - tr(tau)/2 I) / 2.
  Eigen::Matrix2d compliance(const Eigen::Matrix2d& tau) const {
    const double tr = tau.trace();
    if (mode == Mode::StokesLimit)
      return 0.5 * (tau - 0.5 * tr * Eigen::Matrix2d::Identity());
    const double c = lambda / (2.0 * mu + 2.0 * lambda);
    return (tau - c * tr * Eigen::Matrix2d::Identity()) / (2.0 * mu);
  }

  /// Inverse law (stiffness): sigma = 2 mu eps + lambda tr(eps) I.
  /// Undefined in the Stokes limit.
  Eigen::Matrix2d stiffness(const Eigen::Matrix2d& eps) const {
    if (mode == Mode::StokesLimit)
      throw std::logic_error("stiffness is not defined in the incompressible limit");
    return 2.0 * mu * eps + lambda * eps.trace() * Eigen::Matrix2d::Identity();
  }
};

/// symgrad(v) = (grad v + grad v^T) / 2, applied to an already-computed grad.
inline Eigen::Matrix2d symmetrize(const Eigen::Matrix2d& grad) {
  return 0.5 * (grad + grad.transpose());
}

/// as(tau) = (tau - tau^T) / 2.
inline Eigen::Matrix2d skew_part(const Eigen::Matrix2d& tau) {
  return 0.5 * (tau - tau.transpose());
}

/// chi psi = psi * [[0,-1],[1,0]], the single skew generator in 2D.
inline Eigen::Matrix2d chi_times(double psi) {
  Eigen::Matrix2d m;
  m << 0.0, -psi, psi, 0.0;
  return m;
}

}  // namespace lselast
