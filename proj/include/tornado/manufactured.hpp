#pragma once

#include "tornado/geometry.hpp"

namespace tornado {

/// Divergence-free manufactured flow on the straight cylinder,
///   v = T(t) grad(w) x c,  w = A (1 - r^2/r_max^2)^2 (1 - zeta^2)^2,
///   zeta = (z - z_mid) / (2.5 a),  T(t) = 1 / (1 + t),
///   p = T(t) P x z.
/// w vanishes to second order on the wall, so v = 0 there. The body force
/// that makes (v, p) an exact Navier-Stokes solution is available through
/// forcing().
class ManufacturedSolution {
public:
  ManufacturedSolution(const DomainSpec& domain, double nu, double amplitude = 1.0,
                       const Vec3& mix = Vec3(0.3, -0.2, 1.0), double pressure_scale = 1.0);

  Vec3 velocity(const Vec3& x, double t) const;
  /// G(i,j) = d v_i / d x_j
  Mat3 velocity_gradient(const Vec3& x, double t) const;
  double pressure(const Vec3& x, double t) const;
  Vec3 forcing(const Vec3& x, double t) const;

  double time_factor(double t) const { return 1.0 / (1.0 + t); }
  double time_factor_rate(double t) const { return -1.0 / ((1.0 + t) * (1.0 + t)); }

  /// Derivatives of the potential w (exposed for testing).
  double potential(const Vec3& x) const;
  Vec3 potential_gradient(const Vec3& x) const;
  Mat3 potential_hessian(const Vec3& x) const;
  Vec3 potential_laplacian_gradient(const Vec3& x) const;

private:
  DomainSpec domain_;
  double nu_;
  double amplitude_;
  Vec3 mix_;
  double pressure_scale_;
};

} // namespace tornado
