#include "tornado/initcond.hpp"

#include <cmath>
#include <string>

namespace tornado {

void ProfileParams::validate() const {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0))
      throw InvalidArgument("profile: eps" + std::to_string(i + 1) + " must be positive");
    if (!std::isfinite(beta[i]))
      throw InvalidArgument("profile: beta" + std::to_string(i + 1) + " must be finite");
  }
}

double psi(double a, double eps, double sigma) {
  const double base = a * a + eps;
  if (!(base > 0.0)) throw InvalidArgument("psi: a^2 + eps must be positive");
  return std::pow(base, sigma);
}

namespace {

double sign_of(double z, SignAtZero convention) {
  if (z > 0.0) return 1.0;
  if (z < 0.0) return -1.0;
  return convention == SignAtZero::Plus ? 1.0 : 0.0;
}

} // namespace

Vec3 initial_velocity_straight(const Vec3& p, const ProfileParams& prm) {
  const double r = std::hypot(p.x(), p.y());
  const double z = p.z();
  const auto& e = prm.eps;
  const auto& b = prm.beta;

  const double u_z = psi(r, e[0], -b[0]) * psi(z, e[1], -b[1]);
  if (r == 0.0) return {0.0, 0.0, u_z};

  const double rho = psi(r, e[2], -b[2]) * psi(z, e[3], b[3]);
  const double u_theta = psi(r, e[4], -b[4]) * psi(z, e[5], -b[5]);
  const double u_r = sign_of(z, prm.sign_at_zero) * rho * u_z;

  const double cx = p.x() / r, cy = p.y() / r;
  return {u_r * cx - u_theta * cy, u_r * cy + u_theta * cx, u_z};
}

Vec3 initial_velocity_curved(const Vec3& p, const DomainSpec& spec, const ProfileParams& params) {
  if (!spec.is_curved()) throw InvalidArgument("initial_velocity_curved: domain must be curved");
  const Vec3 ps = torus_inverse(p, spec.R);
  const double tol = 1e-9 * std::max(1.0, spec.r_max);
  if (std::hypot(ps.x(), ps.y()) > spec.r_max + tol || ps.z() < spec.z_min() - tol ||
      ps.z() > spec.z_max() + tol)
    throw GeometryError("initial_velocity_curved: point outside the curved domain");

  return curved_profile_unchecked(p, spec.R, params);
}

Vec3 curved_profile_unchecked(const Vec3& p, double R, const ProfileParams& params) {
  Vec3 ps = torus_inverse(p, R);
  // Axis points come back from the inverse with round-off radii; the swirl is discontinuous there.
  if (std::hypot(ps.x(), ps.y()) < 1e-12) ps.x() = ps.y() = 0.0;
  const Vec3 vs = initial_velocity_straight(ps, params);
  const double theta = ps.z() / R;
  const double c = std::cos(theta), s = std::sin(theta);
  // Columns: dT/dx, dT/dy, normalized dT/dz.
  Mat3 rot;
  rot << c, 0.0, s,
         0.0, 1.0, 0.0,
         -s, 0.0, c;
  return rot * vs;
}

FieldState sample_initial_state(const Mesh& mesh, InitialProfileKind kind, const DomainSpec& spec,
                                const ProfileParams& params, double profile_R) {
  params.validate();
  FieldState state = FieldState::zeros(mesh.num_nodes());
  if (kind == InitialProfileKind::StraightFrame) {
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
      state.velocity[n] = initial_velocity_straight(mesh.nodes[n], params);
    return state;
  }
  const double R = profile_R > 0.0 ? profile_R : spec.R;
  if (!(R > spec.r_max))
    throw InvalidArgument("sample_initial_state: curved profile needs a torus radius R > r_max");
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    state.velocity[n] = spec.is_curved() && R == spec.R
                            ? initial_velocity_curved(mesh.nodes[n], spec, params)
                            : curved_profile_unchecked(mesh.nodes[n], R, params);
  return state;
}

} // namespace tornado
