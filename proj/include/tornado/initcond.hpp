#pragma once

#include "tornado/geometry.hpp"
#include "tornado/state.hpp"

#include <array>

namespace tornado {

enum class SignAtZero { Zero, Plus };

struct ProfileParams {
  std::array<double, 6> eps{1, 1, 1, 1, 1, 1};
  std::array<double, 6> beta{1, 1, 1, 1, 1, 1};
  SignAtZero sign_at_zero = SignAtZero::Zero;

  void validate() const;
};

enum class InitialProfileKind { StraightFrame, CurvedFrame };

/// (a^2 + eps)^sigma
double psi(double a, double eps, double sigma);

/// Swirl profile u_r e_r + u_theta e_theta + u_z e_z. On the axis (r == 0)
/// only the axial component is returned.
Vec3 initial_velocity_straight(const Vec3& p, const ProfileParams& params);

/// Straight profile pulled back through the torus map and rotated by the
/// normalized map Jacobian. Throws GeometryError if p is outside the image
/// of the straight domain.
Vec3 initial_velocity_curved(const Vec3& p, const DomainSpec& spec, const ProfileParams& params);

/// Curved profile for torus radius R evaluated at raw coordinates, without
/// the domain check. Used to place the curved profile in a straight domain.
Vec3 curved_profile_unchecked(const Vec3& p, double R, const ProfileParams& params);

/// Nodal interpolant of the chosen profile; pressure is zero and boundary
/// nodes are left as evaluated. StraightFrame always evaluates the straight
/// formula on raw coordinates. CurvedFrame uses profile_R when positive,
/// otherwise spec.R (so a straight domain needs profile_R).
FieldState sample_initial_state(const Mesh& mesh, InitialProfileKind kind, const DomainSpec& spec,
                                const ProfileParams& params, double profile_R = 0.0);

} // namespace tornado
