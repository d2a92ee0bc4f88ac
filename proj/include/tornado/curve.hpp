#pragma once

#include "tornado/types.hpp"

#include <span>
#include <vector>

namespace tornado {

/// Cubic space curve C(xi) = sum_j c_j xi^j (one coefficient row per
/// coordinate) over [xi_min, xi_max].
struct CentralCurve {
  std::array<std::array<double, 4>, 3> coeffs{};
  double xi_min = 0.0;
  double xi_max = 0.0;
  double residual = 0.0; // J = 1/2 sum |C(xi_l) - P_l|^2 at fit time

  Vec3 operator()(double xi) const;
  Vec3 derivative(double xi) const;

  static CentralCurve line(const Vec3& origin, const Vec3& direction, double xi_min, double xi_max);
};

struct CurveSample {
  double xi;
  Vec3 point;
};

/// Least-squares cubic through the samples, one coordinate at a time, using
/// normal equations on xi rescaled to [-1, 1]. Needs at least four distinct
/// xi values.
CentralCurve fit_central_curve(std::span<const CurveSample> samples, double xi_min, double xi_max);

/// J(c) for an arbitrary curve.
double curve_residual(const CentralCurve& curve, std::span<const CurveSample> samples);

struct NearestPoint {
  double xi;
  Vec3 point;
  double distance;
};

inline constexpr int kCurveDenseSamples = 257;

/// Dense sampling followed by golden-section refinement; ties go to the
/// smaller parameter.
NearestPoint nearest_point_on_curve(const CentralCurve& curve, const Vec3& x);

struct TimedCurve {
  double t;
  CentralCurve curve;
};

/// Mid-height reference point C(xi_mid): accumulated xy-displacement over the
/// samples in [t0, t1] divided by (t1 - t0).
double central_curve_speed(std::span<const TimedCurve> series, double t0, double t1);

} // namespace tornado
