#include "tornado/curve.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace tornado {

Vec3 CentralCurve::operator()(double xi) const {
  Vec3 p;
  for (int i = 0; i < 3; ++i) {
    const auto& c = coeffs[i];
    p[i] = ((c[3] * xi + c[2]) * xi + c[1]) * xi + c[0];
  }
  return p;
}

Vec3 CentralCurve::derivative(double xi) const {
  Vec3 d;
  for (int i = 0; i < 3; ++i) {
    const auto& c = coeffs[i];
    d[i] = (3.0 * c[3] * xi + 2.0 * c[2]) * xi + c[1];
  }
  return d;
}

CentralCurve CentralCurve::line(const Vec3& origin, const Vec3& direction, double xi_min, double xi_max) {
  CentralCurve c;
  for (int i = 0; i < 3; ++i) c.coeffs[i] = {origin[i], direction[i], 0.0, 0.0};
  c.xi_min = xi_min;
  c.xi_max = xi_max;
  return c;
}

double curve_residual(const CentralCurve& curve, std::span<const CurveSample> samples) {
  double j = 0.0;
  for (const auto& s : samples) j += (curve(s.xi) - s.point).squaredNorm();
  return 0.5 * j;
}

CentralCurve fit_central_curve(std::span<const CurveSample> samples, double xi_min, double xi_max) {
  std::set<double> distinct;
  for (const auto& s : samples) distinct.insert(s.xi);
  if (distinct.size() < 4)
    throw InvalidArgument("fit_central_curve: rank deficient, need at least 4 distinct xi values (got " +
                          std::to_string(distinct.size()) + ")");

  const double lo = *distinct.begin();
  const double hi = *distinct.rbegin();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
  Eigen::Matrix<double, 4, 3> rhs = Eigen::Matrix<double, 4, 3>::Zero();
  for (const auto& s : samples) {
    const double u = (s.xi - mid) / half;
    const Eigen::Vector4d basis(1.0, u, u * u, u * u * u);
    normal += basis * basis.transpose();
    rhs += basis * s.point.transpose();
  }
  const Eigen::Matrix<double, 4, 3> scaled = normal.ldlt().solve(rhs);

  // Expand sum_k b_k ((xi - mid)/half)^k into monomials of xi.
  CentralCurve curve;
  curve.xi_min = xi_min;
  curve.xi_max = xi_max;
  static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 4> c{};
    for (int k = 0; k < 4; ++k) {
      const double bk = scaled(k, i) / std::pow(half, k);
      for (int j = 0; j <= k; ++j) c[j] += bk * binom[k][j] * std::pow(-mid, k - j);
    }
    curve.coeffs[i] = c;
  }
  curve.residual = curve_residual(curve, samples);
  return curve;
}

NearestPoint nearest_point_on_curve(const CentralCurve& curve, const Vec3& x) {
  const double a = curve.xi_min, b = curve.xi_max;
  auto dist2 = [&](double xi) { return (curve(xi) - x).squaredNorm(); };

  int best = 0;
  double best_d = dist2(a);
  const double step = (b - a) / (kCurveDenseSamples - 1);
  for (int k = 1; k < kCurveDenseSamples; ++k) {
    const double d = dist2(a + k * step);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }

  double lo = a + std::max(0, best - 1) * step;
  double hi = a + std::min(kCurveDenseSamples - 1, best + 1) * step;
  double xi = a + best * step;
  if (hi > lo) {
    // Stationary point of the squared distance: bisection on (c(xi) - x) . c'(xi).
    auto slope = [&](double t) { return (curve(t) - x).dot(curve.derivative(t)); };
    std::vector<double> candidates{lo, hi};
    if (slope(lo) < 0.0 && slope(hi) > 0.0) {
      double l = lo, h = hi;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (l + h);
        if (m <= l || m >= h) break;
        (slope(m) < 0.0 ? l : h) = m;
      }
      candidates.push_back(l);
      candidates.push_back(h);
    }
    for (double cand : candidates) {
      const double dc = dist2(cand);
      if (dc < best_d || (dc == best_d && cand < xi)) {
        best_d = dc;
        xi = cand;
      }
    }
  }
  return {xi, curve(xi), std::sqrt(best_d)};
}

double central_curve_speed(std::span<const TimedCurve> series, double t0, double t1) {
  std::vector<const TimedCurve*> window;
  for (const auto& s : series)
    if (s.t >= t0 - 1e-12 && s.t <= t1 + 1e-12) window.push_back(&s);
  if (window.size() < 2) throw InvalidArgument("central_curve_speed: need at least 2 samples in window");
  if (!(t1 > t0)) throw InvalidArgument("central_curve_speed: empty time window");
  std::stable_sort(window.begin(), window.end(), [](auto* x, auto* y) { return x->t < y->t; });

  double path = 0.0;
  const auto ref = [](const CentralCurve& c) { return c(0.5 * (c.xi_min + c.xi_max)); };
  Vec3 prev = ref(window.front()->curve);
  for (std::size_t k = 1; k < window.size(); ++k) {
    const Vec3 cur = ref(window[k]->curve);
    path += std::hypot(cur.x() - prev.x(), cur.y() - prev.y());
    prev = cur;
  }
  return path / (t1 - t0);
}

} // namespace tornado
