#include "tornado/manufactured.hpp"

namespace tornado {

namespace {

// Forward-mode dual number; nest for higher derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};
  Dual() = default;
  Dual(double c) : v(c), d(0.0) {} // NOLINT(google-explicit-constructor)
  Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T> Dual<T> operator+(double c, const Dual<T>& a) { return Dual<T>(c) + a; }
template <class T> Dual<T> operator-(double c, const Dual<T>& a) { return Dual<T>(c) - a; }
template <class T> Dual<T> operator*(double c, const Dual<T>& a) { return {c * a.v, c * a.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double c) { return a - Dual<T>(c); }

template <class T>
T eval_potential(const T& x, const T& y, const T& z, double r_max, double z_mid, double half_height,
                 double amplitude) {
  const double inv_r2 = 1.0 / (r_max * r_max);
  const T s = inv_r2 * (x * x + y * y);
  const T zeta = (1.0 / half_height) * (z - z_mid);
  const T radial = 1.0 - s;
  const T axial = 1.0 - zeta * zeta;
  return amplitude * (radial * radial) * (axial * axial);
}

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

D1 seed1(double x, int dir, int i) { return {x, dir == i ? 1.0 : 0.0}; }
D2 seed2(double x, int i, int j, int m) { return {seed1(x, j, m), D1(i == m ? 1.0 : 0.0, 0.0)}; }
D3 seed3(double x, int i, int j, int k, int m) {
  return {seed2(x, j, k, m), D2(D1(i == m ? 1.0 : 0.0, 0.0), D1(0.0, 0.0))};
}

Vec3 cross_apply(const Vec3& grad, const Vec3& c) { return grad.cross(c); }

} // namespace

ManufacturedSolution::ManufacturedSolution(const DomainSpec& domain, double nu, double amplitude,
                                           const Vec3& mix, double pressure_scale)
    : domain_(domain), nu_(nu), amplitude_(amplitude), mix_(mix), pressure_scale_(pressure_scale) {
  domain_.validate();
  if (domain_.is_curved()) throw InvalidArgument("manufactured solution: straight domain required");
}

double ManufacturedSolution::potential(const Vec3& p) const {
  const double z_mid = 0.5 * (domain_.z_min() + domain_.z_max());
  return eval_potential(p.x(), p.y(), p.z(), domain_.r_max, z_mid, 2.5 * domain_.a, amplitude_);
}

Vec3 ManufacturedSolution::potential_gradient(const Vec3& p) const {
  const double z_mid = 0.5 * (domain_.z_min() + domain_.z_max());
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    const D1 w = eval_potential(seed1(p.x(), i, 0), seed1(p.y(), i, 1), seed1(p.z(), i, 2), domain_.r_max,
                                z_mid, 2.5 * domain_.a, amplitude_);
    g[i] = w.d;
  }
  return g;
}

Mat3 ManufacturedSolution::potential_hessian(const Vec3& p) const {
  const double z_mid = 0.5 * (domain_.z_min() + domain_.z_max());
  Mat3 h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const D2 w = eval_potential(seed2(p.x(), i, j, 0), seed2(p.y(), i, j, 1), seed2(p.z(), i, j, 2),
                                  domain_.r_max, z_mid, 2.5 * domain_.a, amplitude_);
      h(i, j) = w.d.d;
    }
  return h;
}

Vec3 ManufacturedSolution::potential_laplacian_gradient(const Vec3& p) const {
  const double z_mid = 0.5 * (domain_.z_min() + domain_.z_max());
  Vec3 g = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const D3 w = eval_potential(seed3(p.x(), i, j, j, 0), seed3(p.y(), i, j, j, 1),
                                  seed3(p.z(), i, j, j, 2), domain_.r_max, z_mid, 2.5 * domain_.a, amplitude_);
      g[i] += w.d.d.d;
    }
  return g;
}

Vec3 ManufacturedSolution::velocity(const Vec3& x, double t) const {
  return time_factor(t) * cross_apply(potential_gradient(x), mix_);
}

Mat3 ManufacturedSolution::velocity_gradient(const Vec3& x, double t) const {
  // v_i = (grad w x c)_i, so d_j v_i = (d_j grad w x c)_i.
  const Mat3 h = potential_hessian(x);
  Mat3 g;
  for (int j = 0; j < 3; ++j) g.col(j) = cross_apply(h.col(j), mix_);
  return time_factor(t) * g;
}

double ManufacturedSolution::pressure(const Vec3& x, double t) const {
  return time_factor(t) * pressure_scale_ * x.x() * x.z();
}

Vec3 ManufacturedSolution::forcing(const Vec3& x, double t) const {
  const Vec3 v = velocity(x, t);
  const Mat3 grad_v = velocity_gradient(x, t);
  const Vec3 dv_dt = time_factor_rate(t) * cross_apply(potential_gradient(x), mix_);
  const Vec3 lap_v = time_factor(t) * cross_apply(potential_laplacian_gradient(x), mix_);
  const Vec3 grad_p = time_factor(t) * pressure_scale_ * Vec3(x.z(), 0.0, x.x());
  return dv_dt + grad_v * v - nu_ * lap_v + grad_p;
}

} // namespace tornado
