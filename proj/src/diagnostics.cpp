#include "tornado/diagnostics.hpp"
#include "tornado/fem.hpp"

#include <cmath>
#include <limits>

namespace tornado {

ElementGeometry::ElementGeometry(const Mesh& mesh) {
  volume.resize(mesh.tets.size());
  centroid.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    volume[t] = tet_volume(mesh, t);
    centroid[t] = tet_centroid(mesh, t);
  }
}

MaxVelocity max_velocity(const FieldState& state, const Mesh& mesh, const DomainSpec& spec) {
  MaxVelocity out;
  double best = -1.0;
  for (std::size_t n = 0; n < state.velocity.size(); ++n) {
    const double s = state.velocity[n].squaredNorm();
    if (s > best) {
      best = s;
      out.node = static_cast<int>(n);
    }
  }
  if (out.node < 0) return out;
  out.value = std::sqrt(best);
  out.location = mesh.nodes[out.node];
  out.distance = distance_to_geometric_axis(out.location, spec);
  return out;
}

void RegionThresholds::validate() const {
  if (!(inner > 0.0 && inner < middle && middle < outer))
    throw InvalidArgument("region thresholds must satisfy 0 < inner < middle < outer");
}

Region classify_radius(double d, const RegionThresholds& th) {
  if (d <= th.inner) return Region::Inner;
  if (d <= th.middle) return Region::Middle;
  if (d <= th.outer) return Region::Outer;
  return Region::None;
}

RegionDecomposition decompose_regions(const ElementGeometry& geom, const CentralCurve& curve,
                                      const RegionThresholds& thresholds) {
  thresholds.validate();
  RegionDecomposition rd;
  rd.thresholds = thresholds;
  const std::size_t ne = geom.volume.size();
  rd.label.resize(ne);
  rd.radial_distance.resize(ne);
  rd.nearest.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const NearestPoint np = nearest_point_on_curve(curve, geom.centroid[e]);
    rd.nearest[e] = np.point;
    rd.radial_distance[e] = (geom.centroid[e] - np.point).norm();
    rd.label[e] = classify_radius(rd.radial_distance[e], thresholds);
    rd.volume[static_cast<int>(rd.label[e])] += geom.volume[e];
  }
  return rd;
}

namespace {

Vec3 element_velocity(const FieldState& state, const Mesh& mesh, std::size_t e) {
  const auto& v = mesh.tets[e];
  return 0.25 * (state.velocity[v[0]] + state.velocity[v[1]] + state.velocity[v[2]] + state.velocity[v[3]]);
}

} // namespace

EnergyReport kinetic_energy(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                            const RegionDecomposition* regions) {
  EnergyReport rep;
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const double de = 0.5 * element_velocity(state, mesh, e).squaredNorm() * geom.volume[e];
    rep.total += de;
    if (regions) rep.region[static_cast<int>(regions->label[e])] += de;
  }
  return rep;
}

AngularMomentumReport angular_momentum(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                                       const RegionDecomposition& regions) {
  AngularMomentumReport rep;
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const Vec3 r = geom.centroid[e] - regions.nearest[e];
    const Vec3 le = r.cross(element_velocity(state, mesh, e)) * geom.volume[e];
    rep.total += le;
    rep.region[static_cast<int>(regions.label[e])] += le;
  }
  for (int k = 0; k < kNumRegions; ++k) rep.region_magnitude[k] = rep.region[k].norm();
  return rep;
}

AngularMomentumReport angular_momentum(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                                       const CentralCurve& curve) {
  return angular_momentum(state, mesh, geom, decompose_regions(geom, curve));
}

PlaneMinima min_pressure_per_plane(const FieldState& state, const Mesh& mesh, std::span<const double> plane_z) {
  if (mesh.plane_bin.size() != mesh.nodes.size())
    throw InvalidArgument("min_pressure_per_plane: plane bins not assigned");
  const std::size_t np = plane_z.size();
  std::vector<int> best(np, -1);
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    const int l = mesh.plane_bin[n];
    if (l < 0 || static_cast<std::size_t>(l) >= np) continue;
    if (best[l] < 0 || state.pressure[n] < state.pressure[best[l]]) best[l] = static_cast<int>(n);
  }
  PlaneMinima out;
  for (std::size_t l = 0; l < np; ++l) {
    if (best[l] < 0) {
      ++out.skipped;
      continue;
    }
    out.minima.push_back({static_cast<int>(l), plane_z[l], best[l], mesh.nodes[best[l]], state.pressure[best[l]]});
  }
  return out;
}

double q_from_gradient(const Mat3& grad) {
  const Mat3 w = 0.5 * (grad - grad.transpose());
  const Mat3 s = 0.5 * (grad + grad.transpose());
  return 0.5 * (w.squaredNorm() - s.squaredNorm());
}

QField q_criterion(const FieldState& state, const Mesh& mesh) {
  QField q;
  q.element.resize(mesh.tets.size());
  q.node.assign(mesh.nodes.size(), 0.0);
  std::vector<double> weight(mesh.nodes.size(), 0.0);
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const P1Element el = p1_element(mesh, e);
    q.element[e] = q_from_gradient(element_velocity_gradient(mesh, el, e, state.velocity));
    for (int n : mesh.tets[e]) {
      q.node[n] += q.element[e] * el.volume;
      weight[n] += el.volume;
    }
  }
  for (std::size_t n = 0; n < q.node.size(); ++n)
    if (weight[n] > 0.0) q.node[n] /= weight[n];
  return q;
}

std::vector<double> delta_series(std::span<const double> series) {
  if (series.size() < 2) throw InvalidArgument("delta_series: need at least 2 samples");
  std::vector<double> d(series.size() - 1);
  for (std::size_t k = 1; k < series.size(); ++k) d[k - 1] = std::abs(series[k] - series[k - 1]);
  return d;
}

std::vector<double> delta_series(std::span<const Vec3> series) {
  if (series.size() < 2) throw InvalidArgument("delta_series: need at least 2 samples");
  std::vector<double> d(series.size() - 1);
  for (std::size_t k = 1; k < series.size(); ++k) d[k - 1] = (series[k] - series[k - 1]).norm();
  return d;
}

} // namespace tornado
