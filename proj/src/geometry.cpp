#include "tornado/geometry.hpp"
#include "tornado/mesh_topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tornado {

DomainSpec DomainSpec::straight(double r_max, double a) {
  DomainSpec s;
  s.kind = DomainKind::Straight;
  s.r_max = r_max;
  s.a = a;
  s.validate();
  return s;
}

DomainSpec DomainSpec::curved(double R, double r_max, double a) {
  DomainSpec s;
  s.kind = DomainKind::Curved;
  s.r_max = r_max;
  s.a = a;
  s.R = R;
  s.validate();
  return s;
}

double DomainSpec::delta() const { return is_curved() ? r_max / R : 0.0; }

void DomainSpec::validate() const {
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw InvalidArgument("domain: r_max must be positive, got " + std::to_string(r_max));
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidArgument("domain: a must be positive, got " + std::to_string(a));
  if (is_curved() && !(R > r_max))
    throw InvalidArgument("domain: curved domain requires R > r_max (R=" + std::to_string(R) +
                          ", r_max=" + std::to_string(r_max) + ")");
}

std::vector<char> Mesh::boundary_mask() const {
  std::vector<char> mask(nodes.size(), 0);
  for (int n : boundary_nodes) mask[n] = 1;
  return mask;
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

double tet_volume(const Mesh& mesh, std::size_t t) {
  const auto& v = mesh.tets[t];
  return signed_volume(mesh.nodes[v[0]], mesh.nodes[v[1]], mesh.nodes[v[2]], mesh.nodes[v[3]]);
}

Vec3 tet_centroid(const Mesh& mesh, std::size_t t) {
  const auto& v = mesh.tets[t];
  return 0.25 * (mesh.nodes[v[0]] + mesh.nodes[v[1]] + mesh.nodes[v[2]] + mesh.nodes[v[3]]);
}

double mesh_volume(const Mesh& mesh) {
  double vol = 0.0;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) vol += tet_volume(mesh, t);
  return vol;
}

double max_edge_length(const Mesh& mesh) {
  double h2 = 0.0;
  for (const auto& v : mesh.tets)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        h2 = std::max(h2, (mesh.nodes[v[i]] - mesh.nodes[v[j]]).squaredNorm());
  return std::sqrt(h2);
}

int orient_tets(Mesh& mesh) {
  int flipped = 0;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    if (tet_volume(mesh, t) < 0.0) {
      std::swap(mesh.tets[t][2], mesh.tets[t][3]);
      ++flipped;
    }
  }
  return flipped;
}

void compute_boundary(Mesh& mesh) {
  const TetAdjacency adj = build_tet_adjacency(mesh);
  mesh.boundary_faces.clear();
  std::vector<char> on_boundary(mesh.nodes.size(), 0);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      if (adj.neighbor[t][f] >= 0) continue;
      BoundaryFace bf;
      for (int k = 0; k < 3; ++k) bf.nodes[k] = mesh.tets[t][kTetFaces[f][k]];
      mesh.boundary_faces.push_back(bf);
      for (int n : bf.nodes) on_boundary[n] = 1;
    }
  }
  mesh.boundary_nodes.clear();
  for (std::size_t n = 0; n < on_boundary.size(); ++n)
    if (on_boundary[n]) mesh.boundary_nodes.push_back(static_cast<int>(n));
}

namespace {

// Triangles of a disk with n_rings rings; ring k holds 6k nodes.
std::vector<std::array<int, 3>> disk_triangles(int n_rings) {
  std::vector<std::array<int, 3>> tris;
  auto ring_start = [](int k) { return k == 0 ? 0 : 1 + 3 * k * (k - 1); };
  for (int k = 1; k <= n_rings; ++k) {
    const int m_out = 6 * k;
    const int m_in = 6 * (k - 1);
    auto outer = [&](int s, int i) { return ring_start(k) + (s * k + i) % m_out; };
    auto inner = [&](int s, int i) {
      return k == 1 ? 0 : ring_start(k - 1) + (s * (k - 1) + i) % m_in;
    };
    for (int s = 0; s < 6; ++s) {
      for (int i = 0; i < k; ++i) tris.push_back({outer(s, i), outer(s, i + 1), inner(s, i)});
      for (int i = 0; i + 1 < k; ++i) tris.push_back({inner(s, i), outer(s, i + 1), inner(s, i + 1)});
    }
  }
  return tris;
}

} // namespace

Mesh build_straight_mesh(const DomainSpec& spec, int n_r, int n_z) {
  spec.validate();
  if (spec.kind != DomainKind::Straight)
    throw InvalidArgument("build_straight_mesh: domain must be straight");
  if (n_r < 2) throw InvalidArgument("build_straight_mesh: n_r must be >= 2");
  if (n_z < 2) throw InvalidArgument("build_straight_mesh: n_z must be >= 2");

  const int per_layer = 1 + 3 * n_r * (n_r + 1);
  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(per_layer) * (n_z + 1));
  const double height = spec.z_max() - spec.z_min();
  for (int j = 0; j <= n_z; ++j) {
    const double z = j == n_z ? spec.z_max() : spec.z_min() + height * j / n_z;
    mesh.nodes.emplace_back(0.0, 0.0, z);
    for (int k = 1; k <= n_r; ++k) {
      const double r = k == n_r ? spec.r_max : spec.r_max * k / n_r;
      for (int i = 0; i < 6 * k; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / (6 * k);
        mesh.nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
      }
    }
  }

  const auto tris = disk_triangles(n_r);
  mesh.tets.reserve(tris.size() * 3 * n_z);
  for (int j = 0; j < n_z; ++j) {
    const int lo = j * per_layer;
    const int hi = (j + 1) * per_layer;
    for (auto tri : tris) {
      std::sort(tri.begin(), tri.end());
      const int a = lo + tri[0], b = lo + tri[1], c = lo + tri[2];
      const int at = hi + tri[0], bt = hi + tri[1], ct = hi + tri[2];
      // Quad on edge (u<v) is cut by the diagonal bottom(u)-top(v).
      mesh.tets.push_back({a, b, c, ct});
      mesh.tets.push_back({a, b, bt, ct});
      mesh.tets.push_back({a, at, bt, ct});
    }
  }
  orient_tets(mesh);
  compute_boundary(mesh);
  mesh.h = max_edge_length(mesh);
  return mesh;
}

Vec3 torus_map(const Vec3& p, double R) {
  const double theta = p.z() / R;
  const double arm = R - p.x();
  return {R - arm * std::cos(theta), p.y(), arm * std::sin(theta)};
}

Vec3 torus_inverse(const Vec3& p, double R) {
  const double arm = std::hypot(R - p.x(), p.z());
  return {R - arm, p.y(), R * std::atan2(p.z(), R - p.x())};
}

Mesh map_to_torus(const Mesh& straight, const DomainSpec& spec) {
  spec.validate();
  if (spec.kind != DomainKind::Curved) throw InvalidArgument("map_to_torus: domain must be curved");
  Mesh mesh = straight;
  for (auto& p : mesh.nodes) p = torus_map(p, spec.R);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    if (!(tet_volume(mesh, t) > 0.0))
      throw GeometryError("map_to_torus: tet " + std::to_string(t) +
                          " has non-positive volume after mapping (mesh too coarse for R=" +
                          std::to_string(spec.R) + ")");
  }
  mesh.h = max_edge_length(mesh);
  return mesh;
}

Mesh build_domain_mesh(const DomainSpec& spec, int n_r, int n_z) {
  if (!spec.is_curved()) return build_straight_mesh(spec, n_r, n_z);
  DomainSpec flat = spec;
  flat.kind = DomainKind::Straight;
  return map_to_torus(build_straight_mesh(flat, n_r, n_z), spec);
}

Vec3 geometric_axis_point(const DomainSpec& spec, double z) {
  const double tol = 1e-12 * std::max(1.0, spec.a);
  if (z < spec.z_min() - tol || z > spec.z_max() + tol)
    throw InvalidArgument("geometric_axis_point: z=" + std::to_string(z) + " outside [-a, 4a]");
  if (!spec.is_curved()) return {0.0, 0.0, z};
  return {spec.R - spec.R * std::cos(z / spec.R), 0.0, spec.R * std::sin(z / spec.R)};
}

double distance_to_geometric_axis(const Vec3& p, const DomainSpec& spec) {
  if (!spec.is_curved()) return std::hypot(p.x(), p.y());
  const double radial = std::hypot(p.x() - spec.R, p.z()) - spec.R;
  return std::hypot(radial, p.y());
}

double axial_coordinate(const Vec3& p, const DomainSpec& spec) {
  if (!spec.is_curved()) return p.z();
  return spec.R * std::atan2(p.z(), spec.R - p.x());
}

std::vector<PlaneDescriptor> cross_section_planes(const DomainSpec& spec, int num_planes) {
  if (num_planes < 1) throw InvalidArgument("cross_section_planes: N_l must be >= 1");
  const double dz = 5.0 * spec.a / num_planes;
  std::vector<PlaneDescriptor> planes;
  planes.reserve(num_planes + 1);
  for (int l = 0; l <= num_planes; ++l) {
    PlaneDescriptor pl;
    pl.index = l;
    pl.z = l == num_planes ? spec.z_max() : spec.z_min() + l * dz;
    pl.center = geometric_axis_point(spec, pl.z);
    if (spec.is_curved())
      pl.normal = Vec3(std::sin(pl.z / spec.R), 0.0, std::cos(pl.z / spec.R));
    else
      pl.normal = Vec3::UnitZ();
    planes.push_back(pl);
  }
  return planes;
}

int plane_index_for(double z, const DomainSpec& spec, int num_planes) {
  const double dz = 5.0 * spec.a / num_planes;
  const double s = (z - spec.z_min()) / dz;
  // Midpoints within round-off (e.g. after the torus inverse) count as ties.
  const int l = static_cast<int>(std::ceil(s - 0.5 - 1e-9));
  return std::clamp(l, 0, num_planes);
}

std::vector<PlaneDescriptor> assign_plane_bins(Mesh& mesh, const DomainSpec& spec, int num_planes) {
  auto planes = cross_section_planes(spec, num_planes);
  mesh.plane_bin.resize(mesh.nodes.size());
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    mesh.plane_bin[n] = plane_index_for(axial_coordinate(mesh.nodes[n], spec), spec, num_planes);
  return planes;
}

} // namespace tornado
