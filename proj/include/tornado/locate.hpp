#pragma once

#include "tornado/geometry.hpp"
#include "tornado/mesh_topology.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tornado {

struct Location {
  int tet = -1;
  std::array<double, 4> bary{};
};

/// Point location on a tet mesh: a visibility walk seeded from a nearby tet,
/// backed by an exhaustive search accelerated with a uniform bucket grid.
/// Points on shared faces resolve to the lowest-index containing tet.
class TetLocator {
public:
  explicit TetLocator(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  const TetAdjacency& adjacency() const { return adjacency_; }
  const NodeTetIncidence& incidence() const { return incidence_; }

  std::array<double, 4> barycentric(int tet, const Vec3& p) const;
  bool tet_contains(int tet, const Vec3& p) const;

  /// Walk from seed_tet towards p. Fails when it leaves the mesh or stalls.
  std::optional<Location> walk(const Vec3& p, int seed_tet) const;
  /// Lowest-index tet containing p, or nothing.
  std::optional<Location> search(const Vec3& p) const;
  /// Walk from seed (or tet 0), falling back to search; ties resolved to the
  /// lowest tet index.
  std::optional<Location> locate(const Vec3& p, int seed_tet = -1) const;
  bool contains(const Vec3& p) const { return search(p).has_value(); }

  /// First tet in the ring of a node.
  int seed_for_node(int node) const;

  template <class T>
  T interpolate(const Location& loc, std::span<const T> field) const {
    const auto& v = mesh_->tets[loc.tet];
    T out = loc.bary[0] * field[v[0]];
    for (int i = 1; i < 4; ++i) out += loc.bary[i] * field[v[i]];
    return out;
  }

  static constexpr double kBaryTol = 1e-12;

private:
  const Mesh* mesh_;
  TetAdjacency adjacency_;
  NodeTetIncidence incidence_;
  std::vector<Mat3> inverse_;  // maps p - x0 to (l1, l2, l3)

  Vec3 lo_, cell_size_;
  std::array<int, 3> dims_{};
  std::vector<int> cell_offset_;
  std::vector<int> cell_tets_;

  Location resolve_ties(const Location& found, const Vec3& p) const;
};

/// P1 interpolation of a nodal field at p. Throws NotFound if p is not in the
/// mesh.
Vec3 locate_and_interpolate(const TetLocator& locator, const Vec3& p, std::span<const Vec3> field,
                            int seed_tet = -1);
double locate_and_interpolate(const TetLocator& locator, const Vec3& p, std::span<const double> field,
                              int seed_tet = -1);

struct UpstreamPoint {
  Vec3 point;
  Location location;
  bool clamped = false;
};

/// Foot of the characteristic x - v tau, starting from x located at
/// x_location. If the foot leaves the mesh it is pulled back along the segment
/// to the last boundary crossing and then kGeomEps inward.
UpstreamPoint trace_upstream(const TetLocator& locator, const Vec3& x, const Location& x_location,
                             const Vec3& v, double tau);

/// x - v(x) tau with v interpolated from the nodal field, clamped as above.
Vec3 upstream_point(const TetLocator& locator, std::span<const Vec3> velocity, const Vec3& x, double tau);

} // namespace tornado
