#pragma once

#include "tornado/types.hpp"

#include <cstdint>
#include <vector>

namespace tornado {

enum class DomainKind { Straight, Curved };

/// Cylinder {r <= r_max, -a <= z <= 4a}, optionally bent onto a torus of
/// radius R.
struct DomainSpec {
  DomainKind kind = DomainKind::Straight;
  double r_max = 1.0;
  double a = 0.125;
  double R = 0.0; // torus radius, Curved only

  static DomainSpec straight(double r_max = 1.0, double a = 0.125);
  static DomainSpec curved(double R, double r_max = 1.0, double a = 0.125);

  double z_min() const { return -a; }
  double z_max() const { return 4.0 * a; }
  /// Toroidal curvature r_max / R; zero for straight domains.
  double delta() const;
  bool is_curved() const { return kind == DomainKind::Curved; }

  /// Throws InvalidArgument naming the violated invariant.
  void validate() const;
};

enum class BoundaryMarker : std::uint8_t { Wall = 1 };

struct BoundaryFace {
  std::array<int, 3> nodes; // ordered so the normal points outward
  BoundaryMarker marker = BoundaryMarker::Wall;
};

struct Mesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> tets;
  std::vector<int> boundary_nodes; // sorted
  std::vector<BoundaryFace> boundary_faces;
  double h = 0.0; // max edge length
  std::vector<int> plane_bin;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_tets() const { return tets.size(); }

  std::vector<char> boundary_mask() const;
};

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double tet_volume(const Mesh& mesh, std::size_t t);
Vec3 tet_centroid(const Mesh& mesh, std::size_t t);
double mesh_volume(const Mesh& mesh);
double max_edge_length(const Mesh& mesh);

/// Layered structured mesh: a disk with n_r rings (6k nodes on ring k)
/// extruded through n_z layers, each prism split into 3 tets with diagonals
/// chosen from the node ordering so that shared quads agree.
Mesh build_straight_mesh(const DomainSpec& spec, int n_r, int n_z);

/// T(x,y,z) = (R - (R-x) cos(z/R), y, (R-x) sin(z/R)).
Vec3 torus_map(const Vec3& p, double R);
Vec3 torus_inverse(const Vec3& p, double R);

/// Applies torus_map to every node; throws GeometryError if a tet inverts.
Mesh map_to_torus(const Mesh& straight, const DomainSpec& spec);

/// Builds the straight mesh and maps it when the domain is curved.
Mesh build_domain_mesh(const DomainSpec& spec, int n_r, int n_z);

Vec3 geometric_axis_point(const DomainSpec& spec, double z);
double distance_to_geometric_axis(const Vec3& p, const DomainSpec& spec);

/// Axial coordinate in the straight frame (inverts the torus map for curved
/// domains).
double axial_coordinate(const Vec3& p, const DomainSpec& spec);

struct PlaneDescriptor {
  int index = 0;
  double z = 0.0;     // straight-frame axial coordinate z_l
  Vec3 center;        // axis point of the plane
  Vec3 normal;        // unit normal (axis tangent)
};

std::vector<PlaneDescriptor> cross_section_planes(const DomainSpec& spec, int num_planes);

/// Nearest plane index for an axial coordinate; exact midpoints go to the
/// lower index.
int plane_index_for(double z, const DomainSpec& spec, int num_planes);

/// Fills mesh.plane_bin and returns the plane descriptors.
std::vector<PlaneDescriptor> assign_plane_bins(Mesh& mesh, const DomainSpec& spec, int num_planes);

/// Recomputes boundary faces/nodes from face incidence.
void compute_boundary(Mesh& mesh);

/// Ensures all tets have positive volume; returns number of flipped tets.
int orient_tets(Mesh& mesh);

} // namespace tornado
