#pragma once

#include "tornado/geometry.hpp"
#include "tornado/mesh_topology.hpp"

#include <span>
#include <vector>

namespace tornado {

/// Union-find with path halving and union by size.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n);
  int find(int x);
  bool unite(int a, int b);

private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

struct VortexComponent {
  int id = 0;
  std::vector<int> elements; // ascending
  double volume = 0.0;
  double max_q = 0.0;
  Vec3 centroid = Vec3::Zero(); // volume weighted
};

struct VortexStructureSet {
  double threshold = 0.0;
  std::vector<VortexComponent> components; // descending volume
  std::vector<int> element_label;          // component id per element, -1 if below threshold
};

/// Face-connected components of the elements with Q >= threshold. Ids follow
/// descending volume, ties broken by the smallest element index.
VortexStructureSet connected_vortex_structures(const Mesh& mesh, const TetAdjacency& adjacency,
                                               std::span<const double> element_q, double threshold);
VortexStructureSet connected_vortex_structures(const Mesh& mesh, std::span<const double> element_q,
                                               double threshold);

} // namespace tornado
