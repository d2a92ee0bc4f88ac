#pragma once

#include "tornado/geometry.hpp"

#include <span>
#include <vector>

namespace tornado {

/// Local face f of a tet is the face opposite local vertex f.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces{{
    {1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

struct TetAdjacency {
  /// neighbor[t][f]: tet across local face f, or -1 on the boundary.
  std::vector<std::array<int, 4>> neighbor;
  /// Number of faces seen by exactly one tet.
  std::size_t boundary_face_count = 0;
  /// Faces shared by more than two tets (non-manifold); zero for valid meshes.
  std::size_t overshared_face_count = 0;
};

TetAdjacency build_tet_adjacency(const Mesh& mesh);

/// CSR node -> incident tets.
struct NodeTetIncidence {
  std::vector<int> offset;
  std::vector<int> tets;

  std::span<const int> of(int node) const {
    return {tets.data() + offset[node], tets.data() + offset[node + 1]};
  }
};

NodeTetIncidence build_node_tet_incidence(const Mesh& mesh);

} // namespace tornado
