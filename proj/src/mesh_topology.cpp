#include "tornado/mesh_topology.hpp"

#include <algorithm>

namespace tornado {

TetAdjacency build_tet_adjacency(const Mesh& mesh) {
  struct FaceRef {
    std::array<int, 3> key;
    int tet;
    int face;
  };
  std::vector<FaceRef> faces;
  faces.reserve(mesh.tets.size() * 4);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key;
      for (int k = 0; k < 3; ++k) key[k] = mesh.tets[t][kTetFaces[f][k]];
      std::sort(key.begin(), key.end());
      faces.push_back({key, static_cast<int>(t), f});
    }
  }
  std::sort(faces.begin(), faces.end(), [](const FaceRef& x, const FaceRef& y) {
    return x.key != y.key ? x.key < y.key : x.tet < y.tet;
  });

  TetAdjacency adj;
  adj.neighbor.assign(mesh.tets.size(), {-1, -1, -1, -1});
  for (std::size_t i = 0; i < faces.size();) {
    std::size_t j = i;
    while (j < faces.size() && faces[j].key == faces[i].key) ++j;
    const std::size_t count = j - i;
    if (count == 1) {
      ++adj.boundary_face_count;
    } else if (count == 2) {
      adj.neighbor[faces[i].tet][faces[i].face] = faces[i + 1].tet;
      adj.neighbor[faces[i + 1].tet][faces[i + 1].face] = faces[i].tet;
    } else {
      ++adj.overshared_face_count;
    }
    i = j;
  }
  return adj;
}

NodeTetIncidence build_node_tet_incidence(const Mesh& mesh) {
  NodeTetIncidence inc;
  inc.offset.assign(mesh.nodes.size() + 1, 0);
  for (const auto& tet : mesh.tets)
    for (int v : tet) ++inc.offset[v + 1];
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) inc.offset[n + 1] += inc.offset[n];
  inc.tets.resize(inc.offset.back());
  std::vector<int> fill(inc.offset.begin(), inc.offset.end() - 1);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (int v : mesh.tets[t]) inc.tets[fill[v]++] = static_cast<int>(t);
  return inc;
}

} // namespace tornado
