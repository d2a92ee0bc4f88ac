#include "tornado/vortex.hpp"

#include <algorithm>
#include <numeric>

namespace tornado {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSets::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

VortexStructureSet connected_vortex_structures(const Mesh& mesh, const TetAdjacency& adjacency,
                                               std::span<const double> element_q, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("connected_vortex_structures: threshold must be positive");
  const std::size_t ne = mesh.tets.size();
  if (element_q.size() != ne) throw InvalidArgument("connected_vortex_structures: Q field size mismatch");

  DisjointSets sets(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    if (!(element_q[e] >= threshold)) continue;
    for (int nb : adjacency.neighbor[e])
      if (nb >= 0 && element_q[nb] >= threshold) sets.unite(static_cast<int>(e), nb);
  }

  // Group by root in ascending element order; the first element seen is the
  // component's smallest index.
  std::vector<int> slot(ne, -1);
  std::vector<VortexComponent> comps;
  for (std::size_t e = 0; e < ne; ++e) {
    if (!(element_q[e] >= threshold)) continue;
    const int root = sets.find(static_cast<int>(e));
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(comps.size());
      comps.emplace_back();
      comps.back().max_q = element_q[e];
    }
    VortexComponent& c = comps[slot[root]];
    const double vol = tet_volume(mesh, e);
    c.elements.push_back(static_cast<int>(e));
    c.volume += vol;
    c.max_q = std::max(c.max_q, element_q[e]);
    c.centroid += vol * tet_centroid(mesh, e);
  }
  for (auto& c : comps)
    if (c.volume > 0.0) c.centroid /= c.volume;

  std::stable_sort(comps.begin(), comps.end(), [](const VortexComponent& a, const VortexComponent& b) {
    if (a.volume != b.volume) return a.volume > b.volume;
    return a.elements.front() < b.elements.front();
  });

  VortexStructureSet out;
  out.threshold = threshold;
  out.element_label.assign(ne, -1);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    comps[k].id = static_cast<int>(k);
    for (int e : comps[k].elements) out.element_label[e] = static_cast<int>(k);
  }
  out.components = std::move(comps);
  return out;
}

VortexStructureSet connected_vortex_structures(const Mesh& mesh, std::span<const double> element_q,
                                               double threshold) {
  return connected_vortex_structures(mesh, build_tet_adjacency(mesh), element_q, threshold);
}

} // namespace tornado
