#include "tornado/fem.hpp"

#include <Eigen/LU>

namespace tornado {

P1Element p1_element(const Mesh& mesh, std::size_t t) {
  const auto& v = mesh.tets[t];
  const Vec3& x0 = mesh.nodes[v[0]];
  Mat3 edges;
  edges.col(0) = mesh.nodes[v[1]] - x0;
  edges.col(1) = mesh.nodes[v[2]] - x0;
  edges.col(2) = mesh.nodes[v[3]] - x0;
  const Mat3 inv = edges.inverse();
  P1Element el;
  el.volume = edges.determinant() / 6.0;
  el.grad[1] = inv.row(0).transpose();
  el.grad[2] = inv.row(1).transpose();
  el.grad[3] = inv.row(2).transpose();
  el.grad[0] = -(el.grad[1] + el.grad[2] + el.grad[3]);
  return el;
}

std::vector<P1Element> p1_elements(const Mesh& mesh) {
  std::vector<P1Element> out;
  out.reserve(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) out.push_back(p1_element(mesh, t));
  return out;
}

SparseMatrix scalar_mass_matrix(const Mesh& mesh) {
  std::vector<Triplet> trip;
  trip.reserve(mesh.tets.size() * 16);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const double vol = tet_volume(mesh, t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        trip.emplace_back(mesh.tets[t][i], mesh.tets[t][j], vol / 20.0 * (i == j ? 2.0 : 1.0));
  }
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix scalar_stiffness_matrix(const Mesh& mesh) {
  std::vector<Triplet> trip;
  trip.reserve(mesh.tets.size() * 16);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const P1Element el = p1_element(mesh, t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        trip.emplace_back(mesh.tets[t][i], mesh.tets[t][j], el.volume * el.grad[i].dot(el.grad[j]));
  }
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  SparseMatrix k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

Mat3 element_velocity_gradient(const Mesh& mesh, const P1Element& el, std::size_t t,
                               const std::vector<Vec3>& velocity) {
  Mat3 g = Mat3::Zero();
  for (int i = 0; i < 4; ++i) g += velocity[mesh.tets[t][i]] * el.grad[i].transpose();
  return g;
}

} // namespace tornado
