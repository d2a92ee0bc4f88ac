#pragma once

#include "tornado/geometry.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace tornado {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Volume and constant gradients of the four P1 shape functions of a tet.
struct P1Element {
  double volume = 0.0;
  std::array<Vec3, 4> grad;
};

P1Element p1_element(const Mesh& mesh, std::size_t t);
std::vector<P1Element> p1_elements(const Mesh& mesh);

struct QuadraturePoint {
  std::array<double, 4> bary;
  double weight; // fraction of the tet volume
};

/// Degree-2 four-point rule.
inline constexpr double kQuadA = 0.5854101966249685;
inline constexpr double kQuadB = 0.1381966011250105;
inline constexpr std::array<QuadraturePoint, 4> kTetQuadrature{{
    {{kQuadA, kQuadB, kQuadB, kQuadB}, 0.25},
    {{kQuadB, kQuadA, kQuadB, kQuadB}, 0.25},
    {{kQuadB, kQuadB, kQuadA, kQuadB}, 0.25},
    {{kQuadB, kQuadB, kQuadB, kQuadA}, 0.25},
}};

/// Consistent P1 mass matrix (scalar).
SparseMatrix scalar_mass_matrix(const Mesh& mesh);
/// P1 stiffness matrix (scalar Laplacian).
SparseMatrix scalar_stiffness_matrix(const Mesh& mesh);

/// Element-constant gradient of a nodal vector field: G(i,j) = d v_i / d x_j.
Mat3 element_velocity_gradient(const Mesh& mesh, const P1Element& el, std::size_t t,
                               const std::vector<Vec3>& velocity);

} // namespace tornado
