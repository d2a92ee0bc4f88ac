#include "tornado/locate.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace tornado {

TetLocator::TetLocator(const Mesh& mesh)
    : mesh_(&mesh), adjacency_(build_tet_adjacency(mesh)), incidence_(build_node_tet_incidence(mesh)) {
  const std::size_t nt = mesh.tets.size();
  inverse_.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = mesh.tets[t];
    const Vec3& x0 = mesh.nodes[v[0]];
    Mat3 edges;
    edges.col(0) = mesh.nodes[v[1]] - x0;
    edges.col(1) = mesh.nodes[v[2]] - x0;
    edges.col(2) = mesh.nodes[v[3]] - x0;
    inverse_[t] = edges.inverse();
  }

  lo_ = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const auto& p : mesh.nodes) {
    lo_ = lo_.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 pad = Vec3::Constant(1e-9 * std::max(1.0, (hi - lo_).maxCoeff()));
  lo_ -= pad;
  hi += pad;
  const Vec3 extent = hi - lo_;
  const double target_cells = std::max(1.0, static_cast<double>(nt) / 4.0);
  const double cell = std::cbrt(extent.prod() / target_cells);
  for (int k = 0; k < 3; ++k) {
    dims_[k] = std::clamp(static_cast<int>(std::ceil(extent[k] / cell)), 1, 512);
    cell_size_[k] = extent[k] / dims_[k];
  }

  auto cell_range = [&](std::size_t t, std::array<int, 3>& c0, std::array<int, 3>& c1) {
    Vec3 tlo = mesh.nodes[mesh.tets[t][0]], thi = tlo;
    for (int i = 1; i < 4; ++i) {
      tlo = tlo.cwiseMin(mesh.nodes[mesh.tets[t][i]]);
      thi = thi.cwiseMax(mesh.nodes[mesh.tets[t][i]]);
    }
    for (int k = 0; k < 3; ++k) {
      c0[k] = std::clamp(static_cast<int>(std::floor((tlo[k] - lo_[k]) / cell_size_[k])), 0, dims_[k] - 1);
      c1[k] = std::clamp(static_cast<int>(std::floor((thi[k] - lo_[k]) / cell_size_[k])), 0, dims_[k] - 1);
    }
  };
  const std::size_t ncell = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  cell_offset_.assign(ncell + 1, 0);
  auto cell_id = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i; };
  std::array<int, 3> c0, c1;
  for (std::size_t t = 0; t < nt; ++t) {
    cell_range(t, c0, c1);
    for (int k = c0[2]; k <= c1[2]; ++k)
      for (int j = c0[1]; j <= c1[1]; ++j)
        for (int i = c0[0]; i <= c1[0]; ++i) ++cell_offset_[cell_id(i, j, k) + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) cell_offset_[c + 1] += cell_offset_[c];
  cell_tets_.resize(cell_offset_.back());
  std::vector<int> fill(cell_offset_.begin(), cell_offset_.end() - 1);
  for (std::size_t t = 0; t < nt; ++t) {
    cell_range(t, c0, c1);
    for (int k = c0[2]; k <= c1[2]; ++k)
      for (int j = c0[1]; j <= c1[1]; ++j)
        for (int i = c0[0]; i <= c1[0]; ++i) cell_tets_[fill[cell_id(i, j, k)]++] = static_cast<int>(t);
  }
}

std::array<double, 4> TetLocator::barycentric(int tet, const Vec3& p) const {
  const Vec3 l = inverse_[tet] * (p - mesh_->nodes[mesh_->tets[tet][0]]);
  return {1.0 - l.sum(), l[0], l[1], l[2]};
}

bool TetLocator::tet_contains(int tet, const Vec3& p) const {
  const auto b = barycentric(tet, p);
  return *std::min_element(b.begin(), b.end()) >= -kBaryTol;
}

std::optional<Location> TetLocator::walk(const Vec3& p, int seed_tet) const {
  const int nt = static_cast<int>(mesh_->tets.size());
  if (nt == 0) return std::nullopt;
  int tet = (seed_tet >= 0 && seed_tet < nt) ? seed_tet : 0;
  int previous = -1;
  const int max_steps = 64 + 4 * static_cast<int>(std::cbrt(static_cast<double>(nt)));
  for (int step = 0; step < max_steps; ++step) {
    const auto b = barycentric(tet, p);
    int worst = 0;
    for (int i = 1; i < 4; ++i)
      if (b[i] < b[worst]) worst = i;
    if (b[worst] >= -kBaryTol) return Location{tet, b};
    int next = adjacency_.neighbor[tet][worst];
    if (next == previous) {
      // Avoid bouncing straight back; try the second most negative face.
      int alt = -1;
      for (int i = 0; i < 4; ++i)
        if (i != worst && b[i] < -kBaryTol && (alt < 0 || b[i] < b[alt])) alt = i;
      if (alt >= 0) next = adjacency_.neighbor[tet][alt];
    }
    if (next < 0) return std::nullopt;
    previous = tet;
    tet = next;
  }
  return std::nullopt;
}

std::optional<Location> TetLocator::search(const Vec3& p) const {
  std::array<int, 3> c;
  for (int k = 0; k < 3; ++k) {
    const double s = (p[k] - lo_[k]) / cell_size_[k];
    if (!(s >= 0.0) || s > dims_[k]) return std::nullopt;
    c[k] = std::min(static_cast<int>(s), dims_[k] - 1);
  }
  const std::size_t id = (static_cast<std::size_t>(c[2]) * dims_[1] + c[1]) * dims_[0] + c[0];
  std::optional<Location> best;
  for (int i = cell_offset_[id]; i < cell_offset_[id + 1]; ++i) {
    const int t = cell_tets_[i];
    if (best && t >= best->tet) continue;
    const auto b = barycentric(t, p);
    if (*std::min_element(b.begin(), b.end()) >= -kBaryTol) best = Location{t, b};
  }
  return best;
}

Location TetLocator::resolve_ties(const Location& found, const Vec3& p) const {
  if (*std::min_element(found.bary.begin(), found.bary.end()) > kBaryTol) return found;
  auto lowest = search(p);
  return lowest && lowest->tet < found.tet ? *lowest : found;
}

std::optional<Location> TetLocator::locate(const Vec3& p, int seed_tet) const {
  if (auto hit = walk(p, seed_tet)) return resolve_ties(*hit, p);
  return search(p);
}

int TetLocator::seed_for_node(int node) const {
  const auto ring = incidence_.of(node);
  return ring.empty() ? 0 : ring.front();
}

Vec3 locate_and_interpolate(const TetLocator& locator, const Vec3& p, std::span<const Vec3> field,
                            int seed_tet) {
  const auto loc = locator.locate(p, seed_tet);
  if (!loc) throw NotFound("locate_and_interpolate: point outside mesh");
  return locator.interpolate(*loc, field);
}

double locate_and_interpolate(const TetLocator& locator, const Vec3& p, std::span<const double> field,
                              int seed_tet) {
  const auto loc = locator.locate(p, seed_tet);
  if (!loc) throw NotFound("locate_and_interpolate: point outside mesh");
  return locator.interpolate(*loc, field);
}

UpstreamPoint trace_upstream(const TetLocator& locator, const Vec3& x, const Location& x_location,
                             const Vec3& v, double tau) {
  const Vec3 d = -tau * v;
  const Vec3 target = x + d;
  if (d.squaredNorm() == 0.0) return {x, x_location, false};
  if (auto hit = locator.locate(target, x_location.tet)) return {target, *hit, false};

  // Bisect for the last inside point along x -> target.
  double t_in = 0.0, t_out = 1.0;
  Location loc_in = x_location;
  const double len = d.norm();
  for (int it = 0; it < 80 && (t_out - t_in) * len > 1e-15; ++it) {
    const double mid = 0.5 * (t_in + t_out);
    if (auto hit = locator.locate(x + mid * d, loc_in.tet)) {
      t_in = mid;
      loc_in = *hit;
    } else {
      t_out = mid;
    }
  }
  const double t_back = std::max(0.0, t_in - kGeomEps / len);
  const Vec3 pulled = x + t_back * d;
  if (auto hit = locator.locate(pulled, loc_in.tet)) return {pulled, *hit, true};
  return {x + t_in * d, loc_in, true};
}

Vec3 upstream_point(const TetLocator& locator, std::span<const Vec3> velocity, const Vec3& x, double tau) {
  const auto loc = locator.locate(x);
  if (!loc) throw NotFound("upstream_point: start point outside mesh");
  const Vec3 v = locator.interpolate(*loc, velocity);
  return trace_upstream(locator, x, *loc, v, tau).point;
}

} // namespace tornado
