#pragma once

#include "tornado/curve.hpp"
#include "tornado/geometry.hpp"
#include "tornado/state.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tornado {

struct ElementGeometry {
  std::vector<double> volume;
  std::vector<Vec3> centroid;

  explicit ElementGeometry(const Mesh& mesh);
};

struct MaxVelocity {
  double value = 0.0;
  int node = -1;
  Vec3 location = Vec3::Zero();
  double distance = 0.0; // to the geometric axis
};

/// Largest nodal speed; ties go to the lowest node index.
MaxVelocity max_velocity(const FieldState& state, const Mesh& mesh, const DomainSpec& spec);

enum class Region : std::uint8_t { Inner = 0, Middle = 1, Outer = 2, None = 3 };
inline constexpr int kNumRegions = 4;

struct RegionThresholds {
  double inner = 0.15;
  double middle = 0.4;
  double outer = 0.7;

  void validate() const;
};

Region classify_radius(double distance, const RegionThresholds& thresholds);

/// Per-element shells around the central curve, keyed by the distance from
/// the element centroid to the nearest curve point.
struct RegionDecomposition {
  RegionThresholds thresholds;
  std::vector<Region> label;
  std::vector<double> radial_distance;
  std::vector<Vec3> nearest; // C_e
  std::array<double, kNumRegions> volume{};
};

RegionDecomposition decompose_regions(const ElementGeometry& geom, const CentralCurve& curve,
                                      const RegionThresholds& thresholds = {});

struct EnergyReport {
  double total = 0.0;
  std::array<double, kNumRegions> region{};
};

/// E = 1/2 sum_e |v_e|^2 V_e with v_e the mean of the nodal velocities.
EnergyReport kinetic_energy(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                            const RegionDecomposition* regions = nullptr);

struct AngularMomentumReport {
  Vec3 total = Vec3::Zero();
  std::array<Vec3, kNumRegions> region{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<double, kNumRegions> region_magnitude{};
};

/// L = sum_e (x_e - C_e) x v_e V_e.
AngularMomentumReport angular_momentum(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                                       const RegionDecomposition& regions);
AngularMomentumReport angular_momentum(const FieldState& state, const Mesh& mesh, const ElementGeometry& geom,
                                       const CentralCurve& curve);

struct PlaneMinimum {
  int plane = 0;
  double xi = 0.0;
  int node = -1;
  Vec3 point = Vec3::Zero();
  double pressure = 0.0;
};

struct PlaneMinima {
  std::vector<PlaneMinimum> minima;
  int skipped = 0; // planes without nodes
};

/// Minimum-pressure node of every nonempty plane bin (lowest node index on
/// ties). plane_z[l] is the axial coordinate of plane l.
PlaneMinima min_pressure_per_plane(const FieldState& state, const Mesh& mesh, std::span<const double> plane_z);

/// Q = 1/2 (|W|^2 - |S|^2) for a velocity gradient.
double q_from_gradient(const Mat3& grad);

struct QField {
  std::vector<double> element;
  std::vector<double> node; // volume-weighted average of incident elements
};

QField q_criterion(const FieldState& state, const Mesh& mesh);

std::vector<double> delta_series(std::span<const double> series);
std::vector<double> delta_series(std::span<const Vec3> series);

} // namespace tornado
