#pragma once

#include "tornado/config.hpp"
#include "tornado/diagnostics.hpp"
#include "tornado/mesh_topology.hpp"
#include "tornado/vortex.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tornado {

/// One diagnostics sample (one CSV row).
struct DiagnosticsRecord {
  int step = 0;
  double time = 0.0;
  MaxVelocity vmax;
  EnergyReport energy;
  AngularMomentumReport momentum;
  double delta_energy = 0.0;   // |E_k - E_prev|, 0 for the first sample
  double delta_momentum = 0.0; // |L_k - L_prev|
  CentralCurve curve;
  int curve_points = 0;
  int skipped_planes = 0;
  std::vector<int> structure_count;     // per Q threshold
  std::vector<double> structure_volume; // largest component volume per threshold
};

/// Full diagnostics of one state, including the intermediate fields.
struct DiagnosticsResult {
  DiagnosticsRecord record;
  QField q;
  RegionDecomposition regions;
  std::vector<VortexStructureSet> structures;
};

class DiagnosticsEngine {
public:
  /// The mesh must outlive the engine and have plane bins for
  /// analysis.num_planes (assigned here when missing).
  DiagnosticsEngine(Mesh& mesh, const DomainSpec& spec, AnalysisConfig analysis);

  DiagnosticsResult evaluate(const FieldState& state, const DiagnosticsRecord* previous) const;
  DiagnosticsRecord record(const FieldState& state, const DiagnosticsRecord* previous) const {
    return evaluate(state, previous).record;
  }

  const AnalysisConfig& analysis() const { return analysis_; }
  const ElementGeometry& geometry() const { return geom_; }
  const TetAdjacency& adjacency() const { return adjacency_; }

private:
  const Mesh* mesh_;
  DomainSpec spec_;
  AnalysisConfig analysis_;
  std::vector<double> plane_z_;
  ElementGeometry geom_;
  TetAdjacency adjacency_;
};

std::vector<std::string> csv_columns(const std::vector<double>& q_thresholds);
std::string csv_header(const std::vector<double>& q_thresholds);
std::string csv_row(const DiagnosticsRecord& record);
std::string format_csv(const std::vector<DiagnosticsRecord>& records, const std::vector<double>& q_thresholds);

/// Parses a CSV written by format_csv; thresholds are recovered from the
/// structure columns.
struct DiagnosticsTable {
  std::vector<double> q_thresholds;
  std::vector<DiagnosticsRecord> records;
};
DiagnosticsTable parse_csv(const std::string& text, const std::string& source = "<csv>");
DiagnosticsTable read_csv(const std::filesystem::path& path);

} // namespace tornado
