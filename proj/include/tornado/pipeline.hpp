#pragma once

#include "tornado/config.hpp"
#include "tornado/records.hpp"
#include "tornado/vtk.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace tornado {

/// Environment variable prepended to relative output directories.
inline constexpr const char* kOutputRootEnv = "TORNADO_OUTPUT_ROOT";

/// File names inside a run directory.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "config.yaml"; }
  std::filesystem::path mesh() const { return root / "mesh.vtk"; }
  std::filesystem::path diagnostics() const { return root / "diagnostics.csv"; }
  std::filesystem::path checkpoint() const { return root / "checkpoint.bin"; }
  std::filesystem::path snapshot_dir() const { return root / "snapshots"; }
  std::filesystem::path snapshot(int step) const;
  std::filesystem::path analysis_dir() const { return root / "analysis"; }
  std::filesystem::path verify_dir() const { return root / "verify"; }
};

std::filesystem::path resolve_output_dir(const RunConfig& config);
RunLayout run_layout(const RunConfig& config);

Mesh build_run_mesh(const RunConfig& config);
FieldState initial_state(const RunConfig& config, const Mesh& mesh);

/// Mesh with cell-data region markers (distance to the geometric axis) and
/// point-data boundary flags and plane bins.
VtkDataset mesh_dataset(const Mesh& mesh, const RunConfig& config);

struct MeshSummary {
  std::filesystem::path path;
  std::size_t nodes = 0;
  std::size_t tets = 0;
  double h = 0.0;
  double volume = 0.0;
};
MeshSummary cmd_mesh(const RunConfig& config);

struct RunControl {
  bool resume = false;
  int stop_after_step = -1; // simulated interruption, for testing
  std::function<void(const DiagnosticsRecord&)> progress;
};

struct RunSummary {
  std::filesystem::path directory;
  int start_step = 0;
  int final_step = 0;
  std::size_t samples = 0;
  bool resumed = false;
};

/// Snapshots, checkpoints and the diagnostics CSV. With resume set, restarts
/// from the checkpoint in the run directory when there is one.
RunSummary cmd_run(const RunConfig& config, const RunControl& control = {});

struct AnalyzeSummary {
  std::filesystem::path csv;
  std::vector<std::filesystem::path> structure_files;
  std::size_t snapshots = 0;
};

/// Recomputes diagnostics from snapshot files (all snapshots of the run when
/// the list is empty) and writes a CSV plus per-snapshot structure labels
/// (VTK) and component summaries (JSON) into the analysis directory.
AnalyzeSummary cmd_analyze(const RunConfig& config, std::vector<std::filesystem::path> snapshots);

/// Snapshot files of a run, ordered by step.
std::vector<std::filesystem::path> list_snapshots(const RunLayout& layout);

} // namespace tornado
