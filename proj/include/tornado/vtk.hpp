#pragma once

#include "tornado/geometry.hpp"
#include "tornado/state.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tornado {

/// Named data array; values are stored component-interleaved.
struct VtkArray {
  std::string name;
  int components = 1; // 1 (scalars) or 3 (vectors)
  bool integer = false;
  std::vector<double> values;
};

/// Legacy ASCII unstructured grid restricted to linear tets.
struct VtkDataset {
  std::string title;
  std::vector<Vec3> points;
  std::vector<std::array<int, 4>> tets;
  std::vector<VtkArray> point_data;
  std::vector<VtkArray> cell_data;

  const VtkArray* find_point_array(const std::string& name) const;
  const VtkArray* find_cell_array(const std::string& name) const;
};

/// Doubles are written in shortest round-trip form, so read_vtk recovers
/// them exactly.
std::string format_vtk(const VtkDataset& data);
VtkDataset parse_vtk(const std::string& text, const std::string& source = "<vtk>");

void write_vtk(const std::filesystem::path& path, const VtkDataset& data);
VtkDataset read_vtk(const std::filesystem::path& path);

VtkArray scalar_array(std::string name, const std::vector<double>& values);
VtkArray label_array(std::string name, const std::vector<int>& values);
VtkArray vector_array(std::string name, const std::vector<Vec3>& values);

/// Snapshot: mesh + velocity/pressure, with step and time in the title.
VtkDataset snapshot_dataset(const Mesh& mesh, const FieldState& state);
FieldState state_from_snapshot(const VtkDataset& data);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace tornado
