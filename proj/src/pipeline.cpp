#include "tornado/pipeline.hpp"

#include "tornado/checkpoint.hpp"
#include "tornado/vtk.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>

namespace fs = std::filesystem;

namespace tornado {

fs::path RunLayout::snapshot(int step) const { return snapshot_dir() / fmt::format("snapshot_{:06d}.vtk", step); }

fs::path resolve_output_dir(const RunConfig& config) {
  fs::path dir(config.output.directory);
  if (dir.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) dir = fs::path(root) / dir;
  }
  return dir;
}

RunLayout run_layout(const RunConfig& config) { return RunLayout{resolve_output_dir(config)}; }

Mesh build_run_mesh(const RunConfig& config) {
  return build_domain_mesh(config.domain, config.mesh.n_r, config.mesh.n_z);
}

FieldState initial_state(const RunConfig& config, const Mesh& mesh) {
  return sample_initial_state(mesh, config.profile.kind, config.domain, config.profile.params,
                              config.profile.profile_R);
}

VtkDataset mesh_dataset(const Mesh& mesh, const RunConfig& config) {
  VtkDataset d;
  d.title = fmt::format("tornado mesh n_r={} n_z={}", config.mesh.n_r, config.mesh.n_z);
  d.points = mesh.nodes;
  d.tets = mesh.tets;
  std::vector<int> region(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const double dist = distance_to_geometric_axis(tet_centroid(mesh, t), config.domain);
    region[t] = static_cast<int>(classify_radius(dist, config.analysis.regions));
  }
  d.cell_data.push_back(label_array("region", region));
  const auto mask = mesh.boundary_mask();
  d.point_data.push_back(label_array("boundary", std::vector<int>(mask.begin(), mask.end())));
  std::vector<int> bins(mesh.nodes.size());
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
    bins[n] = plane_index_for(axial_coordinate(mesh.nodes[n], config.domain), config.domain,
                              config.analysis.num_planes);
  d.point_data.push_back(label_array("plane", bins));
  return d;
}

MeshSummary cmd_mesh(const RunConfig& config) {
  const Mesh mesh = build_run_mesh(config);
  const RunLayout layout = run_layout(config);
  write_vtk(layout.mesh(), mesh_dataset(mesh, config));
  return {layout.mesh(), mesh.nodes.size(), mesh.tets.size(), mesh.h, mesh_volume(mesh)};
}

namespace {

VtkDataset run_snapshot(const Mesh& mesh, const FieldState& state) {
  VtkDataset d = snapshot_dataset(mesh, state);
  const QField q = q_criterion(state, mesh);
  d.point_data.push_back(scalar_array("Q", q.node));
  d.cell_data.push_back(scalar_array("Q", q.element));
  return d;
}

void check_node_count(std::size_t got, const Mesh& mesh, const fs::path& source) {
  if (got != mesh.nodes.size())
    throw IoError(fmt::format("{}: has {} nodes but the configured mesh has {}", source.string(), got,
                              mesh.nodes.size()));
}

} // namespace

RunSummary cmd_run(const RunConfig& config, const RunControl& control) {
  config.validate();
  Mesh mesh = build_run_mesh(config);
  DiagnosticsEngine engine(mesh, config.domain, config.analysis);
  const RunLayout layout = run_layout(config);
  fs::create_directories(layout.snapshot_dir());
  write_file_atomic(layout.config(), serialize_config(config));

  const int n_steps = config.solver.num_steps();
  const int diag_every = config.diagnostics_every_steps();
  const int snap_every = config.snapshot_every_steps();
  const int ckpt_every = config.checkpoint_every_steps();

  RunSummary summary;
  summary.directory = layout.root;
  std::vector<DiagnosticsRecord> records;
  FieldState state;
  if (control.resume && fs::exists(layout.checkpoint())) {
    state = read_checkpoint(layout.checkpoint());
    check_node_count(state.velocity.size(), mesh, layout.checkpoint());
    if (fs::exists(layout.diagnostics())) {
      DiagnosticsTable table = read_csv(layout.diagnostics());
      if (table.q_thresholds != config.analysis.q_thresholds)
        throw IoError(layout.diagnostics().string() + ": Q thresholds differ from the configuration");
      for (auto& r : table.records)
        if (r.step <= state.step) records.push_back(std::move(r));
    }
    summary.resumed = true;
  } else {
    state = initial_state(config, mesh);
    write_vtk(layout.mesh(), mesh_dataset(mesh, config));
  }
  summary.start_step = state.step;

  auto process = [&](const FieldState& s) {
    if (s.step % diag_every == 0) {
      const DiagnosticsRecord* prev = records.empty() ? nullptr : &records.back();
      records.push_back(engine.record(s, prev));
      write_file_atomic(layout.diagnostics(), format_csv(records, config.analysis.q_thresholds));
      if (control.progress) control.progress(records.back());
    }
    if (s.step % snap_every == 0) write_vtk(layout.snapshot(s.step), run_snapshot(mesh, s));
    if (s.step % ckpt_every == 0 || s.step == n_steps) write_checkpoint(layout.checkpoint(), s);
  };

  if (!summary.resumed) process(state);
  if (state.step < n_steps) {
    LagrangeGalerkinSolver solver(mesh, config.solver);
    while (state.step < n_steps) {
      if (control.stop_after_step >= 0 && state.step >= control.stop_after_step) break;
      state = solver.step(state);
      process(state);
    }
  }
  summary.final_step = state.step;
  summary.samples = records.size();
  return summary;
}

std::vector<fs::path> list_snapshots(const RunLayout& layout) {
  std::vector<fs::path> out;
  if (!fs::exists(layout.snapshot_dir())) return out;
  for (const auto& entry : fs::directory_iterator(layout.snapshot_dir())) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".vtk")
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

AnalyzeSummary cmd_analyze(const RunConfig& config, std::vector<fs::path> snapshots) {
  config.validate();
  Mesh mesh = build_run_mesh(config);
  DiagnosticsEngine engine(mesh, config.domain, config.analysis);
  const RunLayout layout = run_layout(config);
  if (snapshots.empty()) snapshots = list_snapshots(layout);
  if (snapshots.empty()) throw IoError("analyze: no snapshots found in '" + layout.snapshot_dir().string() + "'");

  std::vector<FieldState> states;
  states.reserve(snapshots.size());
  for (const auto& path : snapshots) {
    const VtkDataset d = read_vtk(path);
    check_node_count(d.points.size(), mesh, path);
    if (d.tets.size() != mesh.tets.size())
      throw IoError(fmt::format("{}: element count does not match the configured mesh", path.string()));
    states.push_back(state_from_snapshot(d));
  }
  std::stable_sort(states.begin(), states.end(), [](const auto& a, const auto& b) { return a.step < b.step; });

  AnalyzeSummary summary;
  fs::create_directories(layout.analysis_dir());
  std::vector<DiagnosticsRecord> records;
  for (const auto& s : states) {
    const DiagnosticsRecord* prev = records.empty() ? nullptr : &records.back();
    DiagnosticsResult res = engine.evaluate(s, prev);
    records.push_back(res.record);

    VtkDataset d;
    d.title = fmt::format("tornado structures step={} time={}", s.step, s.time);
    d.points = mesh.nodes;
    d.tets = mesh.tets;
    d.cell_data.push_back(scalar_array("Q", res.q.element));
    std::vector<int> region(res.regions.label.size());
    std::transform(res.regions.label.begin(), res.regions.label.end(), region.begin(),
                   [](Region r) { return static_cast<int>(r); });
    d.cell_data.push_back(label_array("region", region));

    nlohmann::ordered_json summary_json;
    summary_json["step"] = s.step;
    summary_json["time"] = s.time;
    summary_json["structures"] = nlohmann::ordered_json::array();
    for (const auto& set : res.structures) {
      d.cell_data.push_back(label_array(fmt::format("structure_q{}", set.threshold), set.element_label));
      nlohmann::ordered_json js;
      js["threshold"] = set.threshold;
      js["count"] = set.components.size();
      js["components"] = nlohmann::ordered_json::array();
      for (const auto& c : set.components) {
        js["components"].push_back({{"id", c.id},
                                    {"elements", c.elements.size()},
                                    {"volume", c.volume},
                                    {"max_q", c.max_q},
                                    {"centroid", {c.centroid.x(), c.centroid.y(), c.centroid.z()}}});
      }
      summary_json["structures"].push_back(std::move(js));
    }
    const auto vtk_path = layout.analysis_dir() / fmt::format("structures_{:06d}.vtk", s.step);
    const auto json_path = layout.analysis_dir() / fmt::format("structures_{:06d}.json", s.step);
    write_vtk(vtk_path, d);
    write_file_atomic(json_path, summary_json.dump(2) + "\n");
    summary.structure_files.push_back(vtk_path);
    summary.structure_files.push_back(json_path);
  }
  summary.csv = layout.analysis_dir() / "diagnostics.csv";
  write_file_atomic(summary.csv, format_csv(records, config.analysis.q_thresholds));
  summary.snapshots = states.size();
  return summary;
}

} // namespace tornado
