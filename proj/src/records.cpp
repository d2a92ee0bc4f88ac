#include "tornado/records.hpp"

#include "tornado/vtk.hpp"

#include <fmt/format.h>

#include <charconv>
#include <map>
#include <sstream>

namespace tornado {

DiagnosticsEngine::DiagnosticsEngine(Mesh& mesh, const DomainSpec& spec, AnalysisConfig analysis)
    : mesh_(&mesh), spec_(spec), analysis_(std::move(analysis)), geom_(mesh), adjacency_(build_tet_adjacency(mesh)) {
  analysis_.regions.validate();
  const auto planes = assign_plane_bins(mesh, spec_, analysis_.num_planes);
  plane_z_.reserve(planes.size());
  for (const auto& p : planes) plane_z_.push_back(p.z);
}

DiagnosticsResult DiagnosticsEngine::evaluate(const FieldState& state, const DiagnosticsRecord* previous) const {
  const Mesh& mesh = *mesh_;
  if (state.velocity.size() != mesh.nodes.size() || state.pressure.size() != mesh.nodes.size())
    throw InvalidArgument("diagnostics: state does not match the mesh node count");

  DiagnosticsResult out;
  DiagnosticsRecord& r = out.record;
  r.step = state.step;
  r.time = state.time;
  r.vmax = max_velocity(state, mesh, spec_);

  const PlaneMinima minima = min_pressure_per_plane(state, mesh, plane_z_);
  std::vector<CurveSample> samples;
  samples.reserve(minima.minima.size());
  for (const auto& m : minima.minima) samples.push_back({m.xi, m.point});
  r.curve = fit_central_curve(samples, spec_.z_min(), spec_.z_max());
  r.curve_points = static_cast<int>(samples.size());
  r.skipped_planes = minima.skipped;

  out.regions = decompose_regions(geom_, r.curve, analysis_.regions);
  r.energy = kinetic_energy(state, mesh, geom_, &out.regions);
  r.momentum = angular_momentum(state, mesh, geom_, out.regions);
  if (previous) {
    r.delta_energy = std::abs(r.energy.total - previous->energy.total);
    r.delta_momentum = (r.momentum.total - previous->momentum.total).norm();
  }

  out.q = q_criterion(state, mesh);
  for (double threshold : analysis_.q_thresholds) {
    auto set = connected_vortex_structures(mesh, adjacency_, out.q.element, threshold);
    r.structure_count.push_back(static_cast<int>(set.components.size()));
    r.structure_volume.push_back(set.components.empty() ? 0.0 : set.components.front().volume);
    out.structures.push_back(std::move(set));
  }
  return out;
}

namespace {

constexpr const char* kRegionNames[kNumRegions] = {"inner", "middle", "outer", "none"};
constexpr const char* kAxes = "xyz";

std::string threshold_tag(double q) { return fmt::format("{}", q); }

} // namespace

std::vector<std::string> csv_columns(const std::vector<double>& q_thresholds) {
  std::vector<std::string> c{"step", "t", "v_max", "d_v_max", "v_max_node", "v_max_x", "v_max_y", "v_max_z", "E_total"};
  for (auto name : kRegionNames) c.push_back(fmt::format("E_{}", name));
  for (int i = 0; i < 3; ++i) c.push_back(fmt::format("L_{}", kAxes[i]));
  c.push_back("L_norm");
  for (auto name : kRegionNames) c.push_back(fmt::format("L_{}", name));
  for (auto name : kRegionNames)
    for (int i = 0; i < 3; ++i) c.push_back(fmt::format("L_{}_{}", name, kAxes[i]));
  c.insert(c.end(), {"dE", "dL", "curve_points", "skipped_planes", "curve_J", "xi_min", "xi_max"});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) c.push_back(fmt::format("c{}_{}", kAxes[i], j));
  for (double q : q_thresholds) c.push_back("n_struct_q" + threshold_tag(q));
  for (double q : q_thresholds) c.push_back("V_struct_q" + threshold_tag(q));
  return c;
}

std::string csv_header(const std::vector<double>& q_thresholds) {
  const auto cols = csv_columns(q_thresholds);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::vector<std::string> f;
  auto num = [&f](double v) { f.push_back(fmt::format("{}", v)); };
  auto integer = [&f](long long v) { f.push_back(fmt::format("{}", v)); };
  integer(r.step);
  num(r.time);
  num(r.vmax.value);
  num(r.vmax.distance);
  integer(r.vmax.node);
  for (int i = 0; i < 3; ++i) num(r.vmax.location[i]);
  num(r.energy.total);
  for (double e : r.energy.region) num(e);
  for (int i = 0; i < 3; ++i) num(r.momentum.total[i]);
  num(r.momentum.total.norm());
  for (double m : r.momentum.region_magnitude) num(m);
  for (const auto& v : r.momentum.region)
    for (int i = 0; i < 3; ++i) num(v[i]);
  num(r.delta_energy);
  num(r.delta_momentum);
  integer(r.curve_points);
  integer(r.skipped_planes);
  num(r.curve.residual);
  num(r.curve.xi_min);
  num(r.curve.xi_max);
  for (const auto& row : r.curve.coeffs)
    for (double c : row) num(c);
  for (int n : r.structure_count) integer(n);
  for (double v : r.structure_volume) num(v);
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ',';
    out += f[i];
  }
  return out;
}

std::string format_csv(const std::vector<DiagnosticsRecord>& records, const std::vector<double>& q_thresholds) {
  std::string out = csv_header(q_thresholds) + "\n";
  for (const auto& r : records) {
    if (r.structure_count.size() != q_thresholds.size())
      throw InvalidArgument("format_csv: record has a different threshold count than the header");
    out += csv_row(r) + "\n";
  }
  return out;
}

DiagnosticsTable parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError(source + ": empty CSV");

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  auto to_double = [&](const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError(source + ": bad number '" + s + "'");
    return v;
  };

  DiagnosticsTable table;
  const auto header = split(line);
  for (const auto& h : header)
    if (h.rfind("n_struct_q", 0) == 0) table.q_thresholds.push_back(to_double(h.substr(10)));
  if (header != csv_columns(table.q_thresholds)) throw IoError(source + ": unexpected CSV header");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw IoError(fmt::format("{}:{}: wrong field count", source, lineno));
    auto get = [&](const std::string& name) { return to_double(f[col.at(name)]); };
    DiagnosticsRecord r;
    r.step = static_cast<int>(get("step"));
    r.time = get("t");
    r.vmax.value = get("v_max");
    r.vmax.distance = get("d_v_max");
    r.vmax.node = static_cast<int>(get("v_max_node"));
    for (int i = 0; i < 3; ++i) r.vmax.location[i] = get(fmt::format("v_max_{}", kAxes[i]));
    r.energy.total = get("E_total");
    for (int k = 0; k < kNumRegions; ++k) {
      r.energy.region[k] = get(fmt::format("E_{}", kRegionNames[k]));
      r.momentum.region_magnitude[k] = get(fmt::format("L_{}", kRegionNames[k]));
      for (int i = 0; i < 3; ++i) r.momentum.region[k][i] = get(fmt::format("L_{}_{}", kRegionNames[k], kAxes[i]));
    }
    for (int i = 0; i < 3; ++i) r.momentum.total[i] = get(fmt::format("L_{}", kAxes[i]));
    r.delta_energy = get("dE");
    r.delta_momentum = get("dL");
    r.curve_points = static_cast<int>(get("curve_points"));
    r.skipped_planes = static_cast<int>(get("skipped_planes"));
    r.curve.residual = get("curve_J");
    r.curve.xi_min = get("xi_min");
    r.curve.xi_max = get("xi_max");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) r.curve.coeffs[i][j] = get(fmt::format("c{}_{}", kAxes[i], j));
    for (double q : table.q_thresholds) {
      r.structure_count.push_back(static_cast<int>(get("n_struct_q" + threshold_tag(q))));
      r.structure_volume.push_back(get("V_struct_q" + threshold_tag(q)));
    }
    table.records.push_back(std::move(r));
  }
  return table;
}

DiagnosticsTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

} // namespace tornado
