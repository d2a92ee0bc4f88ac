#include "tornado/vtk.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace tornado {

namespace {

constexpr int kVtkTetra = 10;

void append_array(std::string& out, const VtkArray& a) {
  if (a.components == 3) {
    out += fmt::format("VECTORS {} double\n", a.name);
  } else {
    out += fmt::format("SCALARS {} {} 1\nLOOKUP_TABLE default\n", a.name, a.integer ? "int" : "double");
  }
  const std::size_t per_line = a.components == 3 ? 3 : 1;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.integer)
      out += fmt::format("{}", static_cast<long long>(a.values[i]));
    else
      out += fmt::format("{}", a.values[i]);
    out += (i + 1) % per_line == 0 ? '\n' : ' ';
  }
}

class Tokenizer {
public:
  Tokenizer(const std::string& text, std::string source) : in_(text), source_(std::move(source)) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of file");
    return w;
  }
  void expect(const std::string& w) {
    const auto got = word();
    if (got != w) fail("expected '" + w + "', got '" + got + "'");
  }
  double number() {
    const auto w = word();
    double v = 0.0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) fail("bad number '" + w + "'");
    return v;
  }
  long long integer() {
    const auto w = word();
    long long v = 0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) fail("bad integer '" + w + "'");
    return v;
  }
  bool done() {
    in_ >> std::ws;
    return in_.eof();
  }
  std::string line() {
    std::string l;
    std::getline(in_, l);
    return l;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw IoError(source_ + ": " + msg); }

private:
  std::istringstream in_;
  std::string source_;
};

std::vector<VtkArray> read_arrays(Tokenizer& tok, std::size_t count, std::string& next) {
  std::vector<VtkArray> arrays;
  while (!tok.done()) {
    const auto kind = tok.word();
    if (kind == "CELL_DATA" || kind == "POINT_DATA") {
      next = kind;
      break;
    }
    VtkArray a;
    if (kind == "SCALARS") {
      a.name = tok.word();
      const auto type = tok.word();
      a.integer = type == "int";
      if (tok.integer() != 1) tok.fail("only 1-component scalars are supported");
      tok.expect("LOOKUP_TABLE");
      tok.word();
      a.components = 1;
    } else if (kind == "VECTORS") {
      a.name = tok.word();
      tok.word();
      a.components = 3;
    } else {
      tok.fail("unsupported data section '" + kind + "'");
    }
    a.values.resize(count * a.components);
    for (auto& v : a.values) v = tok.number();
    arrays.push_back(std::move(a));
  }
  return arrays;
}

} // namespace

const VtkArray* VtkDataset::find_point_array(const std::string& name) const {
  for (const auto& a : point_data)
    if (a.name == name) return &a;
  return nullptr;
}

const VtkArray* VtkDataset::find_cell_array(const std::string& name) const {
  for (const auto& a : cell_data)
    if (a.name == name) return &a;
  return nullptr;
}

std::string format_vtk(const VtkDataset& d) {
  std::string out;
  out.reserve(d.points.size() * 96 + d.tets.size() * 48);
  out += "# vtk DataFile Version 3.0\n";
  out += (d.title.empty() ? std::string("tornado") : d.title) + "\n";
  out += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += fmt::format("POINTS {} double\n", d.points.size());
  for (const auto& p : d.points) out += fmt::format("{} {} {}\n", p.x(), p.y(), p.z());
  out += fmt::format("CELLS {} {}\n", d.tets.size(), d.tets.size() * 5);
  for (const auto& t : d.tets) out += fmt::format("4 {} {} {} {}\n", t[0], t[1], t[2], t[3]);
  out += fmt::format("CELL_TYPES {}\n", d.tets.size());
  for (std::size_t i = 0; i < d.tets.size(); ++i) out += fmt::format("{}\n", kVtkTetra);
  if (!d.cell_data.empty()) {
    out += fmt::format("CELL_DATA {}\n", d.tets.size());
    for (const auto& a : d.cell_data) append_array(out, a);
  }
  if (!d.point_data.empty()) {
    out += fmt::format("POINT_DATA {}\n", d.points.size());
    for (const auto& a : d.point_data) append_array(out, a);
  }
  return out;
}

VtkDataset parse_vtk(const std::string& text, const std::string& source) {
  Tokenizer tok(text, source);
  VtkDataset d;
  const auto header = tok.line();
  if (header.rfind("# vtk DataFile", 0) != 0) tok.fail("missing vtk header");
  d.title = tok.line();
  tok.expect("ASCII");
  tok.expect("DATASET");
  tok.expect("UNSTRUCTURED_GRID");
  tok.expect("POINTS");
  const auto np = static_cast<std::size_t>(tok.integer());
  tok.word();
  d.points.resize(np);
  for (auto& p : d.points) {
    const double x = tok.number(), y = tok.number(), z = tok.number();
    p = Vec3(x, y, z);
  }
  tok.expect("CELLS");
  const auto nc = static_cast<std::size_t>(tok.integer());
  tok.integer();
  d.tets.resize(nc);
  for (auto& t : d.tets) {
    if (tok.integer() != 4) tok.fail("only tetrahedral cells are supported");
    for (auto& v : t) {
      v = static_cast<int>(tok.integer());
      if (v < 0 || static_cast<std::size_t>(v) >= np) tok.fail("cell references missing point");
    }
  }
  tok.expect("CELL_TYPES");
  if (static_cast<std::size_t>(tok.integer()) != nc) tok.fail("CELL_TYPES count mismatch");
  for (std::size_t i = 0; i < nc; ++i)
    if (tok.integer() != kVtkTetra) tok.fail("only tetrahedral cells are supported");

  std::string section;
  if (!tok.done()) section = tok.word();
  while (!section.empty()) {
    const auto count = static_cast<std::size_t>(tok.integer());
    std::string next;
    if (section == "CELL_DATA") {
      if (count != nc) tok.fail("CELL_DATA count mismatch");
      d.cell_data = read_arrays(tok, count, next);
    } else if (section == "POINT_DATA") {
      if (count != np) tok.fail("POINT_DATA count mismatch");
      d.point_data = read_arrays(tok, count, next);
    } else {
      tok.fail("unsupported section '" + section + "'");
    }
    section = next;
  }
  return d;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_vtk(const std::filesystem::path& path, const VtkDataset& data) {
  write_file_atomic(path, format_vtk(data));
}

VtkDataset read_vtk(const std::filesystem::path& path) { return parse_vtk(read_file(path), path.string()); }

VtkArray scalar_array(std::string name, const std::vector<double>& values) {
  return {std::move(name), 1, false, values};
}

VtkArray label_array(std::string name, const std::vector<int>& values) {
  return {std::move(name), 1, true, std::vector<double>(values.begin(), values.end())};
}

VtkArray vector_array(std::string name, const std::vector<Vec3>& values) {
  VtkArray a{std::move(name), 3, false, {}};
  a.values.reserve(values.size() * 3);
  for (const auto& v : values) a.values.insert(a.values.end(), {v.x(), v.y(), v.z()});
  return a;
}

VtkDataset snapshot_dataset(const Mesh& mesh, const FieldState& state) {
  VtkDataset d;
  d.title = fmt::format("tornado snapshot step={} time={}", state.step, state.time);
  d.points = mesh.nodes;
  d.tets = mesh.tets;
  d.point_data.push_back(vector_array("velocity", state.velocity));
  d.point_data.push_back(scalar_array("pressure", state.pressure));
  return d;
}

FieldState state_from_snapshot(const VtkDataset& d) {
  FieldState s;
  const auto step_pos = d.title.find("step=");
  const auto time_pos = d.title.find("time=");
  if (step_pos == std::string::npos || time_pos == std::string::npos)
    throw IoError("snapshot title lacks step/time: '" + d.title + "'");
  std::istringstream st(d.title.substr(step_pos + 5));
  st >> s.step;
  const std::string tstr = d.title.substr(time_pos + 5);
  const auto end = tstr.find(' ');
  const std::string tnum = tstr.substr(0, end);
  if (std::from_chars(tnum.data(), tnum.data() + tnum.size(), s.time).ec != std::errc())
    throw IoError("snapshot title has bad time: '" + d.title + "'");

  const VtkArray* vel = d.find_point_array("velocity");
  const VtkArray* pre = d.find_point_array("pressure");
  if (!vel || vel->components != 3 || !pre) throw IoError("snapshot lacks velocity/pressure arrays");
  s.velocity.resize(d.points.size());
  for (std::size_t n = 0; n < d.points.size(); ++n)
    s.velocity[n] = Vec3(vel->values[3 * n], vel->values[3 * n + 1], vel->values[3 * n + 2]);
  s.pressure = pre->values;
  return s;
}

} // namespace tornado
