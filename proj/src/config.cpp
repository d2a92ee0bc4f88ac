#include "tornado/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tornado {

namespace {

std::string where(const YAML::Node& node, std::string_view source) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return std::string(source);
  return fmt::format("{}:{}", source, m.line + 1);
}

/// Reads one mapping, remembering which keys were consumed.
class Section {
public:
  Section(YAML::Node node, std::string path, std::string_view source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(fmt::format("{}: '{}' must be a mapping", where(node_, source_), path_));
  }

  bool has(const char* key) const { return node_ && node_.IsMap() && node_[key]; }

  template <class T>
  bool get(const char* key, T& out) {
    seen_.insert(key);
    if (!has(key)) return false;
    const YAML::Node value = node_[key];
    try {
      out = value.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("{}: bad value for '{}'", where(value, source_), name(key)));
    }
    return true;
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(has(key) ? node_[key] : YAML::Node(), name(key), source_);
  }

  /// Rejects keys that were never asked for.
  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key))
        throw ConfigError(fmt::format("{}: unknown key '{}'", where(kv.first, source_), name(key.c_str())));
    }
  }

  std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
  YAML::Node node_;
  std::string path_;
  std::string_view source_;
  std::set<std::string> seen_;
};

void set_path(YAML::Node node, const std::vector<std::string>& keys, std::size_t i, const YAML::Node& value) {
  if (i + 1 == keys.size()) {
    node[keys[i]] = value;
    return;
  }
  if (!node[keys[i]] || !node[keys[i]].IsMap()) node[keys[i]] = YAML::Node(YAML::NodeType::Map);
  YAML::Node child;
  child.reset(node[keys[i]]);
  set_path(child, keys, i + 1, value);
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(fmt::format("override '{}': expected key=value", assignment));
  std::vector<std::string> keys;
  std::stringstream ss(assignment.substr(0, eq));
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError(fmt::format("override '{}': empty key segment", assignment));
    keys.push_back(k);
  }
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("override '{}': {}", assignment, e.msg));
  }
  if (!root || !root.IsMap()) root = YAML::Node(YAML::NodeType::Map);
  set_path(root, keys, 0, value);
}

DomainKind parse_kind(const std::string& s, const std::string& key) {
  if (s == "straight") return DomainKind::Straight;
  if (s == "curved") return DomainKind::Curved;
  throw ConfigError(fmt::format("{}: expected 'straight' or 'curved', got '{}'", key, s));
}

template <std::size_t N>
void get_array(Section& sec, const char* key, std::array<double, N>& out) {
  std::vector<double> v;
  if (!sec.get(key, v)) return;
  if (v.size() != N) throw ConfigError(fmt::format("{}: expected {} values, got {}", sec.name(key), N, v.size()));
  std::copy(v.begin(), v.end(), out.begin());
}

} // namespace

int RunConfig::steps_for(double cadence, std::string_view name) const {
  if (!(cadence > 0.0)) throw ConfigError(fmt::format("{} must be positive", name));
  const double ratio = cadence / solver.tau;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(fmt::format("{} must be a positive multiple of solver.tau", name));
  return static_cast<int>(rounded);
}

void RunConfig::validate() const {
  try {
    domain.validate();
    profile.params.validate();
    solver.validate();
    analysis.regions.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (mesh.n_r < 2) throw ConfigError("mesh.n_r must be >= 2");
  if (mesh.n_z < 2) throw ConfigError("mesh.n_z must be >= 2");
  if (analysis.num_planes < 1) throw ConfigError("analysis.planes must be >= 1");
  for (double q : analysis.q_thresholds)
    if (!(q > 0.0)) throw ConfigError("analysis.q_thresholds must be positive");
  if (profile.kind == InitialProfileKind::CurvedFrame && !domain.is_curved() && !(profile.profile_R > domain.r_max))
    throw ConfigError("profile.R must exceed domain.r_max for a curved profile on a straight domain");
  snapshot_every_steps();
  diagnostics_every_steps();
  checkpoint_every_steps();
  if (verify.levels.size() < 2) throw ConfigError("verify.levels needs at least 2 entries");
  for (int l : verify.levels)
    if (l < 2) throw ConfigError("verify.levels entries must be >= 2");
  if (!(verify.nz_per_nr > 0.0)) throw ConfigError("verify.nz_per_nr must be positive");
  if (!(verify.tau_over_h > 0.0)) throw ConfigError("verify.tau_over_h must be positive");
  if (!(verify.T_end > 0.0)) throw ConfigError("verify.T_end must be positive");
  if (!(verify.nu > 0.0)) throw ConfigError("verify.nu must be positive");
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: parse error: {}", source, e.mark.line + 1, e.msg));
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& o : overrides) apply_override(root, o);

  RunConfig c;
  Section top(root, "", source);

  Section dom = top.child("domain");
  std::string kind = "straight";
  dom.get("kind", kind);
  c.domain.kind = parse_kind(kind, "domain.kind");
  dom.get("r_max", c.domain.r_max);
  dom.get("a", c.domain.a);
  dom.get("R", c.domain.R);
  dom.finish();

  Section mesh = top.child("mesh");
  mesh.get("n_r", c.mesh.n_r);
  mesh.get("n_z", c.mesh.n_z);
  mesh.finish();

  Section prof = top.child("profile");
  std::string frame = c.domain.is_curved() ? "curved" : "straight";
  prof.get("frame", frame);
  if (frame == "straight")
    c.profile.kind = InitialProfileKind::StraightFrame;
  else if (frame == "curved")
    c.profile.kind = InitialProfileKind::CurvedFrame;
  else
    throw ConfigError(fmt::format("profile.frame: expected 'straight' or 'curved', got '{}'", frame));
  prof.get("R", c.profile.profile_R);
  get_array(prof, "eps", c.profile.params.eps);
  get_array(prof, "beta", c.profile.params.beta);
  std::string sign = "zero";
  prof.get("sign_at_zero", sign);
  if (sign == "zero")
    c.profile.params.sign_at_zero = SignAtZero::Zero;
  else if (sign == "plus")
    c.profile.params.sign_at_zero = SignAtZero::Plus;
  else
    throw ConfigError(fmt::format("profile.sign_at_zero: expected 'zero' or 'plus', got '{}'", sign));
  prof.finish();

  Section sol = top.child("solver");
  const bool has_nu = sol.get("nu", c.solver.nu);
  double reynolds = 0.0;
  if (sol.get("reynolds", reynolds)) {
    if (has_nu) throw ConfigError("solver: give either 'nu' or 'reynolds', not both");
    if (!(reynolds > 0.0)) throw ConfigError("solver.reynolds must be positive");
    c.solver.nu = 1.0 / reynolds;
  }
  sol.get("tau", c.solver.tau);
  sol.get("delta_s0", c.solver.delta_s0);
  sol.get("T_end", c.solver.T_end);
  sol.get("linear_tol", c.solver.linear_tol);
  sol.get("linear_max_iter", c.solver.linear_max_iter);
  sol.get("per_element_h", c.solver.per_element_h);
  sol.finish();

  Section ana = top.child("analysis");
  ana.get("planes", c.analysis.num_planes);
  ana.get("q_thresholds", c.analysis.q_thresholds);
  std::array<double, 3> regions{c.analysis.regions.inner, c.analysis.regions.middle, c.analysis.regions.outer};
  get_array(ana, "region_thresholds", regions);
  c.analysis.regions = {regions[0], regions[1], regions[2]};
  ana.finish();

  Section out = top.child("output");
  out.get("directory", c.output.directory);
  out.get("snapshot_every", c.output.snapshot_every);
  out.get("diagnostics_every", c.output.diagnostics_every);
  out.get("checkpoint_every", c.output.checkpoint_every);
  out.finish();

  Section ver = top.child("verify");
  ver.get("levels", c.verify.levels);
  ver.get("nz_per_nr", c.verify.nz_per_nr);
  ver.get("tau_over_h", c.verify.tau_over_h);
  ver.get("T_end", c.verify.T_end);
  ver.get("nu", c.verify.nu);
  ver.get("amplitude", c.verify.amplitude);
  ver.finish();

  top.get("seed", c.seed);
  top.finish();

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, path);
}

namespace {

std::string num(double x) { return fmt::format("{}", x); }

void emit_list(YAML::Emitter& e, const auto& values) {
  e << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) e << num(v);
  e << YAML::EndSeq;
}

} // namespace

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;

  e << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << (c.domain.is_curved() ? "curved" : "straight");
  e << YAML::Key << "r_max" << YAML::Value << num(c.domain.r_max);
  e << YAML::Key << "a" << YAML::Value << num(c.domain.a);
  e << YAML::Key << "R" << YAML::Value << num(c.domain.R);
  e << YAML::EndMap;

  e << YAML::Key << "mesh" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_r" << YAML::Value << c.mesh.n_r;
  e << YAML::Key << "n_z" << YAML::Value << c.mesh.n_z;
  e << YAML::EndMap;

  e << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "frame" << YAML::Value
    << (c.profile.kind == InitialProfileKind::CurvedFrame ? "curved" : "straight");
  e << YAML::Key << "R" << YAML::Value << num(c.profile.profile_R);
  e << YAML::Key << "eps" << YAML::Value;
  emit_list(e, c.profile.params.eps);
  e << YAML::Key << "beta" << YAML::Value;
  emit_list(e, c.profile.params.beta);
  e << YAML::Key << "sign_at_zero" << YAML::Value
    << (c.profile.params.sign_at_zero == SignAtZero::Plus ? "plus" : "zero");
  e << YAML::EndMap;

  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "nu" << YAML::Value << num(c.solver.nu);
  e << YAML::Key << "tau" << YAML::Value << num(c.solver.tau);
  e << YAML::Key << "delta_s0" << YAML::Value << num(c.solver.delta_s0);
  e << YAML::Key << "T_end" << YAML::Value << num(c.solver.T_end);
  e << YAML::Key << "linear_tol" << YAML::Value << num(c.solver.linear_tol);
  e << YAML::Key << "linear_max_iter" << YAML::Value << c.solver.linear_max_iter;
  e << YAML::Key << "per_element_h" << YAML::Value << c.solver.per_element_h;
  e << YAML::EndMap;

  e << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "planes" << YAML::Value << c.analysis.num_planes;
  e << YAML::Key << "q_thresholds" << YAML::Value;
  emit_list(e, c.analysis.q_thresholds);
  e << YAML::Key << "region_thresholds" << YAML::Value;
  emit_list(e, std::array<double, 3>{c.analysis.regions.inner, c.analysis.regions.middle, c.analysis.regions.outer});
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << c.output.directory;
  e << YAML::Key << "snapshot_every" << YAML::Value << num(c.output.snapshot_every);
  e << YAML::Key << "diagnostics_every" << YAML::Value << num(c.output.diagnostics_every);
  e << YAML::Key << "checkpoint_every" << YAML::Value << num(c.output.checkpoint_every);
  e << YAML::EndMap;

  e << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "levels" << YAML::Value << YAML::Flow << c.verify.levels;
  e << YAML::Key << "nz_per_nr" << YAML::Value << num(c.verify.nz_per_nr);
  e << YAML::Key << "tau_over_h" << YAML::Value << num(c.verify.tau_over_h);
  e << YAML::Key << "T_end" << YAML::Value << num(c.verify.T_end);
  e << YAML::Key << "nu" << YAML::Value << num(c.verify.nu);
  e << YAML::Key << "amplitude" << YAML::Value << num(c.verify.amplitude);
  e << YAML::EndMap;

  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

} // namespace tornado
