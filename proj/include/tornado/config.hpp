#pragma once

#include "tornado/diagnostics.hpp"
#include "tornado/geometry.hpp"
#include "tornado/initcond.hpp"
#include "tornado/solver.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tornado {

/// Parse or validation failure in a run configuration.
class ConfigError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

struct MeshResolution {
  int n_r = 12;
  int n_z = 8;
};

struct ProfileConfig {
  InitialProfileKind kind = InitialProfileKind::StraightFrame;
  ProfileParams params;
  double profile_R = 0.0; // curved profile radius when the domain is straight
};

struct AnalysisConfig {
  int num_planes = 100;
  std::vector<double> q_thresholds{50.0, 250.0, 750.0};
  RegionThresholds regions;
};

struct OutputConfig {
  std::string directory = "output";
  double snapshot_every = 0.1;
  double diagnostics_every = 0.1;
  double checkpoint_every = 0.5;
};

/// Manufactured-solution convergence study.
struct VerifyConfig {
  std::vector<int> levels{4, 8, 16}; // n_r per level
  double nz_per_nr = 0.5;
  double tau_over_h = 0.05;
  double T_end = 0.25;
  double nu = 0.1;
  double amplitude = 1.0;
};

struct RunConfig {
  DomainSpec domain;
  MeshResolution mesh;
  ProfileConfig profile;
  SolverConfig solver;
  AnalysisConfig analysis;
  OutputConfig output;
  VerifyConfig verify;
  std::uint64_t seed = 0; // reserved

  /// Cadence in steps; throws ConfigError unless cadence is a positive
  /// multiple of tau.
  int steps_for(double cadence, std::string_view name) const;
  int snapshot_every_steps() const { return steps_for(output.snapshot_every, "output.snapshot_every"); }
  int diagnostics_every_steps() const { return steps_for(output.diagnostics_every, "output.diagnostics_every"); }
  int checkpoint_every_steps() const { return steps_for(output.checkpoint_every, "output.checkpoint_every"); }

  void validate() const;
};

/// Parses a YAML document; omitted keys keep their defaults and unknown keys
/// are errors. Each override is "dotted.key=value" and is applied before
/// validation.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                       std::string_view source = "<config>");
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Emits every field; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

} // namespace tornado
