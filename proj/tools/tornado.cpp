// Command-line driver: mesh | run | analyze | verify.
#include "tornado/pipeline.hpp"
#include "tornado/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>

namespace {

enum ExitCode { kOk = 0, kUserError = 1, kInternalError = 2 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("-c,--config", common.config_path, "YAML run configuration")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", common.overrides, "override a config key, e.g. --set solver.tau=0.025")
      ->take_all()
      ->allow_extra_args(false);
}

tornado::RunConfig load(const Common& common) {
  if (common.config_path.empty()) return tornado::parse_config("", common.overrides, "<defaults>");
  return tornado::load_config(common.config_path, common.overrides);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tornado-type flow toolkit: meshing, simulation, diagnostics and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tornado 1.0");

  Common common;
  bool resume = false;
  bool quiet = false;
  int stop_after = -1;
  std::vector<std::string> snapshot_paths;

  auto* mesh_cmd = app.add_subcommand("mesh", "write the configured mesh as VTK");
  auto* run_cmd = app.add_subcommand("run", "simulate and write snapshots, checkpoints and diagnostics");
  auto* analyze_cmd = app.add_subcommand("analyze", "recompute diagnostics and vortex structures from snapshots");
  auto* verify_cmd = app.add_subcommand("verify", "manufactured-solution convergence study");
  for (auto* cmd : {mesh_cmd, run_cmd, analyze_cmd, verify_cmd}) add_common(cmd, common);
  run_cmd->add_flag("--resume", resume, "continue from the checkpoint in the output directory");
  run_cmd->add_option("--stop-after", stop_after, "stop after this step (simulates an interruption)");
  run_cmd->add_flag("-q,--quiet", quiet, "no per-sample progress lines");
  analyze_cmd->add_option("snapshots", snapshot_paths, "snapshot files (default: all snapshots of the run)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUserError;
  }

  try {
    const tornado::RunConfig config = load(common);
    if (*mesh_cmd) {
      const auto s = tornado::cmd_mesh(config);
      fmt::print("mesh: {} nodes, {} tets, h = {:.6g}, volume = {:.10g}\nwrote {}\n", s.nodes, s.tets, s.h,
                 s.volume, s.path.string());
    } else if (*run_cmd) {
      tornado::RunControl control;
      control.resume = resume;
      control.stop_after_step = stop_after;
      if (!quiet) {
        control.progress = [](const tornado::DiagnosticsRecord& r) {
          fmt::print(stderr, "step {:5d}  t = {:7.4f}  |v|max = {:.5f}  d = {:.4f}  E = {:.6e}\n", r.step, r.time,
                     r.vmax.value, r.vmax.distance, r.energy.total);
        };
      }
      const auto s = tornado::cmd_run(config, control);
      fmt::print("run: steps {} -> {}{}, {} diagnostic samples in {}\n", s.start_step, s.final_step,
                 s.resumed ? " (resumed)" : "", s.samples, s.directory.string());
    } else if (*analyze_cmd) {
      std::vector<std::filesystem::path> paths(snapshot_paths.begin(), snapshot_paths.end());
      const auto s = tornado::cmd_analyze(config, paths);
      fmt::print("analyze: {} snapshots\nwrote {}\n", s.snapshots, s.csv.string());
    } else if (*verify_cmd) {
      const auto s = tornado::cmd_verify(config);
      fmt::print("{}wrote {}\n", s.report.to_text(), s.csv.string());
    }
    return kOk;
  } catch (const tornado::InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUserError;
  } catch (const tornado::IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUserError;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUserError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternalError;
  }
}
