#include "tornado/checkpoint.hpp"
#include "tornado/pipeline.hpp"
#include "tornado/verify.hpp"
#include "tornado/vtk.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>

using namespace tornado;
namespace fs = std::filesystem;

namespace {

fs::path scratch_root() {
  const fs::path root = fs::temp_directory_path() / "tornado_test_pipeline";
  return root;
}

RunConfig small_config(const std::string& dir, const std::string& domain = "straight") {
  const std::string text = fmt::format(R"(domain: {{kind: {}, R: 1.5}}
mesh: {{n_r: 3, n_z: 4}}
solver: {{reynolds: 1000, T_end: 0.25}}
analysis: {{q_thresholds: [1, 5]}}
output:
  directory: "{}"
  snapshot_every: 0.05
  diagnostics_every: 0.05
  checkpoint_every: 0.1
)",
                                       domain, (scratch_root() / dir).string());
  return parse_config(text, {}, "small");
}

std::string bytes(const fs::path& p) { return read_file(p); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TORNADO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("repeated runs are byte-identical") {
  fs::remove_all(scratch_root());
  for (const std::string domain : {"straight", "curved"}) {
    const RunConfig a = small_config("a_" + domain, domain), b = small_config("b_" + domain, domain);
    const RunSummary sa = cmd_run(a);
    const RunSummary sb = cmd_run(b);
    CHECK(sa.final_step == 20);
    CHECK(sa.samples == 6);
    const RunLayout la = run_layout(a), lb = run_layout(b);
    CHECK(bytes(la.diagnostics()) == bytes(lb.diagnostics()));
    CHECK(bytes(la.checkpoint()) == bytes(lb.checkpoint()));
    for (int step : {0, 4, 8, 12, 16, 20}) CHECK(bytes(la.snapshot(step)) == bytes(lb.snapshot(step)));
  }
}

TEST_CASE("interrupted run resumed from its checkpoint matches the uninterrupted run") {
  const RunConfig ref = small_config("a_curved", "curved");
  const RunConfig cut = small_config("resumed", "curved");
  RunControl stop;
  stop.stop_after_step = 13; // last checkpoint at step 8
  const RunSummary first = cmd_run(cut, stop);
  CHECK(first.final_step == 13);
  CHECK(read_checkpoint(run_layout(cut).checkpoint()).step == 8);

  RunControl resume;
  resume.resume = true;
  const RunSummary second = cmd_run(cut, resume);
  CHECK(second.resumed);
  CHECK(second.start_step == 8);
  CHECK(second.final_step == 20);
  const RunLayout lr = run_layout(ref), lc = run_layout(cut);
  CHECK(bytes(lr.diagnostics()) == bytes(lc.diagnostics()));
  CHECK(bytes(lr.checkpoint()) == bytes(lc.checkpoint()));
  for (int step : {0, 4, 8, 12, 16, 20}) CHECK(bytes(lr.snapshot(step)) == bytes(lc.snapshot(step)));

  // Resuming a finished run changes nothing.
  const RunSummary third = cmd_run(cut, resume);
  CHECK(third.start_step == 20);
  CHECK(bytes(lr.diagnostics()) == bytes(lc.diagnostics()));
}

TEST_CASE("analyze reproduces the in-run diagnostics from snapshots") {
  for (const std::string domain : {"straight", "curved"}) {
    const RunConfig c = small_config("a_" + domain, domain);
    const AnalyzeSummary s = cmd_analyze(c, {});
    CHECK(s.snapshots == 6);
    CHECK(bytes(s.csv) == bytes(run_layout(c).diagnostics()));
    const VtkDataset labels = read_vtk(run_layout(c).analysis_dir() / "structures_000004.vtk");
    CHECK(labels.find_cell_array("structure_q1"));
    CHECK(labels.find_cell_array("structure_q5"));
    CHECK(fs::exists(run_layout(c).analysis_dir() / "structures_000004.json"));
  }
  // Mismatched mesh.
  RunConfig wrong = small_config("a_straight");
  wrong.mesh.n_r = 4;
  CHECK_THROWS_AS(cmd_analyze(wrong, {}), IoError);
  RunConfig empty = small_config("nothing_here");
  CHECK_THROWS_AS(cmd_analyze(empty, {}), IoError);
}

TEST_CASE("mesh command and output root") {
  RunConfig c = small_config("unused");
  c.output.directory = "relative_out";
  const fs::path root = scratch_root() / "env_root";
  setenv(kOutputRootEnv, root.c_str(), 1);
  const MeshSummary m = cmd_mesh(c);
  unsetenv(kOutputRootEnv);
  CHECK(m.path == root / "relative_out" / "mesh.vtk");
  const VtkDataset d = read_vtk(m.path);
  CHECK(d.points.size() == m.nodes);
  const VtkArray* region = d.find_cell_array("region");
  REQUIRE(region);
  CHECK(region->values.size() == m.tets);
  CHECK(d.find_point_array("boundary"));
}

TEST_CASE("verify reports two orders per norm for three levels") {
  RunConfig c = small_config("verify");
  c.verify.levels = {2, 3, 4};
  c.verify.nz_per_nr = 1.0;
  c.verify.T_end = 0.05;
  const VerifySummary s = cmd_verify(c);
  CHECK(s.report.levels.size() == 3);
  CHECK(s.report.order_l2.size() == 2);
  CHECK(s.report.order_h1.size() == 2);
  for (const auto& l : s.report.levels) {
    CHECK(l.steps * l.tau == doctest::Approx(0.05));
    CHECK(l.error_l2 > 0.0);
    CHECK(l.error_h1 >= l.error_l2);
  }
  CHECK(fs::exists(s.csv));
  CHECK(read_file(s.csv).find("order_h1") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const fs::path cfg = scratch_root() / "cli.yaml";
  write_file_atomic(cfg, fmt::format("mesh: {{n_r: 2, n_z: 4}}\noutput: {{directory: \"{}\"}}\n",
                                     (scratch_root() / "cli_out").string()));
  CHECK(run_cli("mesh --config " + cfg.string()) == 0);
  CHECK(run_cli("mesh --config " + cfg.string() + " --set mesh.n_r=3") == 0);
  CHECK(run_cli("mesh --config " + cfg.string() + " --set mesh.typo=3") == 1);
  CHECK(run_cli("mesh --config " + (scratch_root() / "absent.yaml").string()) == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("run --config " + cfg.string() + " --set solver.tau=-1") == 1);
  CHECK(run_cli("analyze --config " + cfg.string() + " /nonexistent/snap.vtk") == 1);
  // Unreachable linear tolerance: the solver gives up, an internal error.
  CHECK(run_cli("run -q --config " + cfg.string() + " --set solver.T_end=0.0125 --set solver.linear_tol=1e-300") ==
        2);
  CHECK(run_cli("run -q --config " + cfg.string() + " --set solver.T_end=0.025") == 0);
  CHECK(run_cli("analyze --config " + cfg.string()) == 0);
}
