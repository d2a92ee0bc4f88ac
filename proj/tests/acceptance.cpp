// Acceptance driver: one PASS/FAIL line per criterion 1-8.
//
//   acceptance --work-dir DIR [--config-dir DIR] [--n-r 20] [--n-z 12]
//              [--reynolds 1000] [--reuse]
//
// Criteria 5-7 run the five desk simulations (straight, curved R = 2, 1.5,
// 1.1 and R = 1.5 with the straight-frame profile) through cmd_run. With
// --reuse, finished runs in the work directory are picked up via resume.

#include "oracles.hpp"
#include "tornado/checkpoint.hpp"
#include "tornado/config.hpp"
#include "tornado/curve.hpp"
#include "tornado/diagnostics.hpp"
#include "tornado/pipeline.hpp"
#include "tornado/records.hpp"
#include "tornado/solver.hpp"
#include "tornado/verify.hpp"
#include "tornado/vortex.hpp"
#include "tornado/vtk.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace tornado;
namespace fs = std::filesystem;

#ifndef TORNADO_CONFIG_DIR
#define TORNADO_CONFIG_DIR "configs"
#endif

namespace {

struct Verdict {
  int id = 0;
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path work_dir;
  fs::path config_dir = TORNADO_CONFIG_DIR;
  int n_r = 20;
  int n_z = 12;
  double reynolds = 1000.0;
  bool reuse = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kPi = std::numbers::pi;

void note(const std::string& msg) { std::cerr << "[acceptance] " << msg << std::endl; }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// ---------------------------------------------------------------- criterion 1

Verdict criterion_scheme(const Options& opt) {
  RunConfig c = load_config((opt.config_dir / "verify.yaml").string(),
                            {"output.directory=" + (opt.work_dir / "verify_study").string()});
  const auto t0 = std::chrono::steady_clock::now();
  const VerifySummary s = cmd_verify(c);
  const double secs = seconds_since(t0);
  const auto& r = s.report;
  bool pass = r.levels.size() == 3 && r.order_l2.size() == 2 && r.order_h1.size() == 2 && secs < 600.0;
  std::vector<std::string> l2, h1;
  for (double o : r.order_l2) {
    pass = pass && o >= 1.5;
    l2.push_back(fmt::format("{:.3f}", o));
  }
  for (double o : r.order_h1) {
    pass = pass && o >= 0.8;
    h1.push_back(fmt::format("{:.3f}", o));
  }
  return {1, pass,
          fmt::format("levels n_r={} L2 orders [{}] (>= 1.5), H1 orders [{}] (>= 0.8), {:.0f} s (< 600 s)",
                      join([&] {
                        std::vector<std::string> v;
                        for (const auto& l : r.levels) v.push_back(std::to_string(l.n_r));
                        return v;
                      }(), "/"),
                      join(l2, ", "), join(h1, ", "), secs)};
}

// ---------------------------------------------------------------- criterion 2

FieldState linear_field(const Mesh& mesh, const Mat3& g) {
  FieldState s = FieldState::zeros(mesh.num_nodes());
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) s.velocity[n] = g * mesh.nodes[n];
  return s;
}

Verdict criterion_analytic() {
  const double omega = 1.0;
  Mat3 rot = Mat3::Zero();
  rot(0, 1) = -omega;
  rot(1, 0) = omega;
  Mat3 shear = Mat3::Zero();
  shear(0, 1) = 1.0;

  double q_rot_err = 0.0, q_shear_err = 0.0;
  for (const auto& spec : {DomainSpec::straight(), DomainSpec::curved(1.5)}) {
    const Mesh mesh = build_domain_mesh(spec, 8, 6);
    for (double q : q_criterion(linear_field(mesh, rot), mesh).element)
      q_rot_err = std::max(q_rot_err, std::abs(q - omega * omega));
    for (double q : q_criterion(linear_field(mesh, shear), mesh).element)
      q_shear_err = std::max(q_shear_err, std::abs(q));
  }

  // E = pi Omega^2 H / 4 and L_z = pi Omega H / 2 on the unit-radius cylinder of height H.
  const double height = 0.625;
  const double e_exact = kPi * omega * omega * height / 4.0;
  const double l_exact = kPi * omega * height / 2.0;
  const CentralCurve axis = CentralCurve::line(Vec3::Zero(), Vec3::UnitZ(), -0.125, 0.5);
  std::vector<double> e_err, l_err;
  for (int n_r : {8, 16, 32}) {
    const Mesh mesh = build_straight_mesh(DomainSpec::straight(), n_r, 2);
    const ElementGeometry geom(mesh);
    const FieldState s = linear_field(mesh, rot);
    e_err.push_back(std::abs(kinetic_energy(s, mesh, geom).total - e_exact) / e_exact);
    l_err.push_back(std::abs(angular_momentum(s, mesh, geom, axis).total.z() - l_exact) / l_exact);
  }
  const bool converging = e_err[0] > e_err[1] && e_err[1] > e_err[2] && l_err[0] > l_err[1] && l_err[1] > l_err[2];
  const bool pass = q_rot_err <= 1e-10 && q_shear_err <= 1e-10 && e_err[2] < 0.02 && l_err[2] < 0.02 && converging;
  return {2, pass,
          fmt::format("max|Q-Omega^2|={:.1e}, max|Q_shear|={:.1e} (<= 1e-10); rel. err E {:.2e}/{:.2e}/{:.2e}, "
                      "L_z {:.2e}/{:.2e}/{:.2e} at n_r=8/16/32 (< 2% at 32, decreasing)",
                      q_rot_err, q_shear_err, e_err[0], e_err[1], e_err[2], l_err[0], l_err[1], l_err[2])};
}

// ---------------------------------------------------------------- criterion 3

Verdict criterion_curve_fit() {
  const double xi_min = -0.125, xi_max = 0.5;
  CentralCurve truth;
  truth.coeffs = {{{0.1, -0.5, 0.8, 2.0}, {-0.05, 0.3, -1.2, 0.7}, {0.0, 1.0, 0.1, -0.4}}};
  truth.xi_min = xi_min;
  truth.xi_max = xi_max;

  std::vector<CurveSample> exact, noisy;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int l = 0; l <= 100; ++l) {
    const double xi = xi_min + l * (xi_max - xi_min) / 100;
    exact.push_back({xi, truth(xi)});
    noisy.push_back({xi, truth(xi) + Vec3(noise(rng), noise(rng), noise(rng))});
  }
  const CentralCurve fe = fit_central_curve(exact, xi_min, xi_max);
  // Scaled residual: J relative to the data scale.
  double scale = 0.0;
  for (const auto& s : exact) scale += s.point.squaredNorm();
  const double j_exact = fe.residual / scale;

  const CentralCurve fn = fit_central_curve(noisy, xi_min, xi_max);
  const double j_oracle = static_cast<double>(oracle::big_fit(noisy).residual);
  const double gap = std::abs(fn.residual - j_oracle);
  const bool pass = j_exact <= 1e-18 && gap <= 1e-10;
  return {3, pass,
          fmt::format("exact cubic scaled J={:.2e} (<= 1e-18); noisy J={:.12f} vs 50-digit oracle {:.12f}, "
                      "|diff|={:.1e} (<= 1e-10)",
                      j_exact, fn.residual, j_oracle, gap)};
}

// ---------------------------------------------------------------- desk runs

struct DeskRun {
  std::string name;
  RunConfig config;
  DiagnosticsTable table;
  double seconds = 0.0;
};

const char* const kRunNames[] = {"straight", "curved_R2", "curved_R1.5", "curved_R1.1", "curved_R1.5_straight_profile"};

std::vector<DeskRun> desk_runs(const Options& opt, double& total_seconds) {
  std::vector<DeskRun> runs;
  total_seconds = 0.0;
  for (const std::string name : kRunNames) {
    DeskRun r;
    r.name = name;
    r.config = load_config((opt.config_dir / (name + ".yaml")).string(),
                           {fmt::format("mesh.n_r={}", opt.n_r), fmt::format("mesh.n_z={}", opt.n_z),
                            fmt::format("solver.reynolds={}", opt.reynolds), "solver.tau=0.0125",
                            "solver.T_end=3", "output.diagnostics_every=0.0125", "output.snapshot_every=0.1",
                            "output.checkpoint_every=0.5",
                            "output.directory=" + (opt.work_dir / "runs" / name).string()});
    const fs::path dir = run_layout(r.config).root;
    if (!opt.reuse) fs::remove_all(dir);
    RunControl control;
    control.resume = opt.reuse;
    note(fmt::format("run {} (n_r={}, n_z={}, Re={})", name, opt.n_r, opt.n_z, opt.reynolds));
    const auto t0 = std::chrono::steady_clock::now();
    cmd_run(r.config, control);
    r.seconds = seconds_since(t0);
    total_seconds += r.seconds;
    r.table = read_csv(run_layout(r.config).diagnostics());
    note(fmt::format("run {} done in {:.0f} s", name, r.seconds));
    runs.push_back(std::move(r));
  }
  return runs;
}

const DeskRun& find_run(const std::vector<DeskRun>& runs, const std::string& name) {
  for (const auto& r : runs)
    if (r.name == name) return r;
  throw std::runtime_error("missing run " + name);
}

// Rows on the 0.1 output grid.
std::vector<const DiagnosticsRecord*> coarse_rows(const DeskRun& run) {
  std::vector<const DiagnosticsRecord*> out;
  for (const auto& rec : run.table.records) {
    const double k = rec.time / 0.1;
    if (std::abs(k - std::round(k)) < 1e-6) out.push_back(&rec);
  }
  return out;
}

// Time at which series a falls while b rises most strongly (central
// differences on the 0.1 grid, from t = 0.2 on so the first projection step
// is excluded). Negative when the pattern never occurs.
double transfer_event(const std::vector<const DiagnosticsRecord*>& rows, Region from, Region to) {
  double best = 0.0, when = -1.0;
  for (std::size_t k = 2; k + 1 < rows.size(); ++k) {
    const double dt = rows[k + 1]->time - rows[k - 1]->time;
    const int f = static_cast<int>(from), t = static_cast<int>(to);
    const double d_from = (rows[k + 1]->momentum.region_magnitude[f] - rows[k - 1]->momentum.region_magnitude[f]) / dt;
    const double d_to = (rows[k + 1]->momentum.region_magnitude[t] - rows[k - 1]->momentum.region_magnitude[t]) / dt;
    const double score = std::min(-d_from, d_to);
    if (score > best) {
      best = score;
      when = rows[k]->time;
    }
  }
  return when;
}

Verdict criterion_trends(const std::vector<DeskRun>& runs, double total_seconds) {
  std::vector<std::string> parts;
  bool pass = true;

  // (a) distance of the velocity maximum from the geometric axis.
  auto max_d = [](const DeskRun& r) {
    double m = 0.0;
    for (const auto& rec : r.table.records) m = std::max(m, rec.vmax.distance);
    return m;
  };
  const double d_straight = max_d(find_run(runs, "straight"));
  bool a = d_straight < 0.2;
  std::vector<std::string> curved_d;
  for (const auto& r : runs) {
    if (r.name == "straight") continue;
    const double d = max_d(r);
    a = a && d > 0.2;
    curved_d.push_back(fmt::format("{}={:.3f}", r.name, d));
  }
  parts.push_back(fmt::format("(a) {} max d straight={:.3f} (< 0.2), {} (> 0.2)", a ? "ok" : "FAIL", d_straight,
                              join(curved_d, " ")));
  pass = pass && a;

  // (b) final distance ordered by curvature.
  auto final_d = [&](const char* n) { return find_run(runs, n).table.records.back().vmax.distance; };
  const double d11 = final_d("curved_R1.1"), d15 = final_d("curved_R1.5"), d2 = final_d("curved_R2");
  const bool b = d11 > d15 && d15 > d2;
  parts.push_back(fmt::format("(b) {} d(t=3) R1.1={:.3f} > R1.5={:.3f} > R2={:.3f}", b ? "ok" : "FAIL", d11, d15, d2));
  pass = pass && b;

  // (c) angular-momentum transfer events.
  auto events = [&](const char* n) {
    const auto rows = coarse_rows(find_run(runs, n));
    return std::pair{transfer_event(rows, Region::Inner, Region::Middle),
                     transfer_event(rows, Region::Middle, Region::Outer)};
  };
  const auto [t1_15, t2_15] = events("curved_R1.5");
  const auto [t1_11, t2_11] = events("curved_R1.1");
  const auto [t1_2, t2_2] = events("curved_R2");
  const bool c = t1_15 >= 0.0 && std::abs(t1_15 - 0.8) <= 0.4 + 1e-9 && t2_15 >= 0.0 &&
                 std::abs(t2_15 - 1.9) <= 0.4 + 1e-9 && t2_11 >= 0.0 && t2_2 >= 0.0 && t2_11 < t2_15 && t2_15 < t2_2;
  parts.push_back(fmt::format("(c) {} inner->middle t(R1.5)={:.1f} (0.8+-0.4); middle->outer t R1.1={:.1f} < "
                              "R1.5={:.1f} (1.9+-0.4) < R2={:.1f} [inner->middle R1.1={:.1f} R2={:.1f}]",
                              c ? "ok" : "FAIL", t1_15, t2_11, t2_15, t2_2, t1_11, t1_2));
  pass = pass && c;

  // (d) energy non-increasing up to 1% of E(0) per step, every run.
  double worst = 0.0;
  std::string worst_run;
  for (const auto& r : runs)
    for (std::size_t k = 1; k < r.table.records.size(); ++k) {
      const auto& rec = r.table.records;
      const double rise = (rec[k].energy.total - rec[k - 1].energy.total) / rec.front().energy.total;
      if (rise > worst) {
        worst = rise;
        worst_run = r.name;
      }
    }
  const bool d = worst <= 0.01;
  parts.push_back(fmt::format("(d) {} max per-step E rise / E(0) {:.2e}{} (<= 1e-2)", d ? "ok" : "FAIL", worst,
                              worst_run.empty() ? "" : " in " + worst_run));
  pass = pass && d;

  const bool fast = total_seconds < 7200.0;
  parts.push_back(fmt::format("runtime {:.0f} s (< 7200 s)", total_seconds));
  pass = pass && fast;
  return {5, pass, join(parts, "; ")};
}

Verdict criterion_drift(const std::vector<DeskRun>& runs) {
  const std::map<std::string, double> target{{"curved_R2", 0.366}, {"curved_R1.5", 0.418}, {"curved_R1.1", 0.49}};
  std::map<std::string, double> speed;
  for (const auto& [name, _] : target) {
    std::vector<TimedCurve> series;
    for (const auto* rec : coarse_rows(find_run(runs, name))) series.push_back({rec->time, rec->curve});
    speed[name] = central_curve_speed(series, 0.0, 3.0);
  }
  bool pass = speed["curved_R1.1"] > speed["curved_R1.5"] && speed["curved_R1.5"] > speed["curved_R2"];
  std::vector<std::string> parts;
  for (const char* n : {"curved_R2", "curved_R1.5", "curved_R1.1"}) {
    const double s = speed[n], t = target.at(n);
    const bool ok = s > 0.0 && std::abs(s - t) <= 0.3 * t;
    pass = pass && ok;
    parts.push_back(fmt::format("{}={:.3f} (target {:.3f} +-30%{})", n, s, t, ok ? "" : ", out"));
  }
  return {6, pass, "speed " + join(parts, ", ") + ", ordered R1.1 > R1.5 > R2"};
}

// ---------------------------------------------------------------- criterion 7

Verdict criterion_structures(const DeskRun& r15) {
  std::vector<std::string> parts;
  // Synthetic blobs against the flood fill, and relabeling invariance.
  const Mesh mesh = build_straight_mesh(DomainSpec::straight(), 16, 10);
  const QField q = q_criterion(oracle::two_blobs(mesh), mesh);
  const auto set = connected_vortex_structures(mesh, q.element, 30.0);
  const auto flood = oracle::flood_fill(mesh, q.element, 30.0);
  const bool blobs = set.components.size() == 2 &&
                     oracle::partition(set) == std::set<std::set<int>>(flood.begin(), flood.end());

  std::vector<int> perm(mesh.num_tets());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mesh shuffled = mesh;
  std::vector<double> sq(mesh.num_tets());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.tets[i] = mesh.tets[perm[i]];
    sq[i] = q.element[perm[i]];
  }
  const bool relabel = oracle::partition(connected_vortex_structures(shuffled, sq, 30.0), perm) == oracle::partition(set);
  parts.push_back(fmt::format("two blobs: {} components, oracle match {}, relabel invariant {}", set.components.size(),
                              blobs ? "yes" : "no", relabel ? "yes" : "no"));

  // Lineage of the primary Q >= 50 structure on the R = 1.5 run: the largest
  // component of the first computed snapshot (the t = 0 field is the raw,
  // unprojected profile), then at each snapshot the components that overlap
  // the previous lineage.
  const Mesh run_mesh = build_run_mesh(r15.config);
  const auto adjacency = build_tet_adjacency(run_mesh);
  std::set<int> lineage;
  bool early_single = true, split = false, alive = true;
  double split_time = -1.0;
  std::vector<std::string> counts;
  for (const auto& path : list_snapshots(run_layout(r15.config))) {
    const FieldState s = state_from_snapshot(read_vtk(path));
    if (s.step == 0) continue;
    const auto comps = connected_vortex_structures(run_mesh, adjacency, q_criterion(s, run_mesh).element, 50.0);
    std::set<int> next;
    int children = 0;
    if (lineage.empty()) {
      if (comps.components.empty()) {
        alive = false;
        break;
      }
      next.insert(comps.components[0].elements.begin(), comps.components[0].elements.end());
      children = 1;
    } else {
      for (const auto& c : comps.components) {
        const bool overlaps =
            std::any_of(c.elements.begin(), c.elements.end(), [&](int e) { return lineage.count(e) > 0; });
        if (!overlaps) continue;
        ++children;
        next.insert(c.elements.begin(), c.elements.end());
      }
    }
    counts.push_back(fmt::format("{:.1f}:{}", s.time, children));
    if (children == 0) {
      alive = false;
      break;
    }
    if (s.time <= 0.2 + 1e-9 && children != 1) early_single = false;
    if (s.time >= 0.6 - 1e-9 && s.time <= 1.3 + 1e-9 && children >= 2 && !split) {
      split = true;
      split_time = s.time;
    }
    lineage = std::move(next);
  }
  parts.push_back(fmt::format("R1.5 primary Q>=50 lineage single for t<=0.2 {}, split in [0.6,1.3] {}{}; "
                              "children per snapshot [{}]",
                              early_single ? "yes" : "no", split ? "yes" : "no",
                              split ? fmt::format(" at t={:.1f}", split_time) : (alive ? "" : " (lineage vanished)"),
                              join(counts, " ")));
  return {7, blobs && relabel && early_single && split, join(parts, "; ")};
}

// ---------------------------------------------------------------- criterion 4

Verdict criterion_conservation(const Options& opt, const std::vector<DeskRun>& runs) {
  double partition_err = 0.0;
  for (const auto& r : runs)
    for (const auto& rec : r.table.records) {
      double sum = 0.0;
      for (double e : rec.energy.region) sum += e;
      partition_err = std::max(partition_err, std::abs(sum - rec.energy.total) / rec.energy.total);
    }

  double wall = 0.0, mean = 0.0;
  std::size_t checked = 0;
  for (const auto& r : runs) {
    const Mesh mesh = build_run_mesh(r.config);
    for (const auto& path : list_snapshots(run_layout(r.config))) {
      const FieldState s = state_from_snapshot(read_vtk(path));
      if (s.step < 1) continue;
      for (int n : mesh.boundary_nodes) wall = std::max(wall, s.velocity[n].cwiseAbs().maxCoeff());
      mean = std::max(mean, std::abs(std::accumulate(s.pressure.begin(), s.pressure.end(), 0.0) /
                                     static_cast<double>(s.pressure.size())));
      ++checked;
    }
  }

  double zero_out = 0.0;
  for (const auto& spec : {DomainSpec::straight(), DomainSpec::curved(1.5)}) {
    const Mesh mesh = build_domain_mesh(spec, opt.n_r, opt.n_z);
    SolverConfig cfg;
    cfg.nu = 1.0 / opt.reynolds;
    cfg.per_element_h = spec.is_curved();
    LagrangeGalerkinSolver solver(mesh, cfg);
    FieldState s = FieldState::zeros(mesh.num_nodes());
    for (int k = 0; k < 3; ++k) s = solver.step(s);
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n)
      zero_out = std::max({zero_out, s.velocity[n].cwiseAbs().maxCoeff(), std::abs(s.pressure[n])});
  }
  const bool pass = partition_err <= 1e-12 && wall == 0.0 && mean <= 1e-10 && zero_out == 0.0 && checked > 0;
  return {4, pass,
          fmt::format("max rel. |sum E_region - E_total|={:.1e} (<= 1e-12); {} snapshots with k >= 1: max wall "
                      "|v|={:.1e} (== 0), max |mean p|={:.1e} (<= 1e-10); zero state after 3 steps max={:.1e} (== 0)",
                      partition_err, checked, wall, mean, zero_out)};
}

// ---------------------------------------------------------------- criterion 8

Verdict criterion_determinism(const Options& opt) {
  auto config = [&](const std::string& dir) {
    return load_config((opt.config_dir / "curved_R1.5.yaml").string(),
                       {fmt::format("mesh.n_r={}", opt.n_r), fmt::format("mesh.n_z={}", opt.n_z),
                        fmt::format("solver.reynolds={}", opt.reynolds), "solver.T_end=0.5",
                        "output.snapshot_every=0.125", "output.checkpoint_every=0.25",
                        "output.directory=" + (opt.work_dir / "determinism" / dir).string()});
  };
  const RunConfig a = config("a"), b = config("b"), c = config("resumed");
  for (const auto* cfg : {&a, &b, &c}) fs::remove_all(run_layout(*cfg).root);
  cmd_run(a);
  cmd_run(b);
  RunControl stop;
  stop.stop_after_step = 27; // last checkpoint at step 20
  cmd_run(c, stop);
  const int interrupted_at = read_checkpoint(run_layout(c).checkpoint()).step;
  RunControl resume;
  resume.resume = true;
  cmd_run(c, resume);

  auto files = [](const RunConfig& cfg) {
    const RunLayout l = run_layout(cfg);
    std::vector<fs::path> out{l.diagnostics(), l.checkpoint(), l.mesh()};
    for (const auto& p : list_snapshots(l)) out.push_back(p);
    return out;
  };
  auto identical = [&](const RunConfig& x, const RunConfig& y) {
    const auto fx = files(x), fy = files(y);
    if (fx.size() != fy.size()) return std::pair{false, fx.size()};
    for (std::size_t i = 0; i < fx.size(); ++i)
      if (fx[i].filename() != fy[i].filename() || read_file(fx[i]) != read_file(fy[i])) return std::pair{false, fx.size()};
    return std::pair{true, fx.size()};
  };
  const auto [same_ab, n_ab] = identical(a, b);
  const auto [same_ac, n_ac] = identical(a, c);
  return {8, same_ab && same_ac && interrupted_at == 20,
          fmt::format("repeat run: {} files byte-identical {}; interrupted at step 27, resumed from checkpoint step "
                      "{}: {} files byte-identical {}",
                      n_ab, same_ab ? "yes" : "no", interrupted_at, n_ac, same_ac ? "yes" : "no")};
}

} // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Acceptance criteria 1-8"};
  std::string work_dir, config_dir = opt.config_dir.string();
  app.add_option("--work-dir", work_dir, "Directory for run outputs")->required();
  app.add_option("--config-dir", config_dir, "Directory with the run configurations");
  app.add_option("--n-r", opt.n_r, "Rings of the desk meshes");
  app.add_option("--n-z", opt.n_z, "Layers of the desk meshes");
  app.add_option("--reynolds", opt.reynolds, "Reynolds number of the desk runs");
  app.add_flag("--reuse", opt.reuse, "Resume existing desk runs instead of starting over");
  CLI11_PARSE(app, argc, argv);
  opt.work_dir = fs::absolute(work_dir);
  opt.config_dir = config_dir;
  fs::create_directories(opt.work_dir);

  std::vector<Verdict> verdicts;
  try {
    note("criteria 2 and 3");
    verdicts.push_back(criterion_analytic());
    verdicts.push_back(criterion_curve_fit());
    note("criterion 1: convergence study");
    verdicts.push_back(criterion_scheme(opt));
    note("criterion 8: determinism");
    verdicts.push_back(criterion_determinism(opt));
    double run_seconds = 0.0;
    const std::vector<DeskRun> runs = desk_runs(opt, run_seconds);
    verdicts.push_back(criterion_conservation(opt, runs));
    verdicts.push_back(criterion_trends(runs, run_seconds));
    verdicts.push_back(criterion_drift(runs));
    verdicts.push_back(criterion_structures(find_run(runs, "curved_R1.5")));
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << "\n";
    return 2;
  }

  std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& x, const Verdict& y) { return x.id < y.id; });
  std::string report;
  bool all = true;
  for (const auto& v : verdicts) {
    report += fmt::format("criterion {}: {}  {}\n", v.id, v.pass ? "PASS" : "FAIL", v.detail);
    all = all && v.pass;
  }
  std::cout << report << std::flush;
  write_file_atomic(opt.work_dir / "acceptance_summary.txt", report);
  return all ? 0 : 1;
}
