#include "tornado/diagnostics.hpp"
#include "tornado/initcond.hpp"
#include "tornado/manufactured.hpp"
#include "tornado/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace tornado;

namespace {

SolverConfig desk_config() {
  SolverConfig cfg;
  cfg.nu = 1e-4;
  cfg.tau = 1.25e-2;
  return cfg;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double energy(const Mesh& mesh, const FieldState& s) {
  const ElementGeometry geom(mesh);
  return kinetic_energy(s, mesh, geom).total;
}

double mass_norm_error(const Mesh& mesh, const FieldState& s, const ManufacturedSolution& ms, double t) {
  const SparseMatrix m = scalar_mass_matrix(mesh);
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) e[n] = s.velocity[n][c] - ms.velocity(mesh.nodes[n], t)[c];
    sum += e.dot(m * e);
  }
  return std::sqrt(sum);
}

double divergence_l2(const Mesh& mesh, const FieldState& s) {
  const auto els = p1_elements(mesh);
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const double div = element_velocity_gradient(mesh, els[t], t, s.velocity).trace();
    sum += div * div * els[t].volume;
  }
  return std::sqrt(sum);
}

} // namespace

TEST_CASE("solver config") {
  SolverConfig cfg;
  CHECK(cfg.num_steps() == 240);
  CHECK_NOTHROW(cfg.validate());
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.nu = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.delta_s0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.T_end = 0.1;
  cfg.tau = 0.025;
  CHECK(cfg.num_steps() == 4);
}

TEST_CASE("dof map and system structure") {
  const Mesh mesh = build_straight_mesh(DomainSpec::straight(), 3, 3);
  const DofMap dofs = make_dof_map(mesh);
  const std::size_t n = mesh.num_nodes(), nb = mesh.boundary_nodes.size();
  CHECK(dofs.full_size() == 4 * n);
  CHECK(dofs.size == 3 * (n - nb) + (n - 1));
  for (int b : mesh.boundary_nodes) CHECK(dofs.velocity[b] == -1);
  CHECK(dofs.pressure[dofs.pinned_pressure_node] == -1);

  const FieldState init = sample_initial_state(mesh, InitialProfileKind::StraightFrame, DomainSpec::straight(), {});
  const LinearSystem sys = assemble_step_system(mesh, init, desk_config());
  CHECK(sys.matrix.rows() == static_cast<Eigen::Index>(dofs.size));
  const SparseMatrix sym = sys.matrix.transpose();
  CHECK((SparseMatrix(sys.matrix - sym)).norm() <= 1e-14 * sys.matrix.norm());

  LinearSolveReport rep;
  const Eigen::VectorXd x = solve_linear_system(sys, 1e-8, 0, &rep);
  const double rel = (sys.matrix * x - sys.rhs).norm() / sys.rhs.norm();
  CHECK(rel <= 1e-8);
  CHECK(rep.relative_residual == doctest::Approx(rel).epsilon(1e-3));
}

TEST_CASE("zero state is a fixed point") {
  const Mesh mesh = build_straight_mesh(DomainSpec::straight(), 3, 3);
  const auto cfg = desk_config();
  const LinearSystem sys = assemble_step_system(mesh, FieldState::zeros(mesh.num_nodes()), cfg);
  CHECK(sys.rhs.norm() == 0.0);
  LagrangeGalerkinSolver solver(mesh, cfg);
  FieldState s = FieldState::zeros(mesh.num_nodes());
  for (int k = 0; k < 3; ++k) s = solver.step(s);
  for (const auto& v : s.velocity) CHECK(v.norm() == 0.0);
  for (double p : s.pressure) CHECK(p == 0.0);
}

TEST_CASE("one step from the swirl profile") {
  const auto spec = DomainSpec::straight();
  const Mesh mesh = build_straight_mesh(spec, 6, 4);
  const FieldState init = sample_initial_state(mesh, InitialProfileKind::StraightFrame, spec, {});
  LagrangeGalerkinSolver solver(mesh, desk_config());
  FieldState s = solver.step(init);
  CHECK(s.step == 1);
  CHECK(s.time == doctest::Approx(0.0125));
  for (int b : mesh.boundary_nodes) CHECK(s.velocity[b].norm() == 0.0);
  CHECK(std::abs(mean(s.pressure)) <= 1e-10);
  CHECK(solver.last_report().relative_residual <= 1e-8);
  const double e0 = energy(mesh, init), e1 = energy(mesh, s);
  CHECK(e1 < e0);

  // Energy decay within 1% of E(0) per step; Dirichlet and gauge every step.
  double prev = e1;
  for (int k = 2; k <= 8; ++k) {
    s = solver.step(s);
    CHECK(s.step == k);
    for (int b : mesh.boundary_nodes) CHECK(s.velocity[b].norm() == 0.0);
    CHECK(std::abs(mean(s.pressure)) <= 1e-10);
    const double e = energy(mesh, s);
    CHECK(e <= prev + 0.01 * e0);
    prev = e;
  }

  // Run-to-run determinism.
  LagrangeGalerkinSolver again(mesh, desk_config());
  const FieldState a = again.step(init);
  const FieldState b = time_step(mesh, init, desk_config());
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    CHECK((a.velocity[n] - b.velocity[n]).norm() == 0.0);
    CHECK(a.pressure[n] == b.pressure[n]);
  }
}

TEST_CASE("curved and per-element-h variants step cleanly") {
  const auto spec = DomainSpec::curved(1.5);
  const Mesh mesh = build_domain_mesh(spec, 4, 4);
  auto cfg = desk_config();
  cfg.per_element_h = true;
  const FieldState init = sample_initial_state(mesh, InitialProfileKind::CurvedFrame, spec, {});
  const FieldState s = time_step(mesh, init, cfg);
  for (int b : mesh.boundary_nodes) CHECK(s.velocity[b].norm() == 0.0);
  CHECK(std::abs(mean(s.pressure)) <= 1e-10);
  CHECK(energy(mesh, s) < energy(mesh, init));
}

TEST_CASE("run_simulation sink cadence") {
  const Mesh mesh = build_straight_mesh(DomainSpec::straight(), 2, 2);
  SolverConfig cfg = desk_config();
  const FieldState init = sample_initial_state(mesh, InitialProfileKind::StraightFrame, DomainSpec::straight(), {});
  std::vector<double> times;
  RunOptions opts;
  opts.sink_every = 8;
  const FieldState last = run_simulation(cfg, mesh, init, [&](const FieldState& s) { times.push_back(s.time); }, opts);
  CHECK(last.step == 240);
  REQUIRE(times.size() == 31);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == doctest::Approx(3.0));
}

TEST_CASE("manufactured one-step consistency and divergence control under refinement") {
  // Oracle: the analytic manufactured solution at t = tau.
  const auto spec = DomainSpec::straight();
  std::vector<double> err, div;
  for (int level = 0; level < 3; ++level) {
    const int n_r = 4 << level;
    const Mesh mesh = build_straight_mesh(spec, n_r, n_r / 2);
    const ManufacturedSolution ms(spec, 0.1);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.tau = 0.02 / (1 << level);
    cfg.T_end = 1.0;
    cfg.forcing = [&ms](const Vec3& x, double t) { return ms.forcing(x, t); };
    FieldState s = FieldState::zeros(mesh.num_nodes());
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) s.velocity[n] = ms.velocity(mesh.nodes[n], 0.0);
    LagrangeGalerkinSolver solver(mesh, cfg);
    s = solver.step(s);
    err.push_back(mass_norm_error(mesh, s, ms, cfg.tau));
    div.push_back(divergence_l2(mesh, s));
  }
  MESSAGE("one-step errors " << err[0] << " " << err[1] << " " << err[2]);
  MESSAGE("divergence norms " << div[0] << " " << div[1] << " " << div[2]);
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  CHECK(div[1] < div[0]);
  CHECK(div[2] < div[1]);
}
