#include "tornado/verify.hpp"

#include "tornado/manufactured.hpp"
#include "tornado/pipeline.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>

namespace tornado {

namespace {

double mesh_norm_sq(const SparseMatrix& m, const Eigen::VectorXd& e) { return e.dot(m * e); }

} // namespace

VerifyLevel run_verify_level(const VerifyConfig& verify, const DomainSpec& domain, double delta_s0, int n_r) {
  const auto start = std::chrono::steady_clock::now();
  DomainSpec spec = domain;
  spec.kind = DomainKind::Straight;
  VerifyLevel level;
  level.n_r = n_r;
  level.n_z = std::max(2, static_cast<int>(std::lround(verify.nz_per_nr * n_r)));
  const Mesh mesh = build_straight_mesh(spec, level.n_r, level.n_z);
  level.nodes = mesh.nodes.size();
  level.h = mesh.h;
  level.steps = std::max(1, static_cast<int>(std::ceil(verify.T_end / (verify.tau_over_h * mesh.h) - 1e-9)));
  level.tau = verify.T_end / level.steps;

  const ManufacturedSolution exact(spec, verify.nu, verify.amplitude);
  SolverConfig cfg;
  cfg.nu = verify.nu;
  cfg.tau = level.tau;
  cfg.delta_s0 = delta_s0;
  cfg.T_end = level.steps * level.tau;
  cfg.forcing = [&exact](const Vec3& x, double t) { return exact.forcing(x, t); };

  FieldState state = FieldState::zeros(mesh.nodes.size());
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) state.velocity[n] = exact.velocity(mesh.nodes[n], 0.0);

  LagrangeGalerkinSolver solver(mesh, cfg);
  while (state.step < level.steps) state = solver.step(state);

  const double t = state.step * level.tau;
  const SparseMatrix mass = scalar_mass_matrix(mesh);
  const SparseMatrix stiff = scalar_stiffness_matrix(mesh);
  const SparseMatrix h1 = mass + stiff;
  const std::size_t n = mesh.nodes.size();
  double l2 = 0.0, h1sq = 0.0;
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = state.velocity[i][c] - exact.velocity(mesh.nodes[i], t)[c];
    l2 += mesh_norm_sq(mass, e);
    h1sq += mesh_norm_sq(h1, e);
  }
  level.error_l2 = std::sqrt(l2);
  level.error_h1 = std::sqrt(h1sq);

  // Pressure compared up to its mean (the discrete gauge).
  Eigen::VectorXd ep(n), ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) ep[i] = state.pressure[i] - exact.pressure(mesh.nodes[i], t);
  const double vol = ones.dot(mass * ones);
  ep.array() -= ones.dot(mass * ep) / vol;
  level.error_pressure_l2 = std::sqrt(mesh_norm_sq(mass, ep));

  level.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return level;
}

VerifyReport run_convergence_study(const VerifyConfig& verify, const DomainSpec& domain, double delta_s0) {
  VerifyReport report;
  for (int n_r : verify.levels) report.levels.push_back(run_verify_level(verify, domain, delta_s0, n_r));
  for (std::size_t i = 1; i < report.levels.size(); ++i) {
    const auto& a = report.levels[i - 1];
    const auto& b = report.levels[i];
    const double lh = std::log(a.h / b.h);
    report.order_l2.push_back(std::log(a.error_l2 / b.error_l2) / lh);
    report.order_h1.push_back(std::log(a.error_h1 / b.error_h1) / lh);
  }
  return report;
}

std::string VerifyReport::to_csv() const {
  std::string out = "n_r,n_z,nodes,h,tau,steps,error_l2,error_h1,error_pressure_l2,order_l2,order_h1\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    const std::string ol = i ? fmt::format("{}", order_l2[i - 1]) : "";
    const std::string oh = i ? fmt::format("{}", order_h1[i - 1]) : "";
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", l.n_r, l.n_z, l.nodes, l.h, l.tau, l.steps, l.error_l2,
                       l.error_h1, l.error_pressure_l2, ol, oh);
  }
  return out;
}

std::string VerifyReport::to_text() const {
  std::string out = fmt::format("{:>5} {:>5} {:>8} {:>10} {:>10} {:>6} {:>12} {:>12} {:>8} {:>8}\n", "n_r", "n_z",
                                "nodes", "h", "tau", "steps", "err_L2", "err_H1", "ord_L2", "ord_H1");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    const std::string ol = i ? fmt::format("{:.3f}", order_l2[i - 1]) : "-";
    const std::string oh = i ? fmt::format("{:.3f}", order_h1[i - 1]) : "-";
    out += fmt::format("{:>5} {:>5} {:>8} {:>10.4g} {:>10.4g} {:>6} {:>12.5e} {:>12.5e} {:>8} {:>8}\n", l.n_r, l.n_z,
                       l.nodes, l.h, l.tau, l.steps, l.error_l2, l.error_h1, ol, oh);
  }
  return out;
}

VerifySummary cmd_verify(const RunConfig& config) {
  config.validate();
  VerifySummary s;
  s.report = run_convergence_study(config.verify, config.domain, config.solver.delta_s0);
  const RunLayout layout = run_layout(config);
  s.csv = layout.verify_dir() / "convergence.csv";
  s.text = layout.verify_dir() / "convergence.txt";
  write_file_atomic(s.csv, s.report.to_csv());
  write_file_atomic(s.text, s.report.to_text());
  return s;
}

} // namespace tornado
