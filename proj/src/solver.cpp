#include "tornado/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tornado {

int SolverConfig::num_steps() const {
  return static_cast<int>(std::floor(T_end / tau + 1e-9));
}

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw InvalidArgument("solver: nu must be positive");
  if (!(tau > 0.0)) throw InvalidArgument("solver: tau must be positive");
  if (!(delta_s0 > 0.0)) throw InvalidArgument("solver: delta_s0 must be positive");
  if (!(T_end >= 0.0)) throw InvalidArgument("solver: T_end must be non-negative");
  if (!(linear_tol > 0.0)) throw InvalidArgument("solver: linear_tol must be positive");
  if (linear_max_iter < 0) throw InvalidArgument("solver: linear_max_iter must be non-negative");
}

DofMap make_dof_map(const Mesh& mesh) {
  DofMap d;
  d.num_nodes = mesh.nodes.size();
  d.velocity.assign(d.num_nodes, -1);
  d.pressure.assign(d.num_nodes, -1);
  const auto wall = mesh.boundary_mask();
  int next = 0;
  // Node-major interleaving keeps each node's unknowns adjacent.
  for (std::size_t n = 0; n < d.num_nodes; ++n) {
    if (!wall[n]) {
      d.velocity[n] = next;
      next += 3;
    }
    if (static_cast<int>(n) != d.pinned_pressure_node) d.pressure[n] = next++;
  }
  d.size = static_cast<std::size_t>(next);
  return d;
}

void LinearSolver::factorize(const SparseMatrix& matrix) {
  matrix_ = &matrix;
  ldlt_.compute(matrix);
  if (ldlt_.info() != Eigen::Success)
    throw SolverError("linear solver: factorization failed (singular system)");
  ready_ = true;
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs, double tol, long max_iter,
                                    LinearSolveReport* report) const {
  if (!ready_) throw SolverError("linear solver: solve called before factorize");
  const double bnorm = rhs.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  LinearSolveReport rep;
  if (bnorm == 0.0) {
    if (report) *report = rep;
    return x;
  }
  if (max_iter <= 0) max_iter = 10 * static_cast<long>(rhs.size());

  Eigen::VectorXd r = rhs;
  double rel = 1.0;
  int stalls = 0;
  while (rel > tol && rep.iterations < max_iter) {
    x += ldlt_.solve(r);
    ++rep.iterations;
    r = rhs - (*matrix_) * x;
    const double next = r.norm() / bnorm;
    stalls = next > 0.5 * rel ? stalls + 1 : 0;
    rel = next;
    if (stalls >= 3) break;
  }
  rep.relative_residual = rel;
  if (report) *report = rep;
  if (!(rel <= tol))
    throw SolverError(fmt::format("linear solver: NoConvergence (relative residual {:.3e} after {} iterations)", rel,
                                  rep.iterations));
  return x;
}

Eigen::VectorXd solve_linear_system(const LinearSystem& system, double tol, long max_iter,
                                    LinearSolveReport* report) {
  LinearSolver solver;
  solver.factorize(system.matrix);
  return solver.solve(system.rhs, tol, max_iter, report);
}

FieldState unpack_solution(const DofMap& dofs, const Eigen::VectorXd& x, int step, double time) {
  FieldState s = FieldState::zeros(dofs.num_nodes, step, time);
  for (std::size_t n = 0; n < dofs.num_nodes; ++n) {
    if (dofs.velocity[n] >= 0) s.velocity[n] = x.segment<3>(dofs.velocity[n]);
    if (dofs.pressure[n] >= 0) s.pressure[n] = x[dofs.pressure[n]];
  }
  if (!s.pressure.empty()) {
    const double mean =
        std::accumulate(s.pressure.begin(), s.pressure.end(), 0.0) / static_cast<double>(s.pressure.size());
    for (double& p : s.pressure) p -= mean;
  }
  return s;
}

LagrangeGalerkinSolver::LagrangeGalerkinSolver(const Mesh& mesh, SolverConfig cfg)
    : mesh_(&mesh), cfg_(std::move(cfg)), dofs_(make_dof_map(mesh)), elements_(p1_elements(mesh)),
      locator_(mesh) {
  cfg_.validate();
  element_h_.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    double h2 = 0.0;
    const auto& v = mesh.tets[t];
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) h2 = std::max(h2, (mesh.nodes[v[i]] - mesh.nodes[v[j]]).squaredNorm());
    element_h_[t] = std::sqrt(h2);
  }
  assemble_matrix();
  linear_.factorize(matrix_);
}

double LagrangeGalerkinSolver::stabilization_h(std::size_t t) const {
  return cfg_.per_element_h ? element_h_[t] : mesh_->h;
}

void LagrangeGalerkinSolver::assemble_matrix() {
  const Mesh& mesh = *mesh_;
  std::vector<Triplet> trip;
  trip.reserve(mesh.tets.size() * 16 * 10);
  const double inv_tau = 1.0 / cfg_.tau;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& v = mesh.tets[t];
    const P1Element& el = elements_[t];
    const double vol = el.volume;
    const double h = stabilization_h(t);
    const double stab = cfg_.delta_s0 * h * h * vol;
    for (int i = 0; i < 4; ++i) {
      const int vi = dofs_.velocity[v[i]];
      const int pi = dofs_.pressure[v[i]];
      for (int j = 0; j < 4; ++j) {
        const int vj = dofs_.velocity[v[j]];
        const int pj = dofs_.pressure[v[j]];
        const double mass = vol / 20.0 * (i == j ? 2.0 : 1.0);
        const double stiff = vol * el.grad[i].dot(el.grad[j]);
        if (vi >= 0 && vj >= 0) {
          const double a = inv_tau * mass + cfg_.nu * stiff;
          for (int c = 0; c < 3; ++c) trip.emplace_back(vi + c, vj + c, a);
        }
        // -(p_i, div w_j) and its transpose: integral of phi_i d_c phi_j.
        if (pi >= 0 && vj >= 0) {
          for (int c = 0; c < 3; ++c) {
            const double b = -0.25 * vol * el.grad[j][c];
            trip.emplace_back(pi, vj + c, b);
            trip.emplace_back(vj + c, pi, b);
          }
        }
        if (pi >= 0 && pj >= 0) trip.emplace_back(pi, pj, -stab * el.grad[i].dot(el.grad[j]));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dofs_.size);
  matrix_.resize(n, n);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
}

Eigen::VectorXd LagrangeGalerkinSolver::assemble_rhs(const FieldState& prev) const {
  const Mesh& mesh = *mesh_;
  if (prev.velocity.size() != mesh.nodes.size())
    throw InvalidArgument("assemble_rhs: state size does not match mesh");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs_.size));
  const double inv_tau = 1.0 / cfg_.tau;
  const double t_next = (prev.step + 1) * cfg_.tau;
  const std::span<const Vec3> vel(prev.velocity);

  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& v = mesh.tets[t];
    bool any_free = false;
    for (int i = 0; i < 4; ++i) any_free = any_free || dofs_.velocity[v[i]] >= 0;
    if (!any_free) continue;

    const double vol = elements_[t].volume;
    for (const auto& q : kTetQuadrature) {
      Vec3 xq = Vec3::Zero();
      Vec3 vq = Vec3::Zero();
      for (int i = 0; i < 4; ++i) {
        xq += q.bary[i] * mesh.nodes[v[i]];
        vq += q.bary[i] * vel[v[i]];
      }
      const Location here{static_cast<int>(t), q.bary};
      const UpstreamPoint foot = trace_upstream(locator_, xq, here, vq, cfg_.tau);
      Vec3 g = inv_tau * locator_.interpolate(foot.location, vel);
      if (cfg_.forcing) g += cfg_.forcing(xq, t_next);
      const double w = q.weight * vol;
      for (int i = 0; i < 4; ++i) {
        const int vi = dofs_.velocity[v[i]];
        if (vi < 0) continue;
        rhs.segment<3>(vi) += (w * q.bary[i]) * g;
      }
    }
  }
  return rhs;
}

LinearSystem LagrangeGalerkinSolver::assemble_step_system(const FieldState& prev) const {
  return LinearSystem{matrix_, assemble_rhs(prev), dofs_};
}

FieldState LagrangeGalerkinSolver::step(const FieldState& prev) {
  const Eigen::VectorXd rhs = assemble_rhs(prev);
  const Eigen::VectorXd x = linear_.solve(rhs, cfg_.linear_tol, cfg_.linear_max_iter, &report_);
  const int k = prev.step + 1;
  return unpack_solution(dofs_, x, k, k * cfg_.tau);
}

LinearSystem assemble_step_system(const Mesh& mesh, const FieldState& prev, const SolverConfig& cfg) {
  LagrangeGalerkinSolver solver(mesh, cfg);
  return solver.assemble_step_system(prev);
}

FieldState time_step(const Mesh& mesh, const FieldState& prev, const SolverConfig& cfg) {
  LagrangeGalerkinSolver solver(mesh, cfg);
  return solver.step(prev);
}

FieldState run_simulation(const SolverConfig& cfg, const Mesh& mesh, const FieldState& initial,
                          const StateSink& sink, const RunOptions& options) {
  if (initial.velocity.size() != mesh.nodes.size() || initial.pressure.size() != mesh.nodes.size())
    throw InvalidArgument("run_simulation: initial state does not match mesh");
  if (options.sink_every < 1) throw InvalidArgument("run_simulation: sink cadence must be >= 1");
  const int n_steps = cfg.num_steps();
  auto on_cadence = [&](const FieldState& s) { return sink && s.step % options.sink_every == 0; };
  if (options.sink_initial && on_cadence(initial)) sink(initial);
  if (initial.step >= n_steps) return initial;

  LagrangeGalerkinSolver solver(mesh, cfg);
  FieldState state = initial;
  while (state.step < n_steps) {
    state = solver.step(state);
    if (on_cadence(state)) sink(state);
  }
  return state;
}

} // namespace tornado
