#pragma once

#include "tornado/fem.hpp"
#include "tornado/locate.hpp"
#include "tornado/state.hpp"

#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>

namespace tornado {

using ForcingFn = std::function<Vec3(const Vec3& x, double t)>;

struct SolverConfig {
  double nu = 1e-4;       // 1/Re
  double tau = 1.25e-2;
  double delta_s0 = 1.0;
  double T_end = 3.0;
  double linear_tol = 1e-8;
  long linear_max_iter = 0; // 0 selects 10 * system size
  bool per_element_h = false;
  ForcingFn forcing;        // verification only

  /// floor(T_end / tau), robust to the representation error of tau.
  int num_steps() const;
  void validate() const;
};

/// Unknown numbering of the reduced system. Boundary velocity DOFs are
/// eliminated (homogeneous Dirichlet) and one pressure DOF is pinned to fix
/// the constant mode; the pressure is shifted to nodal mean zero afterwards.
struct DofMap {
  std::size_t num_nodes = 0;
  std::vector<int> velocity; // first of three consecutive unknowns, -1 on the wall
  std::vector<int> pressure; // -1 for the pinned node
  int pinned_pressure_node = 0;
  std::size_t size = 0;

  std::size_t full_size() const { return 4 * num_nodes; }
};

DofMap make_dof_map(const Mesh& mesh);

struct LinearSystem {
  SparseMatrix matrix; // symmetric quasi-definite [A -B^T; -B -C]
  Eigen::VectorXd rhs;
  DofMap dofs;
};

struct LinearSolveReport {
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Sparse LDL^T factorization with iterative refinement until the relative
/// residual reaches the tolerance.
class LinearSolver {
public:
  void factorize(const SparseMatrix& matrix);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double tol, long max_iter,
                        LinearSolveReport* report = nullptr) const;
  bool ready() const { return ready_; }

private:
  const SparseMatrix* matrix_ = nullptr;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt_;
  bool ready_ = false;
};

Eigen::VectorXd solve_linear_system(const LinearSystem& system, double tol = 1e-8, long max_iter = 0,
                                    LinearSolveReport* report = nullptr);

/// Scatters a reduced solution into a field state: wall velocities are zero
/// and the pressure has nodal mean zero.
FieldState unpack_solution(const DofMap& dofs, const Eigen::VectorXd& x, int step, double time);

/// Pressure-stabilized Lagrange-Galerkin stepper on P1/P1 tets. The system
/// matrix does not depend on the time level, so it is factorized once.
class LagrangeGalerkinSolver {
public:
  LagrangeGalerkinSolver(const Mesh& mesh, SolverConfig cfg);
  LagrangeGalerkinSolver(const LagrangeGalerkinSolver&) = delete;
  LagrangeGalerkinSolver& operator=(const LagrangeGalerkinSolver&) = delete;

  const Mesh& mesh() const { return *mesh_; }
  const SolverConfig& config() const { return cfg_; }
  const DofMap& dofs() const { return dofs_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const TetLocator& locator() const { return locator_; }
  const std::vector<P1Element>& elements() const { return elements_; }

  /// h used in the stabilization term for tet t.
  double stabilization_h(std::size_t t) const;

  /// Right-hand side for the step prev -> prev.step + 1.
  Eigen::VectorXd assemble_rhs(const FieldState& prev) const;
  LinearSystem assemble_step_system(const FieldState& prev) const;

  FieldState step(const FieldState& prev);
  const LinearSolveReport& last_report() const { return report_; }

private:
  const Mesh* mesh_;
  SolverConfig cfg_;
  DofMap dofs_;
  std::vector<P1Element> elements_;
  std::vector<double> element_h_;
  TetLocator locator_;
  SparseMatrix matrix_;
  LinearSolver linear_;
  LinearSolveReport report_;

  void assemble_matrix();
};

LinearSystem assemble_step_system(const Mesh& mesh, const FieldState& prev, const SolverConfig& cfg);
FieldState time_step(const Mesh& mesh, const FieldState& prev, const SolverConfig& cfg);

using StateSink = std::function<void(const FieldState&)>;

struct RunOptions {
  int sink_every = 1;        // steps between sink calls
  bool sink_initial = true;  // call the sink on the initial state when on cadence
};

/// Advances from initial.step to cfg.num_steps(), calling the sink on every
/// state whose step index is a multiple of sink_every.
FieldState run_simulation(const SolverConfig& cfg, const Mesh& mesh, const FieldState& initial,
                          const StateSink& sink, const RunOptions& options = {});

} // namespace tornado
