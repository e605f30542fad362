#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "rodnet/assembly.hpp"
#include "rodnet/model.hpp"

namespace rodnet {

/// Displacement state of one node.
struct NodeState {
    std::string node;
    double ux = 0.0;
    double uy = 0.0;
    double rz = 0.0;
};

/// Reaction at a node holding at least one constrained DOF; components on
/// free DOFs are zero.
struct NodeForces {
    std::string node;
    double fx = 0.0;
    double fy = 0.0;
    double mz = 0.0;
};

struct StaticResult {
    /// Every node of the discretized structure, in numbering order
    /// (declared nodes first, then generated interior nodes).
    std::vector<NodeState> displacements;
    std::vector<double> element_axial_forces;  ///< tension positive
    std::vector<NodeForces> reactions;
};

/// Solves K u = f over the free DOFs, then recovers per-element axial
/// forces and support reactions. Throws RankDeficiencyError (naming the
/// null-space direction) for a mechanism, SolveError when nothing is free.
StaticResult solve_linear_static(const Model& model,
                                 ExecutionMode mode = ExecutionMode::Serial);

struct BucklingResult {
    /// Ascending positive critical multipliers of the reference load. May
    /// hold fewer than requested when the geometric stiffness admits fewer
    /// compressive directions.
    std::vector<double> load_factors;
    Eigen::MatrixXd modes;        ///< column i: mode for load_factors[i], max-norm 1
    double reference_load = 0.0;  ///< Euclidean magnitude of the assembled load
};

/// Linearized buckling: a linear pre-solve under the model's loads yields
/// per-element axial forces, the geometric stiffness is assembled from
/// them, and K v = lambda (-Kg) v is solved for the smallest positive
/// multipliers. Throws NoCompressionError when the reference load puts no
/// element in compression.
BucklingResult solve_buckling(const Model& model, int n_modes = 1,
                              ExecutionMode mode = ExecutionMode::Serial);

struct ModalResult {
    std::vector<double> omegas;  ///< natural circular frequencies, rad/s, ascending
    Eigen::MatrixXd modes;       ///< column i: shape for omegas[i]
    int order = 1;               ///< series truncation order used
};

/// Natural frequencies on the frequency-series dynamic stiffness truncated
/// at w^(2*order). Orders 0 and 1 reduce to the classical K phi = w^2 M phi
/// eigenproblem; higher orders locate the lowest roots of det K(w) = 0 by
/// inertia-count bisection seeded from the order-1 frequencies, refined to
/// 1e-10 relative. Throws BracketingError when a seed interval fails to
/// isolate its root.
ModalResult solve_modal(const Model& model, int n_modes, int order,
                        ExecutionMode mode = ExecutionMode::Serial);

struct PathPoint {
    double load_factor = 0.0;
    std::vector<NodeState> configuration;  ///< displacements, numbering order
    double residual = 0.0;                 ///< final Newton residual (force units)
    int iterations = 0;                    ///< Newton updates taken
    std::vector<double> residual_history;  ///< residual before each update + final
};

struct EquilibriumPath {
    std::vector<PathPoint> points;  ///< accepted states; load factors increase to 1
    bool failed = false;            ///< true when the ramp stopped early
    std::string failure;            ///< diagnostic when failed
};

/// Ramps the model's loads from 0 to full value in `steps` increments,
/// solving the corotational equilibrium at each level by Newton iteration
/// with the analytic tangent. A non-converging increment is halved (up to
/// 10 times) before the path is returned with `failed` set. Convergence:
/// ||f_int - lambda f|| <= max(tol * ||lambda f||, floor), where the floor
/// is a small stiffness-scaled absolute force (1e-14 * max|K| * L) so tiny
/// load levels and zero-load inputs stay well-posed against roundoff in the
/// internal forces. Throws std::invalid_argument on non-positive arguments
/// and SingularTangentError when the tangent is singular at the reference
/// configuration (unconstrained structure).
EquilibriumPath solve_nonlinear_static(const Model& model, int steps, double tol,
                                       int max_iterations,
                                       ExecutionMode mode = ExecutionMode::Serial);

} // namespace rodnet
