#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rodnet/linalg.hpp"
#include "rodnet/model.hpp"

namespace rodnet {

struct DiscretizedNode {
    std::string name;
    double x = 0.0;
    double y = 0.0;
};

/// One rod element produced by subdividing a beam.
struct DiscretizedElement {
    int node_a = -1;    ///< index into DiscretizedStructure::nodes
    int node_b = -1;
    int material = -1;  ///< index into Model::materials
    int section = -1;   ///< index into Model::sections
    double length = 0.0;  ///< undeformed length L0
    double angle = 0.0;   ///< undeformed chord angle beta0
};

/// Model geometry expanded to element granularity. The model's nodes come
/// first in declaration order; generated interior nodes (named
/// "<beam>::<i>") follow, grouped per beam.
struct DiscretizedStructure {
    std::vector<DiscretizedNode> nodes;
    std::vector<DiscretizedElement> elements;
    int original_node_count = 0;

    int node_index(const std::string& name) const;  ///< -1 when absent
};

/// Splits every beam with `subdivisions` = k into k equal-length elements
/// with equally spaced interior nodes along the beam chord.
DiscretizedStructure discretize(const Model& model);

/// Global numbering of the free DOFs: nodes in declaration order, DOFs in
/// (ux, uy, rz) order within a node; constrained DOFs are excluded and the
/// free indices are dense in [0, n_free).
struct DofMap {
    /// index[node][dof]: global free index, or -1 when constrained.
    std::vector<std::array<int, 3>> index;
    int n_free = 0;
    /// Constrained (node, dof) pairs in numbering order.
    std::vector<std::pair<int, Dof>> constrained;
};

DofMap number_dofs(const DiscretizedStructure& structure,
                   const std::vector<Constraint>& constraints);

/// Element-matrix evaluation strategy. Both modes produce bit-identical
/// results: per-element matrices may be computed on multiple threads, but
/// they land in per-element slots and are scattered into the global system
/// serially in element order.
enum class ExecutionMode { Serial, Parallel };

struct AssemblyOptions {
    /// Truncation order m of the frequency series (ignored unless
    /// with_mass; mass requires m >= 1 and is promoted if needed).
    int series_order = 0;
    bool with_mass = false;
    /// Per-element axial forces (tension positive); presence requests the
    /// geometric stiffness.
    const std::vector<double>* axial_forces = nullptr;
    ExecutionMode mode = ExecutionMode::Serial;
};

/// Global matrices over the free DOFs, with constrained rows/columns
/// eliminated (homogeneous constraints), plus the applied load vector.
struct GlobalSystem {
    SymMatrix K;
    std::optional<SymMatrix> M;
    std::vector<SymMatrix> higher;  ///< frequency-series terms H_k, k = 2..m
    std::optional<SymMatrix> Kg;
    Eigen::VectorXd f;
};

GlobalSystem assemble(const Model& model, const DiscretizedStructure& structure,
                      const DofMap& dofs, const AssemblyOptions& options = {});

/// Internal forces and consistent tangent of the corotationally deformed
/// structure at the displacement state `u_full` (3 entries per node,
/// constrained entries zero).
struct InternalState {
    Eigen::VectorXd force;       ///< internal forces on the free DOFs
    SymMatrix tangent;           ///< consistent tangent over the free DOFs
    Eigen::VectorXd force_full;  ///< internal forces on all DOFs (3 per node)
    std::vector<double> axial_forces;   ///< per element, tension positive
    double max_local_rotation = 0.0;    ///< max |theta_bar| over all elements
};

InternalState assemble_internal(const Model& model,
                                const DiscretizedStructure& structure,
                                const DofMap& dofs, const Eigen::VectorXd& u_full,
                                ExecutionMode mode = ExecutionMode::Serial);

/// Scatters a free-DOF vector to the full 3-per-node layout (zeros at
/// constrained DOFs).
Eigen::VectorXd expand_free(const DofMap& dofs, const Eigen::VectorXd& u_free);

/// Applied nodal loads over all DOFs (3 per node), constrained or not.
Eigen::VectorXd applied_loads_full(const Model& model,
                                   const DiscretizedStructure& structure);

/// K_e * u_e summed over elements on the full DOF layout — the linear
/// internal force, used to recover reactions at constrained DOFs.
Eigen::VectorXd linear_internal_force_full(const Model& model,
                                           const DiscretizedStructure& structure,
                                           const Eigen::VectorXd& u_full);

/// Per-element axial force from the linearized kinematics:
/// N = EA/L0 * (relative endpoint displacement projected on the undeformed
/// axis). Tension positive.
std::vector<double> linear_axial_forces(const Model& model,
                                        const DiscretizedStructure& structure,
                                        const Eigen::VectorXd& u_full);

} // namespace rodnet
