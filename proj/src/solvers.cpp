#include "rodnet/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rodnet/errors.hpp"

namespace rodnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Workspace {
    DiscretizedStructure structure;
    DofMap dofs;
};

Workspace prepare(const Model& model) {
    Workspace w;
    w.structure = discretize(model);
    w.dofs = number_dofs(w.structure, model.constraints);
    if (w.dofs.n_free == 0) {
        throw SolveError("no free DOFs: every DOF is constrained");
    }
    return w;
}

const char* dof_label(int d) {
    switch (d) {
        case 0: return "ux";
        case 1: return "uy";
        default: return "rz";
    }
}

/// Human name of a free DOF index ("node 'b1::3' uy").
std::string free_dof_name(const Workspace& w, int free_index) {
    for (std::size_t n = 0; n < w.dofs.index.size(); ++n) {
        for (int d = 0; d < 3; ++d) {
            if (w.dofs.index[n][static_cast<std::size_t>(d)] == free_index) {
                return "node '" + w.structure.nodes[n].name + "' " + dof_label(d);
            }
        }
    }
    return "DOF " + std::to_string(free_index);
}

/// Rethrows a rank-deficiency with the offending direction named in model
/// terms instead of a bare matrix index.
[[noreturn]] void rethrow_rank_deficiency(const RankDeficiencyError& ex,
                                          const Workspace& w, const std::string& stage) {
    int peak = ex.pivot_index;
    double best = 0.0;
    for (std::size_t i = 0; i < ex.null_direction.size(); ++i) {
        if (std::abs(ex.null_direction[i]) > best) {
            best = std::abs(ex.null_direction[i]);
            peak = static_cast<int>(i);
        }
    }
    throw RankDeficiencyError(
        stage + ": stiffness matrix is rank deficient (mechanism or missing support); "
                "the null-space direction peaks at " + free_dof_name(w, peak),
        ex.pivot_index, ex.null_direction);
}

std::vector<NodeState> node_states(const DiscretizedStructure& structure,
                                   const Eigen::VectorXd& u_full) {
    std::vector<NodeState> states;
    states.reserve(structure.nodes.size());
    for (std::size_t n = 0; n < structure.nodes.size(); ++n) {
        states.push_back({structure.nodes[n].name, u_full(3 * static_cast<Eigen::Index>(n)),
                          u_full(3 * static_cast<Eigen::Index>(n) + 1),
                          u_full(3 * static_cast<Eigen::Index>(n) + 2)});
    }
    return states;
}

std::vector<NodeForces> recover_reactions(const Model& model, const Workspace& w,
                                          const Eigen::VectorXd& internal_full) {
    const Eigen::VectorXd applied = applied_loads_full(model, w.structure);
    std::vector<NodeForces> reactions;
    std::vector<bool> seen(w.structure.nodes.size(), false);
    for (const auto& [node, dof] : w.dofs.constrained) {
        const std::size_t n = static_cast<std::size_t>(node);
        if (!seen[n]) {
            seen[n] = true;
            reactions.push_back({w.structure.nodes[n].name, 0.0, 0.0, 0.0});
        }
        NodeForces& r = reactions.back();
        // Constrained pairs arrive node-grouped, so back() is this node.
        const Eigen::Index g = 3 * node + static_cast<int>(dof);
        const double value = internal_full(g) - applied(g);
        switch (dof) {
            case Dof::Ux: r.fx = value; break;
            case Dof::Uy: r.fy = value; break;
            case Dof::Rz: r.mz = value; break;
        }
    }
    return reactions;
}

/// Dynamic stiffness K(w) of the assembled frequency series.
Eigen::MatrixXd dynamic_stiffness(const GlobalSystem& sys, double omega) {
    const double w2 = omega * omega;
    Eigen::MatrixXd k = sys.K.mat() - w2 * sys.M->mat();
    double power = w2;
    for (const SymMatrix& h : sys.higher) {
        power *= w2;
        k += power * h.mat();
    }
    return k;
}

/// Mode shape at a dynamic-stiffness root: the eigenvector of the smallest
/// magnitude eigenvalue of K(w*), M-normalized.
Eigen::VectorXd null_shape(const GlobalSystem& sys, double omega) {
    const Eigen::MatrixXd k = dynamic_stiffness(sys, omega);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
    if (solver.info() != Eigen::Success) {
        throw EigenConvergenceError("modal: eigen solve failed at a root", -1.0);
    }
    Eigen::Index best = 0;
    solver.eigenvalues().cwiseAbs().minCoeff(&best);
    Eigen::VectorXd shape = solver.eigenvectors().col(best);
    const double m_norm = std::sqrt(shape.dot(sys.M->mat() * shape));
    if (m_norm > 0.0) {
        shape /= m_norm;
    }
    return shape;
}

} // namespace

StaticResult solve_linear_static(const Model& model, ExecutionMode mode) {
    const Workspace w = prepare(model);
    AssemblyOptions options;
    options.mode = mode;
    const GlobalSystem sys = assemble(model, w.structure, w.dofs, options);

    Eigen::VectorXd u_free;
    try {
        u_free = solve_spd(sys.K, sys.f);
    } catch (const RankDeficiencyError& ex) {
        rethrow_rank_deficiency(ex, w, "static solve");
    }

    const Eigen::VectorXd u_full = expand_free(w.dofs, u_free);
    StaticResult result;
    result.displacements = node_states(w.structure, u_full);
    result.element_axial_forces = linear_axial_forces(model, w.structure, u_full);
    result.reactions =
        recover_reactions(model, w, linear_internal_force_full(model, w.structure, u_full));
    return result;
}

BucklingResult solve_buckling(const Model& model, int n_modes, ExecutionMode mode) {
    if (n_modes < 1) {
        throw SolveError("buckling: mode count must be at least 1");
    }
    const Workspace w = prepare(model);
    AssemblyOptions options;
    options.mode = mode;
    const GlobalSystem base = assemble(model, w.structure, w.dofs, options);

    Eigen::VectorXd u_free;
    try {
        u_free = solve_spd(base.K, base.f);
    } catch (const RankDeficiencyError& ex) {
        rethrow_rank_deficiency(ex, w, "buckling pre-solve");
    }
    const std::vector<double> axial =
        linear_axial_forces(model, w.structure, expand_free(w.dofs, u_free));

    double deepest_compression = 0.0;  // most negative axial force
    double largest_magnitude = 0.0;
    for (double n : axial) {
        deepest_compression = std::min(deepest_compression, n);
        largest_magnitude = std::max(largest_magnitude, std::abs(n));
    }
    if (!(-deepest_compression > 1e-12 * largest_magnitude) || largest_magnitude == 0.0) {
        throw NoCompressionError(
            "no buckling under tension: the reference load compresses no element");
    }

    AssemblyOptions kg_options;
    kg_options.mode = mode;
    kg_options.axial_forces = &axial;
    const GlobalSystem sys = assemble(model, w.structure, w.dofs, kg_options);

    // K v = lambda (-Kg) v; tension-only directions carry no positive
    // eigenvalue and are deflated inside eig_gsym.
    const SymMatrix minus_kg(-sys.Kg->mat());
    const GeneralizedEigenResult eig =
        eig_gsym(sys.K, minus_kg, n_modes, EigWhich::SmallestPositive);
    if (eig.values.size() == 0) {
        throw NoCompressionError(
            "no buckling under tension: no compressive eigen-direction exists");
    }

    BucklingResult result;
    result.reference_load = sys.f.norm();
    result.load_factors.assign(eig.values.data(), eig.values.data() + eig.values.size());
    result.modes = eig.vectors;
    for (Eigen::Index c = 0; c < result.modes.cols(); ++c) {
        Eigen::Index peak = 0;
        result.modes.col(c).cwiseAbs().maxCoeff(&peak);
        result.modes.col(c) /= result.modes.col(c)(peak);  // max-norm 1, peak +1
    }
    return result;
}

ModalResult solve_modal(const Model& model, int n_modes, int order, ExecutionMode mode) {
    if (n_modes < 1) {
        throw SolveError("modal: mode count must be at least 1");
    }
    if (order < 0) {
        throw SolveError("modal: series order must be non-negative");
    }
    const Workspace w = prepare(model);
    AssemblyOptions options;
    options.mode = mode;
    options.with_mass = true;
    options.series_order = order;
    const GlobalSystem sys = assemble(model, w.structure, w.dofs, options);

    // Classical eigenproblem: exact for order <= 1 and the seed for higher
    // orders. A tiny eigenvalue relative to the stiffness/mass scale is a
    // rigid-body mode; report it as a zero frequency.
    const GeneralizedEigenResult eig = eig_gsym(sys.K, *sys.M, n_modes, EigWhich::Smallest);
    const double rigid_threshold =
        1e-8 * sys.K.mat().cwiseAbs().maxCoeff() / sys.M->mat().cwiseAbs().maxCoeff();

    ModalResult result;
    result.order = order;
    result.omegas.reserve(static_cast<std::size_t>(eig.values.size()));
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double lambda = eig.values(i);
        result.omegas.push_back(lambda <= rigid_threshold ? 0.0 : std::sqrt(lambda));
    }
    result.modes = eig.vectors;
    if (order <= 1) {
        return result;
    }

    // Higher truncation orders: the dynamic stiffness is no longer linear in
    // w^2, so each frequency is a root of det K(w) = 0. The j-th root is
    // bracketed around the order-1 seed (+/- 25%) and pinned by bisection on
    // the negative-inertia count of K(w), which equals the number of roots
    // below w.
    for (std::size_t j = 0; j < result.omegas.size(); ++j) {
        const double seed = result.omegas[j];
        if (seed == 0.0) {
            continue;  // rigid mode: root at w = 0, shape already exact
        }
        double lo = 0.75 * seed;
        double hi = 1.25 * seed;
        const int target = static_cast<int>(j) + 1;
        const int count_lo = negative_inertia(dynamic_stiffness(sys, lo));
        const int count_hi = negative_inertia(dynamic_stiffness(sys, hi));
        if (count_lo >= target || count_hi < target) {
            std::ostringstream pattern;
            pattern << "inertia(" << lo << ")=" << count_lo << ", inertia(" << hi
                    << ")=" << count_hi << ", expected a jump to " << target;
            throw BracketingError(
                "modal: root " + std::to_string(target) +
                    " is not isolated by the seeded interval (series order may be "
                    "introducing spurious roots); " + pattern.str(),
                lo, hi, pattern.str());
        }
        while (hi - lo > 1e-10 * hi) {
            const double mid = 0.5 * (lo + hi);
            if (negative_inertia(dynamic_stiffness(sys, mid)) >= target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        result.omegas[j] = 0.5 * (lo + hi);
        result.modes.col(static_cast<Eigen::Index>(j)) = null_shape(sys, result.omegas[j]);
    }
    return result;
}

namespace {

struct NewtonAttempt {
    bool converged = false;
    bool singular = false;
    Eigen::VectorXd u;
    std::vector<double> history;
    std::string why;
};

NewtonAttempt try_newton(const Model& model, const Workspace& w,
                         const Eigen::VectorXd& start, double target,
                         const Eigen::VectorXd& f_ref, double tolerance,
                         int max_iterations, ExecutionMode mode) {
    NewtonAttempt attempt;
    attempt.u = start;
    for (int iter = 0;; ++iter) {
        InternalState state;
        try {
            state = assemble_internal(model, w.structure, w.dofs,
                                      expand_free(w.dofs, attempt.u), mode);
        } catch (const SingularConfigurationError&) {
            attempt.why = "an element collapsed during the iteration";
            return attempt;
        }
        if (state.max_local_rotation >= kPi / 2.0) {
            attempt.why = "local rotations exceeded pi/2";
            return attempt;
        }
        const Eigen::VectorXd residual = state.force - target * f_ref;
        const double r = residual.norm();
        attempt.history.push_back(r);
        if (r <= tolerance) {
            attempt.converged = true;
            return attempt;
        }
        if (iter >= max_iterations) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", r);
            attempt.why = "no convergence within the iteration budget (residual " +
                          std::string(buf) + ")";
            return attempt;
        }
        Eigen::VectorXd du;
        try {
            du = solve_spd(state.tangent, -residual);
        } catch (const RankDeficiencyError&) {
            attempt.singular = true;
            attempt.why = "the tangent became singular (limit or bifurcation point; "
                          "no branch switching is attempted)";
            return attempt;
        }
        attempt.u += du;
    }
}

} // namespace

EquilibriumPath solve_nonlinear_static(const Model& model, int steps, double tol,
                                       int max_iterations, ExecutionMode mode) {
    if (steps < 1 || max_iterations < 1 || !(tol > 0.0)) {
        throw std::invalid_argument(
            "nonlinear static: steps and maxiter must be >= 1 and tol > 0");
    }
    const Workspace w = prepare(model);
    AssemblyOptions options;
    options.mode = mode;
    const GlobalSystem base = assemble(model, w.structure, w.dofs, options);
    const Eigen::VectorXd f_ref = base.f;
    const double ref_norm = f_ref.norm();

    // Residual floor: a stiffness-scaled force so the convergence test stays
    // well-posed at zero load.
    double min_x = std::numeric_limits<double>::max(), max_x = std::numeric_limits<double>::lowest();
    double min_y = min_x, max_y = max_x;
    for (const DiscretizedNode& n : w.structure.nodes) {
        min_x = std::min(min_x, n.x);
        max_x = std::max(max_x, n.x);
        min_y = std::min(min_y, n.y);
        max_y = std::max(max_y, n.y);
    }
    double characteristic_length = std::hypot(max_x - min_x, max_y - min_y);
    for (const DiscretizedElement& e : w.structure.elements) {
        characteristic_length = std::max(characteristic_length, e.length);
    }
    const double k_scale = base.K.mat().cwiseAbs().maxCoeff();
    const double floor = 1e-14 * k_scale * characteristic_length;

    // The tangent at the reference configuration must be regular; a singular
    // tangent here means the structure is unconstrained or a mechanism.
    Eigen::VectorXd u_free = Eigen::VectorXd::Zero(w.dofs.n_free);
    {
        const InternalState state =
            assemble_internal(model, w.structure, w.dofs, expand_free(w.dofs, u_free), mode);
        try {
            solve_spd(state.tangent, Eigen::VectorXd::Zero(w.dofs.n_free));
        } catch (const RankDeficiencyError& ex) {
            int peak = ex.pivot_index;
            double best = 0.0;
            for (std::size_t i = 0; i < ex.null_direction.size(); ++i) {
                if (std::abs(ex.null_direction[i]) > best) {
                    best = std::abs(ex.null_direction[i]);
                    peak = static_cast<int>(i);
                }
            }
            throw SingularTangentError(
                "nonlinear static: tangent is singular at the reference configuration "
                "(unconstrained structure or mechanism); the free direction peaks at " +
                free_dof_name(w, peak));
        }
    }

    EquilibriumPath path;
    path.points.push_back({0.0, node_states(w.structure, expand_free(w.dofs, u_free)), 0.0,
                           0, {0.0}});

    double lambda = 0.0;
    const double nominal = 1.0 / steps;
    while (lambda < 1.0 - 1e-12) {
        double increment = std::min(nominal, 1.0 - lambda);
        int halvings = 0;
        for (;;) {
            double target = lambda + increment;
            if (target > 1.0 - 1e-12) {
                target = 1.0;
            }
            const double tolerance = std::max(tol * target * ref_norm, floor);
            NewtonAttempt attempt = try_newton(model, w, u_free, target, f_ref, tolerance,
                                               max_iterations, mode);
            if (attempt.converged) {
                u_free = attempt.u;
                lambda = target;
                PathPoint point;
                point.load_factor = lambda;
                point.configuration = node_states(w.structure, expand_free(w.dofs, u_free));
                point.residual = attempt.history.back();
                point.iterations = static_cast<int>(attempt.history.size()) - 1;
                point.residual_history = std::move(attempt.history);
                path.points.push_back(std::move(point));
                break;
            }
            if (++halvings > 10) {
                path.failed = true;
                path.failure = "load step toward factor " + std::to_string(target) +
                               " failed after 10 increment halvings: " + attempt.why;
                return path;
            }
            increment *= 0.5;
        }
    }
    return path;
}

} // namespace rodnet
