#include "rodnet/assembly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "rodnet/corotational.hpp"
#include "rodnet/element_matrices.hpp"
#include "rodnet/errors.hpp"
#include "rodnet/series.hpp"

namespace rodnet {

namespace {

/// Local-to-global rotation for the DOF order (ux, uy, rz) x 2 nodes.
Matrix6 rotation_matrix(double beta) {
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    Matrix6 t = Matrix6::Zero();
    for (int n = 0; n < 2; ++n) {
        const int o = 3 * n;
        t(o + 0, o + 0) = c;
        t(o + 0, o + 1) = -s;
        t(o + 1, o + 0) = s;
        t(o + 1, o + 1) = c;
        t(o + 2, o + 2) = 1.0;
    }
    return t;
}

Matrix6 rotate_symmetric(const Matrix6& local, const Matrix6& t) {
    const Matrix6 g = t * local * t.transpose();
    return 0.5 * (g + g.transpose());
}

/// Global DOF indices (or -1) of an element's 6 local DOFs.
std::array<int, 6> element_dofs(const DofMap& dofs, const DiscretizedElement& e) {
    std::array<int, 6> g{};
    for (int d = 0; d < 3; ++d) {
        g[static_cast<std::size_t>(d)] = dofs.index[static_cast<std::size_t>(e.node_a)][static_cast<std::size_t>(d)];
        g[static_cast<std::size_t>(d + 3)] = dofs.index[static_cast<std::size_t>(e.node_b)][static_cast<std::size_t>(d)];
    }
    return g;
}

void scatter(Eigen::MatrixXd& target, const Matrix6& contribution,
             const std::array<int, 6>& g) {
    for (int i = 0; i < 6; ++i) {
        if (g[static_cast<std::size_t>(i)] < 0) {
            continue;
        }
        for (int j = 0; j < 6; ++j) {
            if (g[static_cast<std::size_t>(j)] < 0) {
                continue;
            }
            target(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]) +=
                contribution(i, j);
        }
    }
}

/// Captures the first failure raised inside a parallel element loop so it
/// can be rethrown after the loop (exceptions must not cross the region).
struct DeferredError {
    bool failed = false;
    std::string message;

    void record(const std::exception& ex) {
        if (!failed) {
            failed = true;
            message = ex.what();
        }
    }
};

} // namespace

int DiscretizedStructure::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

DiscretizedStructure discretize(const Model& model) {
    DiscretizedStructure out;
    out.nodes.reserve(model.nodes.size());
    for (const Node& n : model.nodes) {
        out.nodes.push_back({n.name, n.x, n.y});
    }
    out.original_node_count = static_cast<int>(out.nodes.size());

    for (const Beam& beam : model.beams) {
        const int a = model.node_index(beam.node_a);
        const int b = model.node_index(beam.node_b);
        assert(a >= 0 && b >= 0);
        const Node& na = model.nodes[static_cast<std::size_t>(a)];
        const Node& nb = model.nodes[static_cast<std::size_t>(b)];

        int material = -1;
        for (std::size_t i = 0; i < model.materials.size(); ++i) {
            if (model.materials[i].name == beam.material) {
                material = static_cast<int>(i);
            }
        }
        int section = -1;
        for (std::size_t i = 0; i < model.sections.size(); ++i) {
            if (model.sections[i].name == beam.section) {
                section = static_cast<int>(i);
            }
        }
        assert(material >= 0 && section >= 0);

        const int k = beam.subdivisions;
        const double chord = std::hypot(nb.x - na.x, nb.y - na.y);
        // All sub-elements share the parent chord's direction and an exact
        // equal split of its length, so a refined mesh is bit-uniform.
        const double beta0 = std::atan2(nb.y - na.y, nb.x - na.x);
        const double length = chord / k;

        int previous = a;
        for (int i = 1; i <= k; ++i) {
            int next;
            if (i == k) {
                next = b;
            } else {
                const double f = static_cast<double>(i) / k;
                out.nodes.push_back({beam.name + "::" + std::to_string(i),
                                     na.x + f * (nb.x - na.x), na.y + f * (nb.y - na.y)});
                next = static_cast<int>(out.nodes.size()) - 1;
            }
            out.elements.push_back({previous, next, material, section, length, beta0});
            previous = next;
        }
    }
    return out;
}

DofMap number_dofs(const DiscretizedStructure& structure,
                   const std::vector<Constraint>& constraints) {
    DofMap map;
    const std::size_t n = structure.nodes.size();
    std::vector<std::array<bool, 3>> fixed(n, {false, false, false});
    for (const Constraint& c : constraints) {
        const int idx = structure.node_index(c.node);
        assert(idx >= 0);
        for (int d = 0; d < 3; ++d) {
            fixed[static_cast<std::size_t>(idx)][static_cast<std::size_t>(d)] =
                fixed[static_cast<std::size_t>(idx)][static_cast<std::size_t>(d)] ||
                c.fixed[static_cast<std::size_t>(d)];
        }
    }

    map.index.assign(n, {-1, -1, -1});
    for (std::size_t i = 0; i < n; ++i) {
        for (int d = 0; d < 3; ++d) {
            if (fixed[i][static_cast<std::size_t>(d)]) {
                map.constrained.emplace_back(static_cast<int>(i), static_cast<Dof>(d));
            } else {
                map.index[i][static_cast<std::size_t>(d)] = map.n_free++;
            }
        }
    }
    return map;
}

GlobalSystem assemble(const Model& model, const DiscretizedStructure& structure,
                      const DofMap& dofs, const AssemblyOptions& options) {
    const std::size_t n_elements = structure.elements.size();
    const int order = options.with_mass ? std::max(options.series_order, 1)
                                        : options.series_order;
    if (options.axial_forces != nullptr) {
        assert(options.axial_forces->size() == n_elements);
    }

    struct Slot {
        Matrix6 k = Matrix6::Zero();
        Matrix6 m = Matrix6::Zero();
        Matrix6 kg = Matrix6::Zero();
        std::vector<Matrix6> higher;
    };
    std::vector<Slot> slots(n_elements);
    DeferredError error;
    const bool parallel = options.mode == ExecutionMode::Parallel;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(n_elements); ++e) {
        try {
            const DiscretizedElement& el = structure.elements[static_cast<std::size_t>(e)];
            const Material& mat = model.materials[static_cast<std::size_t>(el.material)];
            const Section& sec = model.sections[static_cast<std::size_t>(el.section)];
            const SeriesShapeFunctions shapes =
                build_series_shape_functions(mat, sec, el.length, order);
            const ElementMatrixSeries series = element_matrix_series(shapes, mat, sec);
            const Matrix6 t = rotation_matrix(el.angle);

            Slot& slot = slots[static_cast<std::size_t>(e)];
            slot.k = rotate_symmetric(series.K0, t);
            if (options.with_mass) {
                slot.m = rotate_symmetric(series.M0, t);
                slot.higher.reserve(series.higher.size());
                for (const Matrix6& h : series.higher) {
                    slot.higher.push_back(rotate_symmetric(h, t));
                }
            }
            if (options.axial_forces != nullptr) {
                const double axial = (*options.axial_forces)[static_cast<std::size_t>(e)];
                slot.kg = rotate_symmetric(geometric_stiffness(axial, el.length).matrix(), t);
            }
        } catch (const std::exception& ex) {
#ifdef _OPENMP
#pragma omp critical
#endif
            error.record(ex);
        }
    }
    if (error.failed) {
        throw SolveError("assembly: " + error.message);
    }

    const int n = dofs.n_free;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(options.with_mass ? n : 0,
                                              options.with_mass ? n : 0);
    Eigen::MatrixXd kg = Eigen::MatrixXd::Zero(options.axial_forces != nullptr ? n : 0,
                                               options.axial_forces != nullptr ? n : 0);
    const std::size_t n_higher = options.with_mass && order >= 2
                                     ? static_cast<std::size_t>(order) - 1
                                     : 0;
    std::vector<Eigen::MatrixXd> higher(n_higher, Eigen::MatrixXd::Zero(n, n));

    for (std::size_t e = 0; e < n_elements; ++e) {
        const std::array<int, 6> g = element_dofs(dofs, structure.elements[e]);
        const Slot& slot = slots[e];
        scatter(k, slot.k, g);
        if (options.with_mass) {
            scatter(m, slot.m, g);
            for (std::size_t h = 0; h < slot.higher.size(); ++h) {
                scatter(higher[h], slot.higher[h], g);
            }
        }
        if (options.axial_forces != nullptr) {
            scatter(kg, slot.kg, g);
        }
    }

    GlobalSystem system;
    system.K = SymMatrix(k);
    if (options.with_mass) {
        system.M = SymMatrix(m);
        for (const Eigen::MatrixXd& h : higher) {
            system.higher.emplace_back(h);
        }
    }
    if (options.axial_forces != nullptr) {
        system.Kg = SymMatrix(kg);
    }

    system.f = Eigen::VectorXd::Zero(n);
    for (const Load& load : model.loads) {
        const int node = structure.node_index(load.node);
        assert(node >= 0);
        const double components[3] = {load.fx, load.fy, load.mz};
        for (int d = 0; d < 3; ++d) {
            const int idx = dofs.index[static_cast<std::size_t>(node)][static_cast<std::size_t>(d)];
            if (idx >= 0) {
                system.f(idx) += components[d];
            }
        }
    }
    return system;
}

InternalState assemble_internal(const Model& model,
                                const DiscretizedStructure& structure,
                                const DofMap& dofs, const Eigen::VectorXd& u_full,
                                ExecutionMode mode) {
    const std::size_t n_elements = structure.elements.size();
    assert(u_full.size() == static_cast<Eigen::Index>(3 * structure.nodes.size()));

    struct Slot {
        Vector6 force = Vector6::Zero();
        Matrix6 tangent = Matrix6::Zero();
        double axial = 0.0;
        double rotation = 0.0;
    };
    std::vector<Slot> slots(n_elements);
    DeferredError error;
    const bool parallel = mode == ExecutionMode::Parallel;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(n_elements); ++e) {
        try {
            const DiscretizedElement& el = structure.elements[static_cast<std::size_t>(e)];
            const Material& mat = model.materials[static_cast<std::size_t>(el.material)];
            const Section& sec = model.sections[static_cast<std::size_t>(el.section)];
            const DiscretizedNode& na = structure.nodes[static_cast<std::size_t>(el.node_a)];
            const DiscretizedNode& nb = structure.nodes[static_cast<std::size_t>(el.node_b)];

            Vector6 current;
            current << na.x + u_full(3 * el.node_a + 0), na.y + u_full(3 * el.node_a + 1),
                u_full(3 * el.node_a + 2), nb.x + u_full(3 * el.node_b + 0),
                nb.y + u_full(3 * el.node_b + 1), u_full(3 * el.node_b + 2);

            const CorotationalState state =
                corotational_frame(current, el.length, el.angle);
            const ElementForces forces = internal_forces_and_tangent(state, mat, sec);

            Slot& slot = slots[static_cast<std::size_t>(e)];
            slot.force = forces.force;
            slot.tangent = forces.tangent;
            slot.axial = forces.axial_force;
            slot.rotation = std::max(std::abs(state.theta1_bar), std::abs(state.theta2_bar));
        } catch (const std::exception& ex) {
#ifdef _OPENMP
#pragma omp critical
#endif
            error.record(ex);
        }
    }
    if (error.failed) {
        throw SingularConfigurationError(error.message);
    }

    InternalState out;
    out.force = Eigen::VectorXd::Zero(dofs.n_free);
    out.force_full = Eigen::VectorXd::Zero(u_full.size());
    out.axial_forces.resize(n_elements);
    Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(dofs.n_free, dofs.n_free);

    for (std::size_t e = 0; e < n_elements; ++e) {
        const DiscretizedElement& el = structure.elements[e];
        const std::array<int, 6> g = element_dofs(dofs, el);
        const Slot& slot = slots[e];
        scatter(tangent, slot.tangent, g);
        const int full[6] = {3 * el.node_a,     3 * el.node_a + 1, 3 * el.node_a + 2,
                             3 * el.node_b,     3 * el.node_b + 1, 3 * el.node_b + 2};
        for (int i = 0; i < 6; ++i) {
            out.force_full(full[i]) += slot.force(i);
            if (g[static_cast<std::size_t>(i)] >= 0) {
                out.force(g[static_cast<std::size_t>(i)]) += slot.force(i);
            }
        }
        out.axial_forces[e] = slot.axial;
        out.max_local_rotation = std::max(out.max_local_rotation, slot.rotation);
    }
    out.tangent = SymMatrix(tangent);
    return out;
}

Eigen::VectorXd expand_free(const DofMap& dofs, const Eigen::VectorXd& u_free) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(dofs.index.size()));
    for (std::size_t i = 0; i < dofs.index.size(); ++i) {
        for (int d = 0; d < 3; ++d) {
            const int idx = dofs.index[i][static_cast<std::size_t>(d)];
            if (idx >= 0) {
                full(3 * static_cast<Eigen::Index>(i) + d) = u_free(idx);
            }
        }
    }
    return full;
}

Eigen::VectorXd applied_loads_full(const Model& model,
                                   const DiscretizedStructure& structure) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(structure.nodes.size()));
    for (const Load& load : model.loads) {
        const int node = structure.node_index(load.node);
        assert(node >= 0);
        f(3 * node + 0) += load.fx;
        f(3 * node + 1) += load.fy;
        f(3 * node + 2) += load.mz;
    }
    return f;
}

Eigen::VectorXd linear_internal_force_full(const Model& model,
                                           const DiscretizedStructure& structure,
                                           const Eigen::VectorXd& u_full) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(u_full.size());
    for (const DiscretizedElement& el : structure.elements) {
        const Material& mat = model.materials[static_cast<std::size_t>(el.material)];
        const Section& sec = model.sections[static_cast<std::size_t>(el.section)];
        const SeriesShapeFunctions shapes =
            build_series_shape_functions(mat, sec, el.length, 0);
        const Matrix6 k = rotate_symmetric(element_matrix_series(shapes, mat, sec).K0,
                                           rotation_matrix(el.angle));
        Vector6 u;
        u << u_full(3 * el.node_a + 0), u_full(3 * el.node_a + 1), u_full(3 * el.node_a + 2),
            u_full(3 * el.node_b + 0), u_full(3 * el.node_b + 1), u_full(3 * el.node_b + 2);
        const Vector6 fe = k * u;
        const int full[6] = {3 * el.node_a,     3 * el.node_a + 1, 3 * el.node_a + 2,
                             3 * el.node_b,     3 * el.node_b + 1, 3 * el.node_b + 2};
        for (int i = 0; i < 6; ++i) {
            f(full[i]) += fe(i);
        }
    }
    return f;
}

std::vector<double> linear_axial_forces(const Model& model,
                                        const DiscretizedStructure& structure,
                                        const Eigen::VectorXd& u_full) {
    std::vector<double> axial(structure.elements.size());
    for (std::size_t e = 0; e < structure.elements.size(); ++e) {
        const DiscretizedElement& el = structure.elements[e];
        const Material& mat = model.materials[static_cast<std::size_t>(el.material)];
        const Section& sec = model.sections[static_cast<std::size_t>(el.section)];
        const double c = std::cos(el.angle);
        const double s = std::sin(el.angle);
        const double du = u_full(3 * el.node_b + 0) - u_full(3 * el.node_a + 0);
        const double dv = u_full(3 * el.node_b + 1) - u_full(3 * el.node_a + 1);
        axial[e] = mat.E * sec.A / el.length * (du * c + dv * s);
    }
    return axial;
}

} // namespace rodnet
