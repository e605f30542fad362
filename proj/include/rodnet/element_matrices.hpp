#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rodnet/model.hpp"
#include "rodnet/series.hpp"

namespace rodnet {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Local element DOF order used by every 6x6 matrix in this module:
/// (ux1, uy1, rz1, ux2, uy2, rz2). Transverse interpolants act on indices
/// {1, 2, 4, 5}, axial interpolants on {0, 3}.
inline constexpr int kTransverseDofs[4] = {1, 2, 4, 5};
inline constexpr int kAxialDofs[2] = {0, 3};

/// Frequency-series element matrices: the dynamic stiffness of one rod
/// element expanded in even powers of the circular frequency,
///
///   K(w) = K0 - w^2 M0 + sum_{k >= 2} w^(2k) H_k,
///
/// truncated at w^(2m). K0 is the classical static stiffness and M0 the
/// classical consistent mass; both fall out of the series rather than being
/// tabulated.
struct ElementMatrixSeries {
    Matrix6 K0 = Matrix6::Zero();
    Matrix6 M0 = Matrix6::Zero();
    std::vector<Matrix6> higher;  ///< H_k for w^(2k), k = 2..m (empty if m <= 1)
    int order = 0;                ///< truncation order m
    /// Largest |H - H^T| entry removed by symmetrizing any series term,
    /// relative to that term's magnitude (diagnostic; ~machine epsilon).
    double max_symmetrization_correction = 0.0;

    /// K(w) truncated at w^(2*order).
    Matrix6 evaluate(double omega) const;
};

/// Projects the series shape functions onto themselves (virtual-work
/// integrals, evaluated in closed form): bending energy EI * a''a''^T plus
/// axial energy EA * a'a'^T for the stiffness-like terms, kinetic energy
/// rho A * a a^T for the inertia-like terms, collected by power of w.
ElementMatrixSeries element_matrix_series(const SeriesShapeFunctions& shapes,
                                          const Material& material,
                                          const Section& section);

/// Consistent geometric stiffness of one element, linear in the axial force
/// N (tension positive). `per_unit_force` is the matrix for N = 1, built
/// from the exact integrals of the cubic interpolant slopes.
struct GeometricStiffness {
    Matrix6 per_unit_force = Matrix6::Zero();
    double axial_force = 0.0;  ///< N (tension positive)

    Matrix6 matrix() const { return axial_force * per_unit_force; }
};

/// Kg from the slope products of the cubic transverse interpolants:
/// integral of N * a_0y' a_0y'^T over the element. Axial DOFs carry no
/// geometric stiffness. Throws std::invalid_argument when L <= 0.
GeometricStiffness geometric_stiffness(double N, double L);

} // namespace rodnet
