#pragma once

#include <Eigen/Dense>

#include "rodnet/element_matrices.hpp"
#include "rodnet/model.hpp"

namespace rodnet {

/// Kinematics of one rod element in the corotational split: the element's
/// rigid motion is carried by the chord frame (the unit chord plays the role
/// of the axial director, its in-plane normal the transverse one), and only
/// the small local deformations (u_bar, theta1_bar, theta2_bar) measured in
/// that frame enter the constitutive law.
struct CorotationalState {
    /// Current endpoint data in the inertial frame:
    /// (x1, y1, phi1, x2, y2, phi2), where phi are total end rotations
    /// measured from the undeformed configuration.
    Vector6 dofs = Vector6::Zero();
    double L0 = 0.0;     ///< undeformed length
    double beta0 = 0.0;  ///< undeformed chord angle

    // Derived chord frame.
    double Ln = 0.0;        ///< current chord length
    double beta = 0.0;      ///< current chord angle
    double cos_beta = 1.0;  ///< chord direction, x component
    double sin_beta = 0.0;  ///< chord direction, y component

    // Local deformations.
    double u_bar = 0.0;       ///< chord elongation Ln - L0
    double theta1_bar = 0.0;  ///< end 1 rotation relative to the chord, in (-pi, pi]
    double theta2_bar = 0.0;  ///< end 2 rotation relative to the chord, in (-pi, pi]
};

/// Forces of one element at a corotational state, in the inertial frame.
struct ElementForces {
    Vector6 force = Vector6::Zero();     ///< internal (resisting) nodal forces
    Matrix6 tangent = Matrix6::Zero();   ///< consistent tangent stiffness, symmetric
    double axial_force = 0.0;            ///< N (tension positive)
};

/// Builds the chord frame and local deformations from current endpoint data.
/// The end rotations relative to the rotated chord are wrapped to (-pi, pi].
/// Throws SingularConfigurationError when the endpoints coincide
/// (Ln <= 1e-12 * L0).
CorotationalState corotational_frame(const Vector6& dofs, double L0, double beta0);

/// Internal force vector and consistent tangent. The local law is linear:
///   N  = EA/L0 * u_bar,
///   M1 = EI/L0 * (4 theta1_bar + 2 theta2_bar),
///   M2 = EI/L0 * (2 theta1_bar + 4 theta2_bar);
/// the global force is B^T (N, M1, M2) with B the exact variation of the
/// local deformations, and the tangent adds the analytic variation of B.
ElementForces internal_forces_and_tangent(const CorotationalState& state,
                                          const Material& material,
                                          const Section& section);

} // namespace rodnet
