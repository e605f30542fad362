#include "rodnet/corotational.hpp"

#include <cmath>

#include "rodnet/errors.hpp"

namespace rodnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

} // namespace

CorotationalState corotational_frame(const Vector6& dofs, double L0, double beta0) {
    CorotationalState state;
    state.dofs = dofs;
    state.L0 = L0;
    state.beta0 = beta0;

    const double dx = dofs(3) - dofs(0);
    const double dy = dofs(4) - dofs(1);
    state.Ln = std::hypot(dx, dy);
    if (!(state.Ln > 1e-12 * L0)) {
        throw SingularConfigurationError(
            "corotational frame: element endpoints coincide (chord length " +
            std::to_string(state.Ln) + ")");
    }
    state.beta = std::atan2(dy, dx);
    state.cos_beta = dx / state.Ln;
    state.sin_beta = dy / state.Ln;

    state.u_bar = state.Ln - L0;
    const double chord_rotation = state.beta - beta0;
    state.theta1_bar = wrap_angle(dofs(2) - chord_rotation);
    state.theta2_bar = wrap_angle(dofs(5) - chord_rotation);
    return state;
}

ElementForces internal_forces_and_tangent(const CorotationalState& state,
                                          const Material& material,
                                          const Section& section) {
    const double L0 = state.L0;
    const double Ln = state.Ln;
    const double c = state.cos_beta;
    const double s = state.sin_beta;

    const double EA = material.E * section.A;
    const double EI = material.E * section.I;

    const double N = EA / L0 * state.u_bar;
    const double M1 = EI / L0 * (4.0 * state.theta1_bar + 2.0 * state.theta2_bar);
    const double M2 = EI / L0 * (2.0 * state.theta1_bar + 4.0 * state.theta2_bar);

    // Variations of the local deformations: d(u_bar) = r . d(dofs) and
    // d(beta) = z . d(dofs) / Ln, so d(theta_i_bar) = d(phi_i) - d(beta).
    Vector6 r, z;
    r << -c, -s, 0.0, c, s, 0.0;
    z << s, -c, 0.0, -s, c, 0.0;

    Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
    B.row(0) = r.transpose();
    B.row(1) = -z.transpose() / Ln;
    B.row(1)(2) += 1.0;
    B.row(2) = -z.transpose() / Ln;
    B.row(2)(5) += 1.0;

    ElementForces out;
    out.axial_force = N;
    out.force = B.transpose() * Eigen::Vector3d(N, M1, M2);

    Eigen::Matrix3d local;
    local << EA / L0, 0.0, 0.0,
             0.0, 4.0 * EI / L0, 2.0 * EI / L0,
             0.0, 2.0 * EI / L0, 4.0 * EI / L0;

    // Material part plus the geometric part from the variation of B:
    // varying r rotates it through z (weight N / Ln), varying z feeds both
    // moment rows (weight (M1 + M2) / Ln^2).
    Matrix6 tangent = B.transpose() * local * B;
    tangent += N / Ln * (z * z.transpose());
    tangent += (M1 + M2) / (Ln * Ln) * (r * z.transpose() + z * r.transpose());

    out.tangent = 0.5 * (tangent + tangent.transpose());
    return out;
}

} // namespace rodnet
