#pragma once

#include <array>
#include <vector>

#include "rodnet/model.hpp"
#include "rodnet/polynomial.hpp"

namespace rodnet {

/// The four cubic Hermite interpolants over s in [0, L], ordered
/// (v1, theta1, v2, theta2): unit transverse deflection or unit end slope at
/// one node, zero value and slope at the other.
std::array<Polynomial, 4> hermite_cubics(double L);

/// The two linear axial interpolants over s in [0, L]: 1 - s/L and s/L.
std::array<Polynomial, 2> linear_interpolants(double L);

/// Frequency-series shape functions of one rod element. The displacement
/// fields are expanded in ascending powers of the circular frequency,
///
///   u_y(s) = sum_r w^r a_ry(s) q,    u_x(s) = sum_r w^r a_rx(s) q,
///
/// and the homogeneous end data of the higher terms forces every odd-index
/// term to vanish, so only a_0, a_2, ..., a_2m are stored. Substituting the
/// expansions into the transverse beam equation and the axial bar equation
/// and matching powers of w gives the recursions
///
///   c4  * a_ry''''(s) =  a_(r-2)y(s)      with c4  = E I / (rho A),
///   ca2 * a_rx''(s)   = -a_(r-2)x(s)      with ca2 = E / rho.
///
/// Each a_r is one polynomial per generalized coordinate: four transverse
/// (v1, theta1, v2, theta2) and two axial (u1, u2).
struct SeriesShapeFunctions {
    double length = 0.0;
    double c4 = 0.0;   ///< E I / (rho A), (m/s)^... units of s^4/t^2 recursion constant
    double ca2 = 0.0;  ///< E / rho, squared axial wave speed
    int order = 0;     ///< m: highest stored series index is 2m

    /// transverse[k][j] is a_(2k)y for coordinate j in (v1, theta1, v2, theta2).
    std::vector<std::array<Polynomial, 4>> transverse;
    /// axial[k][j] is a_(2k)x for coordinate j in (u1, u2).
    std::vector<std::array<Polynomial, 2>> axial;

    /// a_ry for coordinate j. Odd r yields the zero polynomial; r must be in
    /// [0, 2*order] and j in [0, 4).
    const Polynomial& transverse_term(int r, int j) const;
    /// a_rx for coordinate j in [0, 2); same index rules.
    const Polynomial& axial_term(int r, int j) const;
};

/// Builds the series through index 2m by exact quadruple (transverse) or
/// double (axial) antidifferentiation of the previous term, then restores the
/// homogeneous end conditions — zero value and slope (transverse), zero value
/// (axial) at both nodes — by solving for the polynomial integration
/// constants. Term 0 is the Hermite/linear interpolant set.
/// Throws std::invalid_argument on non-positive properties, L <= 0, or m < 0.
SeriesShapeFunctions build_series_shape_functions(const Material& material,
                                                  const Section& section, double L,
                                                  int order);

} // namespace rodnet
