#include "rodnet/series.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rodnet {

std::array<Polynomial, 4> hermite_cubics(double L) {
    const double L2 = L * L;
    const double L3 = L2 * L;
    return {
        Polynomial({1.0, 0.0, -3.0 / L2, 2.0 / L3}),  // v1
        Polynomial({0.0, 1.0, -2.0 / L, 1.0 / L2}),   // theta1
        Polynomial({0.0, 0.0, 3.0 / L2, -2.0 / L3}),  // v2
        Polynomial({0.0, 0.0, -1.0 / L, 1.0 / L2}),   // theta2
    };
}

std::array<Polynomial, 2> linear_interpolants(double L) {
    return {
        Polynomial({1.0, -1.0 / L}),
        Polynomial({0.0, 1.0 / L}),
    };
}

namespace {

const Polynomial& zero_polynomial() {
    static const Polynomial zero;
    return zero;
}

void check_term_index(int r, int order, int j, int n_coords) {
    if (r < 0 || r > 2 * order) {
        throw std::out_of_range("series term index " + std::to_string(r) +
                                " outside [0, " + std::to_string(2 * order) + "]");
    }
    if (j < 0 || j >= n_coords) {
        throw std::out_of_range("series coordinate index " + std::to_string(j) +
                                " outside [0, " + std::to_string(n_coords) + ")");
    }
}

/// Particular solution of the recursion: `times`-fold antiderivative of
/// `rhs`, scaled. All integration constants are taken as zero, so the result
/// and its derivatives through order `times - 1` vanish at s = 0.
Polynomial repeated_antiderivative(const Polynomial& rhs, int times, double scale) {
    Polynomial p = rhs * scale;
    for (int i = 0; i < times; ++i) {
        p = antidifferentiate(p);
    }
    return p;
}

/// Adds the cubic homogeneous solution that restores the four end conditions
/// a(0) = a'(0) = a(L) = a'(L) = 0. The particular solution already vanishes
/// (with its slope) at s = 0, so the constant and linear coefficients are
/// zero and the remaining two conditions, written against the normalized
/// basis (s/L)^2, (s/L)^3 for conditioning, form a well-posed 2x2 system.
Polynomial correct_transverse_ends(const Polynomial& particular, double L) {
    const double pL = particular(L);
    const double dpL = differentiate(particular)(L);
    Eigen::Matrix2d conditions;
    conditions << 1.0, 1.0,   // value at s = L per unit gamma2, gamma3
                  2.0, 3.0;   // L * slope at s = L per unit gamma2, gamma3
    const Eigen::Vector2d rhs(-pL, -L * dpL);
    const Eigen::Vector2d gamma = conditions.fullPivLu().solve(rhs);
    return particular +
           Polynomial({0.0, 0.0, gamma(0) / (L * L), gamma(1) / (L * L * L)});
}

/// Adds the linear homogeneous solution restoring a(0) = a(L) = 0; the
/// particular solution already vanishes at s = 0.
Polynomial correct_axial_ends(const Polynomial& particular, double L) {
    return particular + Polynomial({0.0, -particular(L) / L});
}

} // namespace

const Polynomial& SeriesShapeFunctions::transverse_term(int r, int j) const {
    check_term_index(r, order, j, 4);
    if (r % 2 != 0) {
        return zero_polynomial();
    }
    return transverse[static_cast<std::size_t>(r / 2)][static_cast<std::size_t>(j)];
}

const Polynomial& SeriesShapeFunctions::axial_term(int r, int j) const {
    check_term_index(r, order, j, 2);
    if (r % 2 != 0) {
        return zero_polynomial();
    }
    return axial[static_cast<std::size_t>(r / 2)][static_cast<std::size_t>(j)];
}

SeriesShapeFunctions build_series_shape_functions(const Material& material,
                                                  const Section& section, double L,
                                                  int order) {
    if (!(material.E > 0.0) || !(material.rho > 0.0)) {
        throw std::invalid_argument("series shape functions: material properties must be positive");
    }
    if (!(section.A > 0.0) || !(section.I > 0.0)) {
        throw std::invalid_argument("series shape functions: section properties must be positive");
    }
    if (!(L > 0.0)) {
        throw std::invalid_argument("series shape functions: length must be positive");
    }
    if (order < 0) {
        throw std::invalid_argument("series shape functions: order must be non-negative");
    }

    SeriesShapeFunctions s;
    s.length = L;
    s.c4 = material.E * section.I / (material.rho * section.A);
    s.ca2 = material.E / material.rho;
    s.order = order;
    s.transverse.resize(static_cast<std::size_t>(order) + 1);
    s.axial.resize(static_cast<std::size_t>(order) + 1);
    s.transverse[0] = hermite_cubics(L);
    s.axial[0] = linear_interpolants(L);

    for (std::size_t k = 1; k <= static_cast<std::size_t>(order); ++k) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Polynomial particular =
                repeated_antiderivative(s.transverse[k - 1][j], 4, 1.0 / s.c4);
            s.transverse[k][j] = correct_transverse_ends(particular, L);
        }
        for (std::size_t j = 0; j < 2; ++j) {
            const Polynomial particular =
                repeated_antiderivative(s.axial[k - 1][j], 2, -1.0 / s.ca2);
            s.axial[k][j] = correct_axial_ends(particular, L);
        }
    }
    return s;
}

} // namespace rodnet
