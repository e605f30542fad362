#include "rodnet/element_matrices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rodnet {

namespace {

/// One virtual-work product of series terms r (rows) and t (columns):
/// bending EI a''a''^T + axial EA a'a'^T when `stiffness`, else the kinetic
/// product rho A (a a^T for both field directions).
Matrix6 term_product(const SeriesShapeFunctions& shapes, const Material& material,
                     const Section& section, int r, int t, bool stiffness) {
    Matrix6 h = Matrix6::Zero();
    const double L = shapes.length;
    if (stiffness) {
        const double EI = material.E * section.I;
        const double EA = material.E * section.A;
        for (int i = 0; i < 4; ++i) {
            const Polynomial pi = differentiate(shapes.transverse_term(r, i), 2);
            for (int j = 0; j < 4; ++j) {
                const Polynomial pj = differentiate(shapes.transverse_term(t, j), 2);
                h(kTransverseDofs[i], kTransverseDofs[j]) =
                    EI * integrate_product(pi, pj, 0.0, L);
            }
        }
        for (int i = 0; i < 2; ++i) {
            const Polynomial pi = differentiate(shapes.axial_term(r, i));
            for (int j = 0; j < 2; ++j) {
                const Polynomial pj = differentiate(shapes.axial_term(t, j));
                h(kAxialDofs[i], kAxialDofs[j]) = EA * integrate_product(pi, pj, 0.0, L);
            }
        }
    } else {
        const double rhoA = material.rho * section.A;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                h(kTransverseDofs[i], kTransverseDofs[j]) =
                    rhoA * integrate_product(shapes.transverse_term(r, i),
                                             shapes.transverse_term(t, j), 0.0, L);
            }
        }
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                h(kAxialDofs[i], kAxialDofs[j]) =
                    rhoA * integrate_product(shapes.axial_term(r, i),
                                             shapes.axial_term(t, j), 0.0, L);
            }
        }
    }
    return h;
}

} // namespace

Matrix6 ElementMatrixSeries::evaluate(double omega) const {
    const double w2 = omega * omega;
    Matrix6 k = K0 - w2 * M0;
    double power = w2;
    for (const Matrix6& h : higher) {
        power *= w2;
        k += power * h;
    }
    return k;
}

ElementMatrixSeries element_matrix_series(const SeriesShapeFunctions& shapes,
                                          const Material& material,
                                          const Section& section) {
    ElementMatrixSeries series;
    series.order = shapes.order;

    // Coefficient of w^(2h): stiffness products of terms 2k and 2(h-k) plus
    // inertia products of terms 2k and 2(h-1-k). Single products are exactly
    // symmetric (the integral kernel commutes bit-for-bit); sums of cross
    // products can pick up rounding asymmetry, which is removed and logged.
    for (int h = 0; h <= shapes.order; ++h) {
        Matrix6 coeff = Matrix6::Zero();
        for (int k = 0; k <= h; ++k) {
            coeff += term_product(shapes, material, section, 2 * k, 2 * (h - k), true);
        }
        for (int k = 0; k <= h - 1; ++k) {
            coeff -= term_product(shapes, material, section, 2 * k, 2 * (h - 1 - k), false);
        }
        const double scale = coeff.cwiseAbs().maxCoeff();
        const double asym = (coeff - coeff.transpose()).cwiseAbs().maxCoeff();
        if (scale > 0.0) {
            series.max_symmetrization_correction =
                std::max(series.max_symmetrization_correction, asym / scale);
        }
        const Matrix6 sym = 0.5 * (coeff + coeff.transpose());
        if (h == 0) {
            series.K0 = sym;
        } else if (h == 1) {
            series.M0 = -sym;
        } else {
            series.higher.push_back(sym);
        }
    }
    return series;
}

GeometricStiffness geometric_stiffness(double N, double L) {
    if (!(L > 0.0)) {
        throw std::invalid_argument("geometric stiffness: length must be positive");
    }
    const std::array<Polynomial, 4> slopes = [&] {
        std::array<Polynomial, 4> d;
        const std::array<Polynomial, 4> h = hermite_cubics(L);
        for (std::size_t i = 0; i < 4; ++i) {
            d[i] = differentiate(h[i]);
        }
        return d;
    }();

    GeometricStiffness kg;
    kg.axial_force = N;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            kg.per_unit_force(kTransverseDofs[i], kTransverseDofs[j]) =
                integrate_product(slopes[static_cast<std::size_t>(i)],
                                  slopes[static_cast<std::size_t>(j)], 0.0, L);
        }
    }
    return kg;
}

} // namespace rodnet
