#include <cmath>

#include "doctest.h"
#include "rodnet/element_matrices.hpp"
#include "test_support.hpp"

using namespace rodnet;

namespace {

const double kE = test_support::kE;
const double kL = test_support::kL;

ElementMatrixSeries canonical_series_matrices(int order) {
    Material mat{"si", kE, test_support::kRho};
    Section sec = rect_section("s1", test_support::kW, test_support::kT);
    return element_matrix_series(build_series_shape_functions(mat, sec, kL, order), mat,
                                 sec);
}

/// Classical Euler-Bernoulli stiffness in (ux1, uy1, rz1, ux2, uy2, rz2).
Matrix6 classical_stiffness(double E, double A, double I, double L) {
    Matrix6 K = Matrix6::Zero();
    const double ax = E * A / L;
    const double b = E * I / (L * L * L);
    K(0, 0) = ax;
    K(0, 3) = -ax;
    K(3, 3) = ax;
    K(1, 1) = 12 * b;
    K(1, 2) = 6 * b * L;
    K(1, 4) = -12 * b;
    K(1, 5) = 6 * b * L;
    K(2, 2) = 4 * b * L * L;
    K(2, 4) = -6 * b * L;
    K(2, 5) = 2 * b * L * L;
    K(4, 4) = 12 * b;
    K(4, 5) = -6 * b * L;
    K(5, 5) = 4 * b * L * L;
    return Matrix6(K.selfadjointView<Eigen::Upper>());
}

/// Classical consistent mass in the same DOF order.
Matrix6 classical_mass(double rho, double A, double L) {
    Matrix6 M = Matrix6::Zero();
    const double m = rho * A * L;
    // Axial: m/6 [2 1; 1 2].
    M(0, 0) = m / 3.0;
    M(0, 3) = m / 6.0;
    M(3, 3) = m / 3.0;
    // Transverse: m/420 [156 22L 54 -13L; . 4L^2 13L -3L^2; . . 156 -22L; . . . 4L^2].
    M(1, 1) = m * 156.0 / 420.0;
    M(1, 2) = m * 22.0 * L / 420.0;
    M(1, 4) = m * 54.0 / 420.0;
    M(1, 5) = -m * 13.0 * L / 420.0;
    M(2, 2) = m * 4.0 * L * L / 420.0;
    M(2, 4) = m * 13.0 * L / 420.0;
    M(2, 5) = -m * 3.0 * L * L / 420.0;
    M(4, 4) = m * 156.0 / 420.0;
    M(4, 5) = -m * 22.0 * L / 420.0;
    M(5, 5) = m * 4.0 * L * L / 420.0;
    return Matrix6(M.selfadjointView<Eigen::Upper>());
}

void check_close(const Matrix6& got, const Matrix6& want, double rel) {
    const double scale = want.cwiseAbs().maxCoeff();
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(std::abs(got(i, j) - want(i, j)) <= rel * scale);
        }
    }
}

} // namespace

TEST_CASE("series K0 reproduces the classical static stiffness") {
    const ElementMatrixSeries em = canonical_series_matrices(0);
    const Matrix6 K = classical_stiffness(kE, test_support::area(),
                                          test_support::inertia(), kL);
    check_close(em.K0, K, 1e-12);
    CHECK(em.order == 0);
    CHECK(em.higher.empty());
    CHECK(em.max_symmetrization_correction <= 1e-12);
}

TEST_CASE("series M0 reproduces the classical consistent mass") {
    const ElementMatrixSeries em = canonical_series_matrices(1);
    const Matrix6 M = classical_mass(test_support::kRho, test_support::area(), kL);
    check_close(em.M0, M, 1e-12);
    CHECK(em.higher.empty());  // order 1 stores K0 and M0 only
}

TEST_CASE("K0 annihilates rigid-body motion") {
    const ElementMatrixSeries em = canonical_series_matrices(0);
    const double scale = em.K0.cwiseAbs().maxCoeff();
    Vector6 tx, ty, rot;
    tx << 1, 0, 0, 1, 0, 0;
    ty << 0, 1, 0, 0, 1, 0;
    rot << 0, 0, 1, 0, kL, 1;  // small rotation about node 1
    CHECK((em.K0 * tx).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((em.K0 * ty).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((em.K0 * rot).cwiseAbs().maxCoeff() <= 1e-12 * scale * kL);
}

TEST_CASE("higher-order terms appear from order 2 and stay symmetric") {
    const ElementMatrixSeries em = canonical_series_matrices(3);
    REQUIRE(em.higher.size() == 2);  // H_2 and H_3
    for (const Matrix6& H : em.higher) {
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);  // symmetrized exactly
        CHECK(H.cwiseAbs().maxCoeff() > 0.0);
    }
    CHECK(em.max_symmetrization_correction <= 1e-10);
}

TEST_CASE("evaluate sums the series with alternating-sign leading terms") {
    const ElementMatrixSeries em = canonical_series_matrices(2);
    REQUIRE(em.higher.size() == 1);
    const double omega = 1e5;
    const Matrix6 manual = em.K0 - omega * omega * em.M0 +
                           std::pow(omega, 4.0) * em.higher[0];
    const Matrix6 got = em.evaluate(omega);
    check_close(got, manual, 1e-13);
    // At omega = 0 the dynamic stiffness is the static one.
    CHECK(em.evaluate(0.0) == em.K0);
}

TEST_CASE("geometric stiffness has the classical 6/5L pattern") {
    const double N = 2.5, L = kL;
    const GeometricStiffness g = geometric_stiffness(N, L);
    const Matrix6 Kg = g.matrix();
    CHECK(g.axial_force == N);

    Matrix6 want = Matrix6::Zero();
    want(1, 1) = 6.0 / (5.0 * L);
    want(1, 2) = 1.0 / 10.0;
    want(1, 4) = -6.0 / (5.0 * L);
    want(1, 5) = 1.0 / 10.0;
    want(2, 2) = 2.0 * L / 15.0;
    want(2, 4) = -1.0 / 10.0;
    want(2, 5) = -L / 30.0;
    want(4, 4) = 6.0 / (5.0 * L);
    want(4, 5) = -1.0 / 10.0;
    want(5, 5) = 2.0 * L / 15.0;
    const Matrix6 wantN = N * Matrix6(want.selfadjointView<Eigen::Upper>());
    check_close(Kg, wantN, 1e-13);

    // Axial DOFs carry no geometric stiffness.
    for (int d : kAxialDofs) {
        CHECK(Kg.row(d).cwiseAbs().maxCoeff() == 0.0);
        CHECK(Kg.col(d).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("geometric stiffness is linear in the axial force") {
    const GeometricStiffness g1 = geometric_stiffness(1.0, kL);
    const GeometricStiffness g7 = geometric_stiffness(-7.0, kL);
    check_close(g7.matrix(), Matrix6(-7.0 * g1.matrix()), 1e-15);
    CHECK(geometric_stiffness(0.0, kL).matrix().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(geometric_stiffness(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("geometric stiffness annihilates transverse rigid translation") {
    const Matrix6 Kg = geometric_stiffness(3.0, kL).matrix();
    Vector6 ty;
    ty << 0, 1, 0, 0, 1, 0;
    CHECK((Kg * ty).cwiseAbs().maxCoeff() <= 1e-14 * Kg.cwiseAbs().maxCoeff());
}
