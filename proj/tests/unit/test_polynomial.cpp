#include <cmath>

#include "doctest.h"
#include "rodnet/polynomial.hpp"

using rodnet::Polynomial;

TEST_CASE("construction trims trailing zeros and reports degree") {
    CHECK(Polynomial::zero().degree() == -1);
    CHECK(Polynomial::zero().is_zero());
    CHECK(Polynomial::constant(3.0).degree() == 0);
    CHECK(Polynomial({1.0, 2.0, 0.0, 0.0}).degree() == 1);
    CHECK(Polynomial({0.0, 0.0}).is_zero());
    CHECK(Polynomial({1.0, 0.0, 5.0}).degree() == 2);
}

TEST_CASE("evaluation and coefficient access") {
    const Polynomial p({1.0, 2.0, 3.0});  // 1 + 2s + 3s^2
    CHECK(p(0.0) == 1.0);
    CHECK(p(2.0) == 17.0);
    CHECK(p(-1.0) == 2.0);
    CHECK(p.coeff(1) == 2.0);
    CHECK(p.coeff(7) == 0.0);
}

TEST_CASE("arithmetic") {
    const Polynomial p({1.0, 2.0});
    const Polynomial q({0.0, -2.0, 4.0});
    const Polynomial sum = p + q;
    CHECK(sum.coeff(0) == 1.0);
    CHECK(sum.coeff(1) == 0.0);
    CHECK(sum.coeff(2) == 4.0);
    const Polynomial diff = p - p;
    CHECK(diff.is_zero());
    const Polynomial scaled = q * 0.5;
    CHECK(scaled.coeff(1) == -1.0);
    CHECK(scaled.coeff(2) == 2.0);
}

TEST_CASE("differentiation and antidifferentiation") {
    const Polynomial p({5.0, 0.0, 3.0});  // 5 + 3s^2
    const Polynomial dp = differentiate(p);
    CHECK(dp.degree() == 1);
    CHECK(dp.coeff(1) == 6.0);
    CHECK(differentiate(p, 2).degree() == 0);
    CHECK(differentiate(p, 3).is_zero());
    CHECK(differentiate(Polynomial::zero()).is_zero());

    const Polynomial ip = antidifferentiate(dp);
    CHECK(ip.coeff(0) == 0.0);  // integration constant is zero
    CHECK(ip.coeff(2) == 3.0);
}

TEST_CASE("integrate_product is exact on monomials") {
    // int_0^1 s^7 * s^7 ds = 1/15
    Polynomial s7({0, 0, 0, 0, 0, 0, 0, 1.0});
    CHECK(rodnet::integrate_product(s7, s7, 0.0, 1.0) ==
          doctest::Approx(1.0 / 15.0).epsilon(1e-15));
    // int_1^2 s * s^2 ds = (2^4 - 1)/4
    CHECK(rodnet::integrate_product(Polynomial({0.0, 1.0}), Polynomial({0.0, 0.0, 1.0}), 1.0,
                                    2.0) == doctest::Approx(15.0 / 4.0).epsilon(1e-15));
    CHECK(rodnet::integrate_product(Polynomial::zero(), s7, 0.0, 1.0) == 0.0);
}

TEST_CASE("integrate_product of Hermite curvatures gives the classical 12/L^3") {
    const double L = 5e-4;
    // First Hermite cubic: 1 - 3(s/L)^2 + 2(s/L)^3.
    const Polynomial h1({1.0, 0.0, -3.0 / (L * L), 2.0 / (L * L * L)});
    const Polynomial h1pp = differentiate(h1, 2);
    const double value = rodnet::integrate_product(h1pp, h1pp, 0.0, L);
    CHECK(value == doctest::Approx(12.0 / (L * L * L)).epsilon(1e-14));
}

TEST_CASE("integrate_product is bit-symmetric in its arguments") {
    // The assembly relies on B(a, b) == B(b, a) exactly so that symmetrized
    // element matrices do not depend on evaluation order.
    const Polynomial p({0.3, -1.7, 2.9, 0.11, -0.07});
    const Polynomial q({-2.0, 0.5, 1e-3, 4.0});
    const double pq = rodnet::integrate_product(p, q, 0.0, 0.37);
    const double qp = rodnet::integrate_product(q, p, 0.0, 0.37);
    CHECK(pq == qp);  // bitwise
}

TEST_CASE("integrate_product handles degree sums through 14 exactly") {
    // Highest degree pair used by an order-3 series: deg 7 x deg 7.
    // p = (1+s)^7 against itself over [0,1]: int (1+s)^14 = (2^15 - 1)/15.
    Polynomial p({1, 7, 21, 35, 35, 21, 7, 1});
    const double exact = (std::pow(2.0, 15.0) - 1.0) / 15.0;
    CHECK(rodnet::integrate_product(p, p, 0.0, 1.0) ==
          doctest::Approx(exact).epsilon(1e-14));
}
