#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rodnet/errors.hpp"
#include "rodnet/oracle.hpp"
#include "rodnet/solvers.hpp"
#include "test_support.hpp"

using namespace rodnet;
namespace oracle = rodnet::oracle;

namespace {

const double kE = test_support::kE;
const double kL = test_support::kL;

double tip_uy(const StaticResult& r) {
    for (const NodeState& n : r.displacements) {
        if (n.node == "n2") {
            return n.uy;
        }
    }
    FAIL("tip node missing");
    return 0.0;
}

double tip_ux(const StaticResult& r) {
    for (const NodeState& n : r.displacements) {
        if (n.node == "n2") {
            return n.ux;
        }
    }
    FAIL("tip node missing");
    return 0.0;
}

const PathPoint& final_point(const EquilibriumPath& p) {
    REQUIRE_FALSE(p.points.empty());
    return p.points.back();
}

const NodeState& node_in(const PathPoint& p, const char* name) {
    for (const NodeState& n : p.configuration) {
        if (n.node == name) {
            return n;
        }
    }
    REQUIRE(false);
    return p.configuration.front();
}

} // namespace

TEST_CASE("linear static: transverse tip load matches F L^3 / 3EI at any mesh") {
    const double exact = oracle::cantilever_tip_deflection(test_support::kF, kE,
                                                           test_support::inertia(), kL);
    std::vector<double> tips;
    for (int n : {1, 2, 4, 8}) {
        const Model m = test_support::cantilever_model(n, 0.0, test_support::kF);
        const StaticResult r = solve_linear_static(m);
        const double uy = tip_uy(r);
        CHECK(std::abs(uy - exact) <= 1e-10 * std::abs(exact));
        tips.push_back(uy);
    }
    // Mesh-independent to near machine precision (nested exact solutions).
    for (std::size_t i = 1; i < tips.size(); ++i) {
        CHECK(std::abs(tips[i] - tips[0]) <= 1e-12 * std::abs(tips[0]));
    }
}

TEST_CASE("linear static: axial tip load matches F L / EA independent of mesh") {
    const double exact = oracle::cantilever_axial_deflection(test_support::kF, kE,
                                                             test_support::area(), kL);
    for (int n : {1, 3, 8}) {
        const Model m = test_support::cantilever_model(n, test_support::kF, 0.0);
        const StaticResult r = solve_linear_static(m);
        CHECK(std::abs(tip_ux(r) - exact) <= 1e-12 * std::abs(exact));
        // The whole element chain carries the tip force.
        for (double N : r.element_axial_forces) {
            CHECK(N == doctest::Approx(test_support::kF).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear static: zero load gives the zero state") {
    const Model m = test_support::cantilever_model(4, 0.0, 0.0);
    const StaticResult r = solve_linear_static(m);
    for (const NodeState& n : r.displacements) {
        CHECK(n.ux == 0.0);
        CHECK(n.uy == 0.0);
        CHECK(n.rz == 0.0);
    }
}

TEST_CASE("linear static: reactions balance the applied loads") {
    const Model m = test_support::cantilever_model(8, 0.0, test_support::kF);
    const StaticResult r = solve_linear_static(m);
    REQUIRE(r.reactions.size() == 1);
    const NodeForces& root = r.reactions[0];
    CHECK(root.node == "n1");
    const double fscale = test_support::kF;
    CHECK(std::abs(root.fx) <= 1e-9 * fscale);
    CHECK(std::abs(root.fy + test_support::kF) <= 1e-9 * fscale);
    // Moment balance about the origin: M_r + F * L = 0.
    CHECK(std::abs(root.mz + test_support::kF * kL) <= 1e-9 * fscale * kL);
}

TEST_CASE("linear static: solutions are bitwise deterministic across modes") {
    const Model m = test_support::cantilever_model(8, 1e-4, test_support::kF, 1e-8);
    const StaticResult a = solve_linear_static(m, ExecutionMode::Serial);
    const StaticResult b = solve_linear_static(m, ExecutionMode::Parallel);
    REQUIRE(a.displacements.size() == b.displacements.size());
    for (std::size_t i = 0; i < a.displacements.size(); ++i) {
        CHECK(a.displacements[i].ux == b.displacements[i].ux);
        CHECK(a.displacements[i].uy == b.displacements[i].uy);
        CHECK(a.displacements[i].rz == b.displacements[i].rz);
    }
}

TEST_CASE("linear static: a mechanism is reported with the runaway DOF") {
    Model m = test_support::cantilever_model(2, 0.0, 1.0);
    m.constraints.clear();
    m.constraints.push_back({"n1", {true, false, true}});  // uy left free
    try {
        solve_linear_static(m);
        FAIL("expected RankDeficiencyError");
    } catch (const RankDeficiencyError& e) {
        CHECK(std::string(e.what()).find("uy") != std::string::npos);
    }
}

TEST_CASE("linear static: fully fixed model has no free DOFs") {
    Model m = test_support::cantilever_model(1, 0.0, 1.0);
    m.constraints.push_back({"n2", {true, true, true}});
    CHECK_THROWS_AS(solve_linear_static(m), SolveError);
}

TEST_CASE("buckling: axially compressed cantilever converges at h^4") {
    const double exact =
        oracle::euler_buckling(kE, test_support::inertia(), kL,
                               oracle::BucklingCase::Cantilever);
    std::vector<double> errors;
    for (int n : {1, 2, 4, 8, 10}) {
        Model m = test_support::cantilever_model(n, -test_support::kF, 0.0);
        m.analysis.kind = AnalysisKind::Buckling;
        const BucklingResult r = solve_buckling(m, 1);
        REQUIRE(r.load_factors.size() == 1);
        const double critical = r.load_factors[0] * r.reference_load;
        errors.push_back(std::abs(critical - exact) / exact * 100.0);
    }
    // One-element closed form: the 135 a^2 - 156 a + 12 = 0 determinant
    // puts the coarse error between 0.70% and 0.80%.
    CHECK(errors[0] >= 0.70);
    CHECK(errors[0] <= 0.80);
    CHECK(errors[2] <= 0.01);   // 4 elements
    CHECK(errors[4] <= 0.001);  // 10 elements
    CHECK(std::is_sorted(errors.rbegin(), errors.rend()));  // strictly decreasing
    for (std::size_t i = 1; i < errors.size(); ++i) {
        CHECK(errors[i] < errors[i - 1]);
    }
    // Fourth-order convergence: err(1)/err(4) ~ 4^4 within a generous band.
    CHECK(errors[0] / errors[2] >= 200.0);
    CHECK(errors[0] / errors[2] <= 300.0);
}

TEST_CASE("buckling: critical load is invariant under reference-load scaling") {
    Model a = test_support::cantilever_model(4, -test_support::kF, 0.0);
    Model b = test_support::cantilever_model(4, -37.0 * test_support::kF, 0.0);
    a.analysis.kind = b.analysis.kind = AnalysisKind::Buckling;
    const BucklingResult ra = solve_buckling(a, 1);
    const BucklingResult rb = solve_buckling(b, 1);
    const double ca = ra.load_factors[0] * ra.reference_load;
    const double cb = rb.load_factors[0] * rb.reference_load;
    CHECK(ca == doctest::Approx(cb).epsilon(1e-10));
    // The multiplier itself scales inversely with the reference load.
    CHECK(ra.load_factors[0] == doctest::Approx(37.0 * rb.load_factors[0]).epsilon(1e-9));
}

TEST_CASE("buckling: clamped-clamped microbridge converges to 4 pi^2 EI / L^2") {
    // The clamped-clamped mode packs a full cosine wave into the span, so at
    // equal element counts its discretization error is ~4^4 times the
    // cantilever's (whose mode is a quarter wave). The consistent-geometric-
    // stiffness value at 10 elements is 0.0212%; h^4 convergence brings it
    // under 0.01% by 14 elements.
    const double exact = oracle::euler_buckling(
        kE, test_support::inertia(), kL, oracle::BucklingCase::ClampedClamped);

    const Model m10 = test_support::bridge_model(10, -1e-3);
    const BucklingResult r10 = solve_buckling(m10, 1);
    const double err10 =
        std::abs(r10.load_factors[0] * r10.reference_load - exact) / exact * 100.0;
    CHECK(err10 >= 0.015);
    CHECK(err10 <= 0.03);
    // Mode shapes are normalized to unit max-norm.
    CHECK(r10.modes.col(0).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));

    const Model m14 = test_support::bridge_model(14, -1e-3);
    const BucklingResult r14 = solve_buckling(m14, 1);
    const double err14 =
        std::abs(r14.load_factors[0] * r14.reference_load - exact) / exact * 100.0;
    CHECK(err14 <= 0.01);
    // h^4 rate between the two meshes: (14/10)^4 = 3.84.
    CHECK(err10 / err14 == doctest::Approx(3.84).epsilon(0.05));
}

TEST_CASE("buckling: tension-only reference loads are rejected") {
    Model m = test_support::cantilever_model(4, +test_support::kF, 0.0);
    m.analysis.kind = AnalysisKind::Buckling;
    CHECK_THROWS_AS(solve_buckling(m, 1), NoCompressionError);

    // A transverse load produces zero axial force everywhere: same verdict.
    Model t = test_support::cantilever_model(4, 0.0, test_support::kF);
    t.analysis.kind = AnalysisKind::Buckling;
    CHECK_THROWS_AS(solve_buckling(t, 1), NoCompressionError);
}

TEST_CASE("modal: 8-element cantilever hits the first three analytical bands") {
    Model m = test_support::cantilever_model(8, 0.0, 0.0);
    m.analysis.kind = AnalysisKind::Modal;
    const ModalResult r = solve_modal(m, 3, 1);
    REQUIRE(r.omegas.size() == 3);
    const auto exact = oracle::cantilever_frequencies(
        kE, test_support::inertia(), test_support::kRho, test_support::area(), kL, 3);
    const double bands[3] = {0.01, 0.1, 0.5};  // percent
    for (int k = 0; k < 3; ++k) {
        const double err =
            std::abs(r.omegas[static_cast<std::size_t>(k)] -
                     exact[static_cast<std::size_t>(k)]) /
            exact[static_cast<std::size_t>(k)] * 100.0;
        CAPTURE(k);
        CHECK(err <= bands[k]);
    }
    CHECK(r.omegas[0] < r.omegas[1]);
    CHECK(r.omegas[1] < r.omegas[2]);
}

TEST_CASE("modal: the one-element m=1 frequency matches its closed form") {
    Model m = test_support::cantilever_model(1, 0.0, 0.0);
    m.analysis.kind = AnalysisKind::Modal;
    const ModalResult r = solve_modal(m, 1, 1);
    REQUIRE(r.omegas.size() == 1);
    // Exact discrete eigenvalue: smallest root of 35 y^2 - 102 y + 3 = 0,
    // y = w^2 rho A L^4 / (420 EI).
    const double y = (102.0 - std::sqrt(102.0 * 102.0 - 420.0)) / 70.0;
    const double omega_exact = std::sqrt(
        420.0 * kE * test_support::inertia() * y /
        (test_support::kRho * test_support::area() * std::pow(kL, 4.0)));
    CHECK(r.omegas[0] == doctest::Approx(omega_exact).epsilon(1e-10));
    // ~0.475% above the continuum frequency, as the coarse mesh overestimates.
    const double cont = oracle::cantilever_frequencies(
        kE, test_support::inertia(), test_support::kRho, test_support::area(), kL, 1)[0];
    CHECK(r.omegas[0] > cont);
    CHECK((r.omegas[0] - cont) / cont * 100.0 == doctest::Approx(0.475).epsilon(0.02));
}

TEST_CASE("modal: order 2 strictly improves the one-element fundamental") {
    Model m = test_support::cantilever_model(1, 0.0, 0.0);
    m.analysis.kind = AnalysisKind::Modal;
    const double cont = oracle::cantilever_frequencies(
        kE, test_support::inertia(), test_support::kRho, test_support::area(), kL, 1)[0];
    const ModalResult r1 = solve_modal(m, 1, 1);
    const ModalResult r2 = solve_modal(m, 1, 2);
    CHECK(r2.order == 2);
    const double e1 = std::abs(r1.omegas[0] - cont) / cont;
    const double e2 = std::abs(r2.omegas[0] - cont) / cont;
    CHECK(e2 < e1);
}

TEST_CASE("modal: higher order refines toward the same physical frequencies") {
    Model m = test_support::cantilever_model(4, 0.0, 0.0);
    m.analysis.kind = AnalysisKind::Modal;
    const ModalResult r1 = solve_modal(m, 2, 1);
    const ModalResult r3 = solve_modal(m, 2, 3);
    REQUIRE(r3.omegas.size() == 2);
    for (int k = 0; k < 2; ++k) {
        // Orders agree to well under a percent on a 4-element mesh.
        CHECK(std::abs(r3.omegas[static_cast<std::size_t>(k)] -
                       r1.omegas[static_cast<std::size_t>(k)]) <=
              1e-2 * r1.omegas[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("modal: an unconstrained structure reports rigid modes at omega = 0") {
    Model m = test_support::cantilever_model(2, 0.0, 0.0);
    m.constraints.clear();
    for (int order : {1, 2}) {
        CAPTURE(order);
        const ModalResult r = solve_modal(m, 4, order);
        REQUIRE(r.omegas.size() == 4);
        CHECK(r.omegas[0] == 0.0);
        CHECK(r.omegas[1] == 0.0);
        CHECK(r.omegas[2] == 0.0);
        CHECK(r.omegas[3] > 0.0);
    }
}

TEST_CASE("nonlinear: small loads agree with linear theory") {
    // alpha = F L^2 / EI = 0.01 keeps rotations ~ 0.003 rad.
    const double F = 0.01 * kE * test_support::inertia() / (kL * kL);
    Model m = test_support::cantilever_model(10, 0.0, F);
    m.analysis.kind = AnalysisKind::NonlinearStatic;
    const EquilibriumPath p = solve_nonlinear_static(m, 5, 1e-12, 50);
    REQUIRE_FALSE(p.failed);
    const double nl = node_in(final_point(p), "n2").uy;
    const double lin = tip_uy(solve_linear_static(m));
    CHECK(std::abs(nl - lin) / std::abs(lin) * 100.0 <= 0.1);
}

TEST_CASE("nonlinear: elastica benchmark at alpha = 2") {
    const double alpha = 2.0;
    const double F = alpha * kE * test_support::inertia() / (kL * kL);
    Model m = test_support::cantilever_model(10, 0.0, F);
    m.analysis.kind = AnalysisKind::NonlinearStatic;
    const EquilibriumPath p = solve_nonlinear_static(m, 10, 1e-12, 50);
    REQUIRE_FALSE(p.failed);
    CHECK(final_point(p).load_factor == 1.0);

    const oracle::ElasticaTip tip = oracle::elastica_tip_response(alpha);
    const NodeState& n2 = node_in(final_point(p), "n2");
    CHECK(std::abs(n2.uy / kL - tip.dy_over_L) / tip.dy_over_L * 100.0 <= 0.5);
    CHECK(std::abs(-n2.ux / kL - tip.dx_over_L) / tip.dx_over_L * 100.0 <= 1.0);
    CHECK(std::abs(n2.rz - tip.tip_angle) / tip.tip_angle * 100.0 <= 1.0);
}

TEST_CASE("nonlinear: the load factors ramp to exactly one") {
    const double F = 0.5 * kE * test_support::inertia() / (kL * kL);
    Model m = test_support::cantilever_model(6, 0.0, F);
    // tol is chosen so tol * lambda * ||f|| sits above the solver's absolute
    // residual floor at every load level; the documented relative bound then
    // holds verbatim at each accepted point.
    const EquilibriumPath p = solve_nonlinear_static(m, 4, 1e-5, 30);
    REQUIRE_FALSE(p.failed);
    REQUIRE(p.points.size() == 5);  // initial point + 4 steps
    CHECK(p.points[0].load_factor == 0.0);
    CHECK(p.points[1].load_factor == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p.points.back().load_factor == 1.0);  // clamped exactly
    // Residuals meet the convergence contract at every accepted point.
    const double fnorm = F;
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        CHECK(p.points[i].residual <= 1e-5 * p.points[i].load_factor * fnorm * 1.001);
        CHECK(p.points[i].iterations >= 1);
        CHECK(p.points[i].residual_history.size() ==
              static_cast<std::size_t>(p.points[i].iterations) + 1);
    }
}

TEST_CASE("nonlinear: Newton converges quadratically near the solution") {
    const double F = 2.0 * kE * test_support::inertia() / (kL * kL);
    Model m = test_support::cantilever_model(8, 0.0, F);
    // One big step: the full load is applied at once, so the first updates
    // overshoot and the residual norm is not monotone. What quadratic
    // convergence guarantees is the tail: the update that reaches the stop
    // threshold gains many digits at once instead of creeping linearly.
    const EquilibriumPath p = solve_nonlinear_static(m, 1, 1e-12, 50);
    REQUIRE_FALSE(p.failed);
    const std::vector<double>& hist = final_point(p).residual_history;
    REQUIRE(hist.size() >= 3);
    const double r_last = hist[hist.size() - 1];
    const double r_prev = hist[hist.size() - 2];
    REQUIRE(r_prev > 0.0);
    CHECK(r_last <= 1e-4 * r_prev);   // >= 4 digits in the final update
    CHECK(r_last / F <= 1e-6);        // and the end point is tightly converged
}

TEST_CASE("nonlinear: the equilibrium path is bitwise deterministic") {
    const double F = 1.0 * kE * test_support::inertia() / (kL * kL);
    Model m = test_support::cantilever_model(6, 0.0, F);
    const EquilibriumPath a = solve_nonlinear_static(m, 5, 1e-11, 40, ExecutionMode::Serial);
    const EquilibriumPath b =
        solve_nonlinear_static(m, 5, 1e-11, 40, ExecutionMode::Parallel);
    const EquilibriumPath c = solve_nonlinear_static(m, 5, 1e-11, 40, ExecutionMode::Serial);
    REQUIRE(a.points.size() == b.points.size());
    REQUIRE(a.points.size() == c.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        for (std::size_t j = 0; j < a.points[i].configuration.size(); ++j) {
            CHECK(a.points[i].configuration[j].ux == b.points[i].configuration[j].ux);
            CHECK(a.points[i].configuration[j].uy == b.points[i].configuration[j].uy);
            CHECK(a.points[i].configuration[j].rz == b.points[i].configuration[j].rz);
            CHECK(a.points[i].configuration[j].uy == c.points[i].configuration[j].uy);
        }
        CHECK(a.points[i].residual == b.points[i].residual);
    }
}

TEST_CASE("nonlinear: a load past the limit point fails with a marked path") {
    // Axial compression at 2.25x the Euler critical load: the tangent loses
    // positive definiteness partway up the ramp and halving cannot rescue it.
    Model m = test_support::cantilever_model(10, -5e-5, 0.0);
    const EquilibriumPath p = solve_nonlinear_static(m, 10, 1e-10, 50);
    CHECK(p.failed);
    CHECK(p.failure.find("halvings") != std::string::npos);
    REQUIRE_FALSE(p.points.empty());
    CHECK(p.points.back().load_factor < 1.0);
    CHECK(p.points.back().load_factor > 0.0);
}

TEST_CASE("nonlinear: an unconstrained structure raises SingularTangentError") {
    Model m = test_support::cantilever_model(2, 0.0, 1e-6);
    m.constraints.clear();
    m.analysis.kind = AnalysisKind::NonlinearStatic;
    CHECK_THROWS_AS(solve_nonlinear_static(m, 5, 1e-10, 30), SingularTangentError);
}

TEST_CASE("nonlinear: argument validation") {
    Model m = test_support::cantilever_model(2, 0.0, 1e-6);
    CHECK_THROWS_AS(solve_nonlinear_static(m, 0, 1e-10, 30), std::invalid_argument);
    CHECK_THROWS_AS(solve_nonlinear_static(m, 5, 0.0, 30), std::invalid_argument);
    CHECK_THROWS_AS(solve_nonlinear_static(m, 5, 1e-10, 0), std::invalid_argument);
}

TEST_CASE("nonlinear: zero load converges immediately to the zero path") {
    const Model m = test_support::cantilever_model(4, 0.0, 0.0);
    const EquilibriumPath p = solve_nonlinear_static(m, 3, 1e-10, 20);
    REQUIRE_FALSE(p.failed);
    CHECK(p.points.back().load_factor == 1.0);
    for (const PathPoint& pt : p.points) {
        for (const NodeState& n : pt.configuration) {
            CHECK(n.ux == 0.0);
            CHECK(n.uy == 0.0);
            CHECK(n.rz == 0.0);
        }
    }
}
