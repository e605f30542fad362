#include "rodnet/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace rodnet::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

double cantilever_tip_deflection(double F, double E, double I, double L) {
    if (E <= 0.0 || I <= 0.0 || L <= 0.0) {
        throw std::invalid_argument("cantilever_tip_deflection: E, I, L must be positive");
    }
    return F * L * L * L / (3.0 * E * I);
}

double cantilever_axial_deflection(double F, double E, double A, double L) {
    if (E <= 0.0 || A <= 0.0 || L <= 0.0) {
        throw std::invalid_argument("cantilever_axial_deflection: E, A, L must be positive");
    }
    return F * L / (E * A);
}

double euler_buckling(double E, double I, double L, BucklingCase bc) {
    if (E <= 0.0 || I <= 0.0 || L <= 0.0) {
        throw std::invalid_argument("euler_buckling: E, I, L must be positive");
    }
    const double base = kPi * kPi * E * I / (L * L);
    switch (bc) {
        case BucklingCase::Cantilever: return base / 4.0;
        case BucklingCase::Pinned: return base;
        case BucklingCase::ClampedClamped: return 4.0 * base;
    }
    throw std::invalid_argument("euler_buckling: unknown boundary case");
}

std::vector<double> cantilever_beta_roots(int n) {
    if (n < 1 || n > 5) {
        throw std::invalid_argument("cantilever_beta_roots: n must be in [1, 5]");
    }
    // cos(x) cosh(x) = -1 is ill-conditioned at large x (cosh amplifies
    // rounding); bisect on cos(x) + 1/cosh(x), which has the same roots.
    auto f = [](double x) { return std::cos(x) + 1.0 / std::cosh(x); };
    std::vector<double> roots;
    for (int k = 1; k <= n; ++k) {
        double lo = (k - 0.5) * kPi - 0.45;
        double hi = (k - 0.5) * kPi + 0.45;
        double flo = f(lo);
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break; // interval exhausted at double precision
            }
            const double fmid = f(mid);
            if ((fmid > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

std::vector<double> cantilever_frequencies(double E, double I, double rho, double A,
                                           double L, int n) {
    if (E <= 0.0 || I <= 0.0 || rho <= 0.0 || A <= 0.0 || L <= 0.0) {
        throw std::invalid_argument("cantilever_frequencies: inputs must be positive");
    }
    const double scale = std::sqrt(E * I / (rho * A * L * L * L * L));
    std::vector<double> omegas = cantilever_beta_roots(n);
    for (double& w : omegas) {
        w = w * w * scale;
    }
    return omegas;
}

namespace {

// State (theta, theta', x, y) over normalized arclength; alpha = F L^2 / EI.
using ElasticaState = std::array<double, 4>;

ElasticaState integrate_elastica(double alpha, double kappa0) {
    namespace odeint = boost::numeric::odeint;
    auto rhs = [alpha](const ElasticaState& s, ElasticaState& dsdt, double) {
        dsdt[0] = s[1];
        dsdt[1] = -alpha * std::cos(s[0]);
        dsdt[2] = std::cos(s[0]);
        dsdt[3] = std::sin(s[0]);
    };
    ElasticaState state{0.0, kappa0, 0.0, 0.0};
    auto stepper = odeint::make_controlled<odeint::runge_kutta_cash_karp54<ElasticaState>>(
        1e-12, 1e-12);
    odeint::integrate_adaptive(stepper, rhs, state, 0.0, 1.0, 1e-3);
    return state;
}

} // namespace

ElasticaTip elastica_tip_response(double alpha) {
    if (alpha < 0.0) {
        throw std::invalid_argument("elastica_tip_response: alpha must be non-negative");
    }
    if (alpha == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    // theta'(0) = alpha * x_tip/L lies in (0, alpha); the mismatch
    // g(kappa) = theta'(1) is negative at 0 and positive at alpha.
    double lo = 0.0;
    double hi = alpha;
    double g_mid = integrate_elastica(alpha, hi)[1];
    if (!(g_mid > 0.0)) {
        throw std::runtime_error("elastica_tip_response: shooting bracket failed");
    }
    double kappa = hi;
    for (int iter = 0; iter < 200; ++iter) {
        kappa = 0.5 * (lo + hi);
        g_mid = integrate_elastica(alpha, kappa)[1];
        if (std::abs(g_mid) <= 1e-10) {
            break;
        }
        if (g_mid > 0.0) {
            hi = kappa;
        } else {
            lo = kappa;
        }
        if (hi - lo <= 1e-15 * alpha) {
            break;
        }
    }
    if (std::abs(g_mid) > 1e-10) {
        throw std::runtime_error("elastica_tip_response: shooting did not converge");
    }
    const ElasticaState tip = integrate_elastica(alpha, kappa);
    return {tip[3], 1.0 - tip[2], tip[0]};
}

} // namespace rodnet::oracle
