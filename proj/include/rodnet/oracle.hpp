#pragma once

#include <vector>

namespace rodnet::oracle {

/// Closed-form tip deflection of an end-loaded cantilever: F L^3 / (3 E I).
double cantilever_tip_deflection(double F, double E, double I, double L);

/// Closed-form axial tip displacement of an end-loaded bar: F L / (E A).
double cantilever_axial_deflection(double F, double E, double A, double L);

enum class BucklingCase { Cantilever, Pinned, ClampedClamped };

/// Euler critical load: pi^2 EI / (4 L^2), pi^2 EI / L^2, or 4 pi^2 EI / L^2.
double euler_buckling(double E, double I, double L, BucklingCase bc);

/// First n roots x = beta*L of cos(x) cosh(x) = -1, found by bisection on the
/// equivalent well-conditioned form cos(x) + sech(x) = 0. n <= 5.
std::vector<double> cantilever_beta_roots(int n);

/// First n natural circular frequencies of a uniform cantilever,
/// omega_k = (beta_k L)^2 sqrt(EI / (rho A L^4)). n <= 5.
std::vector<double> cantilever_frequencies(double E, double I, double rho, double A,
                                           double L, int n);

struct ElasticaTip {
    double dy_over_L;  ///< transverse tip deflection / length
    double dx_over_L;  ///< axial shortening of the tip projection / length
    double tip_angle;  ///< slope at the free end (rad)
};

/// Large-deflection response of an inextensible cantilever under a transverse
/// end load with load parameter alpha = F L^2 / (EI). Solves the elastica
/// boundary value problem theta'' = -alpha cos(theta), theta(0) = 0,
/// theta'(1) = 0 by shooting on theta'(0) with an adaptive Runge-Kutta
/// integrator (tolerance 1e-12); the shot boundary condition is driven
/// below 1e-10.
ElasticaTip elastica_tip_response(double alpha);

} // namespace rodnet::oracle
