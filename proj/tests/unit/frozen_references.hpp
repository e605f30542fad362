#pragma once

// Reference values produced by the oracle module before the solvers were
// built, frozen here so later changes to either side are caught as
// regressions. Regenerate (by printing the oracle outputs at full precision)
// only when the oracle itself is intentionally changed.

namespace frozen {

struct ElasticaRow {
    double alpha;
    double dy_over_L;
    double dx_over_L;
    double tip_angle;
};

// Inextensible-elastica cantilever tip response under a transverse end load,
// alpha = F L^2 / EI (shooting + adaptive RK, tol 1e-12).
inline constexpr ElasticaRow kElastica[] = {
    {1.0, 0.301720773827846, 0.056433236294654, 0.461351949772931},
    {2.0, 0.493457480411119, 0.160641720836166, 0.781749831595410},
    {5.0, 0.713791523613303, 0.387628360726361, 1.215368117617071},
    {10.0, 0.810609024878646, 0.554995597745869, 1.430285538775431},
};

// Roots of cos(x) cosh(x) = -1 (clamped-free frequency equation).
inline constexpr double kCantileverBetaL[] = {
    1.875104068711961,
    4.694091132974174,
    7.854757438237613,
    10.995540734875465,
    14.137168391046469,
};

} // namespace frozen
