#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rodnet {

/// Base class for analysis failures. Parse and validation problems are
/// reported as diagnostic values, not exceptions; anything thrown from a
/// solver derives from this.
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix expected to be positive definite was not. Carries the index of
/// the first non-positive pivot (in free-DOF numbering) and, when available,
/// an approximate null-space direction.
class RankDeficiencyError : public SolveError {
public:
    RankDeficiencyError(const std::string& what, int pivot_index,
                        std::vector<double> null_direction = {})
        : SolveError(what), pivot_index(pivot_index),
          null_direction(std::move(null_direction)) {}

    int pivot_index;
    std::vector<double> null_direction;
};

/// Element endpoints coincide; the chord frame is undefined.
class SingularConfigurationError : public SolveError {
public:
    explicit SingularConfigurationError(const std::string& what) : SolveError(what) {}
};

/// Eigenvalue iteration did not meet its residual contract.
class EigenConvergenceError : public SolveError {
public:
    EigenConvergenceError(const std::string& what, double achieved_residual)
        : SolveError(what), achieved_residual(achieved_residual) {}

    double achieved_residual;
};

/// Frequency root bracketing failed; carries the scanned interval and the
/// negative-inertia counts observed on the scan grid.
class BracketingError : public SolveError {
public:
    BracketingError(const std::string& what, double omega_lo, double omega_hi,
                    std::string sign_pattern)
        : SolveError(what), omega_lo(omega_lo), omega_hi(omega_hi),
          sign_pattern(std::move(sign_pattern)) {}

    double omega_lo;
    double omega_hi;
    std::string sign_pattern;
};

/// Buckling analysis under a reference load that compresses nothing.
class NoCompressionError : public SolveError {
public:
    explicit NoCompressionError(const std::string& what) : SolveError(what) {}
};

/// Nonlinear tangent lost rank at an equilibrium point (limit point or
/// bifurcation; no branch switching is attempted).
class SingularTangentError : public SolveError {
public:
    explicit SingularTangentError(const std::string& what) : SolveError(what) {}
};

} // namespace rodnet
