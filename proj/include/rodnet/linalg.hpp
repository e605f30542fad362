#pragma once

#include <Eigen/Dense>

#include "rodnet/errors.hpp"

namespace rodnet {

/// Dense symmetric matrix. Construction validates that the input is
/// symmetric to 1e-12 relative and stores the exactly symmetrized half-sum,
/// so downstream factorizations never see asymmetry.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& m);

    Eigen::Index size() const { return mat_.rows(); }
    const Eigen::MatrixXd& mat() const { return mat_; }

private:
    Eigen::MatrixXd mat_;
};

/// Solves A x = b for symmetric positive definite A by Cholesky
/// factorization with one iterative-refinement pass. Throws
/// RankDeficiencyError (with the first non-positive pivot index and an
/// approximate null direction) when A is not positive definite.
Eigen::VectorXd solve_spd(const SymMatrix& A, const Eigen::VectorXd& b);

enum class EigWhich {
    /// k algebraically smallest eigenvalues; B must be positive definite.
    Smallest,
    /// k smallest eigenvalues with lambda > 0; A must be positive definite,
    /// B may be indefinite or singular. Directions with v' B v <= 0 carry no
    /// positive eigenvalue and are discarded (this is the deflation used for
    /// buckling, where B = -Kg vanishes on tension-free rows).
    SmallestPositive,
};

struct GeneralizedEigenResult {
    /// Ascending eigenvalues. For SmallestPositive this may hold fewer than
    /// the requested count when fewer positive eigenvalues exist.
    Eigen::VectorXd values;
    /// Column i is the eigenvector for values[i], B-orthonormal.
    Eigen::MatrixXd vectors;
};

/// Generalized symmetric eigenproblem A v = lambda B v.
GeneralizedEigenResult eig_gsym(const SymMatrix& A, const SymMatrix& B, int k,
                                EigWhich which);

/// Number of negative eigenvalues of a symmetric matrix (its negative
/// inertia). Valid for indefinite input.
int negative_inertia(const Eigen::MatrixXd& A);

} // namespace rodnet
