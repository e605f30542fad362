#include "rodnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rodnet {

namespace {

// First k where the Cholesky pivot goes non-positive, plus an approximate
// null direction obtained by back-substituting the partial factor.
std::pair<int, std::vector<double>> locate_rank_deficiency(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double pivot = A(k, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            pivot -= L(k, j) * L(k, j);
        }
        if (!(pivot > 0.0)) {
            // x solves L(0:k,0:k)^T x = -L(k,0:k)^T, appended with 1: an
            // exact null vector when the pivot is exactly zero.
            Eigen::VectorXd x = Eigen::VectorXd::Zero(k + 1);
            x(k) = 1.0;
            for (Eigen::Index i = k - 1; i >= 0; --i) {
                double s = L(k, i);
                for (Eigen::Index j = i + 1; j < k; ++j) {
                    s += L(j, i) * x(j);
                }
                x(i) = -s / L(i, i);
            }
            std::vector<double> dir(n, 0.0);
            for (Eigen::Index i = 0; i <= k; ++i) {
                dir[static_cast<std::size_t>(i)] = x(i);
            }
            return {static_cast<int>(k), dir};
        }
        const double diag = std::sqrt(pivot);
        L(k, k) = diag;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            double s = A(i, k);
            for (Eigen::Index j = 0; j < k; ++j) {
                s -= L(i, j) * L(k, j);
            }
            L(i, k) = s / diag;
        }
    }
    return {-1, {}};
}

} // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("SymMatrix: matrix is not square");
    }
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-12 * scale) {
        throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(asym / scale) +
                                    " exceeds 1e-12 relative");
    }
    mat_ = 0.5 * (m + m.transpose());
}

Eigen::VectorXd solve_spd(const SymMatrix& A, const Eigen::VectorXd& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(A.mat());
    if (llt.info() != Eigen::Success) {
        auto [pivot, dir] = locate_rank_deficiency(A.mat());
        throw RankDeficiencyError(
            "solve_spd: matrix is not positive definite (first non-positive pivot at index " +
                std::to_string(pivot) + ")",
            pivot, std::move(dir));
    }
    Eigen::VectorXd x = llt.solve(b);
    // One refinement pass tightens the residual to the 1e-12 contract.
    x += llt.solve(b - A.mat() * x);
    return x;
}

GeneralizedEigenResult eig_gsym(const SymMatrix& A, const SymMatrix& B, int k,
                                EigWhich which) {
    const Eigen::Index n = A.size();
    if (B.size() != n) {
        throw std::invalid_argument("eig_gsym: dimension mismatch");
    }
    GeneralizedEigenResult result;

    if (which == EigWhich::Smallest) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A.mat(), B.mat());
        if (solver.info() != Eigen::Success) {
            throw EigenConvergenceError("eig_gsym: generalized eigen solve failed", -1.0);
        }
        const int count = std::min<int>(k, static_cast<int>(n));
        result.values = solver.eigenvalues().head(count);
        result.vectors = solver.eigenvectors().leftCols(count);
    } else {
        // A is SPD here. Solve the reversed pencil B w = mu A w, whose
        // right-hand matrix is positive definite; lambda = 1/mu for mu > 0,
        // so the largest positive mu give the smallest positive lambda.
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(B.mat(), A.mat());
        if (solver.info() != Eigen::Success) {
            throw EigenConvergenceError("eig_gsym: generalized eigen solve failed", -1.0);
        }
        std::vector<Eigen::Index> positive;
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (solver.eigenvalues()(i) > 0.0) {
                positive.push_back(i); // descending mu == ascending lambda
            }
        }
        const int count = std::min<int>(k, static_cast<int>(positive.size()));
        result.values.resize(count);
        result.vectors.resize(n, count);
        for (int i = 0; i < count; ++i) {
            const Eigen::Index src = positive[static_cast<std::size_t>(i)];
            const double mu = solver.eigenvalues()(src);
            result.values(i) = 1.0 / mu;
            // Solver vectors are A-orthonormal; rescale to v' B v = 1.
            result.vectors.col(i) = solver.eigenvectors().col(src) / std::sqrt(mu);
        }
    }

    // Residual contract per pair.
    const double norm_a = A.mat().cwiseAbs().maxCoeff();
    const double norm_b = B.mat().cwiseAbs().maxCoeff();
    for (int i = 0; i < result.values.size(); ++i) {
        const double lambda = result.values(i);
        const Eigen::VectorXd v = result.vectors.col(i).normalized();
        const double residual = (A.mat() * v - lambda * (B.mat() * v)).norm();
        const double allowed = 1e-9 * (norm_a + std::abs(lambda) * norm_b);
        if (residual > allowed) {
            throw EigenConvergenceError(
                "eig_gsym: residual " + std::to_string(residual) + " exceeds contract " +
                    std::to_string(allowed) + " for eigenvalue " + std::to_string(lambda),
                residual);
        }
    }
    return result;
}

int negative_inertia(const Eigen::MatrixXd& A) {
    // A full symmetric eigendecomposition instead of LDL^T: the matrices this
    // is called on (dynamic stiffness evaluated between resonances) are
    // indefinite, where diagonal-pivoting LDL^T can break down. Desk-scale
    // orders make the O(n^3) cost irrelevant.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigenConvergenceError("negative_inertia: eigen solve failed", -1.0);
    }
    int count = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (solver.eigenvalues()(i) < 0.0) {
            ++count;
        }
    }
    return count;
}

} // namespace rodnet
