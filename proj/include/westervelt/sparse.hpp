#ifndef WESTERVELT_SPARSE_HPP
#define WESTERVELT_SPARSE_HPP

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "westervelt/types.hpp"

namespace westervelt {

enum class SolveMethod { direct, iterative };

struct SolveReport {
    double residual_norm = 0.0;  // ||Ax-b||_2 / max(||b||_2, 1e-300)
    int iterations = 0;          // 0 for direct solves
    SolveMethod method = SolveMethod::direct;
};

constexpr double kSolveTolerance = 1e-10;

/// Complex sparse matrix in triplet assembly / compressed storage.
/// Duplicate (row, col) contributions are summed on finalize.
class SparseMatrix {
public:
    explicit SparseMatrix(int n) : n_(n) {}

    void add(int row, int col, cplx value) { trips_.emplace_back(row, col, value); }

    void finalize() {
        mat_.resize(n_, n_);
        mat_.setFromTriplets(trips_.begin(), trips_.end());
        mat_.makeCompressed();
        trips_.clear();
        trips_.shrink_to_fit();
        finalized_ = true;
    }

    int n() const { return n_; }
    bool finalized() const { return finalized_; }
    const Eigen::SparseMatrix<cplx>& eigen() const { return mat_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return mat_ * x; }

private:
    int n_;
    std::vector<Eigen::Triplet<cplx>> trips_;
    Eigen::SparseMatrix<cplx> mat_;
    bool finalized_ = false;
};

inline Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

inline std::vector<cplx> from_eigen(const Eigen::VectorXcd& v) {
    return std::vector<cplx>(v.data(), v.data() + v.size());
}

/// Sparse LU factorization reusable across many right-hand sides.
/// Immutable after construction; concurrent solves are permitted.
class Factorization {
public:
    explicit Factorization(const SparseMatrix& a) : a_(a.eigen()) {
        if (!a.finalized()) throw InvariantViolationError("factorize requires a finalized matrix");
        lu_.compute(a_);
        if (lu_.info() != Eigen::Success)
            throw SingularMatrixError("sparse LU factorization failed (singular or structurally deficient matrix)");
    }

    int n() const { return static_cast<int>(a_.rows()); }
    const Eigen::SparseMatrix<cplx>& matrix() const { return a_; }

    std::pair<std::vector<cplx>, SolveReport> solve(std::span<const cplx> b) const {
        const Eigen::VectorXcd bv = to_eigen(b);
        if (bv.size() != a_.rows()) throw ShapeMismatchError("rhs length does not match matrix dimension");
        const double bnorm = bv.norm();
        if (bnorm == 0.0)
            return {std::vector<cplx>(b.size(), cplx{0.0, 0.0}), SolveReport{0.0, 0, SolveMethod::direct}};
        Eigen::VectorXcd x = lu_.solve(bv);
        const double rel = (a_ * x - bv).norm() / std::max(bnorm, kNormFloor);
        if (!(rel <= kSolveTolerance))
            throw SolverToleranceError("direct solve residual " + std::to_string(rel) + " exceeds tolerance", rel);
        return {from_eigen(x), SolveReport{rel, 0, SolveMethod::direct}};
    }

    /// Backsolve without the residual audit; for inner sensitivity sweeps.
    std::vector<cplx> solve_raw(std::span<const cplx> b) const {
        Eigen::VectorXcd x = lu_.solve(to_eigen(b));
        return from_eigen(x);
    }

    /// Solve A^H x = b with the same factorization.
    std::vector<cplx> solve_adjoint(std::span<const cplx> b) const {
        const Eigen::VectorXcd bv = to_eigen(b);
        Eigen::VectorXcd x = lu_.adjoint().solve(bv);
        const double bnorm = bv.norm();
        const double rel = (a_.adjoint() * x - bv).norm() / std::max(bnorm, kNormFloor);
        if (!(rel <= kSolveTolerance))
            throw SolverToleranceError("adjoint solve residual " + std::to_string(rel) + " exceeds tolerance", rel);
        return from_eigen(x);
    }

private:
    Eigen::SparseMatrix<cplx> a_;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu_;
};

inline std::pair<std::vector<cplx>, SolveReport> solve_iterative(const SparseMatrix& a, std::span<const cplx> b) {
    const Eigen::VectorXcd bv = to_eigen(b);
    if (bv.size() != a.eigen().rows()) throw ShapeMismatchError("rhs length does not match matrix dimension");
    const double bnorm = bv.norm();
    if (bnorm == 0.0)
        return {std::vector<cplx>(b.size(), cplx{0.0, 0.0}), SolveReport{0.0, 0, SolveMethod::iterative}};
    Eigen::BiCGSTAB<Eigen::SparseMatrix<cplx>, Eigen::IncompleteLUT<cplx>> it;
    it.setTolerance(1e-12);
    it.setMaxIterations(5000);
    it.compute(a.eigen());
    if (it.info() != Eigen::Success)
        throw SingularMatrixError("incomplete factorization failed during iterative setup");
    Eigen::VectorXcd x = it.solve(bv);
    const double rel = (a.eigen() * x - bv).norm() / std::max(bnorm, kNormFloor);
    if (!(rel <= kSolveTolerance))
        throw NonConvergenceError("iterative solve stalled at residual " + std::to_string(rel), rel);
    return {from_eigen(x), SolveReport{rel, static_cast<int>(it.iterations()), SolveMethod::iterative}};
}

inline std::pair<std::vector<cplx>, SolveReport> solve(const SparseMatrix& a, std::span<const cplx> b,
                                                       SolveMethod method = SolveMethod::direct) {
    if (method == SolveMethod::iterative) return solve_iterative(a, b);
    Factorization f(a);
    return f.solve(b);
}

}  // namespace westervelt

#endif
