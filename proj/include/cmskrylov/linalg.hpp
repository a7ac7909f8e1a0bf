#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "cmskrylov/common.hpp"

namespace cmskrylov {

// (x,y)_M = xᴴ M y. Identity metric when no matrix is stored.
class InnerProduct {
public:
    static InnerProduct identity(int n);
    // Checks M = Mᴴ and positive definiteness (Cholesky).
    static InnerProduct dense(const Mat& M, const ToleranceProfile& tol = default_tolerances());

    int n() const { return n_; }
    bool is_identity() const { return !M_; }
    const Mat& matrix() const { return *M_; }
    // Lower Cholesky factor L with M = L Lᴴ. Requires a dense metric.
    const Mat& cholesky() const { return *L_; }

    cplx operator()(const Vec& x, const Vec& y) const;
    double norm(const Vec& x) const;
    Vec apply_metric(const Vec& x) const;
    // (U, V)_M = Uᴴ M V for column blocks.
    Mat gram(const Mat& U, const Mat& V) const;
    Vec project(const Mat& U, const Vec& v) const;  // (U, v)_M

private:
    int n_ = 0;
    std::shared_ptr<const Mat> M_;
    std::shared_ptr<const Mat> L_;
};

// Hermitian tridiagonal storage: real diagonal, lower(j) = A(j+1, j).
struct Tridiagonal {
    RVec diag;
    Vec lower;
};

// An operator self-adjoint w.r.t. an inner product, stored dense or tridiagonal.
class HermitianOperator {
public:
    static HermitianOperator from_tridiagonal(Tridiagonal t);
    // Tridiagonal Hermitian matrices are detected and stored compactly.
    static HermitianOperator from_dense(const Mat& A, const InnerProduct& ip,
                                        const ToleranceProfile& tol = default_tolerances());
    static HermitianOperator diagonal(const RVec& d);

    int n() const;
    bool is_tridiagonal() const { return std::holds_alternative<Tridiagonal>(data_); }
    const Tridiagonal& tridiagonal() const { return std::get<Tridiagonal>(data_); }
    const Mat& dense() const { return std::get<Mat>(data_); }
    Mat to_dense() const;

    Vec apply(const Vec& x) const;
    Mat apply(const Mat& X) const;
    // Upper bound on ‖A‖₂ (infinity norm).
    double norm_estimate() const;

private:
    std::variant<Tridiagonal, Mat> data_;
};

struct EigenDecomposition {
    RVec eigenvalues;   // ascending
    Mat eigenvectors;   // columns, orthonormal in the tagged inner product
    bool m_orthonormal = false;
};

// Cyclic Jacobi for dense Hermitian matrices.
EigenDecomposition hermitian_eig(const Mat& H, const ToleranceProfile& tol = default_tolerances());

// Implicit-shift QL. offdiag entries must be positive.
EigenDecomposition tridiag_eig(const RVec& diag, const RVec& offdiag,
                               const ToleranceProfile& tol = default_tolerances());

// Eigenvalues of a real symmetric tridiagonal matrix (any sign of offdiag) together
// with W·Q, where Q holds the eigenvectors. Pass W = I for Q, or a row block to project.
struct TridiagProjected {
    RVec eigenvalues;
    Mat projected;
};
TridiagProjected tridiag_eig_apply(const RVec& diag, const RVec& offdiag, const Mat& W,
                                   const ToleranceProfile& tol = default_tolerances());

// Eigenvalues of A and spectral coefficients w_j = (q_j, u)_M for an M-orthonormal
// eigenbasis. Uses QL for tridiagonal A with identity metric, Jacobi otherwise.
struct SpectralData {
    RVec eigenvalues;
    Vec coefficients;
};
SpectralData spectral_coefficients(const HermitianOperator& A, const Vec& u, const InnerProduct& ip,
                                   const ToleranceProfile& tol = default_tolerances());

// Factorization of A − sI reused across solves.
class ShiftedSolver {
public:
    ShiftedSolver(const HermitianOperator& A, cplx s, const ToleranceProfile& tol = default_tolerances());
    Vec solve(const Vec& b) const;
    cplx shift() const { return s_; }

private:
    const HermitianOperator* A_;
    cplx s_;
    ToleranceProfile tol_;
    // tridiagonal LU with partial pivoting
    Vec dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
    // dense LU
    std::optional<Eigen::PartialPivLU<Mat>> lu_;
};

Vec shifted_solve(const HermitianOperator& A, cplx s, const Vec& b,
                  const ToleranceProfile& tol = default_tolerances());

// Dirichlet finite differences on (0,1): diagonal 2/h², off-diagonal −1/h², h = 1/(n+1).
HermitianOperator laplacian_1d(int n);

// Max |(Ax,y)_M − (x,Ay)_M| on random samples, relative to ‖A‖.
double selfadjoint_defect(const HermitianOperator& A, const InnerProduct& ip, int samples = 4,
                          unsigned seed = 7);

}  // namespace cmskrylov
