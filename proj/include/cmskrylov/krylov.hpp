#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmskrylov/linalg.hpp"

namespace cmskrylov {

enum class Kind { Polynomial, SaIReal, SaIComplex, Extended, QorPoly, QorRational };

std::string to_string(Kind k);

struct PoleSpec {
    enum class Variant { None, SingleReal, SingleComplex, ExtendedShift };
    Variant variant = Variant::None;
    cplx s{0.0, 0.0};
    int multiplicity = 0;
    int rho = 0;
};

struct Residual {
    Vec vector;          // next basis vector, zero when the space is invariant
    double coefficient;  // β_m (or z_{m+1,m})
};

struct KrylovDecomposition {
    Kind kind = Kind::Polynomial;
    int m = 0;
    Mat basis;      // n × m, M-orthonormal
    Mat rep;        // m × m Hermitian
    Vec x;          // (U_m, u)_M
    double beta0 = 0.0;
    std::optional<Residual> residual;
    PoleSpec pole;
    std::optional<double> xi;
    double rep_defect = 0.0;  // relative anti-Hermitian part before Hermitization
};

// A V_m = V_m J_m + β_m v_{m+1} e_mᴴ with full reorthogonalization.
KrylovDecomposition lanczos(const HermitianOperator& A, const Vec& u, int m, const InnerProduct& ip,
                            const ToleranceProfile& tol = default_tolerances());

// Rayleigh quotient of the shift-and-invert space with a single pole s of
// multiplicity m−1 (Lanczos on (A−sI)⁻¹ for real s, Arnoldi otherwise).
KrylovDecomposition sai_rayleigh(const HermitianOperator& A, const Vec& u, int m, cplx s,
                                 const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

KrylovDecomposition sai_real(const HermitianOperator& A, const Vec& u, int m, double s,
                             const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

struct IsometricArnoldiResult {
    Mat basis;           // U_m
    Mat Zm;              // m × m upper Hessenberg
    double z_next = 0.0; // z_{m+1,m}
    Vec next;            // u_{m+1}
    double beta0 = 0.0;
    std::vector<cplx> gamma;
    std::vector<double> sigma;
};

using LinearMap = std::function<Vec(const Vec&)>;

IsometricArnoldiResult isometric_arnoldi(const LinearMap& Z, const Vec& u, int m, const InnerProduct& ip,
                                         const ToleranceProfile& tol = default_tolerances());

// Z = (A − s̄I)(A − sI)⁻¹ = I + (s − s̄)(A − sI)⁻¹
LinearMap cayley_map(const HermitianOperator& A, cplx s, const ToleranceProfile& tol = default_tolerances());

KrylovDecomposition sai_complex(const HermitianOperator& A, const Vec& u, int m, cplx s,
                                const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

// Laurent space span{(A−s)^{−ρ+1}u, …, u, …, A^{ρ−1}u}, m = 2ρ−1; requires s < λ₁.
KrylovDecomposition extended_lanczos(const HermitianOperator& A, const Vec& u, int rho, double s,
                                     const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

// True when A − sI is positive definite in ip (s below the spectrum).
bool is_below_spectrum(const HermitianOperator& A, double s, const InnerProduct& ip);

// ‖(U,U)_M − I‖_F
double orthogonality_defect(const Mat& U, const InnerProduct& ip);

}  // namespace cmskrylov
