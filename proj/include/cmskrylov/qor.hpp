#pragma once

#include <functional>
#include <vector>

#include "cmskrylov/krylov.hpp"

namespace cmskrylov {

using ScalarFunction = std::function<cplx(double)>;

// ω = ξ + β² e_lastᴴ (J − ξI)⁻¹ e_last. J is the predecessor representation.
// Throws GuardViolation when ξ is within guard·scale of an eigenvalue of J.
double qor_omega(const Mat& J, double beta, double xi, const ToleranceProfile& tol = default_tolerances());

// Gauss-Radau type representation T_m with ξ as an eigenvalue.
KrylovDecomposition qor_poly(const HermitianOperator& A, const Vec& u, int m, double xi, const InnerProduct& ip,
                             const ToleranceProfile& tol = default_tolerances());

// Rational counterpart B_m on the shift-and-invert space with pole s; m ≥ 3.
KrylovDecomposition qor_rational_sai(const HermitianOperator& A, const Vec& u, int m, cplx s, double xi,
                                     const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

// ω_m(ξ) sampled over a grid, together with the eigenvalues of J_{m−1} (poles)
// and of J_m (where ω_m equals a_m).
struct OmegaSweep {
    std::vector<double> xi;
    std::vector<double> omega;   // NaN where the guard rejects ξ
    double a_m = 0.0;            // last diagonal entry of J_m
    RVec poles;                  // eigenvalues of J_{m−1}
    RVec crossings;              // eigenvalues of J_m
    std::vector<double> omega_at_crossings;
    std::vector<double> detected_poles;  // midpoints of grid cells where ω jumps down
};

OmegaSweep qor_omega_sweep(const HermitianOperator& A, const Vec& u, int m, const std::vector<double>& xi,
                           const InnerProduct& ip, const ToleranceProfile& tol = default_tolerances());

// f(H) for a Hermitian H via its eigendecomposition.
Mat hermitian_function(const Mat& H, const ScalarFunction& f, const ToleranceProfile& tol = default_tolerances());

// basis · f(rep) · x for Polynomial or QorPoly decompositions.
Vec qor_fun_approx(const KrylovDecomposition& dec, const ScalarFunction& f,
                   const ToleranceProfile& tol = default_tolerances());

// basis · f(rep) · x for rational kinds.
Vec rational_qor_fun_approx(const KrylovDecomposition& dec, const ScalarFunction& f,
                            const ToleranceProfile& tol = default_tolerances());

}  // namespace cmskrylov
