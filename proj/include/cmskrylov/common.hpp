#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cmskrylov {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

// Every tolerance used by the library. Defaults match the documented values.
struct ToleranceProfile {
    double hermitian = 1e-10;          // relative ‖H − Hᴴ‖_F / ‖H‖_F
    double eig_rel = 1e-14;            // off-diagonal stop, relative to ‖H‖_F
    int eig_sweep_factor = 64;         // iteration cap = factor · n
    double singular_pivot = 1e-14;     // pivot threshold relative to ‖A‖
    double solve_residual = 1e-10;     // relative residual of shifted solves
    double breakdown = 1e-12;          // β_j ≤ breakdown · ‖A‖
    double anti_hermitian = 1e-8;      // complex SaI: ‖R − Rᴴ‖ ≤ tol · ‖R‖
    double unitary_gamma = 1e-8;       // |γ| ≤ 1 + tol in isometric Arnoldi
    double qor_guard = 1e-8;           // |ξ − θ| ≥ guard · spread
    double node_distinct = 1e-12;      // minimal node gap relative to spread
    double merge = 1e-10;              // eigenvalue merge, relative to spread
    double weight_floor = 1e-14;       // relative to ‖u‖²
    double strict_margin = 1e-12;      // CMS strictness, relative to total
    double interpolation = 1e-8;       // Hermite condition residual
    int majorant_max_m = 12;
};

const ToleranceProfile& default_tolerances();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct ConvergenceFailure : Error {
    using Error::Error;
};

struct SingularShift : Error {
    using Error::Error;
};

struct GuardViolation : Error {
    using Error::Error;
};

struct LuckyBreakdown : Error {
    LuckyBreakdown(int step_, double beta_)
        : Error("lucky breakdown at step " + std::to_string(step_)), step(step_), beta(beta_) {}
    int step;
    double beta;
};

struct ParseError : Error {
    ParseError(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
    int line;
};

}  // namespace cmskrylov
