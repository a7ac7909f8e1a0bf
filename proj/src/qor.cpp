#include "cmskrylov/qor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmskrylov {

namespace {

double guard_scale(const RVec& theta) {
    if (theta.size() == 0) return 0.0;
    return std::max(theta.maxCoeff() - theta.minCoeff(), theta.cwiseAbs().maxCoeff());
}

void check_guard(const RVec& theta, double xi, const ToleranceProfile& tol) {
    const double scale = guard_scale(theta);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double d = std::abs(xi - theta(i));
        if (d == 0.0 || d < tol.qor_guard * scale)
            throw GuardViolation("preassigned eigenvalue too close to an eigenvalue of the predecessor matrix");
    }
}

double omega_unchecked(const Mat& J, double beta, double xi) {
    const Eigen::Index k = J.rows();
    Vec rhs = Vec::Zero(k);
    rhs(k - 1) = beta * beta;
    Mat S = J - xi * Mat::Identity(k, k);
    Vec delta = S.partialPivLu().solve(rhs);
    return xi + std::real(delta(k - 1));
}

KrylovDecomposition bordered(Mat basis, const Mat& J, double beta, double omega) {
    const Eigen::Index k = J.rows();
    KrylovDecomposition d;
    d.m = static_cast<int>(k + 1);
    d.basis = std::move(basis);
    d.rep = Mat::Zero(k + 1, k + 1);
    d.rep.topLeftCorner(k, k) = J;
    d.rep(k - 1, k) = beta;
    d.rep(k, k - 1) = beta;
    d.rep(k, k) = omega;
    return d;
}

}  // namespace

double qor_omega(const Mat& J, double beta, double xi, const ToleranceProfile& tol) {
    if (J.rows() < 1 || J.rows() != J.cols()) throw DimensionError("predecessor matrix must be square and nonempty");
    check_guard(hermitian_eig(J, tol).eigenvalues, xi, tol);
    return omega_unchecked(J, beta, xi);
}

KrylovDecomposition qor_poly(const HermitianOperator& A, const Vec& u, int m, double xi, const InnerProduct& ip,
                             const ToleranceProfile& tol) {
    if (m < 1) throw InvalidArgument("Krylov dimension must be positive");
    if (m == 1) {
        const double b0 = ip.norm(u);
        if (!(b0 > 0.0)) throw InvalidArgument("zero starting vector");
        KrylovDecomposition d;
        d.kind = Kind::QorPoly;
        d.m = 1;
        d.basis = u / b0;
        d.rep = Mat::Constant(1, 1, xi);
        d.beta0 = b0;
        d.x = Vec::Constant(1, b0);
        d.xi = xi;
        return d;
    }
    KrylovDecomposition lz = lanczos(A, u, m - 1, ip, tol);
    if (lz.residual->coefficient == 0.0) throw LuckyBreakdown(m - 1, 0.0);
    const double beta = lz.residual->coefficient;
    const double omega = qor_omega(lz.rep, beta, xi, tol);
    Mat basis(u.size(), m);
    basis << lz.basis, lz.residual->vector;
    KrylovDecomposition d = bordered(std::move(basis), lz.rep, beta, omega);
    d.kind = Kind::QorPoly;
    d.beta0 = lz.beta0;
    d.x = Vec::Zero(m);
    d.x(0) = lz.beta0;
    d.xi = xi;
    return d;
}

KrylovDecomposition qor_rational_sai(const HermitianOperator& A, const Vec& u, int m, cplx s, double xi,
                                     const InnerProduct& ip, const ToleranceProfile& tol) {
    if (m < 3) throw InvalidArgument("rational qor representation requires m >= 3");
    if (m > A.n()) throw InvalidArgument("Krylov dimension exceeds problem size");
    const double b0 = ip.norm(u);
    if (!(b0 > 0.0)) throw InvalidArgument("zero starting vector");
    const ShiftedSolver X(A, s, tol);
    const Vec uhat = X.solve(X.solve(u));
    KrylovDecomposition inner = sai_rayleigh(A, uhat, m - 2, s, ip, tol);

    const Eigen::Index n = u.size();
    const int p = m - 2;
    Mat U = Mat::Zero(n, m);
    U.leftCols(p) = inner.basis;
    const double scale = A.norm_estimate();

    auto orthogonalize = [&](Vec& w, Eigen::Index k) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < k; ++i) w -= ip(U.col(i), w) * U.col(i);
    };

    Vec v = A.apply(uhat);
    orthogonalize(v, p);
    const double nv = ip.norm(v);
    if (nv <= tol.breakdown * scale * ip.norm(uhat)) throw LuckyBreakdown(p, nv);
    U.col(p) = v / nv;

    Vec w = A.apply(Vec(U.col(p)));
    const Vec y = ip.project(U.leftCols(p), w);
    w -= U.leftCols(p) * y;
    const double a = std::real(ip(U.col(p), w));
    w -= a * U.col(p);
    orthogonalize(w, p + 1);
    const double beta = ip.norm(w);
    if (beta <= tol.breakdown * scale) throw LuckyBreakdown(p + 1, beta);
    U.col(p + 1) = w / beta;

    Mat At = Mat::Zero(p + 1, p + 1);
    At.topLeftCorner(p, p) = inner.rep;
    At.block(0, p, p, 1) = y;
    At.block(p, 0, 1, p) = y.adjoint();
    At(p, p) = a;
    const double omega = qor_omega(At, beta, xi, tol);

    KrylovDecomposition d = bordered(std::move(U), At, beta, omega);
    d.kind = Kind::QorRational;
    d.beta0 = b0;
    d.x = ip.project(d.basis, u);
    d.xi = xi;
    d.pole.variant = s.imag() == 0.0 ? PoleSpec::Variant::SingleReal : PoleSpec::Variant::SingleComplex;
    d.pole.s = s;
    d.pole.multiplicity = m - 1;
    return d;
}

OmegaSweep qor_omega_sweep(const HermitianOperator& A, const Vec& u, int m, const std::vector<double>& xi,
                           const InnerProduct& ip, const ToleranceProfile& tol) {
    if (m < 2) throw InvalidArgument("omega sweep requires m >= 2");
    KrylovDecomposition lz = lanczos(A, u, m, ip, tol);
    const Mat J = lz.rep.topLeftCorner(m - 1, m - 1);
    const double beta = std::real(lz.rep(m - 1, m - 2));
    OmegaSweep out;
    out.xi = xi;
    out.a_m = std::real(lz.rep(m - 1, m - 1));
    out.poles = hermitian_eig(J, tol).eigenvalues;
    out.crossings = hermitian_eig(lz.rep, tol).eigenvalues;
    for (double x : xi) {
        try {
            out.omega.push_back(qor_omega(J, beta, x, tol));
        } catch (const GuardViolation&) {
            out.omega.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    for (Eigen::Index i = 0; i < out.crossings.size(); ++i)
        out.omega_at_crossings.push_back(qor_omega(J, beta, out.crossings(i), tol));
    // ω − ξ increases between poles and jumps from +∞ to −∞ across each one.
    for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
        const double d0 = out.omega[i] - xi[i];
        const double d1 = out.omega[i + 1] - xi[i + 1];
        if (std::isfinite(d0) && std::isfinite(d1) && xi[i + 1] > xi[i] && d1 < d0)
            out.detected_poles.push_back(0.5 * (xi[i] + xi[i + 1]));
    }
    return out;
}

Mat hermitian_function(const Mat& H, const ScalarFunction& f, const ToleranceProfile& tol) {
    EigenDecomposition e = hermitian_eig(H, tol);
    Vec fv(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) {
        fv(i) = f(e.eigenvalues(i));
        if (!std::isfinite(fv(i).real()) || !std::isfinite(fv(i).imag()))
            throw InvalidArgument("function undefined at a representation eigenvalue");
    }
    return e.eigenvectors * fv.asDiagonal() * e.eigenvectors.adjoint();
}

Vec qor_fun_approx(const KrylovDecomposition& dec, const ScalarFunction& f, const ToleranceProfile& tol) {
    if (dec.kind != Kind::Polynomial && dec.kind != Kind::QorPoly)
        throw InvalidArgument("qor_fun_approx expects a polynomial or qor decomposition");
    return dec.basis * (hermitian_function(dec.rep, f, tol) * dec.x);
}

Vec rational_qor_fun_approx(const KrylovDecomposition& dec, const ScalarFunction& f, const ToleranceProfile& tol) {
    if (dec.kind == Kind::Polynomial || dec.kind == Kind::QorPoly)
        throw InvalidArgument("rational_qor_fun_approx expects a rational decomposition");
    return dec.basis * (hermitian_function(dec.rep, f, tol) * dec.x);
}

}  // namespace cmskrylov
