#include "cmskrylov/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace cmskrylov {

std::string to_string(Kind k) {
    switch (k) {
        case Kind::Polynomial: return "polynomial";
        case Kind::SaIReal: return "sai-real";
        case Kind::SaIComplex: return "sai-complex";
        case Kind::Extended: return "extended";
        case Kind::QorPoly: return "qor-poly";
        case Kind::QorRational: return "qor-sai";
    }
    return "unknown";
}

namespace {

void check_start(const Vec& u, int m, int n, const InnerProduct& ip) {
    if (u.size() != n || ip.n() != n) throw DimensionError("dimension mismatch");
    if (m < 1) throw InvalidArgument("Krylov dimension must be positive");
    if (m > n) throw InvalidArgument("Krylov dimension exceeds problem size");
}

// Two-pass modified Gram-Schmidt of w against the first k columns of V.
// Returns the accumulated coefficients.
Vec reorthogonalize(const Mat& V, Eigen::Index k, Vec& w, const InnerProduct& ip) {
    Vec coef = Vec::Zero(k);
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < k; ++i) {
            const cplx h = ip(V.col(i), w);
            w -= h * V.col(i);
            coef(i) += h;
        }
    }
    return coef;
}

struct ProcessResult {
    Mat V;        // n × (m+1); last column zero if invariant
    Mat H;        // (m+1) × m
    double beta0 = 0.0;
    bool invariant = false;
};

// Lanczos (hermitian) or Arnoldi process with full reorthogonalization.
// A breakdown before m vectors are available raises LuckyBreakdown.
ProcessResult krylov_process(const LinearMap& op, const Vec& u, int m, const InnerProduct& ip,
                             bool hermitian, double norm_hint, double breakdown_tol) {
    const Eigen::Index n = u.size();
    ProcessResult r;
    r.beta0 = ip.norm(u);
    if (!(r.beta0 > 0.0)) throw InvalidArgument("zero starting vector");
    r.V = Mat::Zero(n, m + 1);
    r.H = Mat::Zero(m + 1, m);
    r.V.col(0) = u / r.beta0;
    double scale = norm_hint;
    for (int j = 0; j < m; ++j) {
        Vec w = op(r.V.col(j));
        scale = std::max(scale, ip.norm(w));
        Vec h = reorthogonalize(r.V, j + 1, w, ip);
        if (hermitian) {
            r.H(j, j) = std::real(h(j));
            if (j > 0) r.H(j - 1, j) = r.H(j, j - 1);
        } else {
            r.H.col(j).head(j + 1) = h;
        }
        const double beta = ip.norm(w);
        if (beta <= breakdown_tol * scale) {
            if (j + 1 < m) throw LuckyBreakdown(j + 1, beta);
            r.invariant = true;
            r.H(j + 1, j) = 0.0;
            break;
        }
        r.H(j + 1, j) = beta;
        r.V.col(j + 1) = w / beta;
    }
    return r;
}

std::optional<Residual> make_residual(const ProcessResult& p, int m) {
    Residual res;
    res.vector = p.V.col(m);
    res.coefficient = std::real(p.H(m, m - 1));
    return res;
}

Mat checked_inverse(const Mat& B, const char* what) {
    Eigen::FullPivLU<Mat> lu(B);
    const double nb = B.cwiseAbs().rowwise().sum().maxCoeff();
    if (!lu.isInvertible() || nb == 0.0) throw Error(std::string(what) + " is singular");
    Mat inv = lu.inverse();
    const double rcond = 1.0 / (nb * inv.cwiseAbs().rowwise().sum().maxCoeff());
    if (!(rcond > 1e-15)) throw Error(std::string(what) + " is singular");
    return inv;
}

}  // namespace

double orthogonality_defect(const Mat& U, const InnerProduct& ip) {
    return (ip.gram(U, U) - Mat::Identity(U.cols(), U.cols())).norm();
}

KrylovDecomposition lanczos(const HermitianOperator& A, const Vec& u, int m, const InnerProduct& ip,
                            const ToleranceProfile& tol) {
    check_start(u, m, A.n(), ip);
    LinearMap op = [&A](const Vec& v) { return A.apply(v); };
    ProcessResult p = krylov_process(op, u, m, ip, true, A.norm_estimate(), tol.breakdown);
    KrylovDecomposition d;
    d.kind = Kind::Polynomial;
    d.m = m;
    d.basis = p.V.leftCols(m);
    d.rep = p.H.topRows(m);
    d.beta0 = p.beta0;
    d.x = Vec::Zero(m);
    d.x(0) = p.beta0;
    d.residual = make_residual(p, m);
    return d;
}

KrylovDecomposition sai_rayleigh(const HermitianOperator& A, const Vec& u, int m, cplx s,
                                 const InnerProduct& ip, const ToleranceProfile& tol) {
    check_start(u, m, A.n(), ip);
    auto solver = std::make_shared<ShiftedSolver>(A, s, tol);
    LinearMap X = [solver](const Vec& v) { return solver->solve(v); };
    const bool real_shift = s.imag() == 0.0;
    ProcessResult p = krylov_process(X, u, m, ip, real_shift, 0.0, tol.breakdown);

    const Mat Xm = p.H.topRows(m);
    const double beta_m = std::real(p.H(m, m - 1));
    const Vec next = p.V.col(m);
    const double kappa = p.invariant ? 0.0 : std::real(ip(next, A.apply(next)));
    const Mat Xinv = checked_inverse(Xm, "projected shift-and-invert matrix");
    const Vec y = Xinv.row(m - 1).adjoint();
    const double sr = s.real();
    Mat Am = (Xinv + Xinv.adjoint()) / 2.0 + sr * Mat::Identity(m, m) +
             (beta_m * beta_m * (kappa - sr)) * (y * y.adjoint());
    Am = (Am + Am.adjoint()) / 2.0;

    KrylovDecomposition d;
    d.kind = real_shift ? Kind::SaIReal : Kind::SaIComplex;
    d.m = m;
    d.basis = p.V.leftCols(m);
    d.rep = std::move(Am);
    d.beta0 = p.beta0;
    d.x = Vec::Zero(m);
    d.x(0) = p.beta0;
    d.residual = make_residual(p, m);
    d.pole.variant = real_shift ? PoleSpec::Variant::SingleReal : PoleSpec::Variant::SingleComplex;
    d.pole.s = s;
    d.pole.multiplicity = m - 1;
    return d;
}

KrylovDecomposition sai_real(const HermitianOperator& A, const Vec& u, int m, double s,
                             const InnerProduct& ip, const ToleranceProfile& tol) {
    return sai_rayleigh(A, u, m, cplx(s, 0.0), ip, tol);
}

IsometricArnoldiResult isometric_arnoldi(const LinearMap& Z, const Vec& u, int m, const InnerProduct& ip,
                                         const ToleranceProfile& tol) {
    const Eigen::Index n = u.size();
    if (ip.n() != n) throw DimensionError("dimension mismatch");
    if (m < 1 || m > n) throw InvalidArgument("invalid Krylov dimension");
    IsometricArnoldiResult r;
    r.beta0 = ip.norm(u);
    if (!(r.beta0 > 0.0)) throw InvalidArgument("zero starting vector");
    Mat V = Mat::Zero(n, m + 1);
    V.col(0) = u / r.beta0;
    Vec vhat = V.col(0);
    r.Zm = Mat::Identity(m, m);
    for (int k = 0; k < m; ++k) {
        const Vec w = Z(V.col(k));
        const cplx gamma = -ip(vhat, w);
        if (std::abs(gamma) > 1.0 + tol.unitary_gamma) throw Error("isometric Arnoldi: |gamma| > 1, operator not unitary");
        Vec vnext = w + gamma * vhat;
        reorthogonalize(V, k + 1, vnext, ip);
        const double sigma = ip.norm(vnext);
        r.gamma.push_back(gamma);
        r.sigma.push_back(sigma);
        const bool broke = sigma <= tol.breakdown;
        if (broke && k + 1 < m) throw LuckyBreakdown(k + 1, sigma);
        if (!broke) V.col(k + 1) = vnext / sigma;
        if (k + 1 < m) {
            Eigen::Matrix2cd G;
            G << -gamma, sigma, sigma, std::conj(gamma);
            r.Zm.middleCols(k, 2) = (r.Zm.middleCols(k, 2) * G).eval();
            vhat = sigma * vhat + std::conj(gamma) * V.col(k + 1);
            vhat /= ip.norm(vhat);
        } else {
            r.Zm.col(k) *= -gamma;
            r.z_next = broke ? 0.0 : sigma;
        }
    }
    r.basis = V.leftCols(m);
    r.next = V.col(m);
    return r;
}

LinearMap cayley_map(const HermitianOperator& A, cplx s, const ToleranceProfile& tol) {
    auto solver = std::make_shared<ShiftedSolver>(A, s, tol);
    const cplx c = s - std::conj(s);
    return [solver, c](const Vec& v) -> Vec { return v + c * solver->solve(v); };
}

KrylovDecomposition sai_complex(const HermitianOperator& A, const Vec& u, int m, cplx s,
                                const InnerProduct& ip, const ToleranceProfile& tol) {
    if (s.imag() == 0.0) throw InvalidArgument("sai_complex requires Im s != 0; use sai_real");
    check_start(u, m, A.n(), ip);
    IsometricArnoldiResult ia = isometric_arnoldi(cayley_map(A, s, tol), u, m, ip, tol);
    const double kappa = ia.z_next == 0.0 ? 0.0 : std::real(ip(ia.next, A.apply(ia.next)));
    const Mat I = Mat::Identity(m, m);
    const Mat inv = checked_inverse(I - ia.Zm, "I - Z_m");
    const Vec y = inv.row(m - 1).adjoint();
    const cplx sb = std::conj(s);
    Mat R = (sb * I - s * ia.Zm) * inv + (ia.z_next * ia.z_next * (kappa - sb)) * (y * y.adjoint());
    const double defect = (R - R.adjoint()).norm() / std::max(R.norm(), 1e-300);
    if (defect > tol.anti_hermitian) throw NotHermitian("complex SaI Rayleigh quotient is not Hermitian");

    KrylovDecomposition d;
    d.kind = Kind::SaIComplex;
    d.m = m;
    d.basis = std::move(ia.basis);
    d.rep = (R + R.adjoint()) / 2.0;
    d.rep_defect = defect;
    d.beta0 = ia.beta0;
    d.x = Vec::Zero(m);
    d.x(0) = ia.beta0;
    d.residual = Residual{ia.next, ia.z_next};
    d.pole.variant = PoleSpec::Variant::SingleComplex;
    d.pole.s = s;
    d.pole.multiplicity = m - 1;
    return d;
}

bool is_below_spectrum(const HermitianOperator& A, double s, const InnerProduct& ip) {
    const int n = A.n();
    if (A.is_tridiagonal() && ip.is_identity()) {
        const auto& t = A.tridiagonal();
        double piv = t.diag(0) - s;
        if (!(piv > 0.0)) return false;
        for (int i = 1; i < n; ++i) {
            piv = t.diag(i) - s - std::norm(t.lower(i - 1)) / piv;
            if (!(piv > 0.0)) return false;
        }
        return true;
    }
    Mat B = A.to_dense() - s * Mat::Identity(n, n);
    if (!ip.is_identity()) B = ip.matrix() * B;
    B = (B + B.adjoint()) / 2.0;
    Eigen::LLT<Mat> llt(B);
    return llt.info() == Eigen::Success;
}

KrylovDecomposition extended_lanczos(const HermitianOperator& A, const Vec& u, int rho, double s,
                                     const InnerProduct& ip, const ToleranceProfile& tol) {
    if (rho < 1) throw InvalidArgument("rho must be positive");
    const int m = 2 * rho - 1;
    check_start(u, m, A.n(), ip);
    if (!is_below_spectrum(A, s, ip)) throw InvalidArgument("extended Lanczos requires s below the spectrum");

    KrylovDecomposition sai = sai_rayleigh(A, u, rho, cplx(s, 0.0), ip, tol);
    KrylovDecomposition d;
    d.kind = Kind::Extended;
    d.m = m;
    d.beta0 = sai.beta0;
    d.pole.variant = PoleSpec::Variant::ExtendedShift;
    d.pole.s = cplx(s, 0.0);
    d.pole.multiplicity = rho - 1;
    d.pole.rho = rho;
    d.x = Vec::Zero(m);
    d.x(0) = sai.beta0;
    if (rho == 1) {
        d.basis = sai.basis;
        d.rep = sai.rep;
        Vec w = A.apply(Vec(d.basis.col(0)));
        w -= d.rep(0, 0) * d.basis.col(0);
        const double b = ip.norm(w);
        d.residual = Residual{b > 0.0 ? Vec(w / b) : Vec(Vec::Zero(w.size())), b};
        return d;
    }

    const Eigen::Index n = u.size();
    const double scale = A.norm_estimate();
    Mat U = Mat::Zero(n, m + 1);
    U.leftCols(rho) = sai.basis;
    Vec v = A.apply(u);
    reorthogonalize(U, rho, v, ip);
    double nv = ip.norm(v);
    if (nv <= tol.breakdown * scale * sai.beta0) throw LuckyBreakdown(rho, nv);
    U.col(rho) = v / nv;

    const int ext = rho - 1;  // extended vectors u_{ρ+1} … u_{2ρ−1}
    RVec alpha(ext), beta(ext);
    Vec y;
    for (int j = 0; j < ext; ++j) {
        const Eigen::Index col = rho + j;
        Vec w = A.apply(Vec(U.col(col)));
        if (j == 0) {
            y = ip.project(U.leftCols(rho), w);
            w -= U.leftCols(rho) * y;
        } else {
            w -= beta(j - 1) * U.col(col - 1);
        }
        alpha(j) = std::real(ip(U.col(col), w));
        w -= alpha(j) * U.col(col);
        reorthogonalize(U, col + 1, w, ip);
        beta(j) = ip.norm(w);
        if (beta(j) <= tol.breakdown * scale) {
            if (j + 1 < ext) throw LuckyBreakdown(static_cast<int>(col) + 1, beta(j));
            beta(j) = 0.0;
            break;
        }
        U.col(col + 1) = w / beta(j);
    }

    Mat rep = Mat::Zero(m, m);
    rep.topLeftCorner(rho, rho) = sai.rep;
    rep.block(0, rho, rho, 1) = y;
    rep.block(rho, 0, 1, rho) = y.adjoint();
    for (int j = 0; j < ext; ++j) {
        rep(rho + j, rho + j) = alpha(j);
        if (j + 1 < ext) {
            rep(rho + j, rho + j + 1) = beta(j);
            rep(rho + j + 1, rho + j) = beta(j);
        }
    }
    d.basis = U.leftCols(m);
    d.rep = std::move(rep);
    d.residual = Residual{U.col(m), beta(ext - 1)};
    return d;
}

}  // namespace cmskrylov
