#include "cmskrylov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmskrylov/random.hpp"

namespace cmskrylov {

const ToleranceProfile& default_tolerances() {
    static const ToleranceProfile t{};
    return t;
}

namespace {

double hermitian_defect(const Mat& H) {
    double nrm = H.norm();
    if (nrm == 0.0) return 0.0;
    return (H - H.adjoint()).norm() / nrm;
}

}  // namespace

InnerProduct InnerProduct::identity(int n) {
    if (n < 1) throw InvalidArgument("inner product dimension must be positive");
    InnerProduct ip;
    ip.n_ = n;
    return ip;
}

InnerProduct InnerProduct::dense(const Mat& M, const ToleranceProfile& tol) {
    if (M.rows() != M.cols()) throw DimensionError("metric must be square");
    if (hermitian_defect(M) > tol.hermitian) throw NotHermitian("metric is not Hermitian");
    Mat Mh = (M + M.adjoint()) / 2.0;
    Eigen::LLT<Mat> llt(Mh);
    if (llt.info() != Eigen::Success) throw InvalidArgument("metric is not positive definite");
    Mat L = llt.matrixL();
    for (int i = 0; i < L.rows(); ++i) {
        if (std::real(L(i, i)) <= 1e-14 * std::sqrt(Mh.norm()))
            throw InvalidArgument("metric is not positive definite");
    }
    InnerProduct ip;
    ip.n_ = static_cast<int>(M.rows());
    ip.M_ = std::make_shared<const Mat>(std::move(Mh));
    ip.L_ = std::make_shared<const Mat>(std::move(L));
    return ip;
}

cplx InnerProduct::operator()(const Vec& x, const Vec& y) const {
    if (x.size() != n_ || y.size() != n_) throw DimensionError("inner product dimension mismatch");
    if (!M_) return x.dot(y);
    return x.dot(*M_ * y);
}

double InnerProduct::norm(const Vec& x) const {
    return std::sqrt(std::max(0.0, std::real((*this)(x, x))));
}

Vec InnerProduct::apply_metric(const Vec& x) const {
    if (!M_) return x;
    return *M_ * x;
}

Mat InnerProduct::gram(const Mat& U, const Mat& V) const {
    if (!M_) return U.adjoint() * V;
    return U.adjoint() * (*M_ * V);
}

Vec InnerProduct::project(const Mat& U, const Vec& v) const {
    if (!M_) return U.adjoint() * v;
    return U.adjoint() * (*M_ * v);
}

HermitianOperator HermitianOperator::from_tridiagonal(Tridiagonal t) {
    if (t.diag.size() < 1) throw InvalidArgument("empty operator");
    if (t.lower.size() != t.diag.size() - 1) throw DimensionError("tridiagonal size mismatch");
    HermitianOperator op;
    op.data_ = std::move(t);
    return op;
}

HermitianOperator HermitianOperator::diagonal(const RVec& d) {
    Tridiagonal t;
    t.diag = d;
    t.lower = Vec::Zero(std::max<Eigen::Index>(0, d.size() - 1));
    return from_tridiagonal(std::move(t));
}

HermitianOperator HermitianOperator::from_dense(const Mat& A, const InnerProduct& ip,
                                                const ToleranceProfile& tol) {
    if (A.rows() != A.cols()) throw DimensionError("operator must be square");
    if (A.rows() != ip.n()) throw DimensionError("operator and metric dimensions differ");
    const Eigen::Index n = A.rows();
    HermitianOperator op;
    if (ip.is_identity()) {
        if (hermitian_defect(A) > tol.hermitian) throw NotHermitian("matrix is not Hermitian");
        bool tri = true;
        for (Eigen::Index j = 0; j < n && tri; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (std::abs(i - j) > 1 && A(i, j) != 0.0) {
                    tri = false;
                    break;
                }
        if (tri) {
            Tridiagonal t;
            t.diag.resize(n);
            t.lower.resize(n - 1);
            for (Eigen::Index i = 0; i < n; ++i) t.diag(i) = std::real(A(i, i));
            for (Eigen::Index i = 0; i + 1 < n; ++i) t.lower(i) = (A(i + 1, i) + std::conj(A(i, i + 1))) / 2.0;
            op.data_ = std::move(t);
            return op;
        }
        op.data_ = Mat((A + A.adjoint()) / 2.0);
        return op;
    }
    // self-adjoint w.r.t. M  ⇔  M A Hermitian
    if (hermitian_defect(ip.matrix() * A) > tol.hermitian)
        throw NotHermitian("operator is not self-adjoint in the given inner product");
    op.data_ = A;
    return op;
}

int HermitianOperator::n() const {
    if (is_tridiagonal()) return static_cast<int>(tridiagonal().diag.size());
    return static_cast<int>(dense().rows());
}

Mat HermitianOperator::to_dense() const {
    if (!is_tridiagonal()) return dense();
    const auto& t = tridiagonal();
    const Eigen::Index n = t.diag.size();
    Mat A = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) A(i, i) = t.diag(i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        A(i + 1, i) = t.lower(i);
        A(i, i + 1) = std::conj(t.lower(i));
    }
    return A;
}

Vec HermitianOperator::apply(const Vec& x) const {
    if (x.size() != n()) throw DimensionError("operator dimension mismatch");
    if (!is_tridiagonal()) return dense() * x;
    const auto& t = tridiagonal();
    const Eigen::Index n = t.diag.size();
    Vec y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx v = t.diag(i) * x(i);
        if (i > 0) v += t.lower(i - 1) * x(i - 1);
        if (i + 1 < n) v += std::conj(t.lower(i)) * x(i + 1);
        y(i) = v;
    }
    return y;
}

Mat HermitianOperator::apply(const Mat& X) const {
    Mat Y(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) Y.col(j) = apply(Vec(X.col(j)));
    return Y;
}

double HermitianOperator::norm_estimate() const {
    if (!is_tridiagonal()) return dense().cwiseAbs().rowwise().sum().maxCoeff();
    const auto& t = tridiagonal();
    const Eigen::Index n = t.diag.size();
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = std::abs(t.diag(i));
        if (i > 0) r += std::abs(t.lower(i - 1));
        if (i + 1 < n) r += std::abs(t.lower(i));
        best = std::max(best, r);
    }
    return best;
}

namespace {

EigenDecomposition sorted(RVec vals, Mat vecs) {
    std::vector<int> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals(a) < vals(b); });
    EigenDecomposition out;
    out.eigenvalues.resize(vals.size());
    out.eigenvectors.resize(vecs.rows(), vecs.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.eigenvalues(k) = vals(idx[k]);
        out.eigenvectors.col(k) = vecs.col(idx[k]);
    }
    return out;
}

}  // namespace

EigenDecomposition hermitian_eig(const Mat& H0, const ToleranceProfile& tol) {
    if (H0.rows() != H0.cols()) throw DimensionError("matrix must be square");
    const Eigen::Index n = H0.rows();
    if (hermitian_defect(H0) > tol.hermitian) throw NotHermitian("matrix is not Hermitian");
    Mat H = (H0 + H0.adjoint()) / 2.0;
    Mat V = Mat::Identity(n, n);
    const double fro = H.norm();
    const double stop = tol.eig_rel * fro;
    const long cap = static_cast<long>(tol.eig_sweep_factor) * std::max<Eigen::Index>(n, 1);

    auto offnorm = [&]() {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != j) s += std::norm(H(i, j));
        return std::sqrt(s);
    };

    long sweep = 0;
    while (fro > 0.0 && offnorm() > stop) {
        if (++sweep > cap) throw ConvergenceFailure("Jacobi iteration did not converge");
        bool rotated = false;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const cplx b = H(p, q);
                const double ab = std::abs(b);
                if (ab == 0.0) continue;
                const double app = std::real(H(p, p));
                const double aqq = std::real(H(q, q));
                rotated = true;
                const cplx phase = b / ab;  // e^{iφ}
                const double tau = (aqq - app) / (2.0 * ab);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G = [[c, s],[−s·e^{−iφ}, c·e^{−iφ}]] on columns (p, q)
                const cplx g11 = c, g12 = s;
                const cplx g21 = -s * std::conj(phase), g22 = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx hp = H(k, p), hq = H(k, q);
                    H(k, p) = hp * g11 + hq * g21;
                    H(k, q) = hp * g12 + hq * g22;
                    const cplx vp = V(k, p), vq = V(k, q);
                    V(k, p) = vp * g11 + vq * g21;
                    V(k, q) = vp * g12 + vq * g22;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx hp = H(p, k), hq = H(q, k);
                    H(p, k) = std::conj(g11) * hp + std::conj(g21) * hq;
                    H(q, k) = std::conj(g12) * hp + std::conj(g22) * hq;
                }
                H(p, q) = 0.0;
                H(q, p) = 0.0;
                H(p, p) = std::real(H(p, p));
                H(q, q) = std::real(H(q, q));
            }
        }
        if (!rotated) break;
    }
    RVec vals(n);
    for (Eigen::Index i = 0; i < n; ++i) vals(i) = std::real(H(i, i));
    return sorted(std::move(vals), std::move(V));
}

TridiagProjected tridiag_eig_apply(const RVec& diag, const RVec& offdiag, const Mat& W,
                                   const ToleranceProfile& tol) {
    const Eigen::Index n = diag.size();
    if (n < 1) throw InvalidArgument("empty tridiagonal matrix");
    if (offdiag.size() != n - 1) throw DimensionError("offdiag must have n-1 entries");
    if (W.cols() != n) throw DimensionError("projection block must have n columns");
    RVec d = diag;
    RVec e = RVec::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = offdiag(i);
    Mat Z = W;
    const Eigen::Index rows = Z.rows();
    const long cap = static_cast<long>(tol.eig_sweep_factor) * n;
    const double eps = std::numeric_limits<double>::epsilon();

    for (Eigen::Index l = 0; l < n; ++l) {
        long iter = 0;
        Eigen::Index mm;
        do {
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::abs(d(mm)) + std::abs(d(mm + 1));
                if (std::abs(e(mm)) <= eps * dd) break;
            }
            if (mm != l) {
                if (++iter > cap) throw ConvergenceFailure("tridiagonal QL did not converge");
                double g = (d(l + 1) - d(l)) / (2.0 * e(l));
                double r = std::hypot(g, 1.0);
                g = d(mm) - d(l) + e(l) / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                Eigen::Index i;
                bool underflow = false;
                for (i = mm - 1; i >= l; --i) {
                    double f = s * e(i);
                    double b = c * e(i);
                    r = std::hypot(f, g);
                    e(i + 1) = r;
                    if (r == 0.0) {
                        d(i + 1) -= p;
                        e(mm) = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d(i + 1) - p;
                    r = (d(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    d(i + 1) = g + p;
                    g = c * r - b;
                    for (Eigen::Index k = 0; k < rows; ++k) {
                        const cplx zf = Z(k, i + 1);
                        Z(k, i + 1) = s * Z(k, i) + c * zf;
                        Z(k, i) = c * Z(k, i) - s * zf;
                    }
                }
                if (underflow) continue;
                d(l) -= p;
                e(l) = g;
                e(mm) = 0.0;
            }
        } while (mm != l);
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d(a) < d(b); });
    TridiagProjected out;
    out.eigenvalues.resize(n);
    out.projected.resize(rows, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = d(idx[k]);
        out.projected.col(k) = Z.col(idx[k]);
    }
    return out;
}

EigenDecomposition tridiag_eig(const RVec& diag, const RVec& offdiag, const ToleranceProfile& tol) {
    for (Eigen::Index i = 0; i < offdiag.size(); ++i)
        if (!(offdiag(i) > 0.0)) throw InvalidArgument("tridiagonal off-diagonal entries must be positive");
    const Eigen::Index n = diag.size();
    auto res = tridiag_eig_apply(diag, offdiag, Mat::Identity(n, n), tol);
    EigenDecomposition out;
    out.eigenvalues = std::move(res.eigenvalues);
    out.eigenvectors = std::move(res.projected);
    return out;
}

SpectralData spectral_coefficients(const HermitianOperator& A, const Vec& u, const InnerProduct& ip,
                                   const ToleranceProfile& tol) {
    const int n = A.n();
    if (u.size() != n || ip.n() != n) throw DimensionError("dimension mismatch");
    SpectralData out;
    if (A.is_tridiagonal() && ip.is_identity()) {
        // D A Dᴴ has real non-negative off-diagonals for a diagonal unitary D.
        const auto& t = A.tridiagonal();
        Vec dphase(n);
        dphase(0) = 1.0;
        RVec off(n - 1);
        for (int j = 0; j + 1 < n; ++j) {
            const cplx a = std::conj(t.lower(j));  // A(j, j+1)
            const double ab = std::abs(a);
            off(j) = ab;
            dphase(j + 1) = ab > 0.0 ? dphase(j) * std::conj(a) / ab : dphase(j);
        }
        // eigenvectors of A: q_j = D q'_j with D = diag(dphase); w = Q'ᵀ Dᴴ u
        Vec y = dphase.conjugate().cwiseProduct(u);
        auto res = tridiag_eig_apply(t.diag, off, y.transpose(), tol);
        out.eigenvalues = std::move(res.eigenvalues);
        out.coefficients = res.projected.row(0).transpose();
        return out;
    }
    Mat Ad = A.to_dense();
    if (ip.is_identity()) {
        auto ed = hermitian_eig(Ad, tol);
        out.eigenvalues = std::move(ed.eigenvalues);
        out.coefficients = ed.eigenvectors.adjoint() * u;
        return out;
    }
    // Â = Lᴴ A L⁻ᴴ is Hermitian; w_j = q̂_jᴴ Lᴴ u
    const Mat& L = ip.cholesky();
    Mat LH = L.adjoint();
    Mat Ahat = LH * Ad * LH.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
    auto ed = hermitian_eig(Ahat, tol);
    out.eigenvalues = std::move(ed.eigenvalues);
    out.coefficients = ed.eigenvectors.adjoint() * (LH * u);
    return out;
}

ShiftedSolver::ShiftedSolver(const HermitianOperator& A, cplx s, const ToleranceProfile& tol)
    : A_(&A), s_(s), tol_(tol) {
    const double thresh = tol.singular_pivot * std::max(A.norm_estimate(), std::abs(s));
    const int n = A.n();
    if (A.is_tridiagonal()) {
        const auto& t = A.tridiagonal();
        d_.resize(n);
        dl_.resize(std::max(0, n - 1));
        du_.resize(std::max(0, n - 1));
        du2_ = Vec::Zero(std::max(0, n - 2));
        ipiv_.resize(n);
        for (int i = 0; i < n; ++i) {
            d_(i) = t.diag(i) - s;
            ipiv_[i] = i;
        }
        for (int i = 0; i + 1 < n; ++i) {
            dl_(i) = t.lower(i);
            du_(i) = std::conj(t.lower(i));
        }
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(d_(i)) >= std::abs(dl_(i))) {
                if (d_(i) != 0.0) {
                    const cplx fact = dl_(i) / d_(i);
                    dl_(i) = fact;
                    d_(i + 1) -= fact * du_(i);
                }
            } else {
                const cplx fact = d_(i) / dl_(i);
                d_(i) = dl_(i);
                dl_(i) = fact;
                const cplx temp = du_(i);
                du_(i) = d_(i + 1);
                d_(i + 1) = temp - fact * d_(i + 1);
                if (i + 2 < n) {
                    du2_(i) = du_(i + 1);
                    du_(i + 1) = -fact * du_(i + 1);
                }
                ipiv_[i] = i + 1;
            }
        }
        for (int i = 0; i < n; ++i)
            if (std::abs(d_(i)) <= thresh) throw SingularShift("shift is (numerically) an eigenvalue");
        return;
    }
    Mat B = A.dense() - s * Mat::Identity(n, n);
    lu_.emplace(B);
    const Mat& LU = lu_->matrixLU();
    for (int i = 0; i < n; ++i)
        if (std::abs(LU(i, i)) <= thresh) throw SingularShift("shift is (numerically) an eigenvalue");
}

Vec ShiftedSolver::solve(const Vec& b) const {
    const int n = A_->n();
    if (b.size() != n) throw DimensionError("right-hand side dimension mismatch");
    Vec x;
    if (lu_) {
        x = lu_->solve(b);
    } else {
        x = b;
        for (int i = 0; i + 1 < n; ++i) {
            if (ipiv_[i] == i) {
                x(i + 1) -= dl_(i) * x(i);
            } else {
                const cplx temp = x(i);
                x(i) = x(i + 1);
                x(i + 1) = temp - dl_(i) * x(i);
            }
        }
        x(n - 1) /= d_(n - 1);
        if (n > 1) x(n - 2) = (x(n - 2) - du_(n - 2) * x(n - 1)) / d_(n - 2);
        for (int i = n - 3; i >= 0; --i) x(i) = (x(i) - du_(i) * x(i + 1) - du2_(i) * x(i + 2)) / d_(i);
    }
    const Vec r = A_->apply(x) - s_ * x - b;
    const double scale = (A_->norm_estimate() + std::abs(s_)) * x.norm() + b.norm();
    if (scale > 0.0 && r.norm() > tol_.solve_residual * scale)
        throw SingularShift("shifted solve residual too large");
    return x;
}

Vec shifted_solve(const HermitianOperator& A, cplx s, const Vec& b, const ToleranceProfile& tol) {
    return ShiftedSolver(A, s, tol).solve(b);
}

HermitianOperator laplacian_1d(int n) {
    if (n < 2) throw InvalidArgument("laplacian_1d requires n >= 2");
    const double h = 1.0 / (n + 1);
    const double inv = 1.0 / (h * h);
    Tridiagonal t;
    t.diag = RVec::Constant(n, 2.0 * inv);
    t.lower = Vec::Constant(n - 1, cplx(-inv, 0.0));
    return HermitianOperator::from_tridiagonal(std::move(t));
}

double selfadjoint_defect(const HermitianOperator& A, const InnerProduct& ip, int samples, unsigned seed) {
    Rng rng(seed);
    double worst = 0.0;
    const double nrm = std::max(A.norm_estimate(), 1e-300);
    for (int k = 0; k < samples; ++k) {
        Vec x = random_complex_normal(rng, A.n());
        Vec y = random_complex_normal(rng, A.n());
        const double d = std::abs(ip(A.apply(x), y) - ip(x, A.apply(y)));
        worst = std::max(worst, d / (nrm * ip.norm(x) * ip.norm(y)));
    }
    return worst;
}

}  // namespace cmskrylov
