#include "cmskrylov/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace cmskrylov {

namespace {

std::pair<double, double> default_hint(const RVec& nodes) {
    if (nodes.size() == 0) return {-1.0, 1.0};
    const double lo = nodes.minCoeff(), hi = nodes.maxCoeff();
    double pad = (hi - lo) / 10.0;
    if (!(pad > 0.0)) pad = std::max(1.0, std::abs(lo)) / 10.0;
    return {lo - pad, hi + pad};
}

}  // namespace

StepDistribution::StepDistribution(RVec nodes, RVec weights)
    : StepDistribution(nodes, weights, default_hint(nodes).first, default_hint(nodes).second) {}

StepDistribution::StepDistribution(RVec nodes, RVec weights, double a, double b)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), a_(a), b_(b) {
    if (nodes_.size() != weights_.size()) throw DimensionError("nodes and weights differ in length");
    prefix_.assign(nodes_.size() + 1, 0.0);
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) {
        if (i > 0 && !(nodes_(i) > nodes_(i - 1))) throw InvalidArgument("nodes must be strictly ascending");
        if (!(weights_(i) > 0.0)) throw InvalidArgument("weights must be positive");
        prefix_[i + 1] = prefix_[i] + weights_(i);
    }
    if (nodes_.size() > 0 && !(a_ < nodes_(0) && nodes_(nodes_.size() - 1) < b_))
        throw InvalidArgument("support hint must contain all nodes");
}

Eigen::Index StepDistribution::count_le(double lambda) const {
    const double* b = nodes_.data();
    return std::upper_bound(b, b + nodes_.size(), lambda) - b;
}

Eigen::Index StepDistribution::count_lt(double lambda) const {
    const double* b = nodes_.data();
    return std::lower_bound(b, b + nodes_.size(), lambda) - b;
}

double StepDistribution::alpha(double lambda) const { return prefix_[count_le(lambda)]; }

double StepDistribution::alpha_left(double lambda) const { return prefix_[count_lt(lambda)]; }

double StepDistribution::range_sum(Eigen::Index i0, Eigen::Index i1) const {
    i0 = std::clamp<Eigen::Index>(i0, 0, size());
    i1 = std::clamp<Eigen::Index>(i1, 0, size());
    return i1 > i0 ? prefix_[i1] - prefix_[i0] : 0.0;
}

ExactnessClass exactness_for(const KrylovDecomposition& dec) {
    const int m = dec.m;
    ExactnessClass e;
    e.s = dec.pole.s;
    switch (dec.kind) {
        case Kind::Polynomial: e.numerator_degree = 2 * m - 1; break;
        case Kind::QorPoly: e.numerator_degree = 2 * m - 2; break;
        case Kind::SaIReal:
        case Kind::SaIComplex:
            e.numerator_degree = 2 * m - 1;
            e.denominator_power = 2 * (m - 1);
            break;
        case Kind::QorRational:
            e.numerator_degree = 2 * m - 2;
            e.denominator_power = 2 * (m - 1);
            break;
        case Kind::Extended:
            e.numerator_degree = 2 * m - 1;
            e.denominator_power = m - 1;
            break;
    }
    return e;
}

StepDistribution exact_reference(const HermitianOperator& A, const Vec& u, const InnerProduct& ip,
                                 const ToleranceProfile& tol) {
    SpectralData sd = spectral_coefficients(A, u, ip, tol);
    const RVec& lam = sd.eigenvalues;
    const Eigen::Index n = lam.size();
    const double spread = lam(n - 1) - lam(0);
    const double unorm2 = std::pow(ip.norm(u), 2);
    const double merge = tol.merge * spread;
    std::vector<double> nodes, weights;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        double w = 0.0, wl = 0.0;
        while (j < n && lam(j) - lam(i) <= merge) {
            const double wj = std::norm(sd.coefficients(j));
            w += wj;
            wl += wj * lam(j);
            ++j;
        }
        if (w > tol.weight_floor * unorm2) {
            nodes.push_back(wl / w);
            weights.push_back(w);
        }
        i = j;
    }
    double pad = spread / 10.0;
    if (!(pad > 0.0)) pad = std::max(1.0, std::abs(lam(0))) / 10.0;
    return StepDistribution(Eigen::Map<RVec>(nodes.data(), static_cast<Eigen::Index>(nodes.size())),
                            Eigen::Map<RVec>(weights.data(), static_cast<Eigen::Index>(weights.size())),
                            lam(0) - pad, lam(n - 1) + pad);
}

QuadratureRule rule_from_decomposition(const KrylovDecomposition& dec, const ToleranceProfile& tol) {
    const int m = dec.m;
    if (dec.rep.rows() != m || dec.rep.cols() != m || dec.x.size() != m)
        throw DimensionError("inconsistent decomposition");
    RVec theta;
    Vec c;
    const bool tridiag_kind = dec.kind == Kind::Polynomial || dec.kind == Kind::QorPoly;
    if (tridiag_kind && dec.rep.imag().isZero(0.0)) {
        RVec diag = dec.rep.diagonal().real();
        RVec off = m > 1 ? RVec(dec.rep.diagonal(-1).real()) : RVec();
        TridiagProjected tp = tridiag_eig_apply(diag, off, Mat(dec.x.transpose()), tol);
        theta = tp.eigenvalues;
        c = tp.projected.row(0).transpose();
    } else {
        EigenDecomposition e = hermitian_eig(dec.rep, tol);
        theta = e.eigenvalues;
        c = e.eigenvectors.adjoint() * dec.x;
    }
    if (m > 1) {
        const double spread = std::max(theta(m - 1) - theta(0), theta.cwiseAbs().maxCoeff());
        for (int j = 1; j < m; ++j)
            if (theta(j) - theta(j - 1) <= tol.node_distinct * spread)
                throw Error("representation has (numerically) repeated eigenvalues");
    }
    RVec w = c.cwiseAbs2();
    QuadratureRule r;
    r.dist = StepDistribution(theta, w);
    r.exactness = exactness_for(dec);
    r.source = dec.kind;
    r.xi = dec.xi;
    r.c = std::move(c);
    return r;
}

namespace {

std::vector<double> moment_errors(const QuadratureRule& rule, const StepDistribution& ref, cplx s, int power,
                                  int max_degree) {
    const double mid = 0.5 * (ref.a() + ref.b());
    const double hw = 0.5 * (ref.b() - ref.a());
    const cplx st = (s - mid) / hw;
    auto denom = [&](double t) { return power == 0 ? 1.0 : std::pow(std::abs(t - st), power); };
    std::vector<double> err;
    for (int d = 0; d <= max_degree; ++d) {
        double qr = 0.0, ex = 0.0, scale = 0.0;
        for (Eigen::Index j = 0; j < rule.dist.size(); ++j) {
            const double t = (rule.dist.nodes()(j) - mid) / hw;
            qr += rule.dist.weights()(j) * std::pow(t, d) / denom(t);
        }
        for (Eigen::Index i = 0; i < ref.size(); ++i) {
            const double t = (ref.nodes()(i) - mid) / hw;
            const double q = denom(t);
            ex += ref.weights()(i) * std::pow(t, d) / q;
            scale += ref.weights()(i) * std::pow(std::max(1.0, std::abs(t)), d) / q;
        }
        err.push_back(scale > 0.0 ? std::abs(qr - ex) / scale : std::abs(qr - ex));
    }
    return err;
}

}  // namespace

std::vector<double> check_polynomial_exactness(const QuadratureRule& rule, const StepDistribution& ref,
                                               int max_degree) {
    return moment_errors(rule, ref, 0.0, 0, max_degree);
}

std::vector<double> check_rational_exactness(const QuadratureRule& rule, const StepDistribution& ref, cplx s,
                                             int numerator_max_degree, std::optional<int> power) {
    for (Eigen::Index j = 0; j < rule.dist.size(); ++j)
        if (rule.dist.nodes()(j) == s) throw InvalidArgument("pole coincides with a rule node");
    for (Eigen::Index j = 0; j < ref.size(); ++j)
        if (ref.nodes()(j) == s) throw InvalidArgument("pole coincides with a reference node");
    const int p = power.value_or(2 * (rule.m() - 1));
    return moment_errors(rule, ref, s, p, numerator_max_degree);
}

std::vector<double> check_exactness(const QuadratureRule& rule, const StepDistribution& ref, int max_degree) {
    if (!rule.exactness.rational()) return check_polynomial_exactness(rule, ref, max_degree);
    return check_rational_exactness(rule, ref, rule.exactness.s, max_degree, rule.exactness.denominator_power);
}

MomentReport matching_moments(const QuadratureRule& rule, const StepDistribution& ref, int order, double tolerance) {
    MomentReport r;
    r.errors = check_polynomial_exactness(rule, ref, order);
    for (double e : r.errors) {
        r.pass.push_back(e <= tolerance);
        r.all = r.all && e <= tolerance;
    }
    return r;
}

}  // namespace cmskrylov
