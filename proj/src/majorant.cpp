#include "cmskrylov/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmskrylov {

HermitePolynomial::HermitePolynomial(std::vector<HermiteCondition> conditions, const ToleranceProfile& tol)
    : cond_(std::move(conditions)) {
    if (cond_.empty()) throw InvalidArgument("no interpolation conditions");
    std::sort(cond_.begin(), cond_.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
    const double lo = cond_.front().x, hi = cond_.back().x;
    center_ = 0.5 * (lo + hi);
    scale_ = hi > lo ? 0.5 * (hi - lo) : 1.0;
    for (std::size_t i = 1; i < cond_.size(); ++i)
        if (cond_[i].x - cond_[i - 1].x <= 1e-12 * std::max(scale_, std::abs(center_)))
            throw InvalidArgument("interpolation nodes are not distinct");

    // Leja order of the distinct nodes keeps the Newton form well conditioned.
    std::vector<HermiteCondition> order;
    std::vector<bool> used(cond_.size(), false);
    auto norm = [&](double x) { return (x - center_) / scale_; };
    for (std::size_t step = 0; step < cond_.size(); ++step) {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cond_.size(); ++i) {
            if (used[i]) continue;
            double score = 0.0;
            if (order.empty()) score = std::abs(norm(cond_[i].x));
            for (const auto& o : order) score += std::log(std::abs(norm(cond_[i].x) - norm(o.x)));
            if (score > best_score) best_score = score, best = i;
        }
        used[best] = true;
        order.push_back(cond_[best]);
    }

    std::vector<double> f;   // f[i] = value at z_i
    std::vector<double> df;  // derivative data for repeated entries
    for (const auto& c : order) {
        const double t = norm(c.x);
        z_.push_back(t);
        f.push_back(c.value);
        df.push_back(0.0);
        if (c.derivative) {
            z_.push_back(t);
            f.push_back(c.value);
            df.push_back(*c.derivative * scale_);
        }
    }
    const std::size_t N = z_.size();
    std::vector<double> col = f;
    coef_.assign(N, 0.0);
    coef_[0] = col[0];
    for (std::size_t level = 1; level < N; ++level) {
        for (std::size_t i = N - 1; i >= level; --i) {
            const double dz = z_[i] - z_[i - level];
            col[i] = dz == 0.0 ? df[i] : (col[i] - col[i - 1]) / dz;
        }
        coef_[level] = col[level];
    }
    if (!(condition_residual() <= tol.interpolation))
        throw ConvergenceFailure("Hermite interpolation is ill-conditioned");
}

void HermitePolynomial::eval(double x, double& p, double& dp) const {
    const double t = (x - center_) / scale_;
    const std::size_t N = coef_.size();
    p = coef_[N - 1];
    dp = 0.0;
    for (std::size_t i = N - 1; i-- > 0;) {
        dp = p + (t - z_[i]) * dp;
        p = coef_[i] + (t - z_[i]) * p;
    }
    dp /= scale_;
}

double HermitePolynomial::operator()(double x) const {
    double p, dp;
    eval(x, p, dp);
    return p;
}

double HermitePolynomial::derivative(double x) const {
    double p, dp;
    eval(x, p, dp);
    return dp;
}

double HermitePolynomial::magnitude(double x) const {
    const double t = (x - center_) / scale_;
    const std::size_t N = coef_.size();
    double p = std::abs(coef_[N - 1]);
    for (std::size_t i = N - 1; i-- > 0;) p = std::abs(coef_[i]) + std::abs(t - z_[i]) * p;
    return p;
}

double HermitePolynomial::condition_residual() const {
    double r = 0.0;
    for (const auto& c : cond_) {
        double p, dp;
        eval(c.x, p, dp);
        r = std::max(r, std::abs(p - c.value));
        if (c.derivative) r = std::max(r, std::abs(dp - *c.derivative) * scale_);
    }
    return r;
}

HermitePolynomial majorant_polynomial(const RVec& nodes, int k, Side side, const ToleranceProfile& tol) {
    const int m = static_cast<int>(nodes.size());
    if (m < 2) throw InvalidArgument("majorants need at least two nodes");
    if (m > tol.majorant_max_m) throw InvalidArgument("majorant construction is limited to small m");
    if (k < 1 || k >= m) throw InvalidArgument("majorant index out of range");
    std::vector<HermiteCondition> c;
    for (int j = 1; j <= m; ++j) {
        HermiteCondition h;
        h.x = nodes(j - 1);
        h.value = j <= k ? 1.0 : 0.0;
        const bool skip_derivative = side == Side::Plus ? j == k : j == k + 1;
        if (!skip_derivative) h.derivative = 0.0;
        c.push_back(h);
    }
    return HermitePolynomial(std::move(c), tol);
}

RationalMajorant rational_majorant(const RVec& nodes, double s, int k, Side side, const ToleranceProfile& tol) {
    const PoleGeometry g = pole_geometry(nodes, s);
    const int m = g.m;
    if (k < 1 || k > m) throw InvalidArgument("majorant index out of range");
    if (k == g.km) throw InvalidArgument("no rational majorant for k = k_m");
    RVec xi(m);
    for (int j = 1; j <= m; ++j) xi(j - 1) = 1.0 / (nodes(iota(g, j) - 1) - s);
    for (int j = 1; j < m; ++j)
        if (!(xi(j) > xi(j - 1))) throw Error("transformed nodes are not ascending");
    const Side inner_side = side == Side::Plus ? Side::Minus : Side::Plus;
    return RationalMajorant{g, k, side, xi, majorant_polynomial(xi, iota(g, k) - 1, inner_side, tol)};
}

std::vector<double> sandwich_grid(const RVec& nodes, double a, double b, int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(a + (b - a) * i / (points - 1));
    const double spread = b - a;
    for (Eigen::Index j = 0; j < nodes.size(); ++j) {
        g.push_back(nodes(j));
        for (double f : {1e-6, 1e-7, 1e-8}) {
            g.push_back(nodes(j) - f * spread);
            g.push_back(nodes(j) + f * spread);
        }
    }
    std::sort(g.begin(), g.end());
    return g;
}

namespace {

void tally(SandwichCheck& c, double gap, double magnitude, double slack) {
    ++c.points;
    const double tol = slack * std::max(1.0, magnitude);
    if (gap < -tol) ++c.violations;
    c.worst = std::min(c.worst, gap);
}

}  // namespace

SandwichCheck check_sandwich(const HermitePolynomial& p, const RVec& nodes, int k, Side side,
                             const std::vector<double>& grid, double slack) {
    SandwichCheck c;
    for (double x : grid) {
        const double v = p(x), mag = p.magnitude(x);
        if (side == Side::Plus) tally(c, v - (x <= nodes(k - 1) ? 1.0 : 0.0), mag, slack);
        else tally(c, (x < nodes(k) ? 1.0 : 0.0) - v, mag, slack);
    }
    return c;
}

SandwichCheck check_sandwich(const RationalMajorant& r, const RVec& nodes, const std::vector<double>& grid,
                             double slack) {
    SandwichCheck c;
    const MeasureQuery R = r.side == Side::Plus ? r.geometry.region(r.k, nodes) : r.geometry.region_open(r.k + 1, nodes);
    for (double x : grid) {
        if (x == r.geometry.s) continue;
        const double v = r(x);
        const double ind = R.contains(x) ? 1.0 : 0.0;
        const double mag = 1.0 + r.inner.magnitude(1.0 / (x - r.geometry.s));
        tally(c, r.side == Side::Plus ? v - ind : ind - v, mag, slack);
    }
    return c;
}

}  // namespace cmskrylov
