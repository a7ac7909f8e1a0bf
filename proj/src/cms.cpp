#include "cmskrylov/cms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cmskrylov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_endpoint(double x, const char* inf_name) {
    if (std::isinf(x)) return inf_name;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

CMSRow make_row(int k, double lower, double value, double upper, bool expected_strict, double slack) {
    CMSRow r;
    r.k = k;
    r.lower = lower;
    r.value = value;
    r.upper = upper;
    r.margin = std::min(value - lower, upper - value);
    r.strict = r.margin > slack;
    r.expected_strict = expected_strict;
    r.holds = expected_strict ? r.strict : r.margin >= -slack;
    return r;
}

// S_k = Σ_{j≤k} |c_j|², k = 0..m
std::vector<double> accumulated(const QuadratureRule& rule) {
    std::vector<double> S(rule.m() + 1, 0.0);
    for (int j = 0; j < rule.m(); ++j) S[j + 1] = S[j] + rule.dist.weights()(j);
    return S;
}

// θ lies within the merge threshold of a reference node, so strictness is not observable.
bool coincides(const StepDistribution& ref, double theta, const ToleranceProfile& tol) {
    const RVec& lam = ref.nodes();
    const double spread = lam.size() > 1 ? lam(lam.size() - 1) - lam(0) : std::max(1.0, std::abs(lam(0)));
    const Eigen::Index i = ref.count_lt(theta);
    const double thr = tol.merge * spread;
    return (i < lam.size() && lam(i) - theta <= thr) || (i > 0 && theta - lam(i - 1) <= thr);
}

double weight_sum(const std::vector<double>& S, int j, int k) {  // Σ_{j..k}, 1-based, empty if j > k
    return k >= j ? S[k] - S[j - 1] : 0.0;
}

CMSReport polynomial_rows(const QuadratureRule& rule, const StepDistribution& ref, const ToleranceProfile& tol,
                          const char* kind) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    const auto S = accumulated(rule);
    CMSReport rep;
    rep.kind = kind;
    rep.total = ref.total();
    rep.degenerate = ref.size() <= m;
    const double slack = tol.strict_margin * rep.total;
    for (int k = 1; k < m; ++k)
        rep.rows.push_back(make_row(k, ref.alpha(th(k - 1)), S[k], ref.alpha_left(th(k)),
                                    !rep.degenerate && !coincides(ref, th(k - 1), tol) && !coincides(ref, th(k), tol),
                                    slack));
    rep.identity_residual = (S[m] - ref.total()) / ref.total();
    return rep;
}

}  // namespace

MeasureQuery MeasureQuery::open(double lo, double hi) { return {{Interval{lo, hi, false, false}}}; }
MeasureQuery MeasureQuery::closed(double lo, double hi) { return {{Interval{lo, hi, true, true}}}; }
MeasureQuery MeasureQuery::left_open(double lo, double hi) { return {{Interval{lo, hi, false, true}}}; }
MeasureQuery MeasureQuery::right_open(double lo, double hi) { return {{Interval{lo, hi, true, false}}}; }

MeasureQuery& MeasureQuery::unite(const MeasureQuery& other) {
    parts.insert(parts.end(), other.parts.begin(), other.parts.end());
    return *this;
}

bool MeasureQuery::contains(double x) const {
    for (const Interval& p : parts) {
        const bool above = p.lo_closed ? x >= p.lo : x > p.lo;
        const bool below = p.hi_closed ? x <= p.hi : x < p.hi;
        if (above && below) return true;
    }
    return false;
}

std::string MeasureQuery::describe() const {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Interval& p = parts[i];
        if (i) out += " u ";
        out += p.lo_closed ? "[" : "(";
        out += fmt_endpoint(p.lo, "a") + "," + fmt_endpoint(p.hi, "b");
        out += p.hi_closed ? "]" : ")";
    }
    return out.empty() ? "{}" : out;
}

double measure(const StepDistribution& dist, const MeasureQuery& q) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;
    for (const Interval& p : q.parts) {
        const Eigen::Index i0 = p.lo_closed ? dist.count_lt(p.lo) : dist.count_le(p.lo);
        const Eigen::Index i1 = p.hi_closed ? dist.count_le(p.hi) : dist.count_lt(p.hi);
        if (i1 > i0) ranges.emplace_back(i0, i1);
    }
    std::sort(ranges.begin(), ranges.end());
    double total = 0.0;
    Eigen::Index covered = 0;
    for (auto [i0, i1] : ranges) {
        i0 = std::max(i0, covered);
        if (i1 > i0) {
            total += dist.range_sum(i0, i1);
            covered = i1;
        }
    }
    return total;
}

StepDistribution alpha_m_from_rule(const QuadratureRule& rule) { return rule.dist; }

std::vector<int> PoleGeometry::index_set(int k) const {
    std::vector<int> I;
    if (k >= k1) {
        for (int j = k1; j <= k; ++j) I.push_back(j);
    } else {
        for (int j = 1; j <= k; ++j) I.push_back(j);
        for (int j = k1; j <= m; ++j) I.push_back(j);
    }
    return I;
}

MeasureQuery PoleGeometry::region(int k, const RVec& theta) const {
    if (k == m + 1) k = 1;
    const double t = theta(k - 1);
    if (t > s) return MeasureQuery::left_open(s, t);
    return MeasureQuery::left_open(-kInf, t).unite(MeasureQuery::open(s, kInf));
}

MeasureQuery PoleGeometry::region_open(int k, const RVec& theta) const {
    if (k == m + 1) k = 1;
    const double t = theta(k - 1);
    if (t > s) return MeasureQuery::open(s, t);
    return MeasureQuery::open(-kInf, t).unite(MeasureQuery::open(s, kInf));
}

PoleGeometry pole_geometry(const RVec& theta, double s) {
    PoleGeometry g;
    g.s = s;
    g.m = static_cast<int>(theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j)
        if (theta(j) == s) throw InvalidArgument("pole coincides with a quadrature node");
    if (g.m >= 2 && theta(0) < s && s < theta(g.m - 1)) {
        g.km = 0;
        while (theta(g.km) < s) ++g.km;
        g.k1 = g.km + 1;
    } else {
        g.k1 = 1;
        g.km = g.m;
    }
    return g;
}

int iota(const PoleGeometry& g, int j) {
    if (j < 1 || j > g.m) throw InvalidArgument("index out of range");
    return j < g.k1 ? g.k1 - j : g.m + g.k1 - j;
}

bool CMSReport::all_hold(double identity_tol) const {
    for (const auto& r : rows)
        if (!r.holds) return false;
    for (const auto& r : shifted_rows)
        if (!r.holds) return false;
    return std::abs(identity_residual) <= identity_tol;
}

CMSReport cms_polynomial(const QuadratureRule& rule, const StepDistribution& ref, const ToleranceProfile& tol) {
    if (rule.source != Kind::Polynomial && rule.source != Kind::QorPoly)
        throw InvalidArgument("polynomial CMS bounds need a polynomial or qor rule");
    return polynomial_rows(rule, ref, tol, "polynomial");
}

CMSReport cms_extended(const QuadratureRule& rule, const StepDistribution& ref, double s, const ToleranceProfile& tol) {
    if (rule.source != Kind::Extended) throw InvalidArgument("extended CMS bounds need an extended rule");
    if (!(s < rule.dist.nodes()(0)) || !(s < ref.nodes()(0)))
        throw InvalidArgument("extended CMS bounds require s below the nodes and the spectrum");
    return polynomial_rows(rule, ref, tol, "extended");
}

CMSReport cms_rational_real(const QuadratureRule& rule, const StepDistribution& ref, double s,
                            const ToleranceProfile& tol) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    const PoleGeometry g = pole_geometry(th, s);
    const auto S = accumulated(rule);
    CMSReport rep;
    rep.kind = "rational-real";
    rep.total = ref.total();
    rep.degenerate = ref.size() <= m;
    rep.geometry = g;
    const double slack = tol.strict_margin * rep.total;
    auto strict_ok = [&](int k) {
        return !rep.degenerate && !coincides(ref, th(k - 1), tol) && !coincides(ref, th(k % m), tol);
    };
    for (int k = 1; k <= m; ++k) {
        if (k == g.km) continue;
        double value = 0.0;
        for (int j : g.index_set(k)) value += rule.dist.weights()(j - 1);
        rep.rows.push_back(make_row(k, measure(ref, g.region(k, th)), value, measure(ref, g.region_open(k + 1, th)),
                                    strict_ok(k), slack));
    }
    rep.gamma = ref.alpha(s) - rule.dist.alpha(s);
    for (int k = 1; k < m; ++k)
        rep.shifted_rows.push_back(make_row(k, ref.alpha(th(k - 1)), S[k] + rep.gamma, ref.alpha_left(th(k)),
                                            strict_ok(k) && k != g.km, slack));
    if (g.km != m)
        rep.shifted_rows.push_back(make_row(m, ref.alpha(th(m - 1)), S[m] + rep.gamma,
                                            ref.total() + ref.alpha_left(th(0)), strict_ok(m), slack));
    rep.identity_residual = (S[m] - ref.total()) / ref.total();
    return rep;
}

bool BoundReport::all_hold() const { return violations() == 0; }

int BoundReport::violations() const {
    return static_cast<int>(std::count_if(results.begin(), results.end(), [](const BoundResult& r) { return !r.holds; }));
}

BoundReport verify_bound_table(const BoundTable& table, const StepDistribution& ref, const ToleranceProfile& tol) {
    const double slack = tol.strict_margin * ref.total();
    BoundReport rep;
    for (const BoundEntry& e : table) {
        BoundResult r;
        r.entry = e;
        for (const auto& q : e.sets) r.measure += measure(ref, q);
        r.margin = e.relation == Relation::MeasureAtMost ? e.weight - r.measure : r.measure - e.weight;
        r.strict = r.margin > slack;
        bool expect = e.strict_expected;
        for (const auto& q : e.sets)
            for (const Interval& p : q.parts)
                for (double x : {p.lo, p.hi})
                    if (std::isfinite(x) && coincides(ref, x, tol)) expect = false;
        r.holds = expect ? r.strict : r.margin >= -slack;
        rep.results.push_back(std::move(r));
    }
    return rep;
}

BoundTable cms_piecewise_polynomial(const QuadratureRule& rule) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    const auto S = accumulated(rule);
    auto node = [&](int j) { return j <= 0 ? -kInf : (j > m ? kInf : th(j - 1)); };
    BoundTable t;
    for (int j = 1; j <= m; ++j) {
        for (int k = j; k <= m; ++k) {
            const bool strict = !(j == 1 && k == m);
            const double w = weight_sum(S, j, k);
            Interval in{node(j), k == m ? kInf : node(k), j > 1, k < m};
            if (j == 1) in.lo = -kInf;
            t.push_back({"interval", j, k, {MeasureQuery{{in}}}, w, Relation::MeasureAtMost, strict});
            t.push_back({"interval", j, k, {MeasureQuery::open(node(j - 1), node(k + 1))}, w, Relation::MeasureAtLeast,
                         strict});
        }
    }
    for (int j = 0; j <= m; ++j) {
        for (int k = j + 1; k <= m + 1; ++k) {
            const bool whole = j == 0 && k == m + 1;
            const MeasureQuery q{{Interval{node(j), node(k), false, k <= m}}};
            const double lo = weight_sum(S, j + 1, k - 1);
            t.push_back({"computable", j, k, {q}, lo, Relation::MeasureAtLeast, !whole && j + 1 <= k - 1});
            t.push_back({"computable", j, k, {q}, weight_sum(S, std::max(j, 1), std::min(k, m)),
                         Relation::MeasureAtMost, j >= 2 || k < m});
        }
    }
    return t;
}

BoundTable cms_piecewise_rational(const QuadratureRule& rule, double s, PreassignedNode preassigned) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    if (!(m >= 2 && th(0) < s && s < th(m - 1)))
        throw InvalidArgument("piecewise rational bounds require the pole between the outer nodes");
    const auto S = accumulated(rule);
    auto T = [&](int j) { return th(j - 1); };
    const bool left = preassigned == PreassignedNode::Left;
    const bool right = preassigned == PreassignedNode::Right;
    BoundTable t;
    for (int k = 1; k < m; ++k) {
        const MeasureQuery lo = left ? MeasureQuery::left_open(-kInf, T(k)) : MeasureQuery::closed(T(1), T(k));
        MeasureQuery hi = MeasureQuery::open(-kInf, T(k + 1));
        if (!right) hi.unite(MeasureQuery::open(T(m), kInf));
        t.push_back({"a", 1, k, {lo}, S[k], Relation::MeasureAtMost, false});
        t.push_back({"a", 1, k, {hi}, S[k], Relation::MeasureAtLeast, false});
    }
    for (int j = 2; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
            const double w = weight_sum(S, j, k);
            t.push_back({"b", j, k, {MeasureQuery::closed(T(j), T(k))}, w, Relation::MeasureAtMost, false});
            t.push_back({"b", j, k, {MeasureQuery::open(T(j - 1), T(k + 1))}, w, Relation::MeasureAtLeast, false});
        }
    }
    for (int j = 2; j <= m; ++j) {
        const double w = weight_sum(S, j, m);
        const MeasureQuery lo = right ? MeasureQuery::right_open(T(j), kInf) : MeasureQuery::closed(T(j), T(m));
        MeasureQuery hi = MeasureQuery::open(T(j - 1), kInf);
        if (!left) hi.unite(MeasureQuery::open(-kInf, T(1)));
        t.push_back({"c", j, m, {lo}, w, Relation::MeasureAtMost, false});
        t.push_back({"c", j, m, {hi}, w, Relation::MeasureAtLeast, false});
    }
    return t;
}

BoundTable complex_upper_table(const QuadratureRule& rule) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    const RVec& w = rule.dist.weights();
    BoundTable t;
    for (int k = 1; k < m; ++k)
        t.push_back({"pair", k, k + 1, {MeasureQuery::closed(th(k - 1), th(k))}, w(k - 1) + w(k),
                     Relation::MeasureAtMost, false});
    t.push_back({"boundary", 1, m, {MeasureQuery::left_open(-kInf, th(0)), MeasureQuery::right_open(th(m - 1), kInf)},
                 w(0) + w(m - 1), Relation::MeasureAtMost, false});
    return t;
}

BoundReport cms_complex_upper(const QuadratureRule& rule, const StepDistribution& ref, cplx s,
                              const ToleranceProfile& tol) {
    if (s.imag() == 0.0) throw InvalidArgument("complex pole bounds require Im s != 0");
    return verify_bound_table(complex_upper_table(rule), ref, tol);
}

FDiagnostic F_diagnostic(const StepDistribution& ref, const QuadratureRule& rule, std::optional<double> s,
                         int grid_points, const ToleranceProfile& tol) {
    const int m = rule.m();
    const RVec& th = rule.dist.nodes();
    FDiagnostic out;
    out.s = s;
    auto F = [&](double x) { return ref.alpha(x) - rule.dist.alpha(x); };
    auto Fl = [&](double x) { return ref.alpha_left(x) - rule.dist.alpha_left(x); };
    out.km = m;
    if (s) {
        out.gamma = F(*s);
        out.km = pole_geometry(th, *s).km;
    }
    for (int k = 1; k <= m; ++k) {
        FSample f;
        f.k = k;
        f.theta = th(k - 1);
        f.F_at = F(f.theta);
        f.F_left = Fl(f.theta);
        f.Fs_at = f.F_at - out.gamma;
        f.Fs_left = f.F_left - out.gamma;
        out.samples.push_back(f);
    }
    const double slack = tol.strict_margin * ref.total();
    bool weak_ok = true;
    auto check = [&](int k, int next) {
        const double at = out.samples[k - 1].Fs_at, next_left = out.samples[next - 1].Fs_left;
        const bool weak = at <= slack && next_left >= -slack;
        if (k == out.km) {
            weak_ok = weak_ok && weak;
            return;
        }
        ++out.expected_alternations;
        if (at < -slack && next_left > slack) {
            ++out.alternations;
        } else if (ref.size() <= m || coincides(ref, th(k - 1), tol) || coincides(ref, th(next - 1), tol)) {
            ++out.unobservable;
            weak_ok = weak_ok && weak;
        }
    };
    for (int k = 1; k < m; ++k) check(k, k + 1);
    if (out.km != m) check(m, 1);
    out.pattern_ok = weak_ok && out.alternations + out.unobservable == out.expected_alternations;
    const int np = std::max(grid_points, 2);
    for (int i = 0; i < np; ++i) {
        const double x = ref.a() + (ref.b() - ref.a()) * i / (np - 1);
        out.grid.emplace_back(x, F(x) - out.gamma);
    }
    return out;
}

}  // namespace cmskrylov
