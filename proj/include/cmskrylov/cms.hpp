#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmskrylov/quadrature.hpp"

namespace cmskrylov {

// Endpoints may be ±∞ to denote the open ends a and b of the support interval.
struct Interval {
    double lo = 0.0, hi = 0.0;
    bool lo_closed = false, hi_closed = false;
};

struct MeasureQuery {
    std::vector<Interval> parts;

    static MeasureQuery open(double lo, double hi);         // (lo, hi)
    static MeasureQuery closed(double lo, double hi);       // [lo, hi]
    static MeasureQuery left_open(double lo, double hi);    // (lo, hi]
    static MeasureQuery right_open(double lo, double hi);   // [lo, hi)
    MeasureQuery& unite(const MeasureQuery& other);
    bool contains(double x) const;
    std::string describe() const;
};

// Total weight of nodes lying in the union; each node is counted once.
double measure(const StepDistribution& dist, const MeasureQuery& q);

StepDistribution alpha_m_from_rule(const QuadratureRule& rule);

struct CMSRow {
    int k = 0;
    double lower = 0.0, value = 0.0, upper = 0.0;
    double margin = 0.0;  // min(value − lower, upper − value)
    bool strict = false;  // margin > strict_margin · total
    bool expected_strict = true;
    bool holds = false;
};

// Real pole geometry; indices are 1-based.
struct PoleGeometry {
    double s = 0.0;
    int m = 0, k1 = 1, km = 0;
    std::vector<int> index_set(int k) const;      // I_k
    MeasureQuery region(int k, const RVec& theta) const;       // R_k, R_{m+1} = R_1
    MeasureQuery region_open(int k, const RVec& theta) const;  // interior of R_k
};

PoleGeometry pole_geometry(const RVec& theta, double s);

// ι(j) for j = 1..m.
int iota(const PoleGeometry& g, int j);

struct CMSReport {
    std::string kind;
    std::vector<CMSRow> rows;
    std::vector<CMSRow> shifted_rows;  // rational case: α_n(θ_k) ≤ Σ + γ ≤ α_n(θ_{k+1}−)
    double gamma = 0.0;
    double total = 0.0;
    double identity_residual = 0.0;    // Σ|c_j|² − α_n(b), relative
    bool degenerate = false;           // ref has no more nodes than the rule
    std::optional<PoleGeometry> geometry;
    bool all_hold(double identity_tol = 1e-10) const;
};

CMSReport cms_polynomial(const QuadratureRule& rule, const StepDistribution& ref,
                         const ToleranceProfile& tol = default_tolerances());

CMSReport cms_rational_real(const QuadratureRule& rule, const StepDistribution& ref, double s,
                            const ToleranceProfile& tol = default_tolerances());

CMSReport cms_extended(const QuadratureRule& rule, const StepDistribution& ref, double s,
                       const ToleranceProfile& tol = default_tolerances());

enum class Relation { MeasureAtMost, MeasureAtLeast };

// Σ measure(sets) ≤ weight (MeasureAtMost) or ≥ weight (MeasureAtLeast).
struct BoundEntry {
    std::string family;
    int j = 0, k = 0;
    std::vector<MeasureQuery> sets;
    double weight = 0.0;
    Relation relation = Relation::MeasureAtMost;
    bool strict_expected = false;
};

using BoundTable = std::vector<BoundEntry>;

struct BoundResult {
    BoundEntry entry;
    double measure = 0.0;
    double margin = 0.0;
    bool holds = false;
    bool strict = false;
};

struct BoundReport {
    std::vector<BoundResult> results;
    bool all_hold() const;
    int violations() const;
};

BoundReport verify_bound_table(const BoundTable& table, const StepDistribution& ref,
                               const ToleranceProfile& tol = default_tolerances());

// Interval bounds from accumulated weights between consecutive nodes.
BoundTable cms_piecewise_polynomial(const QuadratureRule& rule);

enum class PreassignedNode { None, Left, Right };

// Requires θ₁ < s < θ_m.
BoundTable cms_piecewise_rational(const QuadratureRule& rule, double s,
                                  PreassignedNode preassigned = PreassignedNode::None);

// Upper bounds for a complex pole: pairs of neighboring weights.
BoundTable complex_upper_table(const QuadratureRule& rule);
BoundReport cms_complex_upper(const QuadratureRule& rule, const StepDistribution& ref, cplx s,
                              const ToleranceProfile& tol = default_tolerances());

struct FSample {
    int k = 0;
    double theta = 0.0;
    double F_at = 0.0, F_left = 0.0;   // F(θ_k), F(θ_k−)
    double Fs_at = 0.0, Fs_left = 0.0; // shifted by F(s)
};

struct FDiagnostic {
    std::vector<FSample> samples;
    std::vector<std::pair<double, double>> grid;  // (λ, F(λ)) on the hint interval
    std::optional<double> s;
    double gamma = 0.0;
    int km = 0;
    int alternations = 0;          // k with F(θ_k) < 0 < F(θ_{k+1}−) (shifted when s given)
    int expected_alternations = 0;
    int unobservable = 0;          // sign change hidden by a node coinciding with an eigenvalue
    bool pattern_ok = false;
};

// F = α_n − α_m, and F_s = F − F(s) when s is given.
FDiagnostic F_diagnostic(const StepDistribution& ref, const QuadratureRule& rule, std::optional<double> s = std::nullopt,
                         int grid_points = 512, const ToleranceProfile& tol = default_tolerances());

}  // namespace cmskrylov
