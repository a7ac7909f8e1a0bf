#pragma once

#include <optional>
#include <vector>

#include "cmskrylov/krylov.hpp"

namespace cmskrylov {

// Non-decreasing step function with jumps `weights` at strictly ascending `nodes`.
// The support hint (a, b) is an open interval containing all nodes.
class StepDistribution {
public:
    StepDistribution() = default;
    StepDistribution(RVec nodes, RVec weights);
    StepDistribution(RVec nodes, RVec weights, double a, double b);

    Eigen::Index size() const { return nodes_.size(); }
    const RVec& nodes() const { return nodes_; }
    const RVec& weights() const { return weights_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

    double alpha(double lambda) const;       // Σ weights over nodes ≤ λ
    double alpha_left(double lambda) const;  // Σ weights over nodes < λ
    // Σ weights over nodes[i0, i1)
    double range_sum(Eigen::Index i0, Eigen::Index i1) const;
    Eigen::Index count_le(double lambda) const;
    Eigen::Index count_lt(double lambda) const;

private:
    RVec nodes_, weights_;
    std::vector<double> prefix_;  // prefix_[i] = Σ_{j<i} weights
    double a_ = 0.0, b_ = 0.0;
};

// Polynomial numerator degree over |λ − s|^power (power 0: polynomial class).
struct ExactnessClass {
    int numerator_degree = 0;
    cplx s{0.0, 0.0};
    int denominator_power = 0;
    bool rational() const { return denominator_power > 0; }
};

struct QuadratureRule {
    StepDistribution dist;   // nodes θ_j, weights |c_j|²
    ExactnessClass exactness;
    Kind source = Kind::Polynomial;
    std::optional<double> xi;
    Vec c;                   // signed Christoffel coefficients (q̂_j, x)₂
    int m() const { return static_cast<int>(dist.size()); }
};

ExactnessClass exactness_for(const KrylovDecomposition& dec);

// Reference distribution of u over the spectrum of A with merged degenerate
// eigenvalues; the hint is (λ₁ − spread/10, λ_n + spread/10).
StepDistribution exact_reference(const HermitianOperator& A, const Vec& u, const InnerProduct& ip,
                                 const ToleranceProfile& tol = default_tolerances());

QuadratureRule rule_from_decomposition(const KrylovDecomposition& dec,
                                       const ToleranceProfile& tol = default_tolerances());

// Relative moment errors for t^d, d = 0..max_degree, in t = (λ − mid)/halfwidth of the ref hint.
std::vector<double> check_polynomial_exactness(const QuadratureRule& rule, const StepDistribution& ref,
                                               int max_degree);

// Same for t^d / |t − s_t|^power; power defaults to 2(m − 1).
std::vector<double> check_rational_exactness(const QuadratureRule& rule, const StepDistribution& ref, cplx s,
                                             int numerator_max_degree, std::optional<int> power = std::nullopt);

// Moment errors for the rule's own exactness class.
std::vector<double> check_exactness(const QuadratureRule& rule, const StepDistribution& ref, int max_degree);

struct MomentReport {
    std::vector<double> errors;
    std::vector<bool> pass;
    bool all = true;
};

MomentReport matching_moments(const QuadratureRule& rule, const StepDistribution& ref, int order,
                              double tolerance = 1e-9);

}  // namespace cmskrylov
