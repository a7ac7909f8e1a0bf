#pragma once

#include <optional>
#include <vector>

#include "cmskrylov/cms.hpp"

namespace cmskrylov {

struct HermiteCondition {
    double x = 0.0;
    double value = 0.0;
    std::optional<double> derivative;
};

// Hermite interpolant in Newton form on confluent divided differences.
// Evaluation runs in the normalized variable t = (x − center)/scale.
class HermitePolynomial {
public:
    explicit HermitePolynomial(std::vector<HermiteCondition> conditions,
                               const ToleranceProfile& tol = default_tolerances());

    double operator()(double x) const;
    double derivative(double x) const;
    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    const std::vector<HermiteCondition>& conditions() const { return cond_; }
    // Largest violation of the value and (scaled) derivative conditions.
    double condition_residual() const;
    // Σ |c_i| Π |t − z_j| in the Newton form; bounds the rounding error of operator() up to ~N·eps.
    double magnitude(double x) const;

private:
    void eval(double x, double& p, double& dp) const;

    std::vector<HermiteCondition> cond_;
    double center_ = 0.0, scale_ = 1.0;
    std::vector<double> z_;     // confluent node sequence (normalized)
    std::vector<double> coef_;  // Newton coefficients
};

enum class Side { Plus, Minus };

// p_{+,k} ≥ 1_{(−∞,θ_k]} and p_{−,k} ≤ 1_{(−∞,θ_{k+1})}, both of degree 2m − 2; 1 ≤ k < m.
HermitePolynomial majorant_polynomial(const RVec& nodes, int k, Side side,
                                      const ToleranceProfile& tol = default_tolerances());

// r_{±,k}(λ) = 1 − p_{∓,ι(k)−1}(x(λ)) with x(λ) = 1/(λ − s).
struct RationalMajorant {
    PoleGeometry geometry;
    int k = 0;
    Side side = Side::Plus;
    RVec transformed_nodes;  // ξ_j = x(θ_{ι(j)}), ascending
    HermitePolynomial inner;
    double operator()(double lambda) const { return 1.0 - inner(1.0 / (lambda - geometry.s)); }
};

RationalMajorant rational_majorant(const RVec& nodes, double s, int k, Side side,
                                   const ToleranceProfile& tol = default_tolerances());

// Uniform grid on [a, b] plus points within 1e−6·spread of each node.
std::vector<double> sandwich_grid(const RVec& nodes, double a, double b, int points = 2048);

struct SandwichCheck {
    int points = 0;
    int violations = 0;
    double worst = 0.0;  // most negative (majorant − indicator) for Plus, (indicator − minorant) for Minus
};

SandwichCheck check_sandwich(const HermitePolynomial& p, const RVec& nodes, int k, Side side,
                             const std::vector<double>& grid, double slack = 1e-12);
SandwichCheck check_sandwich(const RationalMajorant& r, const RVec& nodes, const std::vector<double>& grid,
                             double slack = 1e-12);

}  // namespace cmskrylov
