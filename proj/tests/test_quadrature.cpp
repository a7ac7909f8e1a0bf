#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cmskrylov/qor.hpp"
#include "cmskrylov/quadrature.hpp"
#include "test_util.hpp"

using namespace cmskrylov;
using namespace cmskrylov::testing;

namespace {

struct Diag {
    RVec d;
    HermitianOperator A;
    InnerProduct ip;
    Vec u;
    Diag(std::uint64_t seed, int n, double lo, double hi)
        : d([&] {
              Rng rng(seed);
              return random_spectrum(rng, n, lo, hi);
          }()),
          A(HermitianOperator::diagonal(d)),
          ip(InnerProduct::identity(n)),
          u(random_unit_vector(seed + 700, ip)) {}
};

// Brute-force moment of t^d / |t - s_t|^p over the raw spectrum and raw rule,
// normalized in the variable of the reference hint.
double brute_error(const RVec& lambda, const Vec& u, const QuadratureRule& rule, double a, double b, int d,
                   cplx s = 0.0, int p = 0) {
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    const cplx st = (s - mid) / hw;
    auto f = [&](double l) {
        const double t = (l - mid) / hw;
        return std::pow(t, d) / (p == 0 ? 1.0 : std::pow(std::abs(t - st), p));
    };
    auto g = [&](double l) {
        const double t = (l - mid) / hw;
        return std::pow(std::max(1.0, std::abs(t)), d) / (p == 0 ? 1.0 : std::pow(std::abs(t - st), p));
    };
    double ex = 0.0, sc = 0.0, qr = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        ex += std::norm(u(i)) * f(lambda(i));
        sc += std::norm(u(i)) * g(lambda(i));
    }
    for (int j = 0; j < rule.m(); ++j) qr += rule.dist.weights()(j) * f(rule.dist.nodes()(j));
    return std::abs(qr - ex) / sc;
}

}  // namespace

TEST(StepDistribution, EvaluationAndLimits) {
    RVec nodes(3), w(3);
    nodes << 1.0, 2.0, 3.0;
    w << 0.2, 0.3, 0.5;
    const StepDistribution s(nodes, w, 0.0, 4.0);
    EXPECT_DOUBLE_EQ(s.alpha(2.0), 0.5);
    EXPECT_DOUBLE_EQ(s.alpha_left(2.0), 0.2);
    EXPECT_DOUBLE_EQ(s.alpha(0.5), 0.0);
    EXPECT_DOUBLE_EQ(s.alpha(10.0), 1.0);
    EXPECT_DOUBLE_EQ(s.total(), 1.0);
    EXPECT_DOUBLE_EQ(s.range_sum(1, 3), 0.8);
    double prev = -1.0;
    for (double x = 0.0; x <= 4.0; x += 0.05) {
        EXPECT_GE(s.alpha(x), prev);
        prev = s.alpha(x);
    }
}

TEST(StepDistribution, Validation) {
    RVec n2(2), w2(2);
    n2 << 1.0, 1.0;
    w2 << 1.0, 1.0;
    EXPECT_THROW(StepDistribution(n2, w2), InvalidArgument);
    n2 << 1.0, 2.0;
    w2 << 1.0, 0.0;
    EXPECT_THROW(StepDistribution(n2, w2), InvalidArgument);
    w2 << 1.0, 1.0;
    EXPECT_THROW(StepDistribution(n2, w2, 1.5, 3.0), InvalidArgument);
    EXPECT_THROW(StepDistribution(n2, RVec::Ones(3)), DimensionError);
}

TEST(ExactReference, UniformWeights) {
    RVec d(3);
    d << 1.0, 2.0, 3.0;
    const auto ip = InnerProduct::identity(3);
    const auto ref = exact_reference(HermitianOperator::diagonal(d), Vec::Ones(3) / std::sqrt(3.0), ip);
    ASSERT_EQ(ref.size(), 3);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(ref.nodes()(i), i + 1.0, 1e-14);
        EXPECT_NEAR(ref.weights()(i), 1.0 / 3.0, 1e-14);
    }
    EXPECT_NEAR(ref.a(), 0.8, 1e-14);
    EXPECT_NEAR(ref.b(), 3.2, 1e-14);
}

TEST(ExactReference, DegenerateMergeAndZeroWeights) {
    RVec d(3);
    d << 1.0, 1.0, 2.0;
    Vec u(3);
    u << 1.0, 0.0, 1.0;
    const auto ref = exact_reference(HermitianOperator::diagonal(d), u, InnerProduct::identity(3));
    ASSERT_EQ(ref.size(), 2);
    EXPECT_NEAR(ref.nodes()(0), 1.0, 1e-14);
    EXPECT_NEAR(ref.weights()(0), 1.0, 1e-14);
    EXPECT_NEAR(ref.weights()(1), 1.0, 1e-14);
    Vec v(3);
    v << 0.0, 0.0, 2.0;
    EXPECT_EQ(exact_reference(HermitianOperator::diagonal(d), v, InnerProduct::identity(3)).size(), 1);
}

TEST(ExactReference, LaplacianTotal) {
    const auto ip = InnerProduct::identity(1200);
    const auto ref = exact_reference(laplacian_1d(1200), random_unit_vector(1, ip), ip);
    EXPECT_NEAR(ref.total(), 1.0, 1e-10);
    EXPECT_EQ(ref.size(), 1200);
    const RVec exact = laplacian_eigenvalues(1200);
    EXPECT_LT((ref.nodes() - exact).cwiseAbs().maxCoeff(), 1e-8 * exact(1199));
}

TEST(Rule, NormIdentityOnDiagonal) {
    const auto A = HermitianOperator::diagonal(linspace(1.0, 50.0, 50));
    const auto ip = InnerProduct::identity(50);
    const auto rule = rule_from_decomposition(lanczos(A, Vec::Ones(50), 5, ip));
    EXPECT_NEAR(rule.dist.total(), 50.0, 1e-12 * 50.0);
    EXPECT_EQ(rule.m(), 5);
    EXPECT_EQ(rule.exactness.numerator_degree, 9);
}

TEST(Rule, SingleNode) {
    Diag f(1, 10, 1.0, 5.0);
    const Vec u = 2.0 * f.u;
    const auto rule = rule_from_decomposition(lanczos(f.A, u, 1, f.ip));
    EXPECT_NEAR(rule.dist.nodes()(0), f.ip(u, f.A.apply(u)).real() / 4.0, 1e-13);
    EXPECT_NEAR(rule.dist.weights()(0), 4.0, 1e-13);
}

TEST(Rule, PreassignedNodeBelowSpectrum) {
    Diag f(2, 30, 1.0, 10.0);
    const auto rule = rule_from_decomposition(qor_poly(f.A, f.u, 5, 0.2, f.ip));
    EXPECT_NEAR(rule.dist.nodes()(0), 0.2, 1e-10 * 10.0);
    EXPECT_GT(rule.dist.weights()(0), 0.0);
    EXPECT_EQ(rule.exactness.numerator_degree, 8);
    ASSERT_TRUE(rule.xi);
}

TEST(Exactness, GaussRuleAndNegativeControl) {
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
        Diag f(seed, 50, 1.0, 50.0);
        const int m = 5;
        const auto rule = rule_from_decomposition(lanczos(f.A, f.u, m, f.ip));
        const auto ref = exact_reference(f.A, f.u, f.ip);
        const auto err = check_polynomial_exactness(rule, ref, 2 * m);
        for (int d = 0; d <= 2 * m; ++d)
            EXPECT_NEAR(err[d], brute_error(f.d, f.u, rule, ref.a(), ref.b(), d), 1e-12);
        for (int d = 0; d < 2 * m; ++d) EXPECT_LE(err[d], 1e-9) << d;
        EXPECT_GT(err[2 * m], 1e-6);
    }
}

TEST(Exactness, QorRuleDropsOneDegree) {
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        Diag f(seed, 40, 1.0, 30.0);
        const int m = 6;
        const auto rule = rule_from_decomposition(qor_poly(f.A, f.u, m, 31.0, f.ip));
        const auto ref = exact_reference(f.A, f.u, f.ip);
        const auto err = check_exactness(rule, ref, 2 * m - 1);
        for (int d = 0; d <= 2 * m - 2; ++d) EXPECT_LE(err[d], 1e-9) << d;
        EXPECT_GT(err[2 * m - 1], 1e-6);
        const auto mm = matching_moments(rule, ref, 2 * m - 2);
        EXPECT_TRUE(mm.all);
        EXPECT_EQ(mm.pass.size(), static_cast<std::size_t>(2 * m - 1));
    }
}

TEST(Exactness, RationalRules) {
    for (std::uint64_t seed = 30; seed < 35; ++seed) {
        Diag f(seed, 40, 1.0, 30.0);
        const int m = 5;
        const auto ref = exact_reference(f.A, f.u, f.ip);
        for (double s : {-5.0, 45.0}) {
            const auto rule = rule_from_decomposition(sai_real(f.A, f.u, m, s, f.ip));
            const auto err = check_exactness(rule, ref, 2 * m - 1);
            for (int d = 0; d <= 2 * m - 1; ++d) {
                EXPECT_LE(err[d], 1e-8) << "s=" << s << " d=" << d;
                EXPECT_NEAR(err[d], brute_error(f.d, f.u, rule, ref.a(), ref.b(), d, s, 2 * (m - 1)), 1e-12);
            }
        }
        const auto B = rule_from_decomposition(qor_rational_sai(f.A, f.u, m, -5.0, 0.5, f.ip));
        const auto eb = check_exactness(B, ref, 2 * m - 1);
        for (int d = 0; d <= 2 * m - 2; ++d) EXPECT_LE(eb[d], 1e-8) << d;
        EXPECT_GT(eb[2 * m - 1], 1e-6);
        const cplx sc(12.0, 3.0);
        const auto C = rule_from_decomposition(sai_complex(f.A, f.u, m, sc, f.ip));
        const auto ec = check_rational_exactness(C, ref, sc, 2 * m - 1);
        for (int d = 0; d <= 2 * m - 1; ++d) {
            EXPECT_LE(ec[d], 1e-8) << d;
            EXPECT_NEAR(ec[d], brute_error(f.d, f.u, C, ref.a(), ref.b(), d, sc, 2 * (m - 1)), 1e-12);
        }
    }
}

TEST(Exactness, LaurentRule) {
    Diag f(40, 40, 1.0, 10.0);
    const int rho = 3, m = 5;
    const double s = 0.2;
    const auto rule = rule_from_decomposition(extended_lanczos(f.A, f.u, rho, s, f.ip));
    const auto ref = exact_reference(f.A, f.u, f.ip);
    EXPECT_EQ(rule.exactness.denominator_power, m - 1);
    const auto err = check_exactness(rule, ref, 2 * m - 1);
    for (int d = 0; d <= 2 * m - 1; ++d) {
        EXPECT_LE(err[d], 1e-8) << d;
        EXPECT_NEAR(err[d], brute_error(f.d, f.u, rule, ref.a(), ref.b(), d, s, m - 1), 1e-12);
    }
}

TEST(Exactness, PoleCollisionRejected) {
    Diag f(41, 10, 1.0, 5.0);
    const auto rule = rule_from_decomposition(lanczos(f.A, f.u, 3, f.ip));
    const auto ref = exact_reference(f.A, f.u, f.ip);
    EXPECT_THROW(check_rational_exactness(rule, ref, ref.nodes()(2), 3), InvalidArgument);
}

// Properties: totals, positivity and interior nodes for every kind.
TEST(Properties, WeightsAndNodes) {
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        Diag f(seed, 30, 1.0, 20.0);
        const auto ref = exact_reference(f.A, f.u, f.ip);
        const std::vector<KrylovDecomposition> decs{
            lanczos(f.A, f.u, 6, f.ip), sai_real(f.A, f.u, 6, -2.0, f.ip), sai_real(f.A, f.u, 6, 10.5, f.ip),
            sai_complex(f.A, f.u, 6, cplx(8.0, 2.0), f.ip), extended_lanczos(f.A, f.u, 3, 0.0, f.ip),
            qor_poly(f.A, f.u, 6, 0.5, f.ip), qor_rational_sai(f.A, f.u, 6, -2.0, 21.0, f.ip)};
        for (const auto& d : decs) {
            const auto rule = rule_from_decomposition(d);
            EXPECT_NEAR(rule.dist.total(), ref.total(), 1e-10 * ref.total()) << to_string(d.kind);
            EXPECT_GT(rule.dist.weights().minCoeff(), 1e-14 * ref.total());
            if (d.kind != Kind::QorPoly && d.kind != Kind::QorRational) {
                EXPECT_GT(rule.dist.nodes()(0), f.d(0));
                EXPECT_LT(rule.dist.nodes()(rule.m() - 1), f.d(29));
            }
        }
    }
}

// Basis independence: |c_j| agrees with the rule built from Lanczos on the explicit
// starting vector, projected onto the same space.
TEST(Properties, ChristoffelMagnitudesBasisIndependent) {
    for (std::uint64_t seed = 60; seed < 65; ++seed) {
        Diag f(seed, 30, 1.0, 20.0);
        const int m = 5;
        const double s = -3.0;
        const auto rule = rule_from_decomposition(sai_real(f.A, f.u, m, s, f.ip));
        const auto K = lanczos(f.A, diag_resolvent_power(f.d, s, m - 1, f.u), m, f.ip);
        Eigen::SelfAdjointEigenSolver<Mat> es(K.rep);
        const Vec c = es.eigenvectors().adjoint() * (K.basis.adjoint() * f.u);
        for (int j = 0; j < m; ++j) {
            EXPECT_NEAR(es.eigenvalues()(j), rule.dist.nodes()(j), 1e-8);
            EXPECT_NEAR(std::abs(c(j)), std::abs(rule.c(j)), 1e-10);
        }
    }
}
