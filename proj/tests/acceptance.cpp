// Acceptance report: one PASS/FAIL line per criterion.
//
// The process exits 0 once every criterion has been evaluated; a FAIL line is a
// finding, not a harness error. Pass --strict to exit 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cmskrylov/cms.hpp"
#include "cmskrylov/experiment.hpp"
#include "cmskrylov/krylov.hpp"
#include "cmskrylov/majorant.hpp"
#include "cmskrylov/qor.hpp"
#include "cmskrylov/quadrature.hpp"
#include "test_util.hpp"

using namespace cmskrylov;
using namespace cmskrylov::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Part {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id, title;
    std::vector<Part> parts;
    std::string error;

    void add(std::string name, bool pass, std::string detail) {
        parts.push_back({std::move(name), pass, std::move(detail)});
    }
    bool pass() const {
        return error.empty() && !parts.empty() &&
               std::all_of(parts.begin(), parts.end(), [](const Part& p) { return p.pass; });
    }
};

struct Diag {
    RVec d;
    HermitianOperator A;
    InnerProduct ip;
    Vec u;
    StepDistribution ref;
    Diag(std::uint64_t seed, int n, double lo, double hi)
        : d([&] {
              Rng rng(seed);
              return random_spectrum(rng, n, lo, hi);
          }()),
          A(HermitianOperator::diagonal(d)),
          ip(InnerProduct::identity(n)),
          u(random_unit_vector(seed + 5000, ip)),
          ref(exact_reference(A, u, ip)) {}
};

struct Laplacian {
    HermitianOperator A = laplacian_1d(1200);
    InnerProduct ip = InnerProduct::identity(1200);
    Vec u = random_unit_vector(1, ip);
    StepDistribution ref = exact_reference(A, u, ip);
};

const Laplacian& laplacian() {
    static const Laplacian L;
    return L;
}

// Independent measure of a set union: scan every reference node.
double brute_measure(const StepDistribution& ref, const std::vector<MeasureQuery>& sets) {
    double total = 0.0;
    for (const auto& q : sets)
        for (const Interval& p : q.parts)
            for (Eigen::Index i = 0; i < ref.size(); ++i) {
                const double x = ref.nodes()(i);
                const bool above = p.lo_closed ? x >= p.lo : x > p.lo;
                const bool below = p.hi_closed ? x <= p.hi : x < p.hi;
                if (above && below) total += ref.weights()(i);
            }
    return total;
}

// Oracle check of a bound table; returns the number of violated entries.
int oracle_violations(const BoundTable& t, const StepDistribution& ref) {
    const double slack = 1e-12 * ref.total();
    int bad = 0;
    for (const auto& e : t) {
        const double mu = brute_measure(ref, e.sets);
        const bool ok = e.relation == Relation::MeasureAtMost ? mu <= e.weight + slack : mu >= e.weight - slack;
        if (!ok) ++bad;
    }
    return bad;
}

double min_margin(const std::vector<CMSRow>& rows) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) m = std::min(m, r.margin);
    return m;
}

RVec eigs(const KrylovDecomposition& d) { return eigen_values(d.rep); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Polynomial CMS on the Laplacian.
void ac1(Criterion& c) {
    const auto t0 = Clock::now();
    const auto A = laplacian_1d(1200);
    const auto ip = InnerProduct::identity(1200);
    const Vec u = random_unit_vector(1, ip);
    const auto rule = rule_from_decomposition(lanczos(A, u, 10, ip));
    const auto ref = exact_reference(A, u, ip);
    const auto r = cms_polynomial(rule, ref);
    const auto F = F_diagnostic(ref, rule);
    const double elapsed = seconds_since(t0);
    const double unorm2 = std::pow(ip.norm(u), 2);
    bool strict = r.rows.size() == 9;
    for (const auto& row : r.rows) strict = strict && row.holds && row.margin > 1e-12 * unorm2;
    c.add("9 strict inequalities", strict, fmt::format("{} rows, min margin {:.3e}", r.rows.size(), min_margin(r.rows)));
    c.add("norm identity", std::abs(r.identity_residual) <= 1e-10, fmt::format("{:.3e}", r.identity_residual));
    c.add("runtime < 10 s", elapsed < 10.0, fmt::format("{:.2f} s", elapsed));
    c.add("F sign pattern", F.pattern_ok && F.alternations == 9,
          fmt::format("{}/{} alternations", F.alternations, F.expected_alternations));
}

// Gauss exactness and its negative control.
void ac2(Criterion& c) {
    double worst = 0.0;
    int controls = 0;
    double weakest_control = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Diag f(seed, 50, 1.0, 50.0);
        const auto rule = rule_from_decomposition(lanczos(f.A, f.u, 5, f.ip));
        const auto err = check_polynomial_exactness(rule, f.ref, 10);
        for (int d = 0; d <= 9; ++d) worst = std::max(worst, err[d]);
        if (err[10] > 1e-4) ++controls;
        weakest_control = std::min(weakest_control, err[10]);
    }
    c.add("degrees 0..9 <= 1e-9", worst <= 1e-9, fmt::format("max {:.3e}", worst));
    c.add("degree 10 > 1e-4 on >= 45/50", controls >= 45, fmt::format("{}/50, smallest {:.3e}", controls, weakest_control));
}

// qor pinning, degree drop, ω sweep.
void ac3(Criterion& c) {
    double pin = 0.0, in_class = 0.0;
    int drops = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Diag f(seed + 100, 40, 1.0, 30.0);
        Rng rng(seed);
        const double xi = seed % 2 ? 0.5 : 1.0 + 29.0 * rng.uniform();
        KrylovDecomposition dec;
        try {
            dec = qor_poly(f.A, f.u, 5, xi, f.ip);
        } catch (const GuardViolation&) {
            dec = qor_poly(f.A, f.u, 5, 0.5, f.ip);
        }
        const auto rule = rule_from_decomposition(dec);
        const RVec& th = rule.dist.nodes();
        const double spread = std::max(th.maxCoeff() - th.minCoeff(), th.cwiseAbs().maxCoeff());
        pin = std::max(pin, (th.array() - *dec.xi).abs().minCoeff() / spread);
        const auto err = check_polynomial_exactness(rule, f.ref, 9);
        for (int d = 0; d <= 8; ++d) in_class = std::max(in_class, err[d]);
        if (err[9] > 1e-6) ++drops;
    }
    c.add("xi pinned to 1e-10 spread", pin <= 1e-10, fmt::format("max {:.3e}", pin));
    c.add("exact through 2m-2", in_class <= 1e-9, fmt::format("max {:.3e}", in_class));
    c.add("fails at 2m-1", drops == 20, fmt::format("{}/20 instances", drops));

    const RVec d = linspace(1.0, 50.0, 50);
    const auto A = HermitianOperator::diagonal(d);
    const auto ip = InnerProduct::identity(50);
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(-5.0 + 60.0 * i / 2000.0);
    const auto sw = qor_omega_sweep(A, Vec::Ones(50), 5, grid, ip);
    double cross = 0.0;
    for (double w : sw.omega_at_crossings) cross = std::max(cross, std::abs(w - sw.a_m));
    bool poles = sw.detected_poles.size() == 4 && sw.poles.size() == 4;
    for (std::size_t k = 0; poles && k < 4; ++k) poles = std::abs(sw.detected_poles[k] - sw.poles(k)) <= 60.0 / 2000.0;
    c.add("omega = a_m at eigenvalues of J5", sw.crossings.size() == 5 && cross <= 1e-8 * std::abs(sw.a_m),
          fmt::format("max {:.3e} (a_m = {:.6g})", cross, sw.a_m));
    c.add("poles at eigenvalues of J4", poles, fmt::format("{} detected", sw.detected_poles.size()));
}

// SaI-real against Lanczos on the explicit vector (A − sI)^{-(m−1)} u.
void ac4(Criterion& c) {
    double eig_err = 0.0, c_err = 0.0;
    const int m = 5;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Diag f(seed + 200, 30, 1.0, 20.0);
        const double s = seed <= 10 ? -3.0 - static_cast<double>(seed) : 22.0 + static_cast<double>(seed);
        const auto dec = sai_real(f.A, f.u, m, s, f.ip);
        const auto rule = rule_from_decomposition(dec);
        Vec uq = diag_resolvent_power(f.d, s, m - 1, f.u);
        uq /= uq.norm();
        const auto K = lanczos(f.A, uq, m, f.ip);
        eig_err = std::max(eig_err, (eigs(dec) - eigs(K)).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Mat> es(K.rep);
        const Vec cq = es.eigenvectors().adjoint() * (K.basis.adjoint() * f.u);
        for (int j = 0; j < m; ++j) c_err = std::max(c_err, std::abs(std::abs(cq(j)) - std::abs(rule.c(j))));
    }
    c.add("eigenvalues to 1e-8", eig_err <= 1e-8, fmt::format("max {:.3e}", eig_err));
    c.add("|c_j| to 1e-10", c_err <= 1e-10, fmt::format("max {:.3e}", c_err));
}

// Rational CMS with a real pole.
void ac5(Criterion& c) {
    const auto& L = laplacian();
    {
        const double s = 1e4;
        const auto rule = rule_from_decomposition(sai_real(L.A, L.u, 10, s, L.ip));
        const auto r = cms_rational_real(rule, L.ref, s);
        const auto F = F_diagnostic(L.ref, rule, s);
        const double slack = 1e-12 * L.ref.total();
        int strict = 0, rows = 0, worst_k = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& row : r.shifted_rows) {
            if (row.k == r.geometry->km) continue;
            ++rows;
            strict += row.margin > slack;
            if (row.margin < worst) worst = row.margin, worst_k = row.k;
        }
        c.add("s=1e4 Fs alternation", F.alternations + F.unobservable == F.expected_alternations && F.pattern_ok,
              fmt::format("{}/{} observed, km = {}", F.alternations, F.expected_alternations, F.km));
        c.add("s=1e4 margins > 1e-12 (k != km)", strict == rows,
              fmt::format("{}/{} strict, min margin {:.3e} at k = {}", strict, rows, worst, worst_k));
    }
    {
        const double s = -100.0;
        const auto rule = rule_from_decomposition(sai_real(L.A, L.u, 10, s, L.ip));
        const auto r = cms_rational_real(rule, L.ref, s);
        const auto F = F_diagnostic(L.ref, rule, s);
        c.add("s=-100 gamma = 0", r.gamma == 0.0 && F.gamma == 0.0, fmt::format("{:.3e}", r.gamma));
        c.add("s=-100 polynomial pattern", r.all_hold() && F.pattern_ok && F.alternations == 9,
              fmt::format("{}/{} alternations", F.alternations, F.expected_alternations));
    }
    int bad = 0, reported = 0, entries = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Diag f(seed + 300, 40, 1.0, 30.0);
        const double s = 0.5 * (f.d(19) + f.d(20));
        const auto rule = rule_from_decomposition(sai_real(f.A, f.u, 6, s, f.ip));
        const RVec& th = rule.dist.nodes();
        if (!(th(0) < s && s < th(5))) {
            ++bad;
            continue;
        }
        const auto t = cms_piecewise_rational(rule, s);
        entries += static_cast<int>(t.size());
        bad += oracle_violations(t, f.ref);
        reported += verify_bound_table(t, f.ref).violations();
    }
    c.add("20 piecewise rational tables", bad == 0 && reported == 0,
          fmt::format("{} entries, {} oracle / {} reported violations", entries, bad, reported));
}

// Complex pole.
void ac6(Criterion& c) {
    const auto& L = laplacian();
    const cplx s(1e4, -1e2);
    const auto dec = sai_complex(L.A, L.u, 10, s, L.ip);
    const auto rule = rule_from_decomposition(dec);
    const auto rep = cms_complex_upper(rule, L.ref, s);
    c.add("10 inequalities hold", rep.results.size() == 10 && rep.all_hold(),
          fmt::format("{} entries, {} violations", rep.results.size(), rep.violations()));
    c.add("anti-Hermitian part <= 1e-8", dec.rep_defect <= 1e-8, fmt::format("{:.3e}", dec.rep_defect));

    double resid = 0.0, unit = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Diag f(seed + 400, 20, 1.0, 10.0);
        const cplx z(1.0 + seed, 0.5 + 0.2 * seed);
        const LinearMap Z = cayley_map(f.A, z);
        const int m = 6;
        const auto r = isometric_arnoldi(Z, f.u, m, f.ip);
        Mat ZU(20, m);
        for (int k = 0; k < m; ++k) ZU.col(k) = Z(r.basis.col(k));
        Mat rhs = r.basis * r.Zm;
        rhs.col(m - 1) += r.z_next * r.next;
        resid = std::max(resid, (ZU - rhs).norm());
        const Mat G = r.Zm.leftCols(m - 1).adjoint() * r.Zm.leftCols(m - 1);
        unit = std::max(unit, (G - Mat::Identity(m - 1, m - 1)).norm());
    }
    c.add("isometric residual <= 1e-10", resid <= 1e-10, fmt::format("max {:.3e}", resid));
    c.add("Z_m near-unitary <= 1e-10", unit <= 1e-10, fmt::format("max {:.3e}", unit));
}

// Extended Krylov.
void ac7(Criterion& c) {
    const auto& L = laplacian();
    const double s = -10.0;
    const auto rule = rule_from_decomposition(extended_lanczos(L.A, L.u, 6, s, L.ip));
    const auto r = cms_extended(rule, L.ref, s);
    bool strict = !r.rows.empty();
    for (const auto& row : r.rows) strict = strict && row.holds && (row.strict || !row.expected_strict);
    c.add("strict inequalities", strict && r.all_hold(),
          fmt::format("{} rows, min margin {:.3e}", r.rows.size(), min_margin(r.rows)));

    double eig_err = 0.0, laurent = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Diag f(seed + 500, 40, 1.0, 10.0);
        const int rho = 3;
        const double p = 0.1 * static_cast<double>(seed) - 0.5;
        const auto dec = extended_lanczos(f.A, f.u, rho, p, f.ip);
        Vec uq = diag_resolvent_power(f.d, p, rho - 1, f.u);
        uq /= uq.norm();
        eig_err = std::max(eig_err, (eigs(dec) - eigs(lanczos(f.A, uq, 2 * rho - 1, f.ip))).cwiseAbs().maxCoeff());
        const auto rl = rule_from_decomposition(dec);
        const auto err = check_exactness(rl, f.ref, rl.exactness.numerator_degree);
        for (double e : err) laurent = std::max(laurent, e);
    }
    const auto err = check_exactness(rule, L.ref, rule.exactness.numerator_degree);
    for (double e : err) laurent = std::max(laurent, e);
    c.add("explicit-vector oracle to 1e-8", eig_err <= 1e-8, fmt::format("max {:.3e}", eig_err));
    c.add("Laurent exactness <= 1e-8", laurent <= 1e-8, fmt::format("max {:.3e}", laurent));
}

// Majorants.
void ac8(Criterion& c) {
    Rng rng(8);
    double residual = 0.0;
    int violations = 0, points = 0, cases = 0;
    for (int m = 2; m <= 8; ++m) {
        for (int t = 0; t < 5; ++t) {
            RVec th(m);
            for (int j = 0; j < m; ++j) th(j) = 10.0 * (j + 0.2 + 0.6 * rng.uniform()) / m;
            const auto grid = sandwich_grid(th, -1.0, 11.0);
            for (int k = 1; k < m; ++k)
                for (Side side : {Side::Plus, Side::Minus}) {
                    const auto p = majorant_polynomial(th, k, side);
                    residual = std::max(residual, p.condition_residual());
                    const auto chk = check_sandwich(p, th, k, side, grid);
                    violations += chk.violations;
                    points += chk.points;
                    ++cases;
                }
            if (m >= 3) {
                const int gap = 1 + static_cast<int>(rng.uniform() * (m - 1));
                const double s = 0.5 * (th(gap - 1) + th(gap));
                for (int k = 1; k <= m; ++k) {
                    if (k == gap) continue;
                    for (Side side : {Side::Plus, Side::Minus}) {
                        const auto r = rational_majorant(th, s, k, side);
                        residual = std::max(residual, r.inner.condition_residual());
                        const auto chk = check_sandwich(r, th, grid);
                        violations += chk.violations;
                        points += chk.points;
                        ++cases;
                    }
                }
            }
        }
    }
    c.add("interpolation conditions <= 1e-8", residual <= 1e-8, fmt::format("max {:.3e} over {} majorants", residual, cases));
    c.add("sandwich on every grid point", violations == 0, fmt::format("{} violations in {} points", violations, points));

    RVec two(2);
    two << 0.3, 1.7;
    const auto p = majorant_polynomial(two, 1, Side::Plus);
    double closed = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -1.0 + 4.0 * i / 400.0;
        const double q = (x - two(1)) / (two(0) - two(1));
        closed = std::max(closed, std::abs(p(x) - q * q));
    }
    c.add("m=2 closed form <= 1e-12", closed <= 1e-12, fmt::format("{:.3e}", closed));
}

// Function approximants.
void ac9(Criterion& c) {
    const auto A = laplacian_1d(200);
    const auto ip = InnerProduct::identity(200);
    const Vec u = random_unit_vector(9, ip);
    const auto dec = qor_poly(A, u, 10, 0.0, ip);
    const Vec y = qor_fun_approx(dec, [](double l) { return std::exp(cplx(0.0, -0.1 * l)); });
    const double cons = std::abs(ip.norm(y) - ip.norm(u)) / ip.norm(u);
    c.add("exp norm conservation <= 1e-10", cons <= 1e-10, fmt::format("{:.3e}", cons));

    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Diag f(seed + 600, 30, 1.0, 10.0);
        Rng rng(seed);
        const int m = 5;
        RVec coef(m);
        for (int i = 0; i < m; ++i) coef(i) = rng.normal();
        auto num = [&](double l) {
            double v = 0.0;
            for (int i = m - 1; i >= 0; --i) v = v * (l / 10.0) + coef(i);
            return v;
        };
        auto check = [&](const KrylovDecomposition& d, cplx s) {
            const ScalarFunction r = [&, s](double l) { return num(l) / std::pow(cplx(l) - s, m - 1); };
            Vec ref = f.u;
            for (int i = 0; i < 30; ++i) ref(i) *= r(f.d(i));
            worst = std::max(worst, (rational_qor_fun_approx(d, r) - ref).norm() / ref.norm());
        };
        check(sai_real(f.A, f.u, m, -2.0, f.ip), -2.0);
        check(sai_complex(f.A, f.u, m, cplx(3.0, 1.0), f.ip), cplx(3.0, 1.0));
        check(qor_rational_sai(f.A, f.u, m, -2.0, 0.3, f.ip), -2.0);
    }
    c.add("rational exactness <= 1e-8", worst <= 1e-8, fmt::format("max {:.3e}", worst));
}

// Rank law: breakdown at the number of distinct weighted eigenvalues.
void ac10(Criterion& c) {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed + 700);
        const int d = 1 + static_cast<int>(seed % 8);
        const int n = 24;
        std::vector<int> order(d + 2);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        RVec distinct(d + 2);
        for (int i = 0; i < d + 2; ++i) distinct(i) = order[i] + 0.4 * rng.uniform();
        RVec diag(n);
        Vec u = Vec::Zero(n);
        for (int i = 0; i < n; ++i) {
            const int which = i % (d + 2);
            diag(i) = distinct(which);
            if (which < d) u(i) = cplx(rng.normal(), rng.normal());
        }
        const auto A = HermitianOperator::diagonal(diag);
        const auto ip = InnerProduct::identity(n);
        auto step = [](const std::function<void()>& build) {
            try {
                build();
            } catch (const LuckyBreakdown& e) {
                return e.step;
            }
            return -1;
        };
        const bool pass = step([&] { lanczos(A, u, d + 1, ip); }) == d &&
                          step([&] { sai_real(A, u, d + 1, -10.0, ip); }) == d &&
                          step([&] { isometric_arnoldi(cayley_map(A, cplx(5.0, 4.0)), u, d + 1, ip); }) == d &&
                          step([&] { lanczos(A, u, d, ip); }) == -1;
        ok += pass;
    }
    c.add("LuckyBreakdown at step d", ok == 20, fmt::format("{}/20 instances", ok));
}

// CLI determinism over the preset suite.
void ac11(Criterion& c) {
    const fs::path root = fs::temp_directory_path() / "cmskrylov_acceptance";
    fs::remove_all(root);
    const auto t0 = Clock::now();
    int identical = 0, files = 0, failures = 0;
    for (const auto& preset : list_presets()) {
        for (const char* pass : {"a", "b"}) {
            const fs::path dir = root / pass / preset.name;
            const std::string cmd = fmt::format("{} --preset {} --seed 1 --out {} >/dev/null 2>&1", CMSKRYLOV_CLI_PATH,
                                                preset.name, dir.string());
            if (std::system(cmd.c_str()) != 0) ++failures;
        }
        for (const auto& cfg : preset.configs) {
            ++files;
            const auto a = slurp(root / "a" / preset.name / (cfg.label + ".json"));
            const auto b = slurp(root / "b" / preset.name / (cfg.label + ".json"));
            if (!a.empty() && strip_timestamp(a) == strip_timestamp(b)) ++identical;
        }
    }
    const double elapsed = seconds_since(t0);
    c.add("identical JSON", identical == files, fmt::format("{}/{} artifacts", identical, files));
    c.add("all presets succeed", failures == 0, fmt::format("{} non-zero exits", failures));
    c.add("suite < 5 min (two passes)", elapsed < 300.0, fmt::format("{:.1f} s", elapsed));
    fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
    const std::vector<std::pair<Criterion, std::function<void(Criterion&)>>> plan{
        {{"AC1", "polynomial CMS, laplacian 1200, m=10"}, ac1},
        {{"AC2", "Gauss exactness, 50 diagonal instances"}, ac2},
        {{"AC3", "qor pinning, degree drop, omega sweep"}, ac3},
        {{"AC4", "SaI-real explicit-vector oracle"}, ac4},
        {{"AC5", "rational CMS with real pole"}, ac5},
        {{"AC6", "complex pole and isometric Arnoldi"}, ac6},
        {{"AC7", "extended Krylov, rho=6, s=-10"}, ac7},
        {{"AC8", "majorants and minorants"}, ac8},
        {{"AC9", "function approximants"}, ac9},
        {{"AC10", "breakdown rank law"}, ac10},
        {{"AC11", "CLI determinism"}, ac11},
    };
    int failed = 0;
    for (auto [crit, body] : plan) {
        const auto t0 = Clock::now();
        try {
            body(crit);
        } catch (const std::exception& e) {
            crit.error = e.what();
        }
        std::string detail;
        for (const auto& p : crit.parts)
            detail += fmt::format("{}{} [{}: {}]", detail.empty() ? "" : " ", p.pass ? "ok" : "FAIL", p.name, p.detail);
        if (!crit.error.empty()) detail += " error: " + crit.error;
        fmt::print("{:<5} {:<4} {} ({:.1f} s) {}\n", crit.id, crit.pass() ? "PASS" : "FAIL", crit.title,
                   seconds_since(t0), detail);
        std::fflush(stdout);
        failed += !crit.pass();
    }
    fmt::print("{} of {} criteria pass\n", static_cast<int>(plan.size()) - failed, plan.size());
    return strict && failed ? 1 : 0;
}
