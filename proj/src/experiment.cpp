#include "cmskrylov/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cmskrylov/cms.hpp"
#include "cmskrylov/matrix_market.hpp"
#include "cmskrylov/qor.hpp"
#include "cmskrylov/quadrature.hpp"
#include "cmskrylov/random.hpp"

namespace cmskrylov {

using json = nlohmann::ordered_json;

namespace {

constexpr double kExactnessTol = 1e-8;

struct MethodName {
    Method method;
    const char* name;
};

constexpr MethodName kMethods[] = {
    {Method::Poly, "poly"},           {Method::QorPoly, "qor-poly"}, {Method::SaiReal, "sai-real"},
    {Method::SaiComplex, "sai-complex"}, {Method::QorSai, "qor-sai"},   {Method::Extended, "extended"},
};

int parse_int(const std::string& s, const char* what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw InvalidArgument(std::string("invalid ") + what + " '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw InvalidArgument(std::string("invalid ") + what + " '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

json to_json(const RVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ToleranceProfile& t) {
    return json{{"hermitian", t.hermitian},
                {"eig_rel", t.eig_rel},
                {"eig_sweep_factor", t.eig_sweep_factor},
                {"singular_pivot", t.singular_pivot},
                {"solve_residual", t.solve_residual},
                {"breakdown", t.breakdown},
                {"anti_hermitian", t.anti_hermitian},
                {"unitary_gamma", t.unitary_gamma},
                {"qor_guard", t.qor_guard},
                {"node_distinct", t.node_distinct},
                {"merge", t.merge},
                {"weight_floor", t.weight_floor},
                {"strict_margin", t.strict_margin},
                {"interpolation", t.interpolation},
                {"majorant_max_m", t.majorant_max_m}};
}

json to_json(const CMSRow& r) {
    return json{{"k", r.k},           {"lower", r.lower},   {"value", r.value},
                {"upper", r.upper},   {"margin", r.margin}, {"strict", r.strict},
                {"expected_strict", r.expected_strict},     {"holds", r.holds}};
}

std::string describe_sets(const BoundEntry& e) {
    std::string s;
    for (std::size_t i = 0; i < e.sets.size(); ++i) s += (i ? " + " : "") + e.sets[i].describe();
    return s;
}

std::string relation_name(Relation r) { return r == Relation::MeasureAtMost ? "measure<=weight" : "measure>=weight"; }

std::string csv_num(double x) { return fmt::format("{}", x); }

std::string timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

HermitianOperator build_operator(const ExperimentConfig& c, const InnerProduct& ip) {
    switch (c.matrix.type) {
        case MatrixSource::Type::Laplacian: return laplacian_1d(c.matrix.n);
        case MatrixSource::Type::Diagonal:
            return HermitianOperator::diagonal(
                Eigen::Map<const RVec>(c.matrix.diagonal.data(), static_cast<Eigen::Index>(c.matrix.diagonal.size())));
        case MatrixSource::Type::MatrixMarket:
            return HermitianOperator::from_dense(read_matrix_market_dense(c.matrix.path), ip, c.tol);
    }
    throw InvalidArgument("unknown matrix source");
}

int operator_size(const ExperimentConfig& c) {
    switch (c.matrix.type) {
        case MatrixSource::Type::Laplacian: return c.matrix.n;
        case MatrixSource::Type::Diagonal: return static_cast<int>(c.matrix.diagonal.size());
        case MatrixSource::Type::MatrixMarket: return static_cast<int>(read_matrix_market_dense(c.matrix.path).rows());
    }
    return 0;
}

Vec build_vector(const ExperimentConfig& c, const InnerProduct& ip) {
    const int n = ip.n();
    switch (c.vector.type) {
        case VectorSource::Type::Random: return random_unit_vector(c.seed, ip);
        case VectorSource::Type::Ones: return Vec::Ones(n);
        case VectorSource::Type::File: {
            std::ifstream in(c.vector.path);
            if (!in) throw Error("cannot open '" + c.vector.path + "'");
            std::vector<cplx> vals;
            std::string line;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                double re = 0.0, im = 0.0;
                if (!(ls >> re)) continue;
                ls >> im;
                vals.emplace_back(re, im);
            }
            if (static_cast<int>(vals.size()) != n) throw DimensionError("vector file length does not match the matrix");
            return Eigen::Map<Vec>(vals.data(), n);
        }
    }
    throw InvalidArgument("unknown vector source");
}

int rho_of(const ExperimentConfig& c) { return c.rho ? *c.rho : (c.m + 1) / 2; }

KrylovDecomposition build_decomposition(const ExperimentConfig& c, const HermitianOperator& A, const Vec& u,
                                        const InnerProduct& ip) {
    switch (c.method) {
        case Method::Poly: return lanczos(A, u, c.m, ip, c.tol);
        case Method::QorPoly: return qor_poly(A, u, c.m, *c.xi, ip, c.tol);
        case Method::SaiReal: return sai_real(A, u, c.m, c.shift->real(), ip, c.tol);
        case Method::SaiComplex: return sai_complex(A, u, c.m, *c.shift, ip, c.tol);
        case Method::QorSai: return qor_rational_sai(A, u, c.m, *c.shift, *c.xi, ip, c.tol);
        case Method::Extended: return extended_lanczos(A, u, rho_of(c), c.shift->real(), ip, c.tol);
    }
    throw InvalidArgument("unknown method");
}

json config_json(const ExperimentConfig& c) {
    json j{{"label", c.label},
           {"matrix", c.matrix.spec},
           {"metric", c.metric},
           {"vector", c.vector.spec},
           {"method", to_string(c.method)},
           {"m", c.m}};
    j["shift"] = c.shift ? to_json(*c.shift) : json(nullptr);
    j["xi"] = c.xi ? json(*c.xi) : json(nullptr);
    j["rho"] = c.method == Method::Extended ? json(rho_of(c)) : json(nullptr);
    j["seed"] = c.seed;
    j["outputs"] = json(std::vector<std::string>(c.outputs.begin(), c.outputs.end()));
    j["reference"] = c.reference;
    return j;
}

struct Recorder {
    std::vector<Check> checks;
    void add(std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
};

std::string cms_csv(const CMSReport& r) {
    std::string s = "section,k,lower,value,upper,margin,strict,expected_strict,holds\n";
    auto emit = [&](const char* section, const std::vector<CMSRow>& rows) {
        for (const auto& row : rows)
            s += fmt::format("{},{},{},{},{},{},{},{},{}\n", section, row.k, csv_num(row.lower), csv_num(row.value),
                             csv_num(row.upper), csv_num(row.margin), int(row.strict), int(row.expected_strict),
                             int(row.holds));
    };
    emit("separation", r.rows);
    emit("shifted", r.shifted_rows);
    return s;
}

json cms_json(const CMSReport& r) {
    json j{{"kind", r.kind}, {"total", r.total}, {"identity_residual", r.identity_residual}, {"degenerate", r.degenerate}};
    if (r.geometry) {
        j["gamma"] = r.gamma;
        j["k1"] = r.geometry->k1;
        j["km"] = r.geometry->km;
    }
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(to_json(row));
    j["rows"] = rows;
    if (!r.shifted_rows.empty()) {
        json sh = json::array();
        for (const auto& row : r.shifted_rows) sh.push_back(to_json(row));
        j["shifted_rows"] = sh;
    }
    j["all_hold"] = r.all_hold();
    return j;
}

void append_bounds(const std::string& table, const BoundReport& rep, json& out, std::string& csv) {
    json entries = json::array();
    for (const auto& r : rep.results) {
        entries.push_back(json{{"family", r.entry.family},
                               {"j", r.entry.j},
                               {"k", r.entry.k},
                               {"sets", describe_sets(r.entry)},
                               {"relation", relation_name(r.entry.relation)},
                               {"weight", r.entry.weight},
                               {"measure", r.measure},
                               {"margin", r.margin},
                               {"strict_expected", r.entry.strict_expected},
                               {"strict", r.strict},
                               {"holds", r.holds}});
        csv += fmt::format("{},{},{},{},\"{}\",{},{},{},{},{}\n", table, r.entry.family, r.entry.j, r.entry.k,
                           describe_sets(r.entry), relation_name(r.entry.relation), csv_num(r.measure),
                           csv_num(r.entry.weight), csv_num(r.margin), int(r.holds));
    }
    out[table] = json{{"count", rep.results.size()}, {"violations", rep.violations()}, {"entries", entries}};
}

}  // namespace

std::string to_string(Method m) {
    for (const auto& e : kMethods)
        if (e.method == m) return e.name;
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (const auto& e : kMethods)
        if (name == e.name) return e.method;
    throw InvalidArgument("unknown method '" + name + "'");
}

MatrixSource parse_matrix_source(const std::string& spec) {
    MatrixSource s;
    s.spec = spec;
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw InvalidArgument("matrix source must be TYPE:ARGS, got '" + spec + "'");
    const std::string type = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (type == "laplacian") {
        s.type = MatrixSource::Type::Laplacian;
        s.n = parse_int(arg, "laplacian size");
        if (s.n < 2) throw InvalidArgument("laplacian size must be at least 2");
    } else if (type == "diag") {
        s.type = MatrixSource::Type::Diagonal;
        const auto parts = split(arg, ':');
        if (parts.size() == 2) {
            const int lo = parse_int(parts[0], "diagonal range"), hi = parse_int(parts[1], "diagonal range");
            if (hi < lo) throw InvalidArgument("empty diagonal range");
            for (int v = lo; v <= hi; ++v) s.diagonal.push_back(v);
        } else if (parts.size() == 1) {
            for (const auto& v : split(arg, ',')) s.diagonal.push_back(parse_double(v, "diagonal entry"));
        } else {
            throw InvalidArgument("invalid diagonal spec '" + arg + "'");
        }
        if (s.diagonal.empty()) throw InvalidArgument("empty diagonal");
        s.n = static_cast<int>(s.diagonal.size());
    } else if (type == "mtx") {
        s.type = MatrixSource::Type::MatrixMarket;
        s.path = arg;
    } else {
        throw InvalidArgument("unknown matrix source type '" + type + "'");
    }
    return s;
}

VectorSource parse_vector_source(const std::string& spec) {
    VectorSource v;
    v.spec = spec;
    if (spec == "random") v.type = VectorSource::Type::Random;
    else if (spec == "ones") v.type = VectorSource::Type::Ones;
    else if (spec.rfind("file:", 0) == 0) {
        v.type = VectorSource::Type::File;
        v.path = spec.substr(5);
    } else {
        throw InvalidArgument("unknown vector source '" + spec + "'");
    }
    return v;
}

const std::set<std::string>& known_outputs() {
    static const std::set<std::string> k{"rule", "bounds", "F", "Fs", "stepfuncs", "quadrature", "omega"};
    return k;
}

void validate(const ExperimentConfig& c) {
    if (c.m < 1) throw InvalidArgument("m must be positive");
    for (const auto& o : c.outputs)
        if (!known_outputs().count(o)) throw InvalidArgument("unknown output '" + o + "'");
    if (c.label.empty()) throw InvalidArgument("empty label");
    if (c.metric != "identity" && c.metric.rfind("mtx:", 0) != 0)
        throw InvalidArgument("metric must be 'identity' or mtx:PATH");
    switch (c.method) {
        case Method::Poly:
            break;
        case Method::QorPoly:
            if (!c.xi) throw InvalidArgument("qor-poly requires --xi");
            break;
        case Method::SaiReal:
            if (!c.shift || c.shift->imag() != 0.0) throw InvalidArgument("sai-real requires a real --shift");
            break;
        case Method::SaiComplex:
            if (!c.shift || c.shift->imag() == 0.0) throw InvalidArgument("sai-complex requires a shift with Im != 0");
            break;
        case Method::QorSai:
            if (!c.shift || !c.xi) throw InvalidArgument("qor-sai requires --shift and --xi");
            if (c.m < 3) throw InvalidArgument("qor-sai requires m >= 3");
            break;
        case Method::Extended:
            if (!c.shift || c.shift->imag() != 0.0) throw InvalidArgument("extended requires a real --shift");
            if (c.rho) {
                if (*c.rho < 1) throw InvalidArgument("rho must be positive");
                if (c.m != 2 * *c.rho - 1) throw InvalidArgument("extended requires m = 2 rho - 1");
            } else if (c.m % 2 == 0) {
                throw InvalidArgument("extended requires odd m (or --rho)");
            }
            break;
    }
    if ((c.method == Method::Poly || c.method == Method::QorPoly) && c.shift)
        throw InvalidArgument("polynomial methods take no shift");
}

const std::vector<Preset>& list_presets() {
    static const std::vector<Preset> presets = [] {
        auto base = [](std::string label, Method method) {
            ExperimentConfig c;
            c.label = std::move(label);
            c.matrix = parse_matrix_source("laplacian:1200");
            c.method = method;
            c.m = 10;
            return c;
        };
        std::vector<Preset> p;

        ExperimentConfig sp = base("fig-stepfcts-poly", Method::Poly);
        sp.outputs = {"stepfuncs", "rule", "bounds"};
        ExperimentConfig ss = base("fig-stepfcts-sai", Method::SaiReal);
        ss.shift = cplx(-100.0, 0.0);
        ss.outputs = {"stepfuncs", "rule", "bounds"};
        p.push_back({"fig-stepfcts", "step functions of the spectral and Gauss distributions (poly and SaI s=-100)",
                     {sp, ss}});

        ExperimentConfig om;
        om.label = "fig-omega-sweep";
        om.matrix = parse_matrix_source("diag:1:50");
        om.vector = parse_vector_source("ones");
        om.method = Method::QorPoly;
        om.m = 5;
        om.xi = 0.5;
        om.outputs = {"omega", "rule", "bounds", "quadrature"};
        p.push_back({"fig-omega-sweep", "omega_m as a function of the preassigned eigenvalue, diag(1..50), m=5", {om}});

        ExperimentConfig fp = base("fig-F-poly", Method::Poly);
        fp.outputs = {"F", "bounds", "rule", "quadrature"};
        p.push_back({"fig-F-poly", "F = alpha_n - alpha_m for the Gauss rule of J_m", {fp}});

        ExperimentConfig fo = base("fig-F-sai-outside", Method::SaiReal);
        fo.shift = cplx(-100.0, 0.0);
        fo.outputs = {"F", "bounds", "rule", "quadrature"};
        p.push_back({"fig-F-sai-outside", "rational Gauss rule, single pole s=-100 below the spectrum", {fo}});

        ExperimentConfig fi = base("fig-F-sai-inside", Method::SaiReal);
        fi.shift = cplx(1e4, 0.0);
        fi.outputs = {"Fs", "bounds", "rule", "quadrature"};
        p.push_back({"fig-F-sai-inside", "rational Gauss rule, single pole s=1e4 inside the spectrum", {fi}});

        ExperimentConfig fq = base("fig-F-qor-sai", Method::QorSai);
        fq.shift = cplx(1e4, 0.0);
        fq.xi = -10.0;
        fq.outputs = {"Fs", "bounds", "rule", "quadrature"};
        p.push_back({"fig-F-qor-sai", "rational Gauss-Radau rule, s=1e4 with preassigned node -10", {fq}});

        ExperimentConfig fc = base("fig-complex-sai", Method::SaiComplex);
        fc.shift = cplx(1e4, -1e2);
        fc.outputs = {"F", "bounds", "rule", "quadrature"};
        p.push_back({"fig-complex-sai", "complex pole s=1e4-1e2i, upper bounds from paired weights", {fc}});

        ExperimentConfig fe = base("fig-extended", Method::Extended);
        fe.shift = cplx(-10.0, 0.0);
        fe.rho = 6;
        fe.m = 11;
        fe.outputs = {"F", "bounds", "rule", "quadrature"};
        p.push_back({"fig-extended", "extended Krylov space, rho=6 (m=11), s=-10", {fe}});
        return p;
    }();
    return presets;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : list_presets())
        if (p.name == name) return p;
    throw InvalidArgument("unknown preset '" + name + "'");
}

bool RunArtifact::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

RunArtifact run(const ExperimentConfig& c) {
    validate(c);
    const ToleranceProfile& tol = c.tol;
    const int n = operator_size(c);
    const InnerProduct ip = c.metric == "identity" ? InnerProduct::identity(n)
                                                   : InnerProduct::dense(read_matrix_market_dense(c.metric.substr(4)), tol);
    if (ip.n() != n) throw DimensionError("metric and matrix sizes differ");
    const HermitianOperator A = build_operator(c, ip);
    const Vec u = build_vector(c, ip);
    const double unorm2 = std::pow(ip.norm(u), 2);

    json j;
    j["tool"] = "cmskrylov";
    j["generated_at"] = timestamp_utc();
    j["version"] = kVersion;
    j["config"] = config_json(c);
    if (c.matrix.type == MatrixSource::Type::Laplacian)
        j["laplacian_scaling"] = "Dirichlet finite differences, h = 1/(n+1), diagonal 2/h^2, off-diagonal -1/h^2";
    j["tolerances"] = to_json(tol);

    RunArtifact art;
    art.label = c.label;
    Recorder rec;

    const KrylovDecomposition dec = build_decomposition(c, A, u, ip);
    const double odef = orthogonality_defect(dec.basis, ip);
    const double hdef = (dec.rep - dec.rep.adjoint()).norm() / std::max(dec.rep.norm(), 1e-300);
    j["decomposition"] = json{{"kind", to_string(dec.kind)},
                              {"m", dec.m},
                              {"beta0", dec.beta0},
                              {"orthogonality_defect", odef},
                              {"hermitian_defect", hdef},
                              {"anti_hermitian_before_hermitization", dec.rep_defect}};
    rec.add("orthonormal_basis", odef <= 1e-8, fmt::format("{:.3e}", odef));
    rec.add("hermitian_representation", hdef <= tol.hermitian && dec.rep_defect <= tol.anti_hermitian,
            fmt::format("{:.3e}", std::max(hdef, dec.rep_defect)));

    const QuadratureRule rule = rule_from_decomposition(dec, tol);
    const RVec& theta = rule.dist.nodes();
    const double wsum_err = std::abs(rule.dist.total() - unorm2) / unorm2;
    j["rule"] = json{{"nodes", to_json(theta)}, {"weights", to_json(rule.dist.weights())}};
    rec.add("weights_sum_to_norm", wsum_err <= 1e-10, fmt::format("{:.3e}", wsum_err));
    if (c.outputs.count("rule")) {
        std::string s = "j,theta,weight,c_re,c_im\n";
        for (int k = 0; k < rule.m(); ++k)
            s += fmt::format("{},{},{},{},{}\n", k + 1, csv_num(theta(k)), csv_num(rule.dist.weights()(k)),
                             csv_num(rule.c(k).real()), csv_num(rule.c(k).imag()));
        art.csv["rule"] = s;
    }
    if (dec.xi) {
        const double spread = std::max(theta.maxCoeff() - theta.minCoeff(), theta.cwiseAbs().maxCoeff());
        const double dist = (theta.array() - *dec.xi).abs().minCoeff();
        rec.add("xi_is_eigenvalue", dist <= 1e-10 * spread, fmt::format("{:.3e}", dist / spread));
    }

    std::optional<StepDistribution> ref;
    if (c.reference) ref = exact_reference(A, u, ip, tol);

    if (ref) {
        j["reference"] = json{{"nodes", ref->size()}, {"a", ref->a()}, {"b", ref->b()}, {"total", ref->total()},
                              {"lambda_min", ref->nodes()(0)}, {"lambda_max", ref->nodes()(ref->size() - 1)}};
        const bool qor_kind = dec.kind == Kind::QorPoly || dec.kind == Kind::QorRational;
        if (!qor_kind && ref->size() > rule.m()) {
            bool inter = theta(0) > ref->nodes()(0) && theta(rule.m() - 1) < ref->nodes()(ref->size() - 1);
            for (int k = 0; k + 1 < rule.m(); ++k) inter = inter && ref->alpha_left(theta(k + 1)) > ref->alpha(theta(k));
            rec.add("interlacing", inter);
        }

        // Exactness for the rule's own class, plus the next degree for information.
        const int dmax = rule.exactness.numerator_degree;
        const auto err = check_exactness(rule, *ref, dmax + 1);
        double worst = 0.0;
        for (int d = 0; d <= dmax; ++d) worst = std::max(worst, err[d]);
        j["exactness"] = json{{"numerator_degree", dmax},
                              {"denominator_power", rule.exactness.denominator_power},
                              {"errors", err},
                              {"max_error", worst}};
        rec.add("quadrature_exactness", worst <= kExactnessTol, fmt::format("{:.3e}", worst));
        if (c.outputs.count("quadrature")) {
            std::string s = "degree,error,within_class\n";
            for (std::size_t d = 0; d < err.size(); ++d)
                s += fmt::format("{},{},{}\n", d, csv_num(err[d]), int(static_cast<int>(d) <= dmax));
            art.csv["quadrature"] = s;
        }

        json bounds;
        std::string bounds_csv = "table,family,j,k,sets,relation,measure,weight,margin,holds\n";
        std::optional<double> fs_shift;
        bool check_F = true;
        switch (dec.kind) {
            case Kind::Polynomial:
            case Kind::QorPoly:
            case Kind::Extended: {
                const CMSReport r = dec.kind == Kind::Extended ? cms_extended(rule, *ref, dec.pole.s.real(), tol)
                                                               : cms_polynomial(rule, *ref, tol);
                j["cms"] = cms_json(r);
                rec.add("cms_separation", r.all_hold());
                if (c.outputs.count("bounds")) art.csv["cms"] = cms_csv(r);
                const BoundReport pw = verify_bound_table(cms_piecewise_polynomial(rule), *ref, tol);
                append_bounds("piecewise", pw, bounds, bounds_csv);
                rec.add("piecewise_bounds", pw.all_hold(), fmt::format("{} violations", pw.violations()));
                break;
            }
            case Kind::SaIReal:
            case Kind::QorRational: {
                if (dec.pole.s.imag() != 0.0) {
                    check_F = false;
                    break;
                }
                const double s = dec.pole.s.real();
                fs_shift = s;
                const CMSReport r = cms_rational_real(rule, *ref, s, tol);
                j["cms"] = cms_json(r);
                rec.add("cms_separation", r.all_hold());
                if (c.outputs.count("bounds")) art.csv["cms"] = cms_csv(r);
                const double l1 = ref->nodes()(0), ln = ref->nodes()(ref->size() - 1);
                if (rule.m() >= 2 && theta(0) < s && s < theta(rule.m() - 1)) {
                    PreassignedNode pre = PreassignedNode::None;
                    if (dec.xi && *dec.xi < l1) pre = PreassignedNode::Left;
                    if (dec.xi && *dec.xi > ln) pre = PreassignedNode::Right;
                    const BoundReport pw = verify_bound_table(cms_piecewise_rational(rule, s, pre), *ref, tol);
                    append_bounds("piecewise", pw, bounds, bounds_csv);
                    rec.add("piecewise_bounds", pw.all_hold(), fmt::format("{} violations", pw.violations()));
                } else if (dec.kind == Kind::SaIReal && (s < l1 || s > ln)) {
                    const BoundReport pw = verify_bound_table(cms_piecewise_polynomial(rule), *ref, tol);
                    append_bounds("piecewise", pw, bounds, bounds_csv);
                    rec.add("piecewise_bounds", pw.all_hold(), fmt::format("{} violations", pw.violations()));
                }
                break;
            }
            case Kind::SaIComplex: {
                check_F = false;
                const BoundReport cu = cms_complex_upper(rule, *ref, dec.pole.s, tol);
                append_bounds("complex_upper", cu, bounds, bounds_csv);
                rec.add("complex_upper_bounds", cu.all_hold(), fmt::format("{} violations", cu.violations()));
                break;
            }
        }
        if (!bounds.is_null()) j["bounds"] = bounds;
        if (c.outputs.count("bounds")) art.csv["bounds"] = bounds_csv;

        const FDiagnostic F = F_diagnostic(*ref, rule, fs_shift, 512, tol);
        json fj{{"shifted", F.s.has_value()}, {"gamma", F.gamma}, {"km", F.km},
                {"alternations", F.alternations}, {"expected_alternations", F.expected_alternations},
                {"pattern_ok", F.pattern_ok}};
        json samples = json::array();
        for (const auto& f : F.samples)
            samples.push_back(json{{"k", f.k}, {"theta", f.theta}, {"F", f.F_at}, {"F_left", f.F_left},
                                   {"Fs", f.Fs_at}, {"Fs_left", f.Fs_left}});
        fj["samples"] = samples;
        j["F"] = fj;
        if (check_F) rec.add("F_sign_pattern", F.pattern_ok, fmt::format("{}/{}", F.alternations, F.expected_alternations));
        if (c.outputs.count("F") || c.outputs.count("Fs")) {
            std::string s = "k,theta,F,F_left,Fs,Fs_left\n";
            for (const auto& f : F.samples)
                s += fmt::format("{},{},{},{},{},{}\n", f.k, csv_num(f.theta), csv_num(f.F_at), csv_num(f.F_left),
                                 csv_num(f.Fs_at), csv_num(f.Fs_left));
            art.csv["F"] = s;
            std::string g = F.s ? "lambda,Fs\n" : "lambda,F\n";
            for (const auto& [x, v] : F.grid) g += fmt::format("{},{}\n", csv_num(x), csv_num(v));
            art.csv["F_grid"] = g;
        }

        if (c.outputs.count("stepfuncs")) {
            std::vector<double> xs(ref->nodes().data(), ref->nodes().data() + ref->size());
            xs.insert(xs.end(), theta.data(), theta.data() + theta.size());
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            std::string s = "lambda,alpha_n,alpha_m,alpha_n_left,alpha_m_left\n";
            for (double x : xs)
                s += fmt::format("{},{},{},{},{}\n", csv_num(x), csv_num(ref->alpha(x)), csv_num(rule.dist.alpha(x)),
                                 csv_num(ref->alpha_left(x)), csv_num(rule.dist.alpha_left(x)));
            art.csv["stepfuncs"] = s;
        }
    }

    if (c.outputs.count("omega")) {
        if (c.m < 2 || (c.method != Method::Poly && c.method != Method::QorPoly))
            throw InvalidArgument("the omega output needs a polynomial method with m >= 2");
        const double lo = ref ? ref->a() : -A.norm_estimate(), hi = ref ? ref->b() : A.norm_estimate();
        const int np = 2001;
        std::vector<double> grid(np);
        for (int i = 0; i < np; ++i) grid[i] = lo + (hi - lo) * i / (np - 1);
        const OmegaSweep sw = qor_omega_sweep(A, u, c.m, grid, ip, tol);
        double cross_err = 0.0;
        for (double w : sw.omega_at_crossings) cross_err = std::max(cross_err, std::abs(w - sw.a_m));
        std::vector<double> inside;
        for (Eigen::Index i = 0; i < sw.poles.size(); ++i)
            if (sw.poles(i) > lo && sw.poles(i) < hi) inside.push_back(sw.poles(i));
        const double step = (hi - lo) / (np - 1);
        bool poles_ok = inside.size() == sw.detected_poles.size();
        for (std::size_t i = 0; poles_ok && i < inside.size(); ++i)
            poles_ok = std::abs(inside[i] - sw.detected_poles[i]) <= step;
        j["omega_sweep"] = json{{"a_m", sw.a_m},
                                {"poles", to_json(sw.poles)},
                                {"crossings", to_json(sw.crossings)},
                                {"omega_at_crossings", sw.omega_at_crossings},
                                {"detected_poles", sw.detected_poles},
                                {"max_crossing_error", cross_err}};
        rec.add("omega_crossings", cross_err <= 1e-8 * std::max(1.0, std::abs(sw.a_m)), fmt::format("{:.3e}", cross_err));
        rec.add("omega_poles", poles_ok, fmt::format("{} of {}", sw.detected_poles.size(), inside.size()));
        std::string s = "xi,omega\n";
        for (std::size_t i = 0; i < grid.size(); ++i) s += fmt::format("{},{}\n", csv_num(grid[i]), csv_num(sw.omega[i]));
        art.csv["omega"] = s;
    }

    json checks = json::array();
    for (const auto& ch : rec.checks) checks.push_back(json{{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    j["checks"] = checks;
    art.checks = rec.checks;
    j["pass"] = art.pass();
    art.json = j.dump(2) + "\n";
    return art;
}

void write_artifact(const RunArtifact& a, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [](const fs::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write '" + p.string() + "'");
        out << text;
    };
    write(fs::path(dir) / (a.label + ".json"), a.json);
    for (const auto& [suffix, text] : a.csv) write(fs::path(dir) / (a.label + "_" + suffix + ".csv"), text);
}

ToleranceProfile load_tolerance_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("invalid tolerance profile: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("tolerance profile must be a JSON object");
    ToleranceProfile t;
    const std::map<std::string, double*> reals{
        {"hermitian", &t.hermitian},         {"eig_rel", &t.eig_rel},
        {"singular_pivot", &t.singular_pivot}, {"solve_residual", &t.solve_residual},
        {"breakdown", &t.breakdown},         {"anti_hermitian", &t.anti_hermitian},
        {"unitary_gamma", &t.unitary_gamma}, {"qor_guard", &t.qor_guard},
        {"node_distinct", &t.node_distinct}, {"merge", &t.merge},
        {"weight_floor", &t.weight_floor},   {"strict_margin", &t.strict_margin},
        {"interpolation", &t.interpolation}};
    const std::map<std::string, int*> ints{{"eig_sweep_factor", &t.eig_sweep_factor},
                                           {"majorant_max_m", &t.majorant_max_m}};
    for (const auto& [key, value] : j.items()) {
        if (auto it = reals.find(key); it != reals.end() && value.is_number()) *it->second = value.get<double>();
        else if (auto jt = ints.find(key); jt != ints.end() && value.is_number_integer()) *jt->second = value.get<int>();
        else throw InvalidArgument("unknown or mistyped tolerance '" + key + "'");
    }
    return t;
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("\"generated_at\"") == std::string::npos) out += line + "\n";
    return out;
}

}  // namespace cmskrylov
