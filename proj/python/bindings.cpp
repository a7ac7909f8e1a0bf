#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmskrylov/cms.hpp"
#include "cmskrylov/experiment.hpp"
#include "cmskrylov/majorant.hpp"
#include "cmskrylov/qor.hpp"
#include "cmskrylov/random.hpp"

namespace py = pybind11;
using namespace cmskrylov;

namespace {

py::dict row_dict(const CMSRow& r) {
    py::dict d;
    d["k"] = r.k;
    d["lower"] = r.lower;
    d["value"] = r.value;
    d["upper"] = r.upper;
    d["margin"] = r.margin;
    d["strict"] = r.strict;
    d["expected_strict"] = r.expected_strict;
    d["holds"] = r.holds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Krylov quadrature rules and Chebyshev-Markov-Stieltjes bounds";
    mod.attr("__version__") = kVersion;

    auto error = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionError>(mod, "DimensionError", error);
    py::register_exception<InvalidArgument>(mod, "InvalidArgument", error);
    py::register_exception<NotHermitian>(mod, "NotHermitian", error);
    py::register_exception<ConvergenceFailure>(mod, "ConvergenceFailure", error);
    py::register_exception<SingularShift>(mod, "SingularShift", error);
    py::register_exception<GuardViolation>(mod, "GuardViolation", error);
    py::register_exception<LuckyBreakdown>(mod, "LuckyBreakdown", error);
    py::register_exception<ParseError>(mod, "ParseError", error);

    py::class_<InnerProduct>(mod, "InnerProduct")
        .def_static("identity", &InnerProduct::identity, py::arg("n"))
        .def_static("dense", [](const Mat& M) { return InnerProduct::dense(M); }, py::arg("M"))
        .def_property_readonly("n", &InnerProduct::n)
        .def("__call__", &InnerProduct::operator())
        .def("norm", &InnerProduct::norm);

    py::class_<HermitianOperator>(mod, "HermitianOperator")
        .def_static("from_dense", [](const Mat& A, const InnerProduct& ip) { return HermitianOperator::from_dense(A, ip); },
                    py::arg("A"), py::arg("ip"))
        .def_static("diagonal", &HermitianOperator::diagonal, py::arg("d"))
        .def_property_readonly("n", &HermitianOperator::n)
        .def("to_dense", &HermitianOperator::to_dense)
        .def("apply", py::overload_cast<const Vec&>(&HermitianOperator::apply, py::const_));

    mod.def("laplacian_1d", &laplacian_1d, py::arg("n"));
    mod.def("random_unit_vector", &random_unit_vector, py::arg("seed"), py::arg("ip"));

    py::enum_<Kind>(mod, "Kind")
        .value("Polynomial", Kind::Polynomial)
        .value("SaIReal", Kind::SaIReal)
        .value("SaIComplex", Kind::SaIComplex)
        .value("Extended", Kind::Extended)
        .value("QorPoly", Kind::QorPoly)
        .value("QorRational", Kind::QorRational);

    py::class_<KrylovDecomposition>(mod, "KrylovDecomposition")
        .def_readonly("kind", &KrylovDecomposition::kind)
        .def_readonly("m", &KrylovDecomposition::m)
        .def_readonly("basis", &KrylovDecomposition::basis)
        .def_readonly("rep", &KrylovDecomposition::rep)
        .def_readonly("x", &KrylovDecomposition::x)
        .def_readonly("beta0", &KrylovDecomposition::beta0)
        .def_readonly("xi", &KrylovDecomposition::xi)
        .def_readonly("rep_defect", &KrylovDecomposition::rep_defect);

    mod.def("lanczos", [](const HermitianOperator& A, const Vec& u, int m, const InnerProduct& ip) {
        return lanczos(A, u, m, ip);
    }, py::arg("A"), py::arg("u"), py::arg("m"), py::arg("ip"));
    mod.def("sai_real", [](const HermitianOperator& A, const Vec& u, int m, double s, const InnerProduct& ip) {
        return sai_real(A, u, m, s, ip);
    }, py::arg("A"), py::arg("u"), py::arg("m"), py::arg("s"), py::arg("ip"));
    mod.def("sai_complex", [](const HermitianOperator& A, const Vec& u, int m, cplx s, const InnerProduct& ip) {
        return sai_complex(A, u, m, s, ip);
    }, py::arg("A"), py::arg("u"), py::arg("m"), py::arg("s"), py::arg("ip"));
    mod.def("extended_lanczos", [](const HermitianOperator& A, const Vec& u, int rho, double s, const InnerProduct& ip) {
        return extended_lanczos(A, u, rho, s, ip);
    }, py::arg("A"), py::arg("u"), py::arg("rho"), py::arg("s"), py::arg("ip"));
    mod.def("qor_poly", [](const HermitianOperator& A, const Vec& u, int m, double xi, const InnerProduct& ip) {
        return qor_poly(A, u, m, xi, ip);
    }, py::arg("A"), py::arg("u"), py::arg("m"), py::arg("xi"), py::arg("ip"));
    mod.def("qor_rational_sai",
            [](const HermitianOperator& A, const Vec& u, int m, cplx s, double xi, const InnerProduct& ip) {
                return qor_rational_sai(A, u, m, s, xi, ip);
            },
            py::arg("A"), py::arg("u"), py::arg("m"), py::arg("s"), py::arg("xi"), py::arg("ip"));
    mod.def("qor_fun_approx", [](const KrylovDecomposition& d, const ScalarFunction& f) { return qor_fun_approx(d, f); },
            py::arg("dec"), py::arg("f"));
    mod.def("rational_qor_fun_approx",
            [](const KrylovDecomposition& d, const ScalarFunction& f) { return rational_qor_fun_approx(d, f); },
            py::arg("dec"), py::arg("f"));

    py::class_<StepDistribution>(mod, "StepDistribution")
        .def(py::init<RVec, RVec>(), py::arg("nodes"), py::arg("weights"))
        .def(py::init<RVec, RVec, double, double>(), py::arg("nodes"), py::arg("weights"), py::arg("a"), py::arg("b"))
        .def_property_readonly("nodes", &StepDistribution::nodes)
        .def_property_readonly("weights", &StepDistribution::weights)
        .def_property_readonly("a", &StepDistribution::a)
        .def_property_readonly("b", &StepDistribution::b)
        .def("total", &StepDistribution::total)
        .def("alpha", &StepDistribution::alpha)
        .def("alpha_left", &StepDistribution::alpha_left);

    py::class_<QuadratureRule>(mod, "QuadratureRule")
        .def_readonly("dist", &QuadratureRule::dist)
        .def_readonly("source", &QuadratureRule::source)
        .def_readonly("c", &QuadratureRule::c)
        .def_property_readonly("nodes", [](const QuadratureRule& r) { return r.dist.nodes(); })
        .def_property_readonly("weights", [](const QuadratureRule& r) { return r.dist.weights(); })
        .def_property_readonly("m", &QuadratureRule::m);

    mod.def("rule_from_decomposition", [](const KrylovDecomposition& d) { return rule_from_decomposition(d); },
            py::arg("dec"));
    mod.def("exact_reference",
            [](const HermitianOperator& A, const Vec& u, const InnerProduct& ip) { return exact_reference(A, u, ip); },
            py::arg("A"), py::arg("u"), py::arg("ip"));
    mod.def("check_exactness", &check_exactness, py::arg("rule"), py::arg("ref"), py::arg("max_degree"));

    py::class_<CMSReport>(mod, "CMSReport")
        .def_readonly("kind", &CMSReport::kind)
        .def_readonly("gamma", &CMSReport::gamma)
        .def_readonly("total", &CMSReport::total)
        .def_readonly("identity_residual", &CMSReport::identity_residual)
        .def_property_readonly("rows", [](const CMSReport& r) {
            py::list l;
            for (const auto& row : r.rows) l.append(row_dict(row));
            return l;
        })
        .def_property_readonly("shifted_rows", [](const CMSReport& r) {
            py::list l;
            for (const auto& row : r.shifted_rows) l.append(row_dict(row));
            return l;
        })
        .def("all_hold", &CMSReport::all_hold, py::arg("identity_tol") = 1e-10);

    mod.def("cms_polynomial", [](const QuadratureRule& r, const StepDistribution& ref) { return cms_polynomial(r, ref); },
            py::arg("rule"), py::arg("ref"));
    mod.def("cms_rational_real",
            [](const QuadratureRule& r, const StepDistribution& ref, double s) { return cms_rational_real(r, ref, s); },
            py::arg("rule"), py::arg("ref"), py::arg("s"));
    mod.def("cms_extended",
            [](const QuadratureRule& r, const StepDistribution& ref, double s) { return cms_extended(r, ref, s); },
            py::arg("rule"), py::arg("ref"), py::arg("s"));

    py::enum_<Side>(mod, "Side").value("Plus", Side::Plus).value("Minus", Side::Minus);
    py::class_<HermitePolynomial>(mod, "HermitePolynomial")
        .def("__call__", &HermitePolynomial::operator())
        .def("derivative", &HermitePolynomial::derivative)
        .def_property_readonly("degree", &HermitePolynomial::degree)
        .def("condition_residual", &HermitePolynomial::condition_residual);
    mod.def("majorant_polynomial", [](const RVec& nodes, int k, Side side) { return majorant_polynomial(nodes, k, side); },
            py::arg("nodes"), py::arg("k"), py::arg("side"));

    mod.def("list_presets", [] {
        std::vector<std::string> names;
        for (const auto& p : list_presets()) names.push_back(p.name);
        return names;
    });
    mod.def("run_preset", [](const std::string& name, std::uint64_t seed) {
        py::list out;
        for (auto c : find_preset(name).configs) {
            c.seed = seed;
            RunArtifact a;
            {
                py::gil_scoped_release release;
                a = run(c);
            }
            py::dict d;
            d["label"] = a.label;
            d["json"] = a.json;
            d["pass"] = a.pass();
            py::dict checks;
            for (const auto& ch : a.checks) checks[py::str(ch.name)] = ch.pass;
            d["checks"] = checks;
            out.append(d);
        }
        return out;
    }, py::arg("name"), py::arg("seed") = 1);
    mod.def("strip_timestamp", &strip_timestamp, py::arg("json"));
}
