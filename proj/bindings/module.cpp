// Python bindings for the main operations: coefficient sequences, Prüfer
// trajectories, phase sets, the coefficient algebra, and the spectral
// diagnostics.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gbvlab/expansion.hpp"
#include "gbvlab/experiment.hpp"
#include "gbvlab/phase_set.hpp"
#include "gbvlab/prufer.hpp"
#include "gbvlab/sequences.hpp"
#include "gbvlab/shift_poly.hpp"
#include "gbvlab/spectral.hpp"

namespace py = pybind11;
using namespace gbv;

namespace {

Model parse_model(const std::string& m) {
    if (m == "opuc") return Model::opuc;
    if (m == "oprl") return Model::oprl;
    throw py::value_error("model must be 'opuc' or 'oprl'");
}

ExceptionalVariant parse_variant(const std::string& v) {
    if (v == "circle") return ExceptionalVariant::circle;
    if (v == "line") return ExceptionalVariant::line_plain;
    if (v == "line-widened") return ExceptionalVariant::line_widened;
    if (v == "point-mass") return ExceptionalVariant::schrodinger_pp;
    throw py::value_error("variant must be circle | line | line-widened | point-mass");
}

py::object rational_to_fraction(const Rational& r) {
    const py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(r.num(), r.den());
}

std::vector<WvnTerm> parse_terms(const std::vector<std::tuple<double, double, double, double>>& terms) {
    std::vector<WvnTerm> out;
    for (const auto& [lambda, phi, alpha, gamma] : terms) out.push_back({lambda, phi, alpha, gamma});
    return out;
}

py::dict exceptional_to_dict(const ExceptionalSet& S) {
    py::dict out;
    out["model"] = S.model == Model::opuc ? "opuc" : "oprl";
    out["generating"] = S.generating.phases();
    py::list pts;
    for (const auto& p : S.points) {
        py::dict e;
        e["eta"] = p.eta;
        if (S.model == Model::oprl)
            e["point"] = p.point_re;
        else
            e["point"] = py::make_tuple(p.point_re, p.point_im);
        e["boundary"] = p.boundary;
        pts.append(e);
    }
    out["points"] = pts;
    return out;
}

}  // namespace

PYBIND11_MODULE(_gbvlab, m) {
    m.doc() = "Prüfer-variable spectral diagnostics for orthogonal polynomials with "
              "generalized bounded-variation recursion coefficients";

    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ValueError);
    py::register_exception<CoprimalityError>(m, "CoprimalityError", PyExc_ValueError);
    py::register_exception<StepDomainError>(m, "StepDomainError", PyExc_ValueError);

    // -- sequences ----------------------------------------------------------
    py::class_<CoeffSequence>(m, "Sequence")
        .def(py::init([](index_t start, std::function<cplx(index_t)> fn) {
                 return CoeffSequence(start, std::move(fn));
             }),
             py::arg("start"), py::arg("eval"))
        .def_static("zero", [](index_t start) { return CoeffSequence::zero(start); },
                    py::arg("start") = 0)
        .def_static("constant",
                    [](cplx v, index_t start) { return CoeffSequence::constant(v, start); },
                    py::arg("value"), py::arg("start") = 0)
        .def_property_readonly("start_index", &CoeffSequence::start_index)
        .def("__call__", [](const CoeffSequence& s, index_t n) { return s(n); });

    py::class_<RotatedBVComponent>(m, "RotatedBVComponent")
        .def_readonly("seq", &RotatedBVComponent::seq)
        .def_readonly("phase", &RotatedBVComponent::phase)
        .def_property_readonly("variation_budget",
                               [](const RotatedBVComponent& c) -> py::object {
                                   if (c.variation_budget) return py::float_(*c.variation_budget);
                                   return py::none();
                               });

    py::class_<GBVDecomposition>(m, "GBVDecomposition")
        .def_readonly("components", &GBVDecomposition::components)
        .def_readonly("represented", &GBVDecomposition::represented)
        .def("phases", &GBVDecomposition::phases);

    m.def("rotated_variation", &rotated_variation, py::arg("component"), py::arg("from_index"),
          py::arg("to_index"));
    m.def(
        "wigner_von_neumann",
        [](const std::vector<std::tuple<double, double, double, double>>& terms, index_t n0) {
            return wigner_von_neumann(parse_terms(terms), n0);
        },
        py::arg("terms"), py::arg("n0") = 1,
        "terms: list of (lambda, phi, alpha, gamma) tuples");
    m.def("power_law_rotated", &power_law_rotated, py::arg("z"), py::arg("phase"), py::arg("p"),
          py::arg("n0"));

    // -- phase sets ----------------------------------------------------------
    py::class_<PhaseSet>(m, "PhaseSet")
        .def(py::init<const std::vector<double>&, double>(), py::arg("phases"),
             py::arg("dedup_tol") = 1e-9)
        .def_property_readonly("phases", &PhaseSet::phases)
        .def("contains", &PhaseSet::contains)
        .def("__len__", &PhaseSet::size);

    m.def("minkowski_sum", &minkowski_sum);
    m.def("k_fold_sum", &k_fold_sum, py::arg("A"), py::arg("k"));
    m.def(
        "critical_set_Ap",
        [](const PhaseSet& A, int p, const std::string& model) {
            return critical_set_Ap(A, p, parse_model(model));
        },
        py::arg("A"), py::arg("p"), py::arg("model"));
    m.def(
        "exceptional_S",
        [](const PhaseSet& A, int p, const std::string& model, const std::string& variant) {
            return exceptional_to_dict(exceptional_S(A, p, parse_model(model),
                                                     parse_variant(variant)));
        },
        py::arg("A"), py::arg("p"), py::arg("model"), py::arg("variant"));

    // -- Prüfer engine --------------------------------------------------------
    py::class_<PruferState>(m, "PruferState")
        .def_readonly("n", &PruferState::n)
        .def_readonly("log_r", &PruferState::log_r)
        .def_readonly("theta", &PruferState::theta);

    py::class_<VerblunskyCoeffs>(m, "VerblunskyCoeffs")
        .def(py::init<CoeffSequence>(), py::arg("sequence"));
    py::class_<JacobiCoeffs>(m, "JacobiCoeffs")
        .def(py::init([](std::function<double(index_t)> a, std::function<double(index_t)> b) {
                 return JacobiCoeffs(std::move(a), std::move(b));
             }),
             py::arg("a"), py::arg("b"))
        .def_static("free_case", &JacobiCoeffs::free_case)
        .def_static("schrodinger", [](std::function<double(index_t)> v) {
            return JacobiCoeffs::schrodinger(std::move(v));
        });

    m.def("alpha_eta", &alpha_eta, py::arg("a_n"), py::arg("b_next"), py::arg("eta"));
    m.def(
        "unified_prufer_step",
        [](index_t n, double log_r, double theta, cplx alpha, double eta,
           const std::string& model) {
            const auto s = unified_prufer_step({n, log_r, theta}, alpha, eta, parse_model(model));
            return py::make_tuple(s.n, s.log_r, s.theta);
        },
        py::arg("n"), py::arg("log_r"), py::arg("theta"), py::arg("alpha"), py::arg("eta"),
        py::arg("model"));

    auto trajectory_binding = [](const Coefficients& coeffs, double eta, index_t N,
                                 index_t stride) {
        std::vector<std::tuple<index_t, double, double>> out;
        run_prufer(coeffs, eta, N, [&](const PruferState& s) {
            if (s.n % stride == 0 || s.n == N) out.emplace_back(s.n, s.log_r, s.theta);
        });
        return out;
    };
    m.def(
        "prufer_trajectory",
        [trajectory_binding](const VerblunskyCoeffs& c, double eta, index_t N, index_t stride) {
            return trajectory_binding(Coefficients{c}, eta, N, stride);
        },
        py::arg("coeffs"), py::arg("eta"), py::arg("N"), py::arg("stride") = 1);
    m.def(
        "prufer_trajectory",
        [trajectory_binding](const JacobiCoeffs& c, double eta, index_t N, index_t stride) {
            return trajectory_binding(Coefficients{c}, eta, N, stride);
        },
        py::arg("coeffs"), py::arg("eta"), py::arg("N"), py::arg("stride") = 1);
    m.def(
        "direct_polynomial_prufer",
        [](const VerblunskyCoeffs& c, double eta, index_t n) {
            const auto d = direct_polynomial_prufer(c, eta, n);
            return py::make_tuple(d.log_r, d.theta_mod);
        },
        py::arg("coeffs"), py::arg("eta"), py::arg("n"));
    m.def(
        "direct_polynomial_prufer",
        [](const JacobiCoeffs& c, double eta, index_t n) {
            const auto d = direct_polynomial_prufer(c, eta, n);
            return py::make_tuple(d.log_r, d.theta_mod);
        },
        py::arg("coeffs"), py::arg("eta"), py::arg("n"));

    // -- coefficient algebra --------------------------------------------------
    m.def("chi", &chi, py::arg("eta"));
    m.def("eval_P", &eval_P, py::arg("k"), py::arg("l"), py::arg("alpha"),
          py::arg("omega_phase"), py::arg("c"));
    m.def("coeff_xi",
          [](int I, int J, int K, int L) { return rational_to_fraction(coeff_xi(I, J, K, L)); });
    m.def("coeff_Xi", &coeff_Xi);
    m.def("coeff_omega", &coeff_omega);
    m.def("coeff_Omega", &coeff_Omega);
    m.def("binom", &binom);

    py::class_<CoeffAlgebra>(m, "CoeffAlgebra")
        .def(py::init<int>(), py::arg("max_order") = 6)
        .def("f",
             [](CoeffAlgebra& a, int I, int J, int K, int L, double eta,
                const std::vector<double>& xs, const std::vector<double>& ys) {
                 return a.f(I, J, K, L, eta, xs, ys);
             })
        .def("g",
             [](CoeffAlgebra& a, int I, int J, int K, int L, double eta,
                const std::vector<double>& xs, const std::vector<double>& ys) {
                 return a.g(I, J, K, L, eta, xs, ys);
             })
        .def("G",
             [](CoeffAlgebra& a, int I, int J, int K, int L, double eta,
                const std::vector<double>& xs, const std::vector<double>& ys) {
                 return a.G(I, J, K, L, eta, xs, ys);
             })
        .def("H",
             [](CoeffAlgebra& a, int I, int J, int K, int L, double eta,
                const std::vector<double>& xs, const std::vector<double>& ys) {
                 return a.H(I, J, K, L, eta, xs, ys);
             });

    m.def(
        "verify_identities",
        [](std::uint64_t seed, int random_points) {
            IdentityOptions opts;
            opts.seed = seed;
            opts.random_points = random_points;
            py::list out;
            for (const auto& r : verify_all_identities(opts)) {
                py::dict e;
                e["identity"] = r.identity;
                e["instances"] = r.instances;
                e["max_residual"] = r.max_residual;
                e["exact"] = r.exact;
                e["passed"] = r.passed;
                out.append(e);
            }
            return out;
        },
        py::arg("seed") = 0x5eed, py::arg("random_points") = 40);

    // -- spectral diagnostics ---------------------------------------------------
    m.def(
        "density_probe",
        [](const VerblunskyCoeffs& c, index_t n, const std::vector<double>& grid) {
            const auto p = density_probe(Coefficients{c}, n, grid);
            return py::make_tuple(p.grid, p.density);
        },
        py::arg("coeffs"), py::arg("n"), py::arg("grid"));
    m.def(
        "density_probe",
        [](const JacobiCoeffs& c, index_t n, const std::vector<double>& grid) {
            const auto p = density_probe(Coefficients{c}, n, grid);
            return py::make_tuple(p.grid, p.density);
        },
        py::arg("coeffs"), py::arg("n"), py::arg("grid"));

    m.attr("__version__") = kToolVersion;
}
