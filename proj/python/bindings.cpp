#include "photocount/distributions.hpp"
#include "photocount/error.hpp"
#include "photocount/extended.hpp"
#include "photocount/io.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/simplex.hpp"
#include "photocount/stability.hpp"
#include "photocount/transform.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace photocount;

namespace {

std::vector<std::vector<double>> matrix_rows(TransformMatrix const& t) {
    std::vector<std::vector<double>> rows(t.dim(), std::vector<double>(t.dim()));
    for (std::size_t m = 0; m < t.dim(); ++m) {
        for (std::size_t n = 0; n < t.dim(); ++n) rows[m][n] = t(m, n);
    }
    return rows;
}

std::string json_text(nlohmann::json const& j) { return io::dump(j); }

} // namespace

PYBIND11_MODULE(_photocount, m) {
    m.doc() = "Bernoulli transform, its inverse and stability analysis for photocount statistics";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (Error const& e) {
            py::object code = py::str(std::string(to_string(e.code())));
            PyErr_SetObject(error.ptr(), py::make_tuple(code, e.what()).ptr());
        }
    });

    py::enum_<Origin>(m, "Origin")
        .value("analytic", Origin::analytic)
        .value("empirical", Origin::empirical)
        .value("user", Origin::user);

    py::enum_<NormalizationPolicy>(m, "NormalizationPolicy")
        .value("strict", NormalizationPolicy::strict)
        .value("renormalize", NormalizationPolicy::renormalize);

    py::enum_<Verdict>(m, "Verdict")
        .value("stable", Verdict::stable)
        .value("unstable", Verdict::unstable)
        .value("undetermined", Verdict::undetermined);

    py::class_<Pmf>(m, "Pmf")
        .def(py::init<std::vector<double>, double, Origin>(), py::arg("probs"),
             py::arg("tail_mass") = 0.0, py::arg("origin") = Origin::user)
        .def_property_readonly("probs", &Pmf::values)
        .def_property_readonly("tail_mass", &Pmf::tail_mass)
        .def_property_readonly("origin", &Pmf::origin)
        .def("mean", &Pmf::mean)
        .def("__len__", &Pmf::size)
        .def("__getitem__", [](Pmf const& p, std::size_t i) {
            if (i >= p.size()) throw py::index_error();
            return p[i];
        })
        .def("to_json", [](Pmf const& p) { return json_text(io::to_json(p)); })
        .def("__eq__", [](Pmf const& a, Pmf const& b) { return a == b; })
        .def("__repr__", [](Pmf const& p) {
            return "Pmf(len=" + std::to_string(p.size()) + ", tail_mass=" +
                   io::format_double(p.tail_mass()) + ")";
        });

    py::class_<PoissonParams>(m, "PoissonParams")
        .def(py::init<double>(), py::arg("mean"))
        .def_readonly("mean", &PoissonParams::mean);
    py::class_<CompoundPoissonParams>(m, "CompoundPoissonParams")
        .def(py::init<double, double>(), py::arg("mean"), py::arg("clusterization"))
        .def_readonly("mean", &CompoundPoissonParams::mean)
        .def_readonly("clusterization", &CompoundPoissonParams::clusterization);

    m.def("poisson_pmf",
          [](double mean, double eps) { return poisson_pmf({mean}, eps); },
          py::arg("mean"), py::arg("epsilon_tail") = default_epsilon_tail);
    m.def("compound_poisson_pmf",
          [](double mean, double a, double eps) { return compound_poisson_pmf({mean, a}, eps); },
          py::arg("mean"), py::arg("a"), py::arg("epsilon_tail") = default_epsilon_tail);
    m.def("pmf_from_values",
          [](std::vector<double> const& v, NormalizationPolicy policy) {
              return pmf_from_values(v, policy);
          },
          py::arg("values"), py::arg("policy") = NormalizationPolicy::strict);

    py::class_<TransformSpec>(m, "TransformSpec")
        .def(py::init<double, std::size_t>(), py::arg("eta"), py::arg("dim"))
        .def_property_readonly("eta", &TransformSpec::eta)
        .def_property_readonly("dim", &TransformSpec::dim);

    py::class_<SignedDistribution>(m, "SignedDistribution")
        .def_readonly("values", &SignedDistribution::values)
        .def_readonly("converged", &SignedDistribution::converged)
        .def_readonly("max_term_magnitude", &SignedDistribution::max_term_magnitude)
        .def("__len__", &SignedDistribution::size)
        .def("to_json", [](SignedDistribution const& d) { return json_text(io::to_json(d)); });

    m.def("build_matrix", [](double eta, std::size_t dim) {
        return matrix_rows(build_matrix(TransformSpec(eta, dim)));
    }, py::arg("eta"), py::arg("dim"), "Rows m, columns n of the loss matrix.");
    m.def("forward", [](Pmf const& p, double eta, std::optional<std::size_t> dim) {
        return forward(p, TransformSpec(eta, dim.value_or(p.size())));
    }, py::arg("p"), py::arg("eta"), py::arg("dim") = py::none());
    m.def("inverse", [](std::vector<double> const& q, double eta, std::optional<std::size_t> dim,
                        bool extended_precision) {
        TransformSpec const spec(eta, dim.value_or(q.size()));
        return extended_precision ? extended::inverse_rounded(q, spec) : inverse(q, spec);
    }, py::arg("q"), py::arg("eta"), py::arg("dim") = py::none(),
          py::arg("extended_precision") = false);
    m.def("inverse_via_solve", [](std::vector<double> const& q, double eta) {
        return inverse_via_solve(q, TransformSpec(eta, q.size()));
    }, py::arg("q"), py::arg("eta"));
    m.def("inverse_sum_extended", [](std::vector<double> const& q, double eta) {
        TransformSpec const spec(eta, q.size());
        return extended::inverse(extended::ExtendedVector(q, extended::working_precision(spec)), spec)
            .sum();
    }, py::arg("q"), py::arg("eta"), "Sum of the inverse evaluated and accumulated in MPFR.");
    m.def("round_trip_error_extended", [](std::vector<double> const& p, double eta) {
        TransformSpec const spec(eta, p.size());
        extended::ExtendedVector const x(p, extended::working_precision(spec));
        return extended::inverse(extended::forward(x, spec), spec).max_abs_difference(p);
    }, py::arg("p"), py::arg("eta"));

    py::class_<SeriesTerm>(m, "SeriesTerm")
        .def_readonly("n", &SeriesTerm::n)
        .def_readonly("m", &SeriesTerm::m)
        .def_readonly("magnitude", &SeriesTerm::magnitude)
        .def_readonly("factor1", &SeriesTerm::factor1)
        .def_readonly("factor2", &SeriesTerm::factor2);

    py::class_<StabilityRecord>(m, "StabilityRecord")
        .def_readonly("n", &StabilityRecord::n)
        .def_readonly("M_n", &StabilityRecord::M_n)
        .def_readonly("satisfied", &StabilityRecord::satisfied)
        .def_readonly("analytic_M_n", &StabilityRecord::analytic_M_n);

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("eta", &StabilityReport::eta)
        .def_readonly("per_n", &StabilityReport::per_n)
        .def_readonly("xi", &StabilityReport::xi)
        .def_readonly("eta_cr", &StabilityReport::eta_cr)
        .def_readonly("verdict", &StabilityReport::verdict)
        .def("to_json", [](StabilityReport const& r) { return json_text(io::to_json(r)); });

    m.def("series_term", &series_term, py::arg("q"), py::arg("eta"), py::arg("n"), py::arg("m"));
    m.def("criterion_holds", &criterion_holds, py::arg("q"), py::arg("eta"), py::arg("n"),
          py::arg("m"));
    m.def("find_Mn_empirical", &find_Mn_empirical, py::arg("q"), py::arg("eta"), py::arg("n"));
    m.def("poisson_Mn", [](double mean, double eta, std::size_t n) {
        return poisson_Mn({mean}, eta, n);
    }, py::arg("mean"), py::arg("eta"), py::arg("n"));
    m.def("compound_poisson_Mn", [](double mean, double a, double eta, std::size_t n) {
        return compound_poisson_Mn({mean, a}, eta, n);
    }, py::arg("mean"), py::arg("a"), py::arg("eta"), py::arg("n"));
    m.def("compound_poisson_xi", [](double mean, double a, double eta) {
        return compound_poisson_xi({mean, a}, eta);
    }, py::arg("mean"), py::arg("a"), py::arg("eta"));
    m.def("eta_critical", [](double mean, double a) { return eta_critical({mean, a}); },
          py::arg("mean"), py::arg("a"));
    m.def("analyze",
          [](Pmf const& q, double eta, std::optional<std::size_t> n_max,
             std::optional<PoissonParams> poisson, std::optional<CompoundPoissonParams> compound) {
              std::optional<FamilyHint> hint;
              if (poisson && compound) throw py::value_error("give at most one family hint");
              if (poisson) hint = *poisson;
              if (compound) hint = *compound;
              return analyze(q, eta, n_max, hint);
          },
          py::arg("q"), py::arg("eta"), py::arg("n_max") = py::none(), py::kw_only(),
          py::arg("poisson") = py::none(), py::arg("compound_poisson") = py::none());

    py::class_<SimplexViolation>(m, "SimplexViolation")
        .def_readonly("index", &SimplexViolation::index)
        .def_readonly("value", &SimplexViolation::value);
    py::class_<SimplexCheck>(m, "SimplexCheck")
        .def_readonly("inside", &SimplexCheck::inside)
        .def_readonly("barycentric", &SimplexCheck::barycentric)
        .def_readonly("violations", &SimplexCheck::violations)
        .def("to_json", [](SimplexCheck const& c) { return json_text(io::to_json(c)); });

    m.attr("geometric_tolerance") = geometric_tolerance;
    m.def("vertices", [](double eta, std::size_t dim) { return vertices(TransformSpec(eta, dim)); },
          py::arg("eta"), py::arg("dim"));
    m.def("contains", [](std::vector<double> const& q, double eta) {
        return contains(q, TransformSpec(eta, q.size()));
    }, py::arg("q"), py::arg("eta"));
    m.def("contraction_ratio", [](double eta, std::size_t dim) {
        return contraction_ratio(TransformSpec(eta, dim));
    }, py::arg("eta"), py::arg("dim"));

    py::class_<SimulationRun>(m, "SimulationRun")
        .def_readonly("seed", &SimulationRun::seed)
        .def_readonly("samples", &SimulationRun::samples)
        .def_readonly("eta", &SimulationRun::eta)
        .def_readonly("counts", &SimulationRun::counts)
        .def_readonly("empirical_q", &SimulationRun::empirical_q)
        .def_readonly("l1_to_analytic", &SimulationRun::l1_to_analytic)
        .def("to_json", [](SimulationRun const& r) { return json_text(io::to_json(r)); });

    m.def("simulate",
          [](Pmf const& p, double eta, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
              py::gil_scoped_release release;
              return simulate(p, eta, samples, seed, SimulationOptions{threads});
          },
          py::arg("p"), py::arg("eta"), py::arg("samples"), py::arg("seed") = 0,
          py::arg("threads") = 0);
    m.def("reconstruction_error",
          [](Pmf const& p_true, SimulationRun const& run, std::optional<std::size_t> dim) {
              return reconstruction_error(p_true, run,
                                          TransformSpec(run.eta, dim.value_or(p_true.size())));
          },
          py::arg("p_true"), py::arg("run"), py::arg("dim") = py::none());
}
