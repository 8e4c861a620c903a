#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "capstone/bergman_p1.hpp"
#include "capstone/bergman_p2.hpp"
#include "capstone/cauchy.hpp"
#include "capstone/cli.hpp"
#include "capstone/json_io.hpp"
#include "capstone/potential.hpp"

namespace py = pybind11;
using namespace capstone;
using json_io::Json;

namespace {

py::object to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(to_py(e));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

// Accepts a CompactSet or its JSON encoding as a dict.
geometry::CompactSet as_set(const py::object& o) {
    if (py::isinstance<geometry::CompactSet>(o)) return o.cast<geometry::CompactSet>();
    const auto text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
    return json_io::compact_set_from(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_capstone, m) {
    m.doc() = "Logarithmic capacity, Cauchy transforms and weighted Bergman space dimensions";
    m.attr("__version__") = cli::kVersion;

    // Later registrations are tried first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<geometry::CompactSet>(m, "CompactSet")
        .def_static("disc", &geometry::CompactSet::disc, py::arg("center"), py::arg("radius"))
        .def_static("segment", &geometry::CompactSet::segment, py::arg("a"), py::arg("b"))
        .def_static("polygon", &geometry::CompactSet::polygon, py::arg("vertices"))
        .def_static("point_set", &geometry::CompactSet::point_set, py::arg("points"))
        .def_static("union_of", &geometry::CompactSet::union_of, py::arg("children"))
        .def("to_dict", [](const geometry::CompactSet& s) { return to_py(json_io::to_json(s)); })
        .def("__repr__", [](const geometry::CompactSet& s) { return json_io::to_json(s).dump(); });

    m.def("area", [](const py::object& s) { return geometry::area(as_set(s)); });
    m.def("diameter", [](const py::object& s) { return geometry::diameter(as_set(s)); });

    m.def(
        "capacity",
        [](const py::object& s, std::size_t n, double tol, std::uint64_t seed) {
            const auto set = as_set(s);
            py::gil_scoped_release nogil;
            return potential::capacity(set, n, tol, seed);
        },
        py::arg("set"), py::arg("n") = potential::kDefaultN, py::arg("tol") = potential::kDefaultTol,
        py::arg("seed") = 0);
    m.def(
        "equilibrium",
        [](const py::object& s, std::size_t n, double tol, std::uint64_t seed) {
            const auto set = as_set(s);
            potential::EquilibriumSolution sol;
            {
                py::gil_scoped_release nogil;
                sol = potential::solve_equilibrium(set, n, tol, seed);
            }
            py::dict out;
            out["support"] = sol.measure.support;
            out["weights"] = sol.measure.weights;
            out["energy"] = sol.energy;
            out["capacity"] = std::exp(sol.energy);
            out["gap"] = sol.gap;
            out["iterations"] = sol.iterations;
            return out;
        },
        py::arg("set"), py::arg("n") = potential::kDefaultN, py::arg("tol") = potential::kDefaultTol,
        py::arg("seed") = 0);
    m.def(
        "fekete_diameter",
        [](const py::object& s, std::size_t n, std::uint64_t seed) { return potential::fekete_diameter(as_set(s), n, seed); },
        py::arg("set"), py::arg("n"), py::arg("seed") = 0);
    m.def(
        "classify_polarity",
        [](const py::object& s, double threshold, std::uint64_t seed) {
            potential::PolarityOptions o;
            o.threshold = threshold;
            o.seed = seed;
            return to_py(json_io::to_json(potential::classify_polarity(as_set(s), o)));
        },
        py::arg("set"), py::arg("threshold") = 1e-6, py::arg("seed") = 0);

    m.def(
        "wiegerinck_sequence",
        [](const py::object& e1, const py::object& e2, std::size_t count, int k, std::uint64_t seed, std::size_t n) {
            cauchy::SequenceOptions o;
            o.n = n;
            py::list out;
            for (const auto& f : cauchy::wiegerinck_sequence(as_set(e1), as_set(e2), count, k, seed, o))
                out.append(to_py(json_io::to_json(f)));
            return out;
        },
        py::arg("e1"), py::arg("e2"), py::arg("count") = 5, py::arg("k") = -3, py::arg("seed") = 0,
        py::arg("n") = potential::kDefaultN);

    m.def("dim_global_sections", &bergman_p1::dim_global_sections, py::arg("k"));
    m.def(
        "riesz_mass_log_weight", [](int k) { return to_py(json_io::to_json(bergman_p1::riesz_mass(bergman_p1::log_weight_field(k)))); },
        py::arg("k"));
    m.def(
        "bly_dimension",
        [](double mass) { return to_py(json_io::to_json(bergman_p1::bly_dimension(mass))); }, py::arg("mass"));
    m.def(
        "dimension_report",
        [](int k, const py::object& K, std::uint64_t seed) {
            potential::PolarityOptions o;
            o.seed = seed;
            return to_py(json_io::to_json(bergman_p1::dimension_report(k, as_set(K), std::nullopt, o)));
        },
        py::arg("k"), py::arg("K"), py::arg("seed") = 0);
    m.def(
        "witness",
        [](const py::object& G, double eps, std::size_t n, std::uint64_t seed, std::size_t probes) {
            const auto w = bergman_p1::witness_psi_star(as_set(G), eps, n, seed);
            return to_py(json_io::to_json(bergman_p1::verify_witness_bounds(w, w.R, probes, seed)));
        },
        py::arg("G"), py::arg("eps") = 0.01, py::arg("n") = potential::kDefaultN, py::arg("seed") = 0,
        py::arg("probes") = 10000);

    using bergman_p2::RegionSpec;
    py::class_<RegionSpec>(m, "RegionSpec")
        .def_static("b", &RegionSpec::b)
        .def_static("x", &RegionSpec::x, py::arg("l"))
        .def_static("y", &RegionSpec::y)
        .def_static("z", &RegionSpec::z, py::arg("m"))
        .def_static("union_of", &RegionSpec::union_of, py::arg("parts"))
        .def("__repr__", [](const RegionSpec& r) { return bergman_p2::to_string(r); });
    m.def("region_contains", [](const RegionSpec& r, Complex z, Complex w) { return bergman_p2::region_contains(r, {z, w}); },
          py::arg("region"), py::arg("z"), py::arg("w"));
    m.def("monomial_predicate",
          [](const RegionSpec& r, int p, int q, int k) { return bergman_p2::monomial_predicate(r, {p, q}, k); },
          py::arg("region"), py::arg("p"), py::arg("q"), py::arg("k"));
    m.def(
        "monomial_norm_estimate",
        [](const RegionSpec& r, int p, int q, int k) {
            return to_py(json_io::to_json(bergman_p2::monomial_norm_estimate(r, {p, q}, k)));
        },
        py::arg("region"), py::arg("p"), py::arg("q"), py::arg("k"));
    m.def("omega_k_spec", &bergman_p2::omega_k_spec, py::arg("k"));
    m.def(
        "omega_k_monomial_basis",
        [](int k, std::optional<int> p_max) {
            std::vector<std::pair<int, int>> out;
            for (const auto& i : bergman_p2::omega_k_monomial_basis(k, p_max.value_or(bergman_p2::default_p_max(k))))
                out.emplace_back(i.p, i.q);
            return out;
        },
        py::arg("k"), py::arg("p_max") = py::none());
    m.def("omega_k_dimension", &bergman_p2::omega_k_dimension, py::arg("k"));
    m.def("dim_global_sections_p2", &bergman_p2::dim_global_sections_p2, py::arg("k"));

    m.def(
        "run_job",
        [](const std::string& config) {
            const auto report = cli::run(cli::parse_config(config));
            auto payload = report.payload();
            payload["exit_code"] = report.exit_code;
            return to_py(payload);
        },
        py::arg("config"), "Runs a JSON job config and returns the report (without timings).");
}
