#include "strtour/cli.hpp"
#include "strtour/errors.hpp"
#include "strtour/euler_str.hpp"
#include "strtour/generate.hpp"
#include "strtour/graph.hpp"
#include "strtour/oracle.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

namespace py = pybind11;
using namespace strtour;

namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

Graph make_graph(std::uint32_t n, const EdgeList& edges) {
    Graph g;
    g.n = n;
    g.edges.reserve(edges.size());
    for (auto [u, v] : edges) {
        g.edges.push_back({u, v});
    }
    return g;
}

EdgeList edge_list(const Graph& g) {
    EdgeList out;
    out.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        out.emplace_back(e.u, e.v);
    }
    return out;
}

EdgeList steps(const Tour& t) {
    EdgeList out;
    out.reserve(t.size());
    for (const auto& s : t) {
        out.emplace_back(s.tail, s.head);
    }
    return out;
}

Tour to_tour(const EdgeList& steps) {
    Tour t;
    t.reserve(steps.size());
    for (auto [a, b] : steps) {
        t.push_back({a, b});
    }
    return t;
}

std::optional<std::string> reason_of(const EulerVerdict& v) {
    if (v.eulerian) {
        return std::nullopt;
    }
    return std::string(to_string(v.reason));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Euler tours with a bounded-memory multipass stream pipeline.";

    // Module attributes keep these alive; the handles are borrowed.
    static py::handle not_eulerian = py::exception<NotEulerian>(m, "NotEulerian", PyExc_ValueError);
    static py::handle integrity_fault = py::exception<IntegrityFault>(m, "IntegrityFault", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const NotEulerian& e) {
            py::object exc = not_eulerian(e.what());
            exc.attr("reason") = std::string(to_string(e.reason()));
            PyErr_SetObject(not_eulerian.ptr(), exc.ptr());
        } catch (const IntegrityFault& e) {
            PyErr_SetString(integrity_fault.ptr(), e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Graph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("n"), py::arg("edges"))
        .def_readonly("n", &Graph::n)
        .def_property_readonly("m", &Graph::m)
        .def_property_readonly("edges", &edge_list)
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.n) + ", m=" + std::to_string(g.m()) + ")";
        });

    m.def("read_graph", &read_graph_file, py::arg("path"));
    m.def("write_graph", &write_graph_file, py::arg("path"), py::arg("graph"));

    m.def(
        "solve_raw",
        [](const Graph& g, bool fidelity_relabel) {
            SolveOptions opts;
            opts.phase1.fidelity_relabel = fidelity_relabel;
            SolveResult r;
            {
                py::gil_scoped_release release;
                r = solve(g, opts);
            }
            return py::make_tuple(steps(r.tour), cli::stats_json(g, r));
        },
        py::arg("graph"), py::arg("fidelity_relabel") = false,
        "Tour steps and the stats document as a JSON string.");

    m.def(
        "is_eulerian", [](const Graph& g) { return reason_of(is_eulerian(g)); }, py::arg("graph"),
        "None when an Euler tour exists, otherwise the reason.");

    m.def(
        "hierholzer",
        [](const Graph& g) -> std::optional<EdgeList> {
            auto t = hierholzer(g);
            if (!t) {
                return std::nullopt;
            }
            return steps(*t);
        },
        py::arg("graph"));

    m.def(
        "validate_tour",
        [](const Graph& g, const EdgeList& tour) -> std::optional<std::string> {
            auto check = validate_tour(g, to_tour(tour));
            if (check.ok) {
                return std::nullopt;
            }
            return check.message();
        },
        py::arg("graph"), py::arg("tour"), "None for a valid tour, otherwise the first failure.");

    m.def("gen_eulerian", &gen_eulerian, py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def(
        "perturb", [](const Graph& g, const std::string& mode, std::uint64_t seed) {
            return perturb(g, parse_perturb_mode(mode), seed);
        },
        py::arg("graph"), py::arg("mode"), py::arg("seed"));
}
