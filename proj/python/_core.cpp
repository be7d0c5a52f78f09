#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/flows.hpp>
#include <hyperwalk/geometry.hpp>
#include <hyperwalk/graph.hpp>
#include <hyperwalk/harness.hpp>
#include <hyperwalk/hrg.hpp>
#include <hyperwalk/resistance.hpp>
#include <hyperwalk/tiling.hpp>
#include <hyperwalk/walks.hpp>

namespace py = pybind11;
using namespace hyperwalk;

namespace {

Graph graph_from_edges(std::size_t n, const std::vector<Edge>& edges) { return Graph::from_edges(n, edges); }

WalkConfig walk_config(std::size_t reps, std::uint64_t seed, std::uint64_t max_steps) {
    WalkConfig cfg;
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.max_steps = max_steps;
    return cfg;
}

py::dict stats_dict(const WalkStats& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["stderr"] = s.stderr_mean;
    d["repetitions"] = s.repetitions;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hyperbolic random graphs, effective resistances, unit flows and random walks.";

    py::register_exception<StepCapExceeded>(m, "StepCapExceeded", PyExc_RuntimeError);
    py::register_exception<SizeCapExceeded>(m, "SizeCapExceeded", PyExc_RuntimeError);
    py::register_exception<DisconnectedPair>(m, "DisconnectedPair", PyExc_RuntimeError);
    py::register_exception<EmptyHalfTile>(m, "EmptyHalfTile", PyExc_RuntimeError);
    py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("nu"), py::arg("n"))
        .def_property_readonly("alpha", &ModelParams::alpha)
        .def_property_readonly("nu", &ModelParams::nu)
        .def_property_readonly("n", &ModelParams::n)
        .def_property_readonly("R", &ModelParams::R)
        .def("expected_mean_degree", &ModelParams::expected_mean_degree);

    py::class_<PolarPoint>(m, "PolarPoint")
        .def(py::init<double, double>(), py::arg("r"), py::arg("theta"))
        .def_property_readonly("r", &PolarPoint::r)
        .def_property_readonly("theta", &PolarPoint::theta)
        .def("__repr__", [](const PolarPoint& p) {
            return "PolarPoint(" + std::to_string(p.r()) + ", " + std::to_string(p.theta()) + ")";
        });
    m.def("hyperbolic_distance", &hyperbolic_distance, py::arg("p"), py::arg("q"));

    py::class_<Graph>(m, "Graph")
        .def(py::init(&graph_from_edges), py::arg("num_vertices"), py::arg("edges"))
        .def_property_readonly("num_vertices", &Graph::num_vertices)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def("degree", &Graph::degree, py::arg("v"))
        .def("neighbors",
             [](const Graph& g, VertexId v) {
                 const auto nb = g.neighbors(v);
                 return std::vector<VertexId>(nb.begin(), nb.end());
             },
             py::arg("v"))
        .def("has_edge", &Graph::has_edge)
        .def("edges", &Graph::edge_list);
    m.def("complete_graph", &complete_graph);
    m.def("path_graph", &path_graph);
    m.def("cycle_graph", &cycle_graph);
    m.def("star_graph", &star_graph, py::arg("leaves"));
    m.def("is_connected", &is_connected);

    py::class_<HrgGraph>(m, "HrgGraph")
        .def_readonly("params", &HrgGraph::params)
        .def_readonly("points", &HrgGraph::points)
        .def_readonly("graph", &HrgGraph::graph)
        .def_property_readonly("num_vertices", &HrgGraph::num_vertices)
        .def("to_json", [](const HrgGraph& g) { return to_json(g); })
        .def_static("from_json", [](const std::string& s) { return from_json(s); });

    m.def(
        "sample_graph",
        [](double alpha, double nu, double n, std::uint64_t seed, std::optional<std::size_t> count) {
            const auto mode = count ? SampleMode::binomial(*count) : SampleMode::poissonized();
            return sample_graph(ModelParams(alpha, nu, n), mode, seed);
        },
        py::arg("alpha"), py::arg("nu"), py::arg("n"), py::arg("seed") = 0, py::arg("count") = py::none());
    m.def(
        "center_vertices",
        [](const HrgGraph& g) {
            const auto info = components_and_center(g);
            std::vector<VertexId> out;
            if (info.center) {
                out = component_subgraph(g.graph, info.components, *info.center).to_parent;
            }
            return out;
        },
        "Vertex ids of the center component (empty when there is none).");
    m.def(
        "center_graph",
        [](const HrgGraph& g) {
            const auto info = components_and_center(g);
            if (!info.center) {
                throw EmptyGraphError("graph has no center component");
            }
            return component_subgraph(g.graph, info.components, *info.center).graph;
        },
        "The center component with local ids 0..k-1, ordered like center_vertices.");

    m.def("effective_resistance",
          [](const Graph& g, VertexId u, VertexId v) { return effective_resistance(g, u, v); });
    m.def(
        "resistance_matrix", [](const Graph& g, std::size_t cap) { return resistance_matrix(g, cap); },
        py::arg("graph"), py::arg("cap") = kDefaultResistanceCap);
    m.def(
        "kirchhoff",
        [](const Graph& g, std::size_t pairs, std::uint64_t seed, std::size_t cap) {
            KirchhoffOptions ko;
            ko.pairs = pairs;
            ko.seed = seed;
            ko.cap = cap;
            const auto r = kirchhoff_and_average(g, ko);
            py::dict d;
            d["kirchhoff"] = r.kirchhoff;
            d["average"] = r.average;
            d["average_ci"] = r.average_ci;
            d["exact"] = r.exact;
            d["pairs"] = r.pairs;
            return d;
        },
        py::arg("graph"), py::arg("pairs") = 1000, py::arg("seed") = 0, py::arg("cap") = kDefaultResistanceCap);

    m.def(
        "st_flow",
        [](const HrgGraph& g, VertexId s, VertexId t, std::optional<double> c) {
            const auto tiling = Tiling::build(g.params, c ? *c : Tiling::calibrate_c(g.params));
            const TileMembership members(g, tiling);
            const auto f = st_flow(g.graph, tiling, members, s, t);
            const auto rep = validate_flow(f);
            py::dict d;
            d["strength"] = rep.strength;
            d["max_node_residual"] = rep.max_node_residual;
            d["energy"] = rep.energy;
            d["balanced"] = rep.balanced;
            d["edges"] = f.entries();
            return d;
        },
        py::arg("graph"), py::arg("s"), py::arg("t"), py::arg("c") = py::none(),
        "Builds the unit st-flow along the tiling and reports its validation.");

    m.def("stationary", &stationary);
    m.def(
        "simulate_hitting",
        [](const Graph& g, VertexId u, VertexId v, std::size_t reps, std::uint64_t seed, std::uint64_t max_steps) {
            return stats_dict(simulate_hitting(g, u, v, walk_config(reps, seed, max_steps)));
        },
        py::arg("graph"), py::arg("u"), py::arg("v"), py::arg("reps") = 1000, py::arg("seed") = 0,
        py::arg("max_steps") = 1'000'000'000ULL);
    m.def(
        "simulate_cover",
        [](const Graph& g, VertexId start, std::size_t reps, std::uint64_t seed, std::uint64_t max_steps) {
            return stats_dict(simulate_cover(g, start, walk_config(reps, seed, max_steps)));
        },
        py::arg("graph"), py::arg("start"), py::arg("reps") = 1000, py::arg("seed") = 0,
        py::arg("max_steps") = 1'000'000'000ULL);
    m.def(
        "simulate_commute",
        [](const Graph& g, VertexId u, VertexId v, std::size_t reps, std::uint64_t seed, std::uint64_t max_steps) {
            return stats_dict(simulate_commute(g, u, v, walk_config(reps, seed, max_steps)));
        },
        py::arg("graph"), py::arg("u"), py::arg("v"), py::arg("reps") = 1000, py::arg("seed") = 0,
        py::arg("max_steps") = 1'000'000'000ULL);
    m.def(
        "exact_hitting_vector", [](const Graph& g, VertexId v) { return exact_hitting_vector(g, v); },
        py::arg("graph"), py::arg("target"));
    m.def(
        "target_time",
        [](const Graph& g, bool exact, std::size_t samples, std::uint64_t seed) {
            TargetTimeOptions to;
            to.method = exact ? TargetMethod::exact : TargetMethod::sampled;
            to.samples = samples;
            to.seed = seed;
            const auto r = target_time(g, to);
            return py::make_tuple(r.value, r.ci);
        },
        py::arg("graph"), py::arg("exact") = false, py::arg("samples") = 200, py::arg("seed") = 0,
        "Returns (value, 95% half-width); the half-width is 0 in exact mode.");
    m.def(
        "target_time_resistance_form",
        [](const Graph& g, double constant) { return target_time_resistance_form(g, constant); },
        py::arg("graph"), py::arg("constant") = kTargetTimeResistanceConstant);
    m.def(
        "max_hitting_estimate",
        [](const Graph& g, std::size_t exact_limit, std::size_t candidates) {
            MaxHittingOptions mo;
            mo.exact_limit = exact_limit;
            mo.candidates = candidates;
            const auto r = max_hitting_estimate(g, {}, mo);
            py::dict d;
            d["value"] = r.value;
            d["exact"] = r.exact;
            d["source"] = r.source;
            d["target"] = r.target;
            return d;
        },
        py::arg("graph"), py::arg("exact_limit") = 500, py::arg("candidates") = 20);
    m.def("harmonic_number", &harmonic_number);
    m.def("matthews_upper", &matthews_upper, py::arg("t_hit"), py::arg("n"));
    m.def(
        "kklv_lower", [](const Graph& g, const std::vector<VertexId>& U) { return kklv_lower(g, U); },
        py::arg("graph"), py::arg("U"));
    m.def(
        "find_dangling_paths",
        [](const Graph& g, std::size_t min_length) {
            std::vector<std::vector<VertexId>> out;
            for (auto& p : find_dangling_paths(g, min_length)) {
                out.push_back(std::move(p.vertices));
            }
            return out;
        },
        py::arg("graph"), py::arg("min_length") = 1, "Each path is listed from its degree-1 tip inwards.");

    m.def(
        "run_experiment", [](const std::string& config) { return to_csv(run_experiment(parse_config(config))); },
        py::arg("config"), "Runs a key = value config and returns the CSV text.");
    m.def(
        "fit_scaling",
        [](const std::string& csv, const std::string& quantity, const std::string& model, const std::string& size) {
            const auto f = fit_scaling(parse_csv(csv), quantity, parse_model(model), size);
            py::dict d;
            d["sizes"] = f.sizes;
            d["ratios"] = f.ratios;
            d["band"] = f.band;
            d["exponent"] = f.exponent;
            d["exponent_stderr"] = f.exponent_stderr;
            return d;
        },
        py::arg("csv"), py::arg("quantity"), py::arg("model") = "n", py::arg("size") = "n");
}
