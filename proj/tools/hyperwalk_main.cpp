#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/flows.hpp>
#include <hyperwalk/harness.hpp>
#include <hyperwalk/hrg.hpp>
#include <hyperwalk/resistance.hpp>
#include <hyperwalk/tiling.hpp>
#include <hyperwalk/walks.hpp>

using namespace hyperwalk;

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

void line(std::string_view key, const std::string& value) { fmt::print("{} = {}\n", key, value); }
void line(std::string_view key, double value) { line(key, num(value)); }
void line(std::string_view key, std::size_t value) { line(key, fmt::format("{}", value)); }
void line(std::string_view key, int value) { line(key, fmt::format("{}", value)); }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument(fmt::format("cannot write '{}'", path));
    }
    out << text;
}

Subgraph center_of(const HrgGraph& g) {
    const auto info = components_and_center(g);
    if (!info.center) {
        throw EmptyGraphError("graph has no center component");
    }
    return component_subgraph(g.graph, info.components, *info.center);
}

// Component of g holding v, with v's local id.
std::pair<Subgraph, VertexId> component_of(const Graph& g, VertexId v) {
    if (v >= g.num_vertices()) {
        throw InvalidArgument(fmt::format("vertex {} out of range", v));
    }
    const auto comps = connected_components(g);
    auto sub = component_subgraph(g, comps, comps.label[v]);
    for (VertexId i = 0; i < sub.to_parent.size(); ++i) {
        if (sub.to_parent[i] == v) {
            return {std::move(sub), i};
        }
    }
    throw InternalError("component_of: vertex missing from its component");
}

double tiling_c(const ModelParams& params, const std::string& spec) {
    if (spec == "auto") {
        return Tiling::calibrate_c(params);
    }
    return std::stod(spec);
}

void print_walk(std::string_view what, const WalkStats& s) {
    line("quantity", std::string(what));
    line("mean", s.mean);
    line("stderr", s.stderr_mean);
    line("repetitions", s.repetitions);
}

const char* const kConfigKeys[] = {
    "alpha",          "nu",          "n_values",       "seeds_per_n",    "seed",
    "quantities",     "mc_reps",     "max_steps",      "resist_pairs",   "resist_cap",
    "target_samples", "hit_candidates", "hit_exact_limit", "flow_pairs", "dangling_min_length",
    "C",              "Cprime",      "c",              "workers",        "timing",
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic random graphs: sampling, resistances, flows and random walks"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Sample a hyperbolic random graph");
    double alpha = 0.7;
    double nu = 1.0;
    double n = 1000;
    std::uint64_t seed = 0;
    std::size_t binomial = 0;
    std::string out;
    sample->add_option("--alpha", alpha, "Radial density exponent, in (1/2, 1)")->capture_default_str();
    sample->add_option("--nu", nu, "Density constant")->capture_default_str();
    sample->add_option("--n", n, "Intensity scale")->required();
    sample->add_option("--seed", seed)->capture_default_str();
    sample->add_option("--binomial", binomial, "Place exactly this many points instead of Poisson(n)");
    sample->add_option("--out", out, "Output JSON path ('-' for stdout)")->required();

    // graph stats
    auto* graph_cmd = app.add_subcommand("graph", "Graph inspection");
    graph_cmd->require_subcommand(1);
    auto* stats = graph_cmd->add_subcommand("stats", "Degrees, components and center size");
    std::string graph_path;
    stats->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);

    // tiling
    auto* tiling_cmd = app.add_subcommand("tiling", "Build the tiling and classify its tiles");
    std::string c_spec = "auto";
    bool classify = false;
    double C = kDefaultC;
    double Cprime = kDefaultCprime;
    tiling_cmd->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    tiling_cmd->add_option("--c", c_spec, "Tiling constant, or auto to calibrate")->capture_default_str();
    tiling_cmd->add_flag("--classify", classify, "Report sparse/faulty/robust tiles");
    tiling_cmd->add_option("--C", C)->capture_default_str();
    tiling_cmd->add_option("--Cprime", Cprime)->capture_default_str();

    // resist
    auto* resist = app.add_subcommand("resist", "Effective resistances on the center component");
    std::size_t pairs = 0;
    bool exact_matrix = false;
    bool cut = false;
    double apex_r = 0;
    double apex_theta = 0;
    double omega = std::nan("");
    resist->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    auto* pairs_opt = resist->add_option("--pairs", pairs, "Sampled pairs for the average resistance");
    auto* matrix_opt = resist->add_flag("--exact-matrix", exact_matrix, "All-pairs matrix as CSV");
    auto* cut_opt = resist->add_flag("--cut", cut, "Sector cut and its Nash-Williams bound");
    pairs_opt->excludes(matrix_opt)->excludes(cut_opt);
    matrix_opt->excludes(cut_opt);
    resist->add_option("--apex-r", apex_r, "Radius of the cut apex");
    resist->add_option("--apex-theta", apex_theta, "Angle of the cut apex")->capture_default_str();
    resist->add_option("--omega", omega, "Cut angle parameter (default ln ln n)");
    resist->add_option("--seed", seed)->capture_default_str();
    resist->add_option("--out", out, "Output path for --exact-matrix");

    // flow
    auto* flow_cmd = app.add_subcommand("flow", "Build, validate and measure a unit flow");
    VertexId s = 0;
    VertexId t = 0;
    bool commute = false;
    double r = 0;
    double theta = 0;
    flow_cmd->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    auto* s_opt = flow_cmd->add_option("--s", s, "Source vertex");
    auto* t_opt = flow_cmd->add_option("--t", t, "Target vertex");
    auto* commute_opt = flow_cmd->add_flag("--commute", commute, "Flow from an added vertex at (r, theta)");
    flow_cmd->add_option("--r", r, "Radius of the added vertex");
    flow_cmd->add_option("--theta", theta, "Angle of the added vertex")->capture_default_str();
    flow_cmd->add_option("--c", c_spec, "Tiling constant, or auto")->capture_default_str();
    flow_cmd->add_option("--C", C)->capture_default_str();
    flow_cmd->add_option("--Cprime", Cprime)->capture_default_str();
    flow_cmd->add_option("--out", out, "Write edge values as CSV");
    commute_opt->excludes(s_opt)->excludes(t_opt);

    // walk
    auto* walk = app.add_subcommand("walk", "Monte Carlo random walks");
    std::vector<VertexId> hit_pair;
    std::vector<VertexId> commute_pair;
    bool cover = false;
    VertexId start = 0;
    std::size_t reps = 1000;
    std::uint64_t max_steps = 1'000'000'000;
    std::size_t workers = 1;
    walk->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    auto* hit_opt = walk->add_option("--hit", hit_pair, "Hitting time from u to v")->expected(2);
    auto* cover_opt = walk->add_flag("--cover", cover, "Cover time of the component of --start");
    auto* cpair_opt = walk->add_option("--commute", commute_pair, "Commute time between u and v")->expected(2);
    hit_opt->excludes(cover_opt)->excludes(cpair_opt);
    cover_opt->excludes(cpair_opt);
    walk->add_option("--start", start, "Start vertex for --cover")->capture_default_str();
    walk->add_option("--reps", reps)->capture_default_str();
    walk->add_option("--seed", seed)->capture_default_str();
    walk->add_option("--max-steps", max_steps)->capture_default_str();
    walk->add_option("--workers", workers, "0: HYPERWALK_THREADS or all cores")->capture_default_str();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a scaling sweep and write CSV");
    std::string config_path;
    experiment->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    experiment->add_option("--out", out, "CSV output path ('-' for stdout)");
    std::vector<std::string> overrides(std::size(kConfigKeys));
    std::vector<CLI::Option*> override_opts;
    for (std::size_t i = 0; i < std::size(kConfigKeys); ++i) {
        override_opts.push_back(experiment->add_option(fmt::format("--{}", kConfigKeys[i]), overrides[i],
                                                       "Overrides the config file"));
    }

    // fit
    auto* fit = app.add_subcommand("fit", "Scaling-law fit over experiment rows");
    std::string csv_path;
    std::string quantity;
    std::string model = "n";
    std::string size_column = "n";
    fit->add_option("--csv", csv_path)->required()->check(CLI::ExistingFile);
    fit->add_option("--quantity", quantity, "CSV column, e.g. ttarget")->required();
    fit->add_option("--model", model, "one, n, nlogn, nlog2n or n2")->capture_default_str();
    fit->add_option("--size", size_column, "n or Vc")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) {
            const ModelParams params(alpha, nu, n);
            const auto mode = binomial > 0 ? SampleMode::binomial(binomial) : SampleMode::poissonized();
            write_text(out, to_json(sample_graph(params, mode, seed)));
        } else if (stats->parsed()) {
            const auto g = read_json_file(graph_path);
            const auto info = components_and_center(g);
            const auto deg = degree_summary(g.graph);
            line("vertices", g.num_vertices());
            line("edges", g.edge_count());
            line("mean_degree", deg.mean);
            line("expected_mean_degree", g.params.expected_mean_degree());
            line("tail_exponent", deg.tail_exponent);
            line("components", info.components.count());
            if (info.center) {
                const auto sub = component_subgraph(g.graph, info.components, *info.center);
                line("center_vertices", sub.graph.num_vertices());
                line("center_edges", sub.graph.num_edges());
            } else {
                line("center_vertices", std::size_t{0});
            }
            for (const auto& bin : deg.histogram) {
                fmt::print("degree[{},{}) = {}\n", bin.lo, bin.hi, bin.count);
            }
        } else if (tiling_cmd->parsed()) {
            const auto g = read_json_file(graph_path);
            const auto tiling = Tiling::build(g.params, tiling_c(g.params, c_spec));
            const auto report = tiling.validate_spacing();
            line("c", tiling.c());
            line("levels", tiling.top() + 1);
            line("n0", static_cast<std::size_t>(tiling.n0()));
            line("spacing_ok", std::string(report.spacing_ok ? "true" : "false"));
            for (int i = -1; i <= tiling.top(); ++i) {
                fmt::print("h[{}] = {}\n", i, num(tiling.h(i)));
            }
            if (classify) {
                const TileMembership members(g, tiling);
                const OccupancyReport occ(members, tiling, C, Cprime);
                fmt::print("{}\n", occ.to_json());
            }
        } else if (resist->parsed()) {
            const auto g = read_json_file(graph_path);
            if (cut) {
                if (!(apex_r > 0)) {
                    throw InvalidArgument("--cut needs --apex-r");
                }
                const double w = std::isnan(omega) ? default_omega(g.params) : omega;
                const double phi = phi_r(apex_r, g.params, w);
                const auto spec = sector_cut(g, PolarPoint(apex_r, apex_theta), phi);
                line("omega", w);
                line("phi", phi);
                line("cut_edges", spec.edges.size());
                line("nash_williams_lower", nash_williams_lower(spec));
            } else if (exact_matrix) {
                const auto sub = center_of(g);
                const auto R = resistance_matrix(sub.graph);
                std::string text;
                for (Eigen::Index i = 0; i < R.rows(); ++i) {
                    for (Eigen::Index j = 0; j < R.cols(); ++j) {
                        text += (j ? "," : "") + num(R(i, j));
                    }
                    text += '\n';
                }
                write_text(out, text);
            } else {
                const auto sub = center_of(g);
                KirchhoffOptions ko;
                ko.pairs = pairs > 0 ? pairs : ko.pairs;
                ko.seed = seed;
                if (pairs > 0) {
                    ko.cap = 0;  // force sampling when pairs were asked for
                }
                const auto k = kirchhoff_and_average(sub.graph, ko);
                line("center_vertices", sub.graph.num_vertices());
                line("kirchhoff", k.kirchhoff);
                line("average", k.average);
                line("average_ci", k.average_ci);
                line("exact", std::string(k.exact ? "true" : "false"));
                line("pairs", k.pairs);
            }
        } else if (flow_cmd->parsed()) {
            const auto g = read_json_file(graph_path);
            const auto tiling = Tiling::build(g.params, tiling_c(g.params, c_spec));
            const TileMembership members(g, tiling);
            if (commute) {
                CommuteOptions co;
                co.C = C;
                co.Cprime = Cprime;
                const auto cf = commute_flow(g, tiling, members, PolarPoint(r, theta), co);
                const auto rep = validate_flow(cf.flow);
                line("w", static_cast<std::size_t>(cf.w));
                line("ell", cf.levels.ell);
                line("ell_w", cf.levels.ell_w);
                line("ell_prime_w", cf.levels.ell_prime_w);
                line("k_w", cf.levels.k_w);
                line("strength", rep.strength);
                line("max_node_residual", rep.max_node_residual);
                line("energy", rep.energy);
                if (!out.empty()) {
                    write_text(out, cf.flow.to_csv());
                }
            } else {
                if (s_opt->count() == 0 || t_opt->count() == 0) {
                    throw InvalidArgument("flow needs --s and --t, or --commute");
                }
                const auto f = st_flow(g.graph, tiling, members, s, t);
                const auto rep = validate_flow(f);
                line("strength", rep.strength);
                line("max_node_residual", rep.max_node_residual);
                line("balanced", std::string(rep.balanced ? "true" : "false"));
                line("energy", rep.energy);
                line("effective_resistance", effective_resistance(g.graph, s, t));
                if (!out.empty()) {
                    write_text(out, f.to_csv());
                }
            }
        } else if (walk->parsed()) {
            const auto g = read_json_file(graph_path);
            WalkConfig cfg;
            cfg.seed = seed;
            cfg.repetitions = reps;
            cfg.max_steps = max_steps;
            cfg.workers = workers;
            if (!hit_pair.empty()) {
                print_walk("hitting", simulate_hitting(g.graph, hit_pair[0], hit_pair[1], cfg));
            } else if (!commute_pair.empty()) {
                print_walk("commute", simulate_commute(g.graph, commute_pair[0], commute_pair[1], cfg));
            } else if (cover) {
                const auto [sub, local] = component_of(g.graph, start);
                print_walk("cover", simulate_cover(sub.graph, local, cfg));
            } else {
                throw InvalidArgument("walk needs --hit, --cover or --commute");
            }
        } else if (experiment->parsed()) {
            ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : read_config_file(config_path);
            for (std::size_t i = 0; i < override_opts.size(); ++i) {
                if (override_opts[i]->count() > 0) {
                    apply_setting(cfg, kConfigKeys[i], overrides[i]);
                }
            }
            const std::string target = out.empty() ? cfg.output : out;
            cfg.output.clear();
            const auto rows = run_experiment(cfg);
            write_text(target, to_csv(rows));
        } else if (fit->parsed()) {
            const auto rows = read_csv_file(csv_path);
            const auto f = fit_scaling(rows, quantity, parse_model(model), size_column);
            for (std::size_t i = 0; i < f.sizes.size(); ++i) {
                fmt::print("ratio[{}] = {}\n", num(f.sizes[i]), num(f.ratios[i]));
            }
            line("band", f.band);
            line("exponent", f.exponent);
            line("exponent_stderr", f.exponent_stderr);
            line("points", f.points);
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
