#include <hyperwalk/harness.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/flows.hpp>
#include <hyperwalk/hrg.hpp>
#include <hyperwalk/parallel.hpp>
#include <hyperwalk/resistance.hpp>
#include <hyperwalk/rng.hpp>
#include <hyperwalk/tiling.hpp>
#include <hyperwalk/walks.hpp>

namespace hyperwalk {

namespace {

constexpr std::pair<Quantity, std::string_view> kQuantityNames[] = {
    {Quantity::thit, "thit"},           {Quantity::tcov, "tcov"},
    {Quantity::ttarget, "ttarget"},     {Quantity::kirchhoff, "kirchhoff"},
    {Quantity::avg_resist, "avg_resist"}, {Quantity::flow_energy, "flow_energy"},
    {Quantity::dangling, "dangling"},   {Quantity::degree, "degree"},
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double to_double(std::string_view key, std::string_view v) {
    double x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw InvalidArgument(fmt::format("{}: '{}' is not a number", key, v));
    }
    return x;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw InvalidArgument(fmt::format("{}: '{}' is not a non-negative integer", key, v));
    }
    return x;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "0" || v == "false" || v == "no" || v == "off") {
        return false;
    }
    throw InvalidArgument(fmt::format("{}: '{}' is not a boolean", key, v));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

Quantity parse_quantity(std::string_view name) {
    for (const auto& [q, s] : kQuantityNames) {
        if (s == name) {
            return q;
        }
    }
    throw InvalidArgument(fmt::format("unknown quantity '{}'", name));
}

std::string_view quantity_name(Quantity q) {
    for (const auto& [k, s] : kQuantityNames) {
        if (k == q) {
            return s;
        }
    }
    throw InternalError("quantity_name: unhandled quantity");
}

bool ExperimentConfig::wants(Quantity q) const {
    return std::find(quantities.begin(), quantities.end(), q) != quantities.end();
}

void ExperimentConfig::validate() const {
    if (n_values.empty()) {
        throw InvalidArgument("config: n_values must not be empty");
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!(n_values[i] > 1.0) || (i > 0 && !(n_values[i] > n_values[i - 1]))) {
            throw InvalidArgument("config: n_values must be increasing and above 1");
        }
    }
    if (seeds_per_n < 1) {
        throw InvalidArgument("config: seeds_per_n must be at least 1");
    }
    if (!(alpha > 0.5 && alpha < 1.0) || !(nu > 0.0)) {
        throw InvalidArgument("config: need 1/2 < alpha < 1 and nu > 0");
    }
    if (mc_reps < 1 || max_steps < 1 || target_samples < 2 || resist_pairs < 2 || hit_candidates < 1) {
        throw InvalidArgument("config: sample counts must be positive");
    }
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "alpha") {
        cfg.alpha = to_double(key, value);
    } else if (key == "nu") {
        cfg.nu = to_double(key, value);
    } else if (key == "n_values") {
        cfg.n_values.clear();
        for (auto part : split(value, ',')) {
            cfg.n_values.push_back(to_double(key, part));
        }
    } else if (key == "seeds_per_n") {
        cfg.seeds_per_n = to_uint(key, value);
    } else if (key == "seed") {
        cfg.seed = to_uint(key, value);
    } else if (key == "quantities") {
        cfg.quantities.clear();
        for (auto part : split(value, ',')) {
            cfg.quantities.push_back(parse_quantity(part));
        }
    } else if (key == "mc_reps") {
        cfg.mc_reps = to_uint(key, value);
    } else if (key == "max_steps") {
        cfg.max_steps = to_uint(key, value);
    } else if (key == "resist_pairs") {
        cfg.resist_pairs = to_uint(key, value);
    } else if (key == "resist_cap") {
        cfg.resist_cap = to_uint(key, value);
    } else if (key == "target_samples") {
        cfg.target_samples = to_uint(key, value);
    } else if (key == "hit_candidates") {
        cfg.hit_candidates = to_uint(key, value);
    } else if (key == "hit_exact_limit") {
        cfg.hit_exact_limit = to_uint(key, value);
    } else if (key == "flow_pairs") {
        cfg.flow_pairs = to_uint(key, value);
    } else if (key == "dangling_min_length") {
        cfg.dangling_min_length = to_uint(key, value);
    } else if (key == "C") {
        cfg.C = to_double(key, value);
    } else if (key == "Cprime") {
        cfg.Cprime = to_double(key, value);
    } else if (key == "c") {
        if (value == "auto") {
            cfg.c.reset();
        } else {
            cfg.c = to_double(key, value);
        }
    } else if (key == "workers") {
        cfg.workers = to_uint(key, value);
    } else if (key == "timing") {
        cfg.timing = to_bool(key, value);
    } else if (key == "output") {
        cfg.output = std::string(value);
    } else {
        throw InvalidArgument(fmt::format("config: unknown key '{}'", key));
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument(fmt::format("config line {}: expected key = value", line_no));
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument(fmt::format("cannot open config file '{}'", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::uint64_t trial_seed(std::uint64_t master, double n, std::size_t trial) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(std::llround(n))), trial);
}

namespace {

void note(ExperimentRow& row, std::string_view what, std::string_view why) {
    if (!row.notes.empty()) {
        row.notes += "; ";
    }
    row.notes += fmt::format("{}: {}", what, why);
}

template <class F>
void attempt(ExperimentRow& row, std::string_view what, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        note(row, what, e.what());
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Median st-flow energy over random center pairs whose tiles are both robust.
std::pair<double, std::size_t> flow_energy_median(const ExperimentConfig& cfg, const HrgGraph& g,
                                                  const std::vector<VertexId>& center, std::uint64_t seed) {
    const Tiling tiling = Tiling::build(g.params, cfg.c ? *cfg.c : Tiling::calibrate_c(g.params));
    const TileMembership members(g, tiling);
    const OccupancyReport occ(members, tiling, cfg.C.value_or(kDefaultC), cfg.Cprime.value_or(kDefaultCprime));
    std::vector<VertexId> robust;
    for (VertexId v : center) {
        if (occ.robust(members.half_tile_of(v).tile)) {
            robust.push_back(v);
        }
    }
    if (robust.size() < 2) {
        throw EmptyHalfTile("fewer than two center vertices lie in robust tiles");
    }
    CounterRng rng(seed);
    std::vector<double> energies;
    const std::size_t max_attempts = 20 * cfg.flow_pairs;
    for (std::size_t a = 0; a < max_attempts && energies.size() < cfg.flow_pairs; ++a) {
        const VertexId s = robust[rng.below(robust.size())];
        const VertexId t = robust[rng.below(robust.size())];
        if (s == t) {
            continue;
        }
        try {
            energies.push_back(energy(st_flow(g.graph, tiling, members, s, t)));
        } catch (const EmptyHalfTile&) {
        }
    }
    if (energies.empty()) {
        throw EmptyHalfTile("no constructible st-flow among sampled pairs");
    }
    const std::size_t built = energies.size();
    return {median(std::move(energies)), built};
}

} // namespace

ExperimentRow run_trial(const ExperimentConfig& cfg, double n, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    ExperimentRow row;
    row.n = n;
    row.seed = seed;
    const ModelParams params(cfg.alpha, cfg.nu, n);

    auto t0 = clock::now();
    auto points = sample_points(params, SampleMode::poissonized(), seed);
    const double t_sample = seconds_since(t0);
    t0 = clock::now();
    const HrgGraph g = build_graph_bucketed(params, std::move(points));
    const auto info = components_and_center(g);
    const double t_build = seconds_since(t0);
    row.V = g.num_vertices();
    if (cfg.timing) {
        row.t_sample_s = t_sample;
        row.t_build_s = t_build;
    }
    if (cfg.wants(Quantity::degree)) {
        row.mean_deg = row.V == 0 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(row.V);
    }
    if (!info.center) {
        for (Quantity q : cfg.quantities) {
            if (q != Quantity::degree) {
                note(row, quantity_name(q), "no center component");
            }
        }
        return row;
    }
    const Subgraph center = component_subgraph(g.graph, info.components, *info.center);
    const Graph& cg = center.graph;
    row.Vc = cg.num_vertices();
    row.Ec = cg.num_edges();
    std::vector<double> radii(cg.num_vertices());
    for (VertexId v = 0; v < cg.num_vertices(); ++v) {
        radii[v] = g.points[center.to_parent[v]].r();
    }

    double t_solve = 0.0;
    double t_walk = 0.0;
    const bool need_hit = cfg.wants(Quantity::thit) || cfg.wants(Quantity::tcov);
    const bool need_system = need_hit || cfg.wants(Quantity::ttarget);

    std::optional<MaxHittingResult> hit;
    std::vector<DanglingPath> dangling;
    bool dangling_done = false;
    if (cfg.wants(Quantity::dangling) || cfg.wants(Quantity::tcov)) {
        attempt(row, "dangling", [&] {
            dangling = find_dangling_paths(cg, 1);
            dangling_done = true;
        });
    }
    if (cfg.wants(Quantity::dangling) && dangling_done) {
        row.dangling_count = static_cast<std::size_t>(
            std::count_if(dangling.begin(), dangling.end(),
                          [&](const DanglingPath& p) { return p.length() >= cfg.dangling_min_length; }));
        row.dangling_maxlen = dangling.empty() ? 0 : dangling.front().length();
    }

    if (need_system && cg.num_vertices() < 2) {
        for (Quantity q : {Quantity::thit, Quantity::tcov, Quantity::ttarget}) {
            if (cfg.wants(q)) {
                note(row, quantity_name(q), "center component has one vertex");
            }
        }
    } else if (need_system) {
        t0 = clock::now();
        if (need_hit) {
            attempt(row, "thit", [&] {
                MaxHittingOptions mo;
                mo.exact_limit = cfg.hit_exact_limit;
                mo.candidates = cfg.hit_candidates;
                hit = max_hitting_estimate(cg, radii, mo);
                row.thit_est = hit->value;
                row.matthews_upper = matthews_upper(hit->value, cg.num_vertices());
            });
        }
        if (cfg.wants(Quantity::ttarget)) {
            attempt(row, "ttarget", [&] {
                TargetTimeOptions to;
                to.samples = cfg.target_samples;
                to.seed = derive_seed(seed, 1);
                const auto r = target_time(cg, to);
                row.ttarget = r.value;
                row.ttarget_se = r.ci / 1.96;
            });
        }
        if (cfg.wants(Quantity::tcov) && dangling_done) {
            std::vector<VertexId> tips;
            for (const auto& p : dangling) {
                if (p.length() >= cfg.dangling_min_length) {
                    tips.push_back(p.tip());
                }
            }
            if (tips.size() >= 2) {
                attempt(row, "kklv", [&] { row.kklv_lower = kklv_lower(cg, tips); });
            }
        }
        t_solve += seconds_since(t0);
    }
    if (cfg.wants(Quantity::kirchhoff) || cfg.wants(Quantity::avg_resist)) {
        t0 = clock::now();
        attempt(row, "resistance", [&] {
            KirchhoffOptions ko;
            ko.cap = cfg.resist_cap;
            ko.pairs = cfg.resist_pairs;
            ko.seed = derive_seed(seed, 2);
            const auto r = kirchhoff_and_average(cg, ko);
            if (cfg.wants(Quantity::kirchhoff)) {
                row.kirchhoff_est = r.kirchhoff;
            }
            if (cfg.wants(Quantity::avg_resist)) {
                row.avg_resist = r.average;
                row.avg_resist_ci = r.average_ci;
            }
        });
        t_solve += seconds_since(t0);
    }
    if (cfg.wants(Quantity::flow_energy)) {
        t0 = clock::now();
        attempt(row, "flow_energy", [&] {
            const auto [med, built] = flow_energy_median(cfg, g, center.to_parent, derive_seed(seed, 3));
            row.flow_energy_med = med;
            row.flow_pairs_built = built;
        });
        t_solve += seconds_since(t0);
    }
    if (cfg.wants(Quantity::tcov) && cg.num_vertices() >= 2) {
        if (!hit) {
            note(row, "tcov", "no start vertex without a hitting estimate");
        } else {
            t0 = clock::now();
            attempt(row, "tcov", [&] {
                WalkConfig wc;
                wc.seed = derive_seed(seed, 4);
                wc.repetitions = cfg.mc_reps;
                wc.max_steps = cfg.max_steps;
                const auto s = simulate_cover(cg, hit->source, wc);
                row.tcov_mean = s.mean;
                row.tcov_se = s.stderr_mean;
            });
            t_walk += seconds_since(t0);
        }
    }
    if (cfg.timing) {
        row.t_solve_s = t_solve;
        row.t_walk_s = t_walk;
    }
    return row;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<double, std::size_t>> trials;
    for (double n : cfg.n_values) {
        for (std::size_t i = 0; i < cfg.seeds_per_n; ++i) {
            trials.emplace_back(n, i);
        }
    }
    std::vector<ExperimentRow> rows(trials.size());
    parallel_for(
        trials.size(),
        [&](std::size_t k) {
            const auto [n, i] = trials[k];
            const auto seed = trial_seed(cfg.seed, n, i);
            try {
                rows[k] = run_trial(cfg, n, seed);
            } catch (const std::exception& e) {
                rows[k] = ExperimentRow{};
                rows[k].n = n;
                rows[k].seed = seed;
                note(rows[k], "trial", e.what());
            }
        },
        cfg.workers);
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) {
            throw InvalidArgument(fmt::format("cannot write '{}'", cfg.output));
        }
        out << to_csv(rows);
    }
    return rows;
}

// ---- CSV -------------------------------------------------------------------

namespace {

struct Column {
    std::string name;
    std::string (*get)(const ExperimentRow&);
    void (*set)(ExperimentRow&, std::string_view);
};

std::string num(double x) { return fmt::format("{:.17g}", x); }
template <class T>
std::string opt(const std::optional<T>& x) {
    if (!x) {
        return {};
    }
    if constexpr (std::is_floating_point_v<T>) {
        return num(*x);
    } else {
        return fmt::format("{}", *x);
    }
}

std::optional<double> parse_opt_double(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return to_double("csv", s);
}
std::optional<std::size_t> parse_opt_size(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(to_uint("csv", s));
}

#define HW_OPT_COLUMN(field, parser)                                           \
    Column {                                                                   \
        #field, [](const ExperimentRow& r) { return opt(r.field); },           \
            [](ExperimentRow& r, std::string_view s) { r.field = parser(s); }  \
    }
#define HW_TIME_COLUMN(field)                                                  \
    Column {                                                                   \
        #field, [](const ExperimentRow& r) { return num(r.field); },           \
            [](ExperimentRow& r, std::string_view s) { r.field = to_double("csv", s); } \
    }

const std::vector<Column>& columns() {
    static const std::vector<Column> cols = {
        Column{"n", [](const ExperimentRow& r) { return num(r.n); },
               [](ExperimentRow& r, std::string_view s) { r.n = to_double("csv", s); }},
        Column{"seed", [](const ExperimentRow& r) { return fmt::format("{}", r.seed); },
               [](ExperimentRow& r, std::string_view s) { r.seed = to_uint("csv", s); }},
        Column{"V", [](const ExperimentRow& r) { return fmt::format("{}", r.V); },
               [](ExperimentRow& r, std::string_view s) { r.V = static_cast<std::size_t>(to_uint("csv", s)); }},
        HW_OPT_COLUMN(Vc, parse_opt_size),
        HW_OPT_COLUMN(Ec, parse_opt_size),
        HW_OPT_COLUMN(mean_deg, parse_opt_double),
        HW_OPT_COLUMN(thit_est, parse_opt_double),
        HW_OPT_COLUMN(tcov_mean, parse_opt_double),
        HW_OPT_COLUMN(tcov_se, parse_opt_double),
        HW_OPT_COLUMN(ttarget, parse_opt_double),
        HW_OPT_COLUMN(ttarget_se, parse_opt_double),
        HW_OPT_COLUMN(kirchhoff_est, parse_opt_double),
        HW_OPT_COLUMN(avg_resist, parse_opt_double),
        HW_OPT_COLUMN(avg_resist_ci, parse_opt_double),
        HW_OPT_COLUMN(flow_energy_med, parse_opt_double),
        HW_OPT_COLUMN(dangling_count, parse_opt_size),
        HW_OPT_COLUMN(dangling_maxlen, parse_opt_size),
        HW_TIME_COLUMN(t_sample_s),
        HW_TIME_COLUMN(t_build_s),
        HW_TIME_COLUMN(t_solve_s),
        HW_TIME_COLUMN(t_walk_s),
    };
    return cols;
}

#undef HW_OPT_COLUMN
#undef HW_TIME_COLUMN

std::string quote(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

// One CSV record; handles quoted fields with doubled quotes.
std::vector<std::string> parse_record(std::string_view line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else if (ch != '\r') {
            out.back() += ch;
        }
    }
    return out;
}

} // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : columns()) {
            v.push_back(c.name);
        }
        v.emplace_back("notes");
        return v;
    }();
    return names;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
    std::string out;
    const auto& names = csv_columns();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out += (i ? "," : "") + names[i];
    }
    out += '\n';
    for (const auto& r : rows) {
        for (const auto& c : columns()) {
            out += c.get(r);
            out += ',';
        }
        out += quote(r.notes);
        out += '\n';
    }
    return out;
}

std::vector<ExperimentRow> parse_csv(std::string_view text) {
    std::vector<ExperimentRow> rows;
    const auto lines = split(text, '\n');
    if (lines.empty() || lines[0].empty()) {
        throw InvalidArgument("csv: missing header");
    }
    const auto header = parse_record(lines[0]);
    std::vector<int> index(header.size(), -1);
    const auto& cols = columns();
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (header[i] == cols[j].name) {
                index[i] = static_cast<int>(j);
            }
        }
    }
    for (std::size_t l = 1; l < lines.size(); ++l) {
        if (lines[l].empty()) {
            continue;
        }
        const auto fields = parse_record(lines[l]);
        if (fields.size() != header.size()) {
            throw InvalidArgument(fmt::format("csv line {}: {} fields, header has {}", l + 1, fields.size(),
                                              header.size()));
        }
        ExperimentRow row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (index[i] >= 0) {
                cols[static_cast<std::size_t>(index[i])].set(row, fields[i]);
            } else if (header[i] == "notes") {
                row.notes = fields[i];
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ExperimentRow> read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument(fmt::format("cannot open csv file '{}'", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

// ---- scaling fits ------------------------------------------------------------

ScalingModel parse_model(std::string_view name) {
    if (name == "1" || name == "one") {
        return ScalingModel::one;
    }
    if (name == "n") {
        return ScalingModel::n;
    }
    if (name == "nlogn" || name == "n_log_n") {
        return ScalingModel::n_log_n;
    }
    if (name == "nlog2n" || name == "n_log2_n") {
        return ScalingModel::n_log2_n;
    }
    if (name == "n2" || name == "n^2") {
        return ScalingModel::n2;
    }
    throw InvalidArgument(fmt::format("unknown model '{}'", name));
}

double model_value(ScalingModel m, double size) {
    const double l = std::log(size);
    switch (m) {
    case ScalingModel::one: return 1.0;
    case ScalingModel::n: return size;
    case ScalingModel::n_log_n: return size * l;
    case ScalingModel::n_log2_n: return size * l * l;
    case ScalingModel::n2: return size * size;
    }
    throw InternalError("model_value: unhandled model");
}

ScalingFit fit_scaling(const std::vector<ExperimentRow>& rows, std::string_view quantity, ScalingModel model,
                       std::string_view size_column) {
    const Column* qcol = nullptr;
    for (const auto& c : columns()) {
        if (c.name == quantity) {
            qcol = &c;
        }
    }
    if (qcol == nullptr) {
        throw InvalidArgument(fmt::format("fit: unknown quantity column '{}'", quantity));
    }
    if (size_column != "n" && size_column != "Vc") {
        throw InvalidArgument("fit: size column must be n or Vc");
    }
    struct Group {
        double size_sum = 0;
        double ratio_sum = 0;
        std::size_t count = 0;
    };
    std::map<double, Group> groups;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        const std::string cell = qcol->get(r);
        if (cell.empty()) {
            continue;
        }
        const double q = to_double(quantity, cell);
        double size = r.n;
        if (size_column == "Vc") {
            if (!r.Vc) {
                continue;
            }
            size = static_cast<double>(*r.Vc);
        }
        if (!(q > 0.0) || !(size > 1.0)) {
            continue;
        }
        auto& grp = groups[r.n];
        grp.size_sum += size;
        grp.ratio_sum += q / model_value(model, size);
        ++grp.count;
        xs.push_back(std::log(size));
        ys.push_back(std::log(q));
    }
    if (groups.size() < 3) {
        throw InsufficientData(fmt::format("fit: {} distinct n with '{}' values, need 3", groups.size(), quantity));
    }
    ScalingFit fit;
    for (const auto& [n, grp] : groups) {
        fit.sizes.push_back(grp.size_sum / static_cast<double>(grp.count));
        fit.ratios.push_back(grp.ratio_sum / static_cast<double>(grp.count));
    }
    const auto [lo, hi] = std::minmax_element(fit.ratios.begin(), fit.ratios.end());
    fit.band = *hi / *lo;
    const auto m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.exponent = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - my - fit.exponent * (xs[i] - mx);
        sse += e * e;
    }
    fit.exponent_stderr = xs.size() > 2 ? std::sqrt(sse / (m - 2.0) / sxx) : 0.0;
    fit.points = xs.size();
    return fit;
}

} // namespace hyperwalk
