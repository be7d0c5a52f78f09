#include <hyperwalk/walks.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/parallel.hpp>
#include <hyperwalk/rng.hpp>

namespace hyperwalk {

std::vector<double> stationary(const Graph& g) {
    if (g.num_edges() == 0) {
        throw EmptyGraphError("stationary: graph has no edges");
    }
    if (!is_connected(g)) {
        throw InvalidArgument("stationary: graph must be connected");
    }
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    std::vector<double> pi(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        pi[v] = static_cast<double>(g.degree(v)) / two_m;
    }
    return pi;
}

namespace {

void check_vertex(const Graph& g, VertexId v, const char* who) {
    if (v >= g.num_vertices()) {
        throw InvalidArgument(fmt::format("{}: vertex {} out of range", who, v));
    }
}

void check_config(const WalkConfig& cfg) {
    if (cfg.max_steps < 1 || cfg.repetitions < 1) {
        throw InvalidArgument("walk: max_steps and repetitions must be at least 1");
    }
}

void check_same_component(const Graph& g, VertexId u, VertexId v, const char* who) {
    const auto comps = connected_components(g);
    if (comps.label[u] != comps.label[v]) {
        throw DisconnectedPair(fmt::format("{}: {} and {} are in different components", who, u, v));
    }
}

VertexId step(const Graph& g, VertexId at, CounterRng& rng) {
    const auto nb = g.neighbors(at);
    return nb[rng.below(nb.size())];
}

// Steps from `from` until `to` is reached, or nothing past the cap.
std::optional<std::uint64_t> walk_until(const Graph& g, VertexId from, VertexId to, std::uint64_t cap,
                                        CounterRng& rng) {
    std::uint64_t t = 0;
    VertexId at = from;
    while (at != to) {
        if (t >= cap) {
            return std::nullopt;
        }
        at = step(g, at, rng);
        ++t;
    }
    return t;
}

// Runs `one(rng)` for every repetition and aggregates in repetition order.
template <class F>
WalkStats run_repetitions(const WalkConfig& cfg, const char* who, F one) {
    std::vector<std::optional<std::uint64_t>> out(cfg.repetitions);
    parallel_for(
        cfg.repetitions,
        [&](std::size_t i) {
            CounterRng rng(derive_seed(cfg.seed, i));
            out[i] = one(rng);
        },
        cfg.workers);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t done = 0;
    for (const auto& x : out) {
        if (x) {
            const auto v = static_cast<double>(*x);
            sum += v;
            sum_sq += v * v;
            ++done;
        }
    }
    WalkStats st;
    st.repetitions = done;
    if (done > 0) {
        const double n = static_cast<double>(done);
        st.mean = sum / n;
        if (done > 1) {
            const double var = std::max(0.0, (sum_sq - n * st.mean * st.mean) / (n - 1.0));
            st.stderr_mean = std::sqrt(var / n);
        }
    }
    if (done < cfg.repetitions) {
        throw StepCapExceeded(fmt::format("{}: {} of {} realizations passed {} steps", who, cfg.repetitions - done,
                                          cfg.repetitions, cfg.max_steps),
                              done, cfg.repetitions - done, st.mean, st.stderr_mean);
    }
    return st;
}

} // namespace

WalkStats simulate_hitting(const Graph& g, VertexId u, VertexId v, const WalkConfig& cfg) {
    check_vertex(g, u, "simulate_hitting");
    check_vertex(g, v, "simulate_hitting");
    check_config(cfg);
    check_same_component(g, u, v, "simulate_hitting");
    return run_repetitions(cfg, "simulate_hitting",
                           [&](CounterRng& rng) { return walk_until(g, u, v, cfg.max_steps, rng); });
}

WalkStats simulate_commute(const Graph& g, VertexId u, VertexId v, const WalkConfig& cfg) {
    check_vertex(g, u, "simulate_commute");
    check_vertex(g, v, "simulate_commute");
    check_config(cfg);
    check_same_component(g, u, v, "simulate_commute");
    return run_repetitions(cfg, "simulate_commute", [&](CounterRng& rng) -> std::optional<std::uint64_t> {
        const auto there = walk_until(g, u, v, cfg.max_steps, rng);
        if (!there) {
            return std::nullopt;
        }
        const auto back = walk_until(g, v, u, cfg.max_steps - *there, rng);
        if (!back) {
            return std::nullopt;
        }
        return *there + *back;
    });
}

WalkStats simulate_cover(const Graph& g, VertexId start, const WalkConfig& cfg) {
    check_vertex(g, start, "simulate_cover");
    check_config(cfg);
    if (!is_connected(g)) {
        throw InvalidArgument("simulate_cover: graph must be connected");
    }
    const std::size_t n = g.num_vertices();
    return run_repetitions(cfg, "simulate_cover", [&](CounterRng& rng) -> std::optional<std::uint64_t> {
        std::vector<std::uint8_t> seen(n, 0);
        seen[start] = 1;
        std::size_t left = n - 1;
        std::uint64_t t = 0;
        VertexId at = start;
        while (left > 0) {
            if (t >= cfg.max_steps) {
                return std::nullopt;
            }
            at = step(g, at, rng);
            ++t;
            if (!seen[at]) {
                seen[at] = 1;
                --left;
            }
        }
        return t;
    });
}

std::vector<std::uint64_t> occupation_counts(const Graph& g, VertexId start, std::uint64_t steps,
                                             std::uint64_t seed) {
    check_vertex(g, start, "occupation_counts");
    if (g.degree(start) == 0 && steps > 0) {
        throw InvalidArgument("occupation_counts: start vertex is isolated");
    }
    std::vector<std::uint64_t> counts(g.num_vertices(), 0);
    CounterRng rng(seed);
    VertexId at = start;
    ++counts[at];
    for (std::uint64_t t = 0; t < steps; ++t) {
        at = step(g, at, rng);
        ++counts[at];
    }
    return counts;
}

std::vector<double> exact_hitting_vector(const LaplacianSystem& sys, VertexId v) {
    const auto n = static_cast<Eigen::Index>(sys.size());
    if (v >= sys.size()) {
        throw InvalidArgument(fmt::format("exact_hitting_vector: vertex {} out of range", v));
    }
    Eigen::VectorXd b = sys.degrees();
    b[v] -= sys.degrees().sum();
    const Eigen::VectorXd x = sys.solve(b);
    std::vector<double> h(static_cast<std::size_t>(n));
    for (Eigen::Index u = 0; u < n; ++u) {
        h[static_cast<std::size_t>(u)] = u == v ? 0.0 : x[u] - x[v];
    }
    return h;
}

std::vector<double> exact_hitting_vector(const Graph& g, VertexId v, std::size_t cap) {
    if (g.num_vertices() > cap) {
        throw SizeCapExceeded(fmt::format("exact_hitting_vector: {} vertices above the cap {}", g.num_vertices(), cap));
    }
    if (g.num_vertices() == 1) {
        check_vertex(g, v, "exact_hitting_vector");
        return {0.0};
    }
    const LaplacianSystem sys(g);
    return exact_hitting_vector(sys, v);
}

namespace {

double pi_weighted(const std::vector<double>& pi, const std::vector<double>& h) {
    double acc = 0.0;
    for (std::size_t u = 0; u < h.size(); ++u) {
        acc += pi[u] * h[u];
    }
    return acc;
}

} // namespace

TargetTimeResult target_time(const Graph& g, const TargetTimeOptions& options) {
    const std::size_t n = g.num_vertices();
    if (n < 2) {
        throw EmptyGraphError("target_time: need at least two vertices");
    }
    const auto pi = stationary(g);
    const LaplacianSystem* sys_ptr = nullptr;
    std::optional<LaplacianSystem> sys;
    if (options.method == TargetMethod::exact) {
        if (n > options.exact_cap) {
            throw SizeCapExceeded(fmt::format("target_time: {} vertices above the exact cap {}", n, options.exact_cap));
        }
        sys.emplace(g, options.solver);
        sys_ptr = &*sys;
        double total = 0.0;
        for (VertexId v = 0; v < n; ++v) {
            total += pi[v] * pi_weighted(pi, exact_hitting_vector(*sys_ptr, v));
        }
        return {total, 0.0, true, n};
    }
    if (options.samples < 2) {
        throw InvalidArgument("target_time: sampled mode needs at least two targets");
    }
    sys.emplace(g, options.solver);
    sys_ptr = &*sys;
    // Inverse-CDF draws from pi.
    std::vector<double> cdf(n);
    std::partial_sum(pi.begin(), pi.end(), cdf.begin());
    CounterRng rng(options.seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        const double x = rng.uniform() * cdf.back();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        const auto v = static_cast<VertexId>(std::min<std::size_t>(it - cdf.begin(), n - 1));
        const double val = pi_weighted(pi, exact_hitting_vector(*sys_ptr, v));
        sum += val;
        sum_sq += val * val;
    }
    const double m = static_cast<double>(options.samples);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    return {mean, 1.96 * std::sqrt(var / m), false, options.samples};
}

double target_time_resistance_form(const Graph& g, double constant, std::size_t cap) {
    const Eigen::MatrixXd R = resistance_matrix(g, cap);
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    double total = 0.0;
    for (Eigen::Index u = 0; u < n; ++u) {
        const auto du = static_cast<double>(g.degree(static_cast<VertexId>(u)));
        for (Eigen::Index v = 0; v < n; ++v) {
            total += R(u, v) * du * static_cast<double>(g.degree(static_cast<VertexId>(v)));
        }
    }
    return constant / static_cast<double>(g.num_edges()) * total;
}

std::vector<DanglingPath> find_dangling_paths(const Graph& g, std::size_t min_length) {
    std::vector<DanglingPath> out;
    for (VertexId tip = 0; tip < g.num_vertices(); ++tip) {
        if (g.degree(tip) != 1) {
            continue;
        }
        DanglingPath p;
        p.vertices.push_back(tip);
        VertexId prev = tip;
        VertexId at = g.neighbors(tip)[0];
        while (g.degree(at) == 2) {
            p.vertices.push_back(at);
            const auto nb = g.neighbors(at);
            const VertexId next = nb[0] == prev ? nb[1] : nb[0];
            prev = at;
            at = next;
        }
        if (g.degree(at) == 1) {
            continue;  // the whole component is a path
        }
        p.attachment = at;
        if (p.length() >= min_length) {
            out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end(), [](const DanglingPath& a, const DanglingPath& b) {
        return a.length() != b.length() ? a.length() > b.length() : a.tip() < b.tip();
    });
    return out;
}

MaxHittingResult max_hitting_estimate(const Graph& g, std::span<const double> radii,
                                      const MaxHittingOptions& options) {
    const std::size_t n = g.num_vertices();
    if (n < 2) {
        throw EmptyGraphError("max_hitting_estimate: need at least two vertices");
    }
    if (!radii.empty() && radii.size() != n) {
        throw InvalidArgument("max_hitting_estimate: one radius per vertex expected");
    }
    const LaplacianSystem sys(g, options.solver);
    std::vector<VertexId> targets;
    const bool exact = n <= options.exact_limit;
    if (exact) {
        targets.resize(n);
        std::iota(targets.begin(), targets.end(), 0);
    } else {
        std::vector<std::uint8_t> taken(n, 0);
        for (const auto& p : find_dangling_paths(g, 1)) {
            if (targets.size() >= options.candidates) {
                break;
            }
            targets.push_back(p.tip());
            taken[p.tip()] = 1;
        }
        std::vector<VertexId> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
            if (g.degree(a) != g.degree(b)) {
                return g.degree(a) < g.degree(b);
            }
            if (!radii.empty() && radii[a] != radii[b]) {
                return radii[a] > radii[b];
            }
            return a < b;
        });
        for (VertexId v : order) {
            if (targets.size() >= options.candidates) {
                break;
            }
            if (!taken[v]) {
                targets.push_back(v);
            }
        }
    }
    MaxHittingResult best{0.0, exact, 0, 0, targets.size()};
    for (VertexId v : targets) {
        const auto h = exact_hitting_vector(sys, v);
        const auto it = std::max_element(h.begin(), h.end());
        if (*it > best.value) {
            best.value = *it;
            best.source = static_cast<VertexId>(it - h.begin());
            best.target = v;
        }
    }
    return best;
}

double harmonic_number(std::size_t n) {
    double h = 0.0;
    for (std::size_t k = n; k >= 1; --k) {
        h += 1.0 / static_cast<double>(k);
    }
    return h;
}

double matthews_upper(double t_hit, std::size_t n) {
    if (!(t_hit >= 0.0)) {
        throw InvalidArgument("matthews_upper: t_hit must be non-negative");
    }
    return t_hit * harmonic_number(n);
}

double kklv_lower(const LaplacianSystem& sys, std::span<const VertexId> U) {
    std::vector<VertexId> set(U.begin(), U.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() < 2) {
        throw InvalidArgument("kklv_lower: U needs at least two distinct vertices");
    }
    const auto n = static_cast<Eigen::Index>(sys.size());
    for (VertexId u : set) {
        if (u >= sys.size()) {
            throw InvalidArgument(fmt::format("kklv_lower: vertex {} out of range", u));
        }
    }
    // Columns of the pseudoinverse for U give every pairwise resistance.
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(set.size());
    for (VertexId u : set) {
        Eigen::VectorXd b = Eigen::VectorXd::Constant(n, -1.0 / static_cast<double>(n));
        b[u] += 1.0;
        cols.push_back(sys.solve(b));
    }
    double min_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            const double r = cols[i][set[i]] + cols[j][set[j]] - 2.0 * cols[i][set[j]];
            min_r = std::min(min_r, r);
        }
    }
    const double kappa = 2.0 * static_cast<double>(sys.graph().num_edges()) * min_r;
    return 0.5 * kappa * std::log(static_cast<double>(set.size()));
}

double kklv_lower(const Graph& g, std::span<const VertexId> U) {
    const LaplacianSystem sys(g);
    return kklv_lower(sys, U);
}

} // namespace hyperwalk
