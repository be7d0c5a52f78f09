#include <hyperwalk/hrg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/rng.hpp>

namespace hyperwalk {

namespace {

Graph adjacency_to_graph(std::vector<std::vector<VertexId>>& adj) {
    std::vector<std::size_t> offsets{0};
    offsets.reserve(adj.size() + 1);
    std::size_t total = 0;
    for (auto& list : adj) {
        total += list.size();
    }
    std::vector<VertexId> targets;
    targets.reserve(total);
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        targets.insert(targets.end(), list.begin(), list.end());
        offsets.push_back(targets.size());
    }
    return Graph::from_sorted_adjacency(std::move(offsets), std::move(targets));
}

// Lower radii of the radial bands used by the bucketed builder.
std::vector<double> band_edges(double R) {
    constexpr double width = 0.5;
    std::vector<double> edges{0.0, 0.5 * R};
    while (edges.back() + width < R) {
        edges.push_back(edges.back() + width);
    }
    return edges;
}

struct BandEntry {
    double theta;
    VertexId id;
};

} // namespace

std::vector<PolarPoint> sample_points(const ModelParams& params, const SampleMode& mode, std::uint64_t seed) {
    CounterRng rng(seed);
    std::size_t count = mode.count();
    if (mode.kind() == SampleMode::Kind::Poissonized) {
        std::poisson_distribution<std::uint64_t> poisson(params.n());
        count = static_cast<std::size_t>(poisson(rng));
    }
    std::vector<PolarPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = kTwoPi * rng.uniform();
        const double r = radial_quantile(rng.uniform(), params);
        points.emplace_back(r, theta);
    }
    return points;
}

HrgGraph build_graph_naive(const ModelParams& params, std::vector<PolarPoint> points) {
    const double cosh_R = std::cosh(params.R());
    const std::size_t m = points.size();
    std::vector<RadialTerms> terms;
    terms.reserve(m);
    for (const auto& p : points) {
        terms.push_back(RadialTerms::of(p.r()));
    }
    std::vector<std::vector<VertexId>> adj(m);
    for (VertexId u = 0; u < m; ++u) {
        for (VertexId v = u + 1; v < m; ++v) {
            if (is_edge_terms(terms[u], points[u].theta(), terms[v], points[v].theta(), cosh_R)) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
        }
    }
    Graph g = adjacency_to_graph(adj);
    return HrgGraph{params, std::move(points), std::move(g)};
}

HrgGraph build_graph_bucketed(const ModelParams& params, std::vector<PolarPoint> points) {
    const double R = params.R();
    const double cosh_R = std::cosh(R);
    const std::size_t m = points.size();
    std::vector<RadialTerms> terms;
    terms.reserve(m);
    for (const auto& p : points) {
        terms.push_back(RadialTerms::of(p.r()));
    }

    const std::vector<double> lower = band_edges(R);
    std::vector<std::vector<BandEntry>> bands(lower.size());
    for (VertexId v = 0; v < m; ++v) {
        const auto it = std::upper_bound(lower.begin(), lower.end(), points[v].r());
        const auto band = static_cast<std::size_t>(std::distance(lower.begin(), it)) - 1;
        bands[band].push_back({points[v].theta(), v});
    }
    for (auto& band : bands) {
        std::sort(band.begin(), band.end(), [](const BandEntry& a, const BandEntry& b) {
            return a.theta < b.theta || (a.theta == b.theta && a.id < b.id);
        });
    }

    std::vector<std::vector<VertexId>> adj(m);
    auto test = [&](VertexId u, VertexId v) {
        if (v > u && is_edge_terms(terms[u], points[u].theta(), terms[v], points[v].theta(), cosh_R)) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    };
    auto by_theta = [](const BandEntry& e, double t) { return e.theta < t; };

    for (VertexId u = 0; u < m; ++u) {
        const double ru = points[u].r();
        const double tu = points[u].theta();
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const auto& band = bands[b];
            if (band.empty()) {
                continue;
            }
            // Widened slightly so rounding in theta_R never drops a true edge.
            const double window = theta_r_exact(ru, lower[b], R) * (1.0 + 1e-9) + 1e-12;
            if (window >= kPi) {
                for (const auto& e : band) {
                    test(u, e.id);
                }
                continue;
            }
            const double lo = tu - window;
            const double hi = tu + window;
            auto scan = [&](double a, double z) {
                auto it = std::lower_bound(band.begin(), band.end(), a, by_theta);
                for (; it != band.end() && it->theta <= z; ++it) {
                    test(u, it->id);
                }
            };
            if (lo < 0.0) {
                scan(0.0, hi);
                scan(lo + kTwoPi, kTwoPi);
            } else if (hi >= kTwoPi) {
                scan(lo, kTwoPi);
                scan(0.0, hi - kTwoPi);
            } else {
                scan(lo, hi);
            }
        }
    }
    Graph g = adjacency_to_graph(adj);
    return HrgGraph{params, std::move(points), std::move(g)};
}

HrgGraph sample_graph(const ModelParams& params, const SampleMode& mode, std::uint64_t seed) {
    return build_graph_bucketed(params, sample_points(params, mode, seed));
}

HrgGraph add_vertex(const HrgGraph& g, const PolarPoint& w) {
    const auto id = static_cast<VertexId>(g.num_vertices());
    const double R = g.params.R();
    std::vector<std::uint8_t> joined(id, 0);
    std::size_t degree = 0;
    for (VertexId v = 0; v < id; ++v) {
        if (is_edge(w, g.points[v], R)) {
            joined[v] = 1;
            ++degree;
        }
    }
    // w has the largest id, so appending it keeps every list sorted.
    const auto& off = g.graph.offsets();
    const auto& tgt = g.graph.targets();
    std::vector<std::size_t> offsets(static_cast<std::size_t>(id) + 2, 0);
    std::vector<VertexId> targets;
    targets.reserve(tgt.size() + 2 * degree);
    for (VertexId v = 0; v < id; ++v) {
        targets.insert(targets.end(), tgt.begin() + static_cast<std::ptrdiff_t>(off[v]),
                       tgt.begin() + static_cast<std::ptrdiff_t>(off[v + 1]));
        if (joined[v]) {
            targets.push_back(id);
        }
        offsets[v + 1] = targets.size();
    }
    for (VertexId v = 0; v < id; ++v) {
        if (joined[v]) {
            targets.push_back(v);
        }
    }
    offsets[id + 1] = targets.size();
    HrgGraph out{g.params, g.points, Graph::from_sorted_adjacency(std::move(offsets), std::move(targets))};
    out.points.push_back(w);
    return out;
}

CenterInfo components_and_center(const HrgGraph& g) {
    CenterInfo info{connected_components(g.graph), std::nullopt};
    const double half = 0.5 * g.params.R();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (g.points[v].r() < half) {
            info.center = info.components.label[v];
            break;
        }
    }
    return info;
}

DegreeSummary degree_summary(const Graph& g) {
    const std::size_t n = g.num_vertices();
    if (n == 0) {
        throw EmptyGraphError("degree_summary: empty graph");
    }
    DegreeSummary out;
    out.mean = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);

    std::size_t max_deg = 0;
    std::vector<std::size_t> count_by_degree;
    for (VertexId v = 0; v < n; ++v) {
        const std::size_t d = g.degree(v);
        if (d >= count_by_degree.size()) {
            count_by_degree.resize(d + 1, 0);
        }
        ++count_by_degree[d];
        max_deg = std::max(max_deg, d);
    }

    if (count_by_degree[0] > 0) {
        out.histogram.push_back({0, 1, count_by_degree[0]});
    }
    for (std::size_t lo = 1; lo <= max_deg; lo *= 2) {
        const std::size_t hi = 2 * lo;
        std::size_t c = 0;
        for (std::size_t d = lo; d < hi && d <= max_deg; ++d) {
            c += count_by_degree[d];
        }
        out.histogram.push_back({lo, hi, c});
    }

    // log-log complementary CDF over degrees >= 10
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t at_least = 0;
    for (std::size_t d = max_deg + 1; d-- > 10;) {
        at_least += count_by_degree[d];
        if (count_by_degree[d] > 0) {
            xs.push_back(std::log(static_cast<double>(d)));
            ys.push_back(std::log(static_cast<double>(at_least) / static_cast<double>(n)));
        }
    }
    if (xs.size() < 3) {
        out.tail_exponent = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double k = static_cast<double>(xs.size());
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        out.tail_exponent = 1.0 - sxy / sxx;
    }
    return out;
}

} // namespace hyperwalk
