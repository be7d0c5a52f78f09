#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/flows.hpp>
#include <hyperwalk/resistance.hpp>
#include <hyperwalk/rng.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace hyperwalk;

namespace {

const SolverKind kAllKinds[] = {SolverKind::dense, SolverKind::sparse, SolverKind::cg};

SolverOptions with_kind(SolverKind k) {
    SolverOptions o;
    o.kind = k;
    return o;
}

std::vector<std::size_t> bfs_distances(const Graph& g, VertexId s) {
    std::vector<std::size_t> d(g.num_vertices(), SIZE_MAX);
    std::vector<VertexId> queue{s};
    d[s] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (VertexId u : g.neighbors(queue[i])) {
            if (d[u] == SIZE_MAX) {
                d[u] = d[queue[i]] + 1;
                queue.push_back(u);
            }
        }
    }
    return d;
}

} // namespace

TEST_CASE("resistance on series-parallel graphs") {
    for (SolverKind k : kAllKinds) {
        CAPTURE(static_cast<int>(k));
        const auto o = with_kind(k);
        CHECK(effective_resistance(path_graph(6), 0, 5, o) == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(effective_resistance(complete_graph(3), 0, 1, o) == doctest::Approx(2.0 / 3).epsilon(1e-12));
        CHECK(effective_resistance(cycle_graph(4), 0, 2, o) == doctest::Approx(1.0).epsilon(1e-12));
        // K_n edge: 2/n
        CHECK(effective_resistance(complete_graph(7), 2, 5, o) == doctest::Approx(2.0 / 7).epsilon(1e-12));
        CHECK(effective_resistance(path_graph(3), 1, 1, o) == 0.0);
    }
}

TEST_CASE("resistance across components and bad inputs") {
    const Graph two = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    CHECK_THROWS_AS(effective_resistance(two, 0, 2), DisconnectedPair);
    CHECK(effective_resistance(two, 2, 3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(LaplacianSystem{two}, InvalidArgument);
    const Graph p3 = path_graph(3);
    const LaplacianSystem sys(p3);
    CHECK_THROWS_AS(sys.solve(Eigen::Vector3d(1, 0, 0)), InvalidArgument);
}

TEST_CASE("bridge between cliques") {
    const Graph g = gen::barbell(5);
    // bridge 1 plus the two clique-internal legs of 2/5 each
    CHECK(effective_resistance(g, 1, 6) == doctest::Approx(1.0 + 0.4 + 0.4).epsilon(1e-12));
    CHECK(effective_resistance(g, 0, 5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resistance matrix on small graphs") {
    const auto k3 = resistance_matrix(complete_graph(3));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(k3(i, j) == doctest::Approx(i == j ? 0.0 : 2.0 / 3).epsilon(1e-12));
        }
    }
    const auto p3 = resistance_matrix(path_graph(3));
    CHECK(p3(0, 2) == doctest::Approx(2.0));
    CHECK(p3(0, 1) == doctest::Approx(1.0));
    CHECK(resistance_matrix(path_graph(1)).size() == 1);
    CHECK_THROWS_AS(resistance_matrix(path_graph(30), 20), SizeCapExceeded);
}

TEST_CASE("resistance matrix agrees with the pseudoinverse and is a metric below graph distance") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 5 + rng.below(60);
        const Graph g = gen::random_connected(n, rng.below(2 * n), rng);
        const auto M = resistance_matrix(g);
        const auto P = oracle::resistance_by_pinv(g);
        CHECK((M - P).cwiseAbs().maxCoeff() <= 1e-9);
        double worst_triangle = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = bfs_distances(g, static_cast<VertexId>(i));
            CHECK(M(i, i) == 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(M(i, j) == M(j, i));
                CHECK(M(i, j) <= static_cast<double>(d[j]) + 1e-9);
                for (std::size_t k = 0; k < n; ++k) {
                    worst_triangle = std::min(worst_triangle, M(i, k) + M(k, j) - M(i, j));
                }
            }
        }
        CHECK(worst_triangle >= -1e-8);
    }
}

TEST_CASE("all solver backends agree and meet the residual bound") {
    CounterRng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 20 + rng.below(300);
        const Graph g = gen::random_connected(n, rng.below(3 * n), rng);
        const LaplacianSystem dense(g, with_kind(SolverKind::dense));
        const LaplacianSystem sparse(g, with_kind(SolverKind::sparse));
        const LaplacianSystem cg(g, with_kind(SolverKind::cg));
        Eigen::VectorXd b(static_cast<Eigen::Index>(n));
        for (auto& x : b) {
            x = rng.uniform() - 0.5;
        }
        b.array() -= b.mean();
        const auto xd = dense.solve(b);
        const auto xs = sparse.solve(b);
        const auto xc = cg.solve(b);
        CHECK(dense.relative_residual(xd, b) <= 1e-10);
        CHECK(sparse.relative_residual(xs, b) <= 1e-10);
        CHECK(cg.relative_residual(xc, b) <= 1e-10);
        CHECK(std::fabs(xd.sum()) <= 1e-9);
        CHECK((xd - xs).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + xd.cwiseAbs().maxCoeff()));
        CHECK((xd - xc).cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + xd.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Rayleigh monotonicity: adding edges never raises a resistance") {
    CounterRng rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 6 + rng.below(30);
        const Graph g = gen::random_connected(n, rng.below(n), rng);
        auto before = resistance_matrix(g);
        auto edges = g.edge_list();
        for (int add = 0; add < 20; ++add) {
            const auto a = static_cast<VertexId>(rng.below(n));
            const auto b = static_cast<VertexId>(rng.below(n));
            if (a == b) {
                continue;
            }
            edges.emplace_back(a, b);
            const Graph h = Graph::from_edges(n, edges);
            const auto after = resistance_matrix(h);
            CHECK((before - after).minCoeff() >= -1e-8);
            before = after;
        }
    }
}

TEST_CASE("Kirchhoff index") {
    auto k3 = kirchhoff_and_average(complete_graph(3));
    CHECK(k3.exact);
    CHECK(k3.kirchhoff == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(k3.average == doctest::Approx(4.0 / 9).epsilon(1e-12));
    auto edge = kirchhoff_and_average(path_graph(2));
    CHECK(edge.kirchhoff == doctest::Approx(2.0));
    CHECK(edge.average == doctest::Approx(0.5));

    // sampled estimator covers the exact value
    CounterRng rng(8);
    const Graph g = gen::random_connected(300, 400, rng);
    const auto exact = kirchhoff_and_average(g);
    KirchhoffOptions opt;
    opt.cap = 100;
    opt.pairs = 2000;
    opt.seed = 3;
    const auto est = kirchhoff_and_average(g, opt);
    CHECK_FALSE(est.exact);
    CHECK(est.pairs == 2000);
    CHECK(est.average_ci > 0.0);
    CHECK(std::fabs(est.average - exact.average) <= 1.5 * est.average_ci);
    const auto again = kirchhoff_and_average(g, opt);
    CHECK(again.average == est.average);
}

TEST_CASE("sector membership and cuts") {
    const ModelParams p(0.75, 1.0, 100.0);
    CHECK(in_sector(PolarPoint(1, 0.0), 1.0, kTwoPi - 0.4));
    CHECK(in_sector(PolarPoint(1, 0.0), 1.0, 0.49));
    CHECK_FALSE(in_sector(PolarPoint(1, 0.0), 1.0, 0.5));  // half-open on the far side
    CHECK(in_sector(PolarPoint(1, 0.0), 1.0, kTwoPi - 0.5));

    SUBCASE("two adjacent vertices split by the sector") {
        const auto g = build_graph_naive(p, {PolarPoint(1.0, 0.0), PolarPoint(1.0, 2.0)});
        REQUIRE(g.graph.num_edges() == 1);
        const auto cut = sector_cut(g, PolarPoint(3, 0.0), 0.5);
        CHECK(cut.edges.size() == 1);
        CHECK(nash_williams_lower(cut) == 1.0);
    }
    SUBCASE("everything inside gives an empty cut") {
        const auto g = build_graph_naive(p, {PolarPoint(1.0, 0.0), PolarPoint(1.0, 2.0), PolarPoint(2.0, 4.0)});
        const auto cut = sector_cut(g, PolarPoint(3, 3.1), kTwoPi - 1e-9);
        CHECK(cut.edges.empty());
        CHECK_THROWS_AS(nash_williams_lower(cut), EmptyCut);
    }
    SUBCASE("twenty vertices against a direct scan") {
        CounterRng rng(9);
        std::vector<PolarPoint> pts;
        for (int i = 0; i < 20; ++i) {
            pts.emplace_back(p.R() * rng.uniform(), kTwoPi * rng.uniform());
        }
        const auto g = build_graph_naive(p, pts);
        const PolarPoint apex(4.0, 6.0);
        const double phi = 1.3;
        const auto cut = sector_cut(g, apex, phi);
        auto inside = [&](const PolarPoint& q) {
            // signed offset in [-pi, pi)
            double d = std::fmod(q.theta() - apex.theta() + 3 * kPi, kTwoPi) - kPi;
            return d >= -phi / 2 && d < phi / 2;
        };
        std::vector<Edge> expected;
        for (auto [u, v] : g.graph.edge_list()) {
            if (inside(pts[u]) != inside(pts[v])) {
                expected.emplace_back(u, v);
            }
        }
        CHECK(cut.edges == expected);
    }
    CHECK_THROWS_AS(sector_cut(HrgGraph{p, {}, Graph()}, PolarPoint(1, 0), 0.0), InvalidArgument);
}

TEST_CASE("Nash-Williams bound on small graphs") {
    // 4-cycle 0-1-2-3, cut {01, 03} separates 0 from 2
    CutSpec cut{PolarPoint(0, 0), 1.0, {}, {{0, 1}, {0, 3}}};
    CHECK(nash_williams_lower(cut) == 0.5);
    CHECK(nash_williams_lower(cut) <= effective_resistance(cycle_graph(4), 0, 2));
    const Graph bb = gen::barbell(4);
    CutSpec bridge{PolarPoint(0, 0), 1.0, {}, {{0, 4}}};
    CHECK(nash_williams_lower(bridge) <= effective_resistance(bb, 2, 6));
}

TEST_CASE("phi_r") {
    const ModelParams p(0.7, 1.0, 1 << 14);
    const double R = p.R();
    const double w = default_omega(p);
    CHECK(w == doctest::Approx(std::log(std::log(16384.0))));
    CHECK(phi_r(R, p, w) == doctest::Approx(kTwoPi * std::exp(-w) / p.n()).epsilon(1e-14));
    const double a = p.alpha();
    const double lower = (1 - 1 / (2 * a)) * R;
    CHECK_THROWS_AS(phi_r(lower, p, w), InvalidArgument);
    CHECK_THROWS_AS(phi_r(R + 0.1, p, w), InvalidArgument);
    for (int i = 1; i <= 100; ++i) {
        const double r = lower + (R - lower) * i / 100.0;
        const double exact = phi_r(r, p, w);
        const double est = phi_r_estimate(r, p, w);
        // mu(B_O(r)) = e^{-a(R-r)} (1 - e^{-ar})^2 / (1 - e^{-aR})^2 exactly
        const double closed = std::pow((1 - std::exp(-a * R)) / (1 - std::exp(-a * r)), 2);
        CHECK(exact / est == doctest::Approx(closed).epsilon(1e-12));
        CHECK(std::fabs(exact / est - 1) <= 5 * std::exp(-a * r) + 5 * std::exp(-a * R));
        // the O(e^{-omega}) form with a 1% allowance, once e^{-ar} is small
        if (r >= std::log(400.0) / a) {
            CHECK(exact * std::exp(w) <= kTwoPi * (p.nu() / p.n()) * std::exp(a * (R - r)) * 1.01);
        }
    }
}

TEST_CASE("Nash-Williams on a sampled graph never exceeds the resistance") {
    const ModelParams p(0.7, 1.0, 1500.0);
    const auto g = sample_graph(p, SampleMode::poissonized(), 12);
    const auto info = components_and_center(g);
    REQUIRE(info.center);
    const auto& comps = info.components;
    const auto sub = component_subgraph(g.graph, comps, *info.center);
    const LaplacianSystem sys(sub.graph);
    std::vector<VertexId> local(g.num_vertices(), UINT32_MAX);
    for (VertexId i = 0; i < sub.to_parent.size(); ++i) {
        local[sub.to_parent[i]] = i;
    }
    const double w = default_omega(p);
    const double lower = (1 - 1 / (2 * p.alpha())) * p.R();
    CounterRng rng(4);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 60; ++trial) {
        const VertexId s = sub.to_parent[rng.below(sub.to_parent.size())];
        if (g.points[s].r() <= lower) {
            continue;
        }
        const auto cut = sector_cut(g, g.points[s], phi_r(g.points[s].r(), p, w));
        // any center vertex outside the sector is separated from s by the cut
        const VertexId t = sub.to_parent[rng.below(sub.to_parent.size())];
        if (cut.inside[t] || cut.edges.empty()) {
            continue;
        }
        CHECK(nash_williams_lower(cut) <= sys.resistance(local[s], local[t]) + 1e-12);
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("flow energy bounds the resistance from above") {
    // two-vertex half-tile st-flow = the edge itself, and sampled flows
    const ModelParams p(0.75, 20.0, 500.0);
    const auto g = sample_graph(p, SampleMode::poissonized(), 2);
    const auto tiling = Tiling::build(p, Tiling::calibrate_c(p));
    const TileMembership m(g, tiling);
    const auto info = components_and_center(g);
    REQUIRE(info.center);
    int checked = 0;
    CounterRng rng(6);
    for (int trial = 0; trial < 4000 && checked < 30; ++trial) {
        const auto s = static_cast<VertexId>(rng.below(g.num_vertices()));
        const auto t = static_cast<VertexId>(rng.below(g.num_vertices()));
        if (s == t || info.components.label[s] != *info.center || info.components.label[t] != *info.center) {
            continue;
        }
        try {
            const Flow f = st_flow(g.graph, tiling, m, s, t);
            CHECK(energy(f) >= effective_resistance(g.graph, s, t) - 1e-8);
            ++checked;
        } catch (const EmptyHalfTile&) {
        }
    }
    CHECK(checked >= 10);
}
