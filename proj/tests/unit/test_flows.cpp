#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/flows.hpp>
#include <hyperwalk/rng.hpp>

#include "oracles.hpp"

using namespace hyperwalk;

namespace {

// Places `count` points spread over a half-tile at a fixed fraction of its
// radial range.
void fill_half(std::vector<PolarPoint>& pts, const Tiling& t, const HalfTileId& h, int count) {
    const double lo = t.h(h.tile.level - 1);
    const double hi = std::min(t.h(h.tile.level), t.params().R());
    const auto [a, b] = t.interval(h);
    for (int i = 0; i < count; ++i) {
        const double frac = (i + 0.5) / count;
        pts.emplace_back(lo + (hi - lo) * (0.3 + 0.4 * frac), a + (b - a) * frac);
    }
}

struct Fixture {
    ModelParams params{0.75, 1.0, 1000.0};
    Tiling tiling = Tiling::build(params, 2.0);
    HalfTileId lower{{1, 0}, 1};  // 2 vertices
    HalfTileId lower_twin{{1, 0}, 0};  // 3
    HalfTileId root{{0, 0}, 0};  // 4, parent half of tile (1,0)
    HalfTileId root_twin{{0, 0}, 1};  // 1
    HalfTileId far{{0, 2}, 0};  // 2
    HalfTileId far_twin{{0, 2}, 1};  // 1
    HrgGraph g = make_graph();

    HrgGraph make_graph() const {
        std::vector<PolarPoint> pts;
        fill_half(pts, tiling, lower, 2);
        fill_half(pts, tiling, lower_twin, 3);
        fill_half(pts, tiling, root, 4);
        fill_half(pts, tiling, root_twin, 1);
        fill_half(pts, tiling, far, 2);
        fill_half(pts, tiling, far_twin, 1);
        return build_graph_naive(params, pts);
    }
};

Graph four_cycle() { return cycle_graph(4); }

double max_abs(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) {
        m = std::max(m, std::fabs(x));
    }
    return m;
}

} // namespace

TEST_CASE("energy of small flows") {
    const Graph p2 = path_graph(2);
    Flow zero(p2);
    CHECK(energy(zero) == 0.0);
    Flow one(p2);
    one.add(0, 1, 1.0);
    CHECK(energy(one) == 1.0);
    const Graph c4 = four_cycle();
    Flow split(c4);
    split.add(0, 1, 0.5);
    split.add(1, 2, 0.5);
    split.add(0, 3, 0.5);
    split.add(3, 2, 0.5);
    CHECK(energy(split) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::resistance_by_pinv(c4)(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flow storage is antisymmetric and restricted to edges") {
    const Graph c4 = four_cycle();
    Flow f(c4);
    f.add(2, 1, 0.25);
    CHECK(f(2, 1) == 0.25);
    CHECK(f(1, 2) == -0.25);
    f.add(1, 2, 0.25);
    CHECK(f.support_size() == 0);
    CHECK_THROWS_AS(f.add(0, 2, 1.0), InternalError);
    CHECK_THROWS_AS(f.add(1, 1, 1.0), InternalError);
    f.add(3, 0, 0.5);
    const auto e = f.entries();
    REQUIRE(e.size() == 1);
    CHECK(e[0].first == Edge{0, 3});
    CHECK(e[0].second == -0.5);
    CHECK(f.to_csv() == "u,v,value\n0,3,-0.5\n");
}

TEST_CASE("validation reports strength, residual and balance") {
    const Graph p2 = path_graph(2);
    Flow one(p2);
    one.add(0, 1, 1.0);
    one.sources = {0};
    one.sinks = {1};
    auto rep = validate_flow(one);
    CHECK(rep.max_node_residual == 0.0);
    CHECK(rep.strength == 1.0);
    CHECK(rep.balanced);

    const Graph p3 = path_graph(3);
    Flow leaky(p3);
    leaky.add(0, 1, 1.0);
    leaky.add(1, 2, 0.75);
    leaky.sources = {0};
    leaky.sinks = {2};
    rep = validate_flow(leaky);
    CHECK(rep.max_node_residual == doctest::Approx(0.25));
    CHECK(rep.energy == doctest::Approx(1.5625));

    const Graph star = star_graph(2);
    Flow uneven(star);
    uneven.add(1, 0, 0.7);
    uneven.add(2, 0, 0.3);
    uneven.sources = {1, 2};
    uneven.sinks = {0};
    rep = validate_flow(uneven);
    CHECK(rep.strength == doctest::Approx(1.0));
    CHECK_FALSE(rep.balanced);
}

TEST_CASE("source and sink flows inside a half-tile") {
    Fixture fx;
    const TileMembership m(fx.g, fx.tiling);
    REQUIRE(m.count(fx.root) == 4);
    const VertexId s = m.members(fx.root)[1];
    const Flow f = source_sink_flow(fx.g.graph, m, s, FlowDirection::source);
    CHECK(f.support_size() == 3);
    for (VertexId u : m.members(fx.root)) {
        if (u != s) {
            CHECK(f(s, u) == 0.25);
        }
    }
    CHECK(f.net_outflow()[s] == doctest::Approx(0.75));
    CHECK(energy(f) == doctest::Approx(3.0 / 16.0));
    const auto rep = validate_flow(f);
    CHECK(rep.max_node_residual == 0.0);
    CHECK(rep.strength == doctest::Approx(0.75));

    const Flow sink = source_sink_flow(fx.g.graph, m, s, FlowDirection::sink);
    for (const auto& [e, val] : sink.entries()) {
        CHECK(val == -f(e.first, e.second));
    }

    const VertexId lone = m.members(fx.root_twin)[0];
    CHECK(source_sink_flow(fx.g.graph, m, lone, FlowDirection::source).support_size() == 0);
}

TEST_CASE("half-tile flow cases on a hand-built graph") {
    Fixture fx;
    const auto& g = fx.g.graph;
    const TileMembership m(fx.g, fx.tiling);
    REQUIRE(m.count(fx.lower) == 2);
    REQUIRE(m.count(fx.lower_twin) == 3);
    REQUIRE(m.count(fx.far) == 2);
    REQUIRE(fx.tiling.parent_half(fx.lower.tile) == fx.root);

    // lower -> root: angular 6 edges of 1/(5*2), radial 20 edges of 1/(5*4)
    const double down = 6 * std::pow(1.0 / 10, 2) + 20 * std::pow(1.0 / 20, 2);

    SUBCASE("identical half-tiles give the zero flow") {
        CHECK(half_tile_flow(g, fx.tiling, m, fx.lower, fx.lower).support_size() == 0);
    }
    SUBCASE("twins with counts (2, 3)") {
        const Flow f = half_tile_flow(g, fx.tiling, m, fx.lower, fx.lower_twin);
        CHECK(f.support_size() == 6);
        for (VertexId u : m.members(fx.lower)) {
            for (VertexId v : m.members(fx.lower_twin)) {
                CHECK(f(u, v) == doctest::Approx(1.0 / 6).epsilon(1e-15));
            }
        }
        const auto rep = validate_flow(f);
        CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rep.balanced);
        CHECK(rep.energy == doctest::Approx(1.0 / 6));
    }
    SUBCASE("no common ancestor") {
        const Flow f = half_tile_flow(g, fx.tiling, m, fx.lower, fx.far);
        const auto rep = validate_flow(f);
        CHECK(rep.max_node_residual <= 1e-12);
        CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.balanced);
        CHECK(rep.energy == doctest::Approx(down + 8 * std::pow(1.0 / 8, 2)).epsilon(1e-12));
    }
    SUBCASE("target on the source's ray") {
        const Flow f = half_tile_flow(g, fx.tiling, m, fx.lower, fx.root);
        const auto rep = validate_flow(f);
        CHECK(rep.max_node_residual <= 1e-12);
        CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.balanced);
        CHECK(rep.energy == doctest::Approx(down).epsilon(1e-12));
        const Flow back = half_tile_flow(g, fx.tiling, m, fx.root, fx.lower);
        CHECK(back.support_size() == f.support_size());
        for (const auto& [e, val] : f.entries()) {
            CHECK(back(e.first, e.second) == doctest::Approx(-val).epsilon(1e-14));
        }
    }
    SUBCASE("shared ancestor, split at its twin halves") {
        const Flow f = half_tile_flow(g, fx.tiling, m, fx.lower, fx.root_twin);
        const auto rep = validate_flow(f);
        CHECK(rep.max_node_residual <= 1e-12);
        CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.energy == doctest::Approx(down + 4 * std::pow(1.0 / 4, 2)).epsilon(1e-12));
    }
    SUBCASE("an empty half-tile on the route is reported") {
        const HalfTileId empty{{0, 4}, 0};
        REQUIRE(m.count(empty) == 0);
        CHECK_THROWS_AS(half_tile_flow(g, fx.tiling, m, fx.lower, empty), EmptyHalfTile);
        const HalfTileId deep{{2, 0}, 1};
        CHECK_THROWS_AS(half_tile_flow(g, fx.tiling, m, deep, fx.root), EmptyHalfTile);
    }
}

TEST_CASE("st-flow inside a two-vertex half-tile is the single edge") {
    Fixture fx;
    const TileMembership m(fx.g, fx.tiling);
    const auto pair = m.members(fx.lower);
    const Flow f = st_flow(fx.g.graph, fx.tiling, m, pair[0], pair[1]);
    CHECK(f.support_size() == 1);
    CHECK(f(pair[0], pair[1]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(energy(f) == doctest::Approx(1.0));
    CHECK_THROWS_AS(st_flow(fx.g.graph, fx.tiling, m, pair[0], pair[0]), SameVertex);
}

namespace {

// True when both halves of every tile on v's lineage hold a vertex, so any
// st-flow between two such vertices has all its half-tiles occupied.
bool lineage_occupied(const Tiling& tiling, const TileMembership& m, VertexId v) {
    HalfTileId h = m.half_tile_of(v);
    while (true) {
        if (m.count(h) == 0 || m.count(tiling.twin(h)) == 0) {
            return false;
        }
        if (h.tile.level == 0) {
            return true;
        }
        h = tiling.parent_half(h.tile);
    }
}

} // namespace

TEST_CASE("st-flows on sampled graphs are unit flows above the effective resistance") {
    int tested = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const ModelParams p(0.75, 20.0, 500.0);
        const auto g = sample_graph(p, SampleMode::poissonized(), seed);
        const auto tiling = Tiling::build(p, Tiling::calibrate_c(p));
        const TileMembership m(g, tiling);
        const auto info = components_and_center(g);
        REQUIRE(info.center);
        const auto sub = component_subgraph(g.graph, info.components, *info.center);
        std::vector<VertexId> good;  // local ids in the center component
        for (VertexId a = 0; a < sub.graph.num_vertices(); ++a) {
            if (lineage_occupied(tiling, m, sub.to_parent[a])) {
                good.push_back(a);
            }
        }
        REQUIRE(good.size() >= 10);
        const auto reff = oracle::resistance_by_pinv(sub.graph);
        CounterRng rng(seed * 101);
        for (int trial = 0; trial < 25; ++trial) {
            const VertexId a = good[rng.below(good.size())];
            const VertexId b = good[rng.below(good.size())];
            if (a == b) {
                continue;
            }
            const VertexId s = sub.to_parent[a];
            const VertexId t = sub.to_parent[b];
            const Flow f1 = source_sink_flow(g.graph, m, s, FlowDirection::source);
            const Flow f2 = half_tile_flow(g.graph, tiling, m, m.half_tile_of(s), m.half_tile_of(t));
            const Flow f3 = source_sink_flow(g.graph, m, t, FlowDirection::sink);
            const Flow f = st_flow(g.graph, tiling, m, s, t);
            const auto rep = validate_flow(f);
            CHECK(rep.max_node_residual <= 1e-9);
            CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(rep.energy - reff(a, b) >= -1e-8);
            // constituents obey the node law away from their terminals
            CHECK(validate_flow(f1).max_node_residual <= 1e-9);
            const auto mid = validate_flow(f2);
            CHECK(mid.max_node_residual <= 1e-9);
            CHECK(mid.balanced);
            if (m.half_tile_of(s) != m.half_tile_of(t)) {
                CHECK(mid.strength == doctest::Approx(1.0).epsilon(1e-9));
            }
            CHECK(validate_flow(f3).max_node_residual <= 1e-9);
            const Flow f12 = f1 + f2;
            CHECK(energy(f12) <= 2 * (energy(f1) + energy(f2)) + 1e-12);
            CHECK(energy(f12 + f3) <= 2 * (energy(f12) + energy(f3)) + 1e-12);
            CHECK(max_abs((f12 + f3 + (-f)).net_outflow()) <= 1e-12);
            ++tested;
        }
    }
    MESSAGE("st-flows checked: " << tested);
    CHECK(tested >= 60);
}

TEST_CASE("half_at agrees with locate") {
    const ModelParams p(0.7, 1.0, 5000.0);
    const auto t = Tiling::build(p, 1.0);
    CounterRng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const PolarPoint q(p.R() * rng.uniform(), kTwoPi * rng.uniform());
        CHECK(t.half_at(t.level_of(q.r()), q.theta()) == t.locate(q));
    }
    CHECK_THROWS_AS(t.half_at(t.top() + 1, 0.0), InvalidArgument);
}

namespace {

// A desk-sized model where rho(C) leaves room for added vertices: a small C
// pushes rho(C) above the lower radius (1 - 1/(2 alpha)) R.
struct CommuteSetup {
    ModelParams params{0.75, 1.0, 20000.0};
    double C = 0.05;
    Tiling tiling = Tiling::build(params, Tiling::calibrate_c(params));

    double lower() const { return (1.0 - 1.0 / (2.0 * params.alpha())) * params.R(); }
    double rho() const { return rho_threshold(params, C); }
};

// Denser model (large nu) so the fan-out half-tiles are mostly occupied.
struct DenseCommuteSetup {
    ModelParams params{0.75, 50.0, 5000.0};
    double C = 1.0;
    Tiling tiling = Tiling::build(params, Tiling::calibrate_c(params));

    double lower() const { return (1.0 - 1.0 / (2.0 * params.alpha())) * params.R(); }
    double rho() const { return std::min(rho_threshold(params, C), params.R()); }
};

} // namespace

TEST_CASE("commute levels") {
    CommuteSetup cs;
    const double R = cs.params.R();
    const double a = cs.params.alpha();
    REQUIRE(cs.rho() > cs.lower());
    CHECK_THROWS_AS(commute_levels(cs.tiling, cs.lower() - 0.1, cs.C), InvalidArgument);
    CHECK_THROWS_AS(commute_levels(cs.tiling, cs.rho(), cs.C), InvalidArgument);

    CounterRng rng(77);
    double lo_ratio = 1e300;
    double hi_ratio = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double r = cs.lower() + (cs.rho() - cs.lower()) * rng.uniform();
        const auto lv = commute_levels(cs.tiling, r, cs.C);
        const double hp = cs.tiling.h(lv.ell_prime_w);
        CHECK(r <= hp);
        CHECK(lv.ell_w <= lv.ell_prime_w);
        CHECK(lv.ell_prime_w <= lv.ell + 1);
        CHECK(lv.k_w >= 0);
        CHECK(lv.k_w <= lv.ell_prime_w - lv.ell_w);
        // the defining inequalities, re-evaluated
        const double hk = cs.tiling.h(lv.ell_prime_w - lv.k_w);
        CHECK(theta_r_exact(hk, hk, R) <= theta_r_exact(r, hp, R));
        if (lv.k_w < lv.ell_prime_w) {
            const double hk1 = cs.tiling.h(lv.ell_prime_w - lv.k_w - 1);
            CHECK(theta_r_exact(hk1, hk1, R) > theta_r_exact(r, hp, R));
        }
        if (lv.ell_prime_w <= lv.ell) {
            CHECK(R - hp <= (2 * a - 1) * (R - r));
        }
        if (lv.ell_prime_w > 0 && lv.ell_prime_w <= lv.ell) {
            CHECK(R - cs.tiling.h(lv.ell_prime_w - 1) > (2 * a - 1) * (R - r));
        }
        if (r > cs.lower()) {
            const double ratio = std::ldexp(std::exp(R - hp), lv.k_w) / std::exp(0.5 * (R - r) + 0.5 * (R - hp));
            lo_ratio = std::min(lo_ratio, ratio);
            hi_ratio = std::max(hi_ratio, ratio);
        }
    }
    MESSAGE("2^k e^{R-h} / e^{(R-r)/2 + (R-h)/2} in [" << lo_ratio << ", " << hi_ratio << "]");
    CHECK(lo_ratio >= 1.0 / 64);
    CHECK(hi_ratio <= 64.0);

    // just below rho the first branch wins whenever the second would be later
    const double r = std::nextafter(cs.rho(), 0.0);
    const auto lv = commute_levels(cs.tiling, r, cs.C);
    if ((2 * a - 1) * (R - r) < R - cs.tiling.h(lv.ell + 1)) {
        CHECK(lv.ell_prime_w == lv.ell + 1);
    }
}

namespace {

// Value of the commute flow on every pair it touches, rebuilt from the
// half-tile counts. Descendants of Hw are found by angle containment.
std::map<Edge, double> expected_commute_values(const CommuteFlow& cf, const Tiling& tiling, const TileMembership& m) {
    std::map<Edge, double> out;
    auto put = [&](VertexId u, VertexId v, double x) {
        if (u > v) {
            std::swap(u, v);
            x = -x;
        }
        if (x != 0.0) {
            out[{u, v}] += x;
        }
    };
    const auto [lo, hi] = tiling.interval(cf.Hw);
    const double slack = 1e-9 * (hi - lo);
    auto halves_below = [&](int level) {
        std::vector<HalfTileId> hs;
        for (std::uint64_t slot = 0; slot < 2 * tiling.sectors(level); ++slot) {
            const HalfTileId h{{level, slot / 2}, static_cast<int>(slot % 2)};
            const auto [a, b] = tiling.interval(h);
            if (a >= lo - slack && b <= hi + slack) {
                hs.push_back(h);
            }
        }
        return hs;
    };
    const int base = cf.Hw.tile.level;
    const int k = cf.levels.k_w;
    const auto bottom = halves_below(base + k);
    for (const auto& h : bottom) {
        for (VertexId v : m.members(h)) {
            put(cf.w, v, 1.0 / static_cast<double>(bottom.size()) / static_cast<double>(m.count(h)));
        }
    }
    for (int s = 1; s <= k; ++s) {
        const double a = std::pow(0.5, s);
        for (const auto& h : halves_below(base + s)) {
            if (h.side != 0) {
                continue;
            }
            const HalfTileId h2 = tiling.twin(h);
            const double n1 = static_cast<double>(m.count(h));
            const double n2 = static_cast<double>(m.count(h2));
            const double nt = n1 + n2;
            const HalfTileId& small = n1 < n2 ? h : h2;
            const HalfTileId& large = n1 < n2 ? h2 : h;
            const double ns = std::min(n1, n2);
            const double nl = std::max(n1, n2);
            for (VertexId u : m.members(small)) {
                for (VertexId v : m.members(large)) {
                    put(u, v, (a / ns - a / nl) / nt);
                }
            }
            const HalfTileId parent = tiling.parent_half(h.tile);
            for (const HalfTileId& part : {h, h2}) {
                for (VertexId u : m.members(part)) {
                    for (VertexId v : m.members(parent)) {
                        put(u, v, 2.0 * a / nt / static_cast<double>(m.count(parent)));
                    }
                }
            }
        }
    }
    return out;
}

// Spearman rank correlation (no ties expected).
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            r[idx[i]] = static_cast<double>(i);
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

} // namespace

TEST_CASE("commute flows on a sampled graph") {
    DenseCommuteSetup cs;
    const auto g = sample_graph(cs.params, SampleMode::poissonized(), 3);
    const TileMembership m(g, cs.tiling);
    CommuteOptions opt;
    opt.C = cs.C;
    opt.check_faulty = false;

    CounterRng rng(99);
    std::vector<double> energies;
    std::vector<double> trend;
    int by_k[8] = {};
    int empty = 0;
    for (int i = 0; i < 400 && energies.size() < 100; ++i) {
        const double r = cs.lower() + (cs.rho() - cs.lower()) * rng.uniform();
        const PolarPoint w(r, kTwoPi * rng.uniform());
        CommuteFlow cf = [&] {
            try {
                return std::optional<CommuteFlow>(commute_flow(g, cs.tiling, m, w, opt));
            } catch (const EmptyHalfTile&) {
                return std::optional<CommuteFlow>();
            }
        }().value_or(CommuteFlow{nullptr, 0, {}, {}, Flow(g.graph)});
        if (!cf.graph) {
            ++empty;
            continue;
        }
        REQUIRE(cf.w == g.num_vertices());
        REQUIRE(cf.graph->num_vertices() == g.num_vertices() + 1);
        CHECK(cf.Hw == cs.tiling.half_at(cf.levels.ell_prime_w - cf.levels.k_w, w.theta()));
        const auto rep = validate_flow(cf.flow);
        CHECK(rep.max_node_residual <= 1e-9);
        CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.balanced);
        const auto expected = expected_commute_values(cf, cs.tiling, m);
        const auto got = cf.flow.entries();
        CHECK(got.size() == expected.size());
        for (const auto& [e, val] : got) {
            const auto it = expected.find(e);
            REQUIRE(it != expected.end());
            CHECK(val == doctest::Approx(it->second).epsilon(1e-12));
        }
        if (cf.levels.k_w == 0) {
            for (VertexId v : m.members(cf.Hw)) {
                CHECK(cf.flow(cf.w, v) == doctest::Approx(1.0 / static_cast<double>(m.count(cf.Hw))));
            }
        }
        ++by_k[std::min(cf.levels.k_w, 7)];
        energies.push_back(rep.energy);
        const double a = cs.params.alpha();
        trend.push_back(std::exp(-2 * a * (1 - a) * (cs.params.R() - r)));
    }
    MESSAGE("commute flows built: " << energies.size() << " (empty half-tile skips " << empty << "), k_w counts 0:"
                                    << by_k[0] << " 1:" << by_k[1] << " 2:" << by_k[2] << " 3+:"
                                    << by_k[3] + by_k[4] + by_k[5] + by_k[6] + by_k[7]);
    REQUIRE(energies.size() >= 50);
    CHECK(by_k[0] + by_k[1] < static_cast<int>(energies.size()));
    const double rho_s = spearman(energies, trend);
    MESSAGE("Spearman(E(f_w), e^{-2a(1-a)(R-r_w)}) = " << rho_s);
    CHECK(rho_s > 0.0);
}

TEST_CASE("commute flow refuses faulty tiles when asked to check") {
    DenseCommuteSetup cs;
    const auto g = sample_graph(cs.params, SampleMode::poissonized(), 4);
    const TileMembership m(g, cs.tiling);
    const OccupancyReport rep(m, cs.tiling, cs.C, kDefaultCprime);
    const PolarPoint w(0.5 * (cs.lower() + cs.rho()), 1.0);
    CommuteOptions opt;
    opt.C = cs.C;
    if (!rep.faulty_within(rep.rho()).empty()) {
        CHECK_THROWS_AS(commute_flow(g, cs.tiling, m, w, opt), InvalidArgument);
    } else {
        CHECK_NOTHROW(commute_flow(g, cs.tiling, m, w, opt));
    }
    CHECK_THROWS_AS(commute_flow(g, cs.tiling, m, PolarPoint(cs.rho() + 0.1, 1.0), opt), InvalidArgument);
}
