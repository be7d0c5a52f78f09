#include <hyperwalk/flows.hpp>

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>

namespace hyperwalk {

void Flow::add(VertexId u, VertexId v, double value) {
    if (u == v || !graph_->has_edge(u, v)) {
        throw InternalError(fmt::format("flow: {}-{} is not an edge", u, v));
    }
    if (value == 0.0) {
        return;
    }
    const bool forward = u < v;
    const auto k = forward ? key(u, v) : key(v, u);
    auto [it, inserted] = values_.try_emplace(k, 0.0);
    it->second += forward ? value : -value;
    if (it->second == 0.0) {
        values_.erase(it);
    }
}

double Flow::operator()(VertexId u, VertexId v) const {
    const bool forward = u < v;
    const auto it = values_.find(forward ? key(u, v) : key(v, u));
    if (it == values_.end()) {
        return 0.0;
    }
    return forward ? it->second : -it->second;
}

std::vector<std::pair<Edge, double>> Flow::entries() const {
    std::vector<std::pair<Edge, double>> out;
    out.reserve(values_.size());
    for (const auto& [k, val] : values_) {
        out.push_back({{static_cast<VertexId>(k >> 32), static_cast<VertexId>(k & 0xffffffffu)}, val});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> Flow::net_outflow() const {
    std::vector<double> out(graph_->num_vertices(), 0.0);
    for (const auto& [e, val] : entries()) {
        out[e.first] += val;
        out[e.second] -= val;
    }
    return out;
}

Flow& Flow::operator+=(const Flow& other) {
    if (graph_ != other.graph_) {
        throw InvalidArgument("flow: cannot add flows on different graphs");
    }
    for (const auto& [k, val] : other.values_) {
        auto [it, inserted] = values_.try_emplace(k, 0.0);
        it->second += val;
        if (it->second == 0.0) {
            values_.erase(it);
        }
    }
    return *this;
}

Flow& Flow::operator*=(double factor) {
    if (factor == 0.0) {
        values_.clear();
        return *this;
    }
    for (auto& kv : values_) {
        kv.second *= factor;
    }
    return *this;
}

std::string Flow::to_csv() const {
    std::string out = "u,v,value\n";
    for (const auto& [e, val] : entries()) {
        out += fmt::format("{},{},{:.17g}\n", e.first, e.second, val);
    }
    return out;
}

Flow operator+(Flow a, const Flow& b) {
    a += b;
    return a;
}

Flow operator-(Flow a) {
    a *= -1.0;
    std::swap(a.sources, a.sinks);
    return a;
}

double energy(const Flow& f) {
    double total = 0.0;
    for (const auto& [e, val] : f.entries()) {
        total += val * val;
    }
    return total;
}

namespace {

bool all_close(const std::vector<double>& xs, double tol) {
    if (xs.empty()) {
        return true;
    }
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi - *lo <= tol;
}

} // namespace

FlowReport validate_flow(const Flow& f, double tol) {
    const auto out = f.net_outflow();
    std::vector<std::uint8_t> terminal(out.size(), 0);
    std::vector<double> source_out;
    std::vector<double> sink_in;
    FlowReport rep;
    for (VertexId s : f.sources) {
        terminal[s] = 1;
        source_out.push_back(out[s]);
        rep.strength += out[s];
    }
    for (VertexId t : f.sinks) {
        terminal[t] = 1;
        sink_in.push_back(-out[t]);
    }
    for (std::size_t v = 0; v < out.size(); ++v) {
        if (!terminal[v]) {
            rep.max_node_residual = std::max(rep.max_node_residual, std::fabs(out[v]));
        }
    }
    rep.energy = energy(f);
    rep.balanced = all_close(source_out, tol) && all_close(sink_in, tol);
    return rep;
}

namespace {

std::vector<VertexId> to_vector(std::span<const VertexId> s) { return {s.begin(), s.end()}; }

std::size_t nonempty_count(const TileMembership& members, const HalfTileId& h) {
    const std::size_t k = members.count(h);
    if (k == 0) {
        throw EmptyHalfTile(fmt::format("half-tile {} holds no vertex", to_string(h)));
    }
    return k;
}

// Every u in `from` sends `value` to every v in `to`.
void connect_all(Flow& f, std::span<const VertexId> from, std::span<const VertexId> to, double value) {
    for (VertexId u : from) {
        for (VertexId v : to) {
            f.add(u, v, value);
        }
    }
}

TileId ancestor_at(const Tiling& tiling, TileId t, int level) {
    while (t.level > level) {
        t = tiling.parent(t);
    }
    return t;
}

HalfTileId half_ancestor_at(const Tiling& tiling, HalfTileId h, int level) {
    while (h.tile.level > level) {
        h = tiling.parent_half(h.tile);
    }
    return h;
}

// Moves the flow sitting evenly on the vertices of `from` down the lineage
// until it sits evenly on the vertices of `to` (an ancestor half-tile).
void route_down(Flow& f, const Tiling& tiling, const TileMembership& members, HalfTileId from, const HalfTileId& to) {
    while (from != to) {
        const HalfTileId twin = tiling.twin(from);
        const double tile_count = static_cast<double>(members.count(from.tile));
        const double half_count = static_cast<double>(members.count(from));
        connect_all(f, members.members(from), members.members(twin), 1.0 / (tile_count * half_count));
        const HalfTileId parent = tiling.parent_half(from.tile);
        const double parent_count = static_cast<double>(members.count(parent));
        const double radial = 1.0 / (tile_count * parent_count);
        connect_all(f, members.members(from), members.members(parent), radial);
        connect_all(f, members.members(twin), members.members(parent), radial);
        from = parent;
    }
}

} // namespace

Flow source_sink_flow(const Graph& g, const TileMembership& members, VertexId v, FlowDirection direction) {
    if (v >= g.num_vertices()) {
        throw InvalidArgument(fmt::format("flow: vertex {} out of range", v));
    }
    const HalfTileId h = members.half_tile_of(v);
    const auto in_half = members.members(h);
    const double value = 1.0 / static_cast<double>(nonempty_count(members, h));
    Flow f(g);
    std::vector<VertexId> others;
    for (VertexId u : in_half) {
        if (u == v) {
            continue;
        }
        others.push_back(u);
        if (direction == FlowDirection::source) {
            f.add(v, u, value);
        } else {
            f.add(u, v, value);
        }
    }
    if (direction == FlowDirection::source) {
        f.sources = {v};
        f.sinks = std::move(others);
    } else {
        f.sources = std::move(others);
        f.sinks = {v};
    }
    return f;
}

Flow half_tile_flow(const Graph& g, const Tiling& tiling, const TileMembership& members, const HalfTileId& Hs,
                    const HalfTileId& Ht) {
    if (!tiling.valid(Hs.tile) || !tiling.valid(Ht.tile)) {
        throw InvalidArgument("flow: half-tile outside the tiling");
    }
    Flow f(g);
    f.sources = to_vector(members.members(Hs));
    f.sinks = to_vector(members.members(Ht));
    if (Hs == Ht) {
        return f;
    }

    // Highest level at which the two lineages share a tile, if any.
    int common = -1;
    for (int m = std::min(Hs.tile.level, Ht.tile.level); m >= 0; --m) {
        if (ancestor_at(tiling, Hs.tile, m) == ancestor_at(tiling, Ht.tile, m)) {
            common = m;
            break;
        }
    }
    const int meet = std::max(common, 0);
    const HalfTileId Hs_meet = half_ancestor_at(tiling, Hs, meet);
    const HalfTileId Ht_meet = half_ancestor_at(tiling, Ht, meet);

    std::vector<HalfTileId> needed;
    for (const HalfTileId& start : {Hs, Ht}) {
        const HalfTileId& stop = start == Hs ? Hs_meet : Ht_meet;
        for (HalfTileId h = start; h != stop; h = tiling.parent_half(h.tile)) {
            needed.push_back(h);
            needed.push_back(tiling.twin(h));
        }
    }
    needed.push_back(Hs_meet);
    needed.push_back(Ht_meet);
    if (common < 0) {
        needed.push_back(tiling.twin(Hs_meet));
        needed.push_back(tiling.twin(Ht_meet));
    }
    for (const auto& h : needed) {
        nonempty_count(members, h);
    }

    route_down(f, tiling, members, Hs, Hs_meet);
    if (Hs_meet != Ht_meet) {
        const double value = 1.0 / (static_cast<double>(members.count(Hs_meet)) *
                                    static_cast<double>(members.count(Ht_meet)));
        connect_all(f, members.members(Hs_meet), members.members(Ht_meet), value);
    }
    // The sink side is the source-side construction reversed.
    Flow back(g);
    route_down(back, tiling, members, Ht, Ht_meet);
    back *= -1.0;
    f += back;
    return f;
}

Flow st_flow(const Graph& g, const Tiling& tiling, const TileMembership& members, VertexId s, VertexId t) {
    if (s == t) {
        throw SameVertex(fmt::format("flow: s = t = {}", s));
    }
    if (s >= g.num_vertices() || t >= g.num_vertices()) {
        throw InvalidArgument("flow: vertex out of range");
    }
    Flow f = source_sink_flow(g, members, s, FlowDirection::source);
    f += half_tile_flow(g, tiling, members, members.half_tile_of(s), members.half_tile_of(t));
    f += source_sink_flow(g, members, t, FlowDirection::sink);
    f.sources = {s};
    f.sinks = {t};
    return f;
}

CommuteLevels commute_levels(const Tiling& tiling, double r_w, double C) {
    const auto& params = tiling.params();
    const double R = params.R();
    const double a = params.alpha();
    const double rho = rho_threshold(params, C);
    const double lower = (1.0 - 1.0 / (2.0 * a)) * R;
    if (!(r_w >= lower && r_w < rho)) {
        throw InvalidArgument(
            fmt::format("commute flow: r_w = {} outside [{}, rho = {})", r_w, lower, rho));
    }
    const auto ell = last_level_within(tiling, rho);
    CommuteLevels lv{};
    lv.ell = *ell;
    lv.ell_w = tiling.level_of(r_w);
    int lp = lv.ell + 1;
    for (int i = 0; i <= tiling.top(); ++i) {
        if (R - tiling.h(i) <= (2.0 * a - 1.0) * (R - r_w)) {
            lp = std::min(lp, i);
            break;
        }
    }
    lv.ell_prime_w = lp;
    const double target = theta_r_exact(r_w, tiling.h(lp), R);
    lv.k_w = 0;
    for (int k = 0; k <= lp; ++k) {
        const double hk = tiling.h(lp - k);
        if (theta_r_exact(hk, hk, R) <= target) {
            lv.k_w = k;
        }
    }
    if (!(r_w <= tiling.h(lp)) || lv.ell_w > lp || lp > lv.ell + 1 || lv.k_w > lp - lv.ell_w) {
        throw InternalError(fmt::format("commute flow: inconsistent levels l={} l_w={} l'_w={} k_w={} at r_w={}",
                                        lv.ell, lv.ell_w, lp, lv.k_w, r_w));
    }
    return lv;
}

CommuteFlow commute_flow(const HrgGraph& g, const Tiling& tiling, const TileMembership& members, const PolarPoint& w,
                         const CommuteOptions& options) {
    const CommuteLevels lv = commute_levels(tiling, w.r(), options.C);
    const int base = lv.ell_prime_w - lv.k_w;
    const HalfTileId Hw = tiling.half_at(base, w.theta());

    if (options.check_faulty) {
        const OccupancyReport report(members, tiling, options.C, options.Cprime);
        const auto faulty = report.faulty_within(report.rho());
        if (!faulty.empty()) {
            throw InvalidArgument(fmt::format("commute flow: tile {} inside B_O(rho) is faulty",
                                              to_string(faulty.front())));
        }
    }

    // Half-tiles under Hw at depth p occupy slots [slot * 2^p, (slot + 1) * 2^p).
    auto half_at_depth = [&](int p, std::uint64_t offset) {
        const std::uint64_t slot = (Hw.slot() << p) + offset;
        return HalfTileId{TileId{base + p, slot / 2}, static_cast<int>(slot % 2)};
    };
    for (int p = 0; p <= lv.k_w; ++p) {
        for (std::uint64_t q = 0; q < (std::uint64_t{1} << p); ++q) {
            nonempty_count(members, half_at_depth(p, q));
        }
    }

    auto aug = std::make_shared<const HrgGraph>(add_vertex(g, w));
    const auto wid = static_cast<VertexId>(g.num_vertices());
    CommuteFlow out{aug, wid, lv, Hw, Flow(aug->graph)};
    Flow& f = out.flow;
    f.sources = {wid};
    f.sinks = to_vector(members.members(Hw));

    const int k = lv.k_w;
    const double share = std::ldexp(1.0, -k);
    for (std::uint64_t q = 0; q < (std::uint64_t{1} << k); ++q) {
        const HalfTileId h = half_at_depth(k, q);
        const double value = share / static_cast<double>(members.count(h));
        for (VertexId v : members.members(h)) {
            f.add(wid, v, value);
        }
    }
    // Tiles at depth s hold 2^{1-s} units, a = 2^{-s} on each half after the
    // fan-out or the previous gathering step.
    for (int s = k; s >= 1; --s) {
        const double a = std::ldexp(1.0, -s);
        for (std::uint64_t q = 0; q < (std::uint64_t{1} << s); q += 2) {
            const HalfTileId h0 = half_at_depth(s, q);
            const HalfTileId h1 = tiling.twin(h0);
            const double n0 = static_cast<double>(members.count(h0));
            const double n1 = static_cast<double>(members.count(h1));
            const double nt = n0 + n1;
            connect_all(f, members.members(h0), members.members(h1), (a / n0 - a / n1) / nt);
            const HalfTileId parent = tiling.parent_half(h0.tile);
            const double radial = 2.0 * a / (nt * static_cast<double>(members.count(parent)));
            connect_all(f, members.members(h0), members.members(parent), radial);
            connect_all(f, members.members(h1), members.members(parent), radial);
        }
    }
    return out;
}

} // namespace hyperwalk
