#include <hyperwalk/tiling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>

namespace hyperwalk {

namespace {

constexpr double kLn2 = 0.69314718055994531;

double theta_diag(double h, double R) {
    return theta_r_exact(h, h, R);
}

// sup{h : theta_R(h, h) >= target}, by bisection starting at `from`.
double next_radius(double from, double target, double R) {
    double lo = from;
    double hi = from + 2.0;
    while (theta_diag(hi, R) >= target) {
        lo = hi;
        hi += 2.0;
        if (hi > 1e4) {
            throw InternalError("tiling: cannot bracket the next level radius");
        }
    }
    if (theta_diag(lo, R) < target) {
        throw InternalError("tiling: level radius bracket lost monotonicity");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (theta_diag(mid, R) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace

std::string to_string(const TileId& t) {
    return fmt::format("T({},{})", t.level, t.index);
}

std::string to_string(const HalfTileId& h) {
    return fmt::format("T({},{})/{}", h.tile.level, h.tile.index, h.side);
}

Tiling Tiling::build(const ModelParams& params, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument(fmt::format("tiling: c must be positive, got {}", c));
    }
    const double R = params.R();
    Tiling t(params, c);
    t.h_ = {0.0, 0.5 * R, 0.5 * (R + c)};
    const double root_angle = theta_diag(t.h_[2], R);
    t.n0_ = static_cast<std::uint64_t>(std::ceil(kTwoPi / root_angle));
    while (t.h_.back() < R) {
        const double prev = t.h_.back();
        t.h_.push_back(next_radius(prev, 0.5 * theta_diag(prev, R), R));
        if (t.h_.size() > 62) {
            throw InternalError("tiling: too many levels");
        }
    }
    return t;
}

double Tiling::calibrate_c(const ModelParams& params, double epsilon) {
    for (double c = 0.5; c <= 256.0; c *= 2.0) {
        if (build(params, c).validate_spacing(epsilon).spacing_ok) {
            return c;
        }
    }
    throw InvalidArgument("tiling: no c in {0.5, 1, ..., 256} passes the spacing check");
}

int Tiling::level_of(double r) const {
    if (!(r >= 0.0) || r > h(top())) {
        throw InvalidArgument(fmt::format("tiling: radius {} outside B_O(h_top = {})", r, h(top())));
    }
    // first level radius strictly above r
    const auto it = std::upper_bound(h_.begin() + 1, h_.end(), r);
    if (it == h_.end()) {
        return top();
    }
    return static_cast<int>(std::distance(h_.begin() + 1, it));
}

HalfTileId Tiling::locate(const PolarPoint& p) const {
    return half_at(level_of(p.r()), p.theta());
}

HalfTileId Tiling::half_at(int level, double theta) const {
    if (level < 0 || level > top()) {
        throw InvalidArgument(fmt::format("tiling: level {} outside [0, {}]", level, top()));
    }
    theta = canonical_angle(theta);
    const std::uint64_t halves = 2 * sectors(level);
    auto slot = static_cast<std::uint64_t>(std::floor(theta / kTwoPi * static_cast<double>(halves)));
    slot = std::min(slot, halves - 1);
    return HalfTileId{TileId{level, slot / 2}, static_cast<int>(slot % 2)};
}

bool Tiling::valid(const TileId& t) const {
    return t.level >= 0 && t.level <= top() && t.index < sectors(t.level);
}

TileId Tiling::parent(const TileId& t) const {
    if (t.level == 0) {
        return t;
    }
    return TileId{t.level - 1, t.index / 2};
}

HalfTileId Tiling::parent_half(const TileId& t) const {
    if (t.level == 0) {
        throw InvalidArgument("tiling: root tiles have no parent half-tile");
    }
    return HalfTileId{parent(t), static_cast<int>(t.index % 2)};
}

std::vector<TileId> Tiling::ancestors(const TileId& t) const {
    std::vector<TileId> out{t};
    TileId cur = t;
    while (cur.level > 0) {
        cur = parent(cur);
        out.push_back(cur);
    }
    return out;
}

Lineage Tiling::lineage(const TileId& t) const {
    if (!valid(t)) {
        throw InvalidArgument(fmt::format("tiling: invalid tile {}", to_string(t)));
    }
    Lineage l;
    l.parent = parent(t);
    l.children[0] = TileId{t.level + 1, 2 * t.index};
    l.children[1] = TileId{t.level + 1, 2 * t.index + 1};
    if (t.level > 0) {
        l.parent_half = parent_half(t);
    }
    l.ancestors = ancestors(t);
    return l;
}

std::pair<double, double> Tiling::interval(const TileId& t) const {
    const double a = angle(t.level);
    return {a * static_cast<double>(t.index), a * static_cast<double>(t.index + 1)};
}

std::pair<double, double> Tiling::interval(const HalfTileId& h) const {
    const double a = 0.5 * angle(h.tile.level);
    return {a * static_cast<double>(h.slot()), a * static_cast<double>(h.slot() + 1)};
}

SpacingReport Tiling::validate_spacing(double epsilon) const {
    const double R = params_.R();
    SpacingReport rep;
    rep.epsilon = epsilon;
    const int L = top();
    rep.spacing_slack.assign(static_cast<std::size_t>(L + 1), std::numeric_limits<double>::infinity());
    rep.angle_slack.assign(static_cast<std::size_t>(L + 1), std::numeric_limits<double>::infinity());
    rep.spacing_ok = true;
    rep.angle_ok = true;
    for (int i = 1; i <= L; ++i) {
        double worst = std::numeric_limits<double>::infinity();
        for (int j = i; j <= L; ++j) {
            worst = std::min(worst, epsilon - std::fabs(h(j) - h(i) - (j - i) * kLn2));
        }
        rep.spacing_slack[static_cast<std::size_t>(i)] = worst;
        rep.spacing_ok = rep.spacing_ok && worst >= 0.0;

        // |ln(2 e^{(R - 2h)/2} / theta_i)| <= eps / 2
        const double log_ratio = std::log(2.0) + 0.5 * (R - 2.0 * h(i)) - std::log(angle(i));
        const double slack = 0.5 * epsilon - std::fabs(log_ratio);
        rep.angle_slack[static_cast<std::size_t>(i)] = slack;
        rep.angle_ok = rep.angle_ok && slack >= 0.0;
    }
    return rep;
}

double rho_threshold(const ModelParams& params, double C) {
    if (!(C > 0.0)) {
        throw InvalidArgument("rho: C must be positive");
    }
    return params.R() - std::log(C * params.R() / params.nu()) / (1.0 - params.alpha());
}

double rho_prime_threshold(const ModelParams& params, double Cprime) {
    if (!(Cprime > 0.0)) {
        throw InvalidArgument("rho': C' must be positive");
    }
    return params.R() - std::log(2.0 * Cprime / params.nu()) / (1.0 - params.alpha());
}

std::optional<int> last_level_within(const Tiling& tiling, double radius) {
    if (radius < 0.0) {
        return std::nullopt;
    }
    int best = -1;
    for (int i = 0; i <= tiling.top(); ++i) {
        if (tiling.h(i) <= radius) {
            best = i;
        }
    }
    return best;
}

TileMembership::TileMembership(const HrgGraph& g, const Tiling& tiling) {
    const std::size_t m = g.num_vertices();
    const auto levels = static_cast<std::size_t>(tiling.top() + 1);
    location_.reserve(m);
    offsets_.resize(levels);
    members_.resize(levels);
    for (std::size_t lv = 0; lv < levels; ++lv) {
        offsets_[lv].assign(2 * tiling.sectors(static_cast<int>(lv)) + 1, 0);
    }
    for (VertexId v = 0; v < m; ++v) {
        const HalfTileId h = tiling.locate(g.points[v]);
        location_.push_back(h);
        ++offsets_[static_cast<std::size_t>(h.tile.level)][h.slot() + 1];
    }
    for (std::size_t lv = 0; lv < levels; ++lv) {
        auto& off = offsets_[lv];
        for (std::size_t i = 1; i < off.size(); ++i) {
            off[i] += off[i - 1];
        }
        members_[lv].resize(off.back());
    }
    std::vector<std::vector<std::uint32_t>> fill(levels);
    for (std::size_t lv = 0; lv < levels; ++lv) {
        fill[lv].assign(offsets_[lv].begin(), offsets_[lv].end() - 1);
    }
    // vertices visited in id order, so each member list comes out sorted
    for (VertexId v = 0; v < m; ++v) {
        const auto& h = location_[v];
        const auto lv = static_cast<std::size_t>(h.tile.level);
        members_[lv][fill[lv][h.slot()]++] = v;
    }
}

std::size_t TileMembership::count(const HalfTileId& h) const {
    const auto& off = offsets_.at(static_cast<std::size_t>(h.tile.level));
    return off.at(h.slot() + 1) - off.at(h.slot());
}

std::size_t TileMembership::count(const TileId& t) const {
    return count(HalfTileId{t, 0}) + count(HalfTileId{t, 1});
}

std::span<const VertexId> TileMembership::members(const HalfTileId& h) const {
    const auto lv = static_cast<std::size_t>(h.tile.level);
    const auto& off = offsets_.at(lv);
    const auto* base = members_[lv].data();
    return {base + off.at(h.slot()), base + off.at(h.slot() + 1)};
}

OccupancyReport::OccupancyReport(const TileMembership& members, const Tiling& tiling, double C, double Cprime)
    : tiling_(tiling), C_(C), Cprime_(Cprime) {
    const auto& params = tiling.params();
    const double R = params.R();
    rho_ = rho_threshold(params, C);
    rho_prime_ = rho_prime_threshold(params, Cprime);
    ell_ = last_level_within(tiling, rho_);
    ell_prime_ = last_level_within(tiling, rho_prime_);

    const int L = tiling.top();
    expected_half_.resize(static_cast<std::size_t>(L + 1));
    counts_.resize(static_cast<std::size_t>(L + 1));
    faulty_.resize(static_cast<std::size_t>(L + 1));
    robust_.resize(static_cast<std::size_t>(L + 1));
    for (int i = 0; i <= L; ++i) {
        const auto lv = static_cast<std::size_t>(i);
        const double ring = mu_ball_origin(std::min(tiling.h(i), R), params) - mu_ball_origin(tiling.h(i - 1), params);
        expected_half_[lv] = params.n() * (0.5 * tiling.angle(i) / kTwoPi) * ring;

        const std::uint64_t N = tiling.sectors(i);
        counts_[lv].resize(2 * N);
        faulty_[lv].resize(N);
        robust_[lv].resize(N);
        for (std::uint64_t j = 0; j < N; ++j) {
            const TileId t{i, j};
            bool bad = false;
            for (int side = 0; side < 2; ++side) {
                const HalfTileId h{t, side};
                const auto c = static_cast<std::uint32_t>(members.count(h));
                counts_[lv][h.slot()] = c;
                bad = bad || static_cast<double>(c) < 0.5 * expected_half_[lv];
            }
            faulty_[lv][j] = bad;
            const bool parent_ok = i == 0 || robust_[lv - 1][j / 2];
            robust_[lv][j] = parent_ok && !bad;
        }
    }
}

std::size_t OccupancyReport::count(const HalfTileId& h) const {
    return counts_.at(static_cast<std::size_t>(h.tile.level)).at(h.slot());
}

bool OccupancyReport::sparse(const HalfTileId& h) const {
    return static_cast<double>(count(h)) < 0.5 * expected_half(h.tile.level);
}

bool OccupancyReport::faulty(const TileId& t) const {
    return faulty_.at(static_cast<std::size_t>(t.level)).at(t.index) != 0;
}

bool OccupancyReport::robust(const TileId& t) const {
    return robust_.at(static_cast<std::size_t>(t.level)).at(t.index) != 0;
}

std::vector<TileId> OccupancyReport::faulty_within(double radius) const {
    std::vector<TileId> out;
    for (int i = 0; i <= tiling_.top(); ++i) {
        if (!(tiling_.h(i - 1) < radius)) {
            break;
        }
        const auto& f = faulty_[static_cast<std::size_t>(i)];
        for (std::uint64_t j = 0; j < f.size(); ++j) {
            if (f[j]) {
                out.push_back(TileId{i, j});
            }
        }
    }
    return out;
}

std::size_t OccupancyReport::faulty_count(int level) const {
    const auto& f = faulty_.at(static_cast<std::size_t>(level));
    return static_cast<std::size_t>(std::count(f.begin(), f.end(), std::uint8_t{1}));
}

std::size_t OccupancyReport::robust_count(int level) const {
    const auto& r = robust_.at(static_cast<std::size_t>(level));
    return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

std::string OccupancyReport::to_json() const {
    auto opt = [](const std::optional<int>& v) { return v ? fmt::format("{}", *v) : std::string("null"); };
    std::string out = fmt::format(
        R"({{"c":{:.17g},"N0":{},"C":{:.17g},"Cprime":{:.17g},"rho":{:.17g},"rho_prime":{:.17g},"ell":{},"ell_prime":{},"levels":[)",
        tiling_.c(), tiling_.n0(), C_, Cprime_, rho_, rho_prime_, opt(ell_), opt(ell_prime_));
    for (int i = 0; i <= tiling_.top(); ++i) {
        const auto lv = static_cast<std::size_t>(i);
        std::size_t sparse_halves = 0;
        for (std::size_t s = 0; s < counts_[lv].size(); ++s) {
            sparse_halves += static_cast<double>(counts_[lv][s]) < 0.5 * expected_half_[lv];
        }
        out += fmt::format(
            R"({}{{"level":{},"h":{:.17g},"sectors":{},"expected_half":{:.17g},"sparse_halves":{},"faulty":{},"robust":{}}})",
            i == 0 ? "" : ",", i, tiling_.h(i), tiling_.sectors(i), expected_half_[lv], sparse_halves,
            faulty_count(i), robust_count(i));
    }
    out += R"(],"faulty_within_rho":[)";
    bool first = true;
    for (const auto& t : faulty_within(rho_)) {
        out += fmt::format("{}[{},{}]", first ? "" : ",", t.level, t.index);
        first = false;
    }
    out += "]}";
    return out;
}

OccupancyReport classify_occupancy(const HrgGraph& g, const Tiling& tiling, double C, double Cprime) {
    return OccupancyReport(TileMembership(g, tiling), tiling, C, Cprime);
}

} // namespace hyperwalk
