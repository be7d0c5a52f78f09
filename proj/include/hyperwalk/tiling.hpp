#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <hyperwalk/geometry.hpp>
#include <hyperwalk/hrg.hpp>

namespace hyperwalk {

struct TileId {
    int level = 0;
    std::uint64_t index = 0;

    friend auto operator<=>(const TileId&, const TileId&) = default;
};

struct HalfTileId {
    TileId tile;
    int side = 0;  // 0: first (lower-angle) half, 1: second half

    // Position of this half among all 2 N_level halves of its level.
    std::uint64_t slot() const { return 2 * tile.index + static_cast<std::uint64_t>(side); }

    friend auto operator<=>(const HalfTileId&, const HalfTileId&) = default;
};

std::string to_string(const TileId& t);
std::string to_string(const HalfTileId& h);

struct Lineage {
    TileId parent;                       // roots are their own parent
    TileId children[2];
    std::optional<HalfTileId> parent_half;  // absent for root tiles
    std::vector<TileId> ancestors;       // self first, root last
};

struct SpacingReport {
    double epsilon;
    // Worst slack of |h_j - h_i - (j - i) ln 2| <= eps over j >= i, per
    // level i >= 1 (index 0 unused, left at +inf). Negative means violated.
    std::vector<double> spacing_slack;
    // Worst log-ratio slack of theta_i e^{-eps/2} <= 2 e^{(R - 2 h_i)/2} <= theta_i e^{eps/2},
    // per level i >= 1. Reported, not used for pass/fail (see README).
    std::vector<double> angle_slack;
    bool spacing_ok;
    bool angle_ok;
};

// The radial/angular tiling. Level i covers radii [h_{i-1}, h_i) and is cut
// into N_i = 2^i N_0 sectors of angle theta_i; sector 0 of every level
// starts at angle 0.
class Tiling {
public:
    static Tiling build(const ModelParams& params, double c);

    // Smallest c in {0.5, 1, 2, 4, ...} whose tiling passes the spacing check.
    static double calibrate_c(const ModelParams& params, double epsilon = kDefaultEpsilon);

    static constexpr double kDefaultEpsilon = 0.34657359027997264;  // ln(2) / 2

    const ModelParams& params() const { return params_; }
    double c() const { return c_; }

    // Levels 0..top(); h(top()) >= R is the first level radius reaching R.
    int top() const { return static_cast<int>(h_.size()) - 2; }
    // h(-1) = 0, h(0) = R/2, h(1) = (R + c)/2, ...
    double h(int level) const { return h_[static_cast<std::size_t>(level + 1)]; }
    std::uint64_t n0() const { return n0_; }
    std::uint64_t sectors(int level) const { return n0_ << level; }
    double angle(int level) const { return kTwoPi / static_cast<double>(sectors(level)); }

    // Level of a radius: the i with h_{i-1} <= r < h_i. r == h(top()) maps to top().
    int level_of(double r) const;
    HalfTileId locate(const PolarPoint& p) const;
    // Half-tile of a level met by the ray from the origin at angle theta.
    HalfTileId half_at(int level, double theta) const;

    TileId parent(const TileId& t) const;
    HalfTileId parent_half(const TileId& t) const;  // t must not be a root
    HalfTileId twin(const HalfTileId& h) const { return {h.tile, 1 - h.side}; }
    std::vector<TileId> ancestors(const TileId& t) const;
    Lineage lineage(const TileId& t) const;

    // Angular interval [lo, hi) of a tile or half-tile.
    std::pair<double, double> interval(const TileId& t) const;
    std::pair<double, double> interval(const HalfTileId& h) const;

    bool valid(const TileId& t) const;

    SpacingReport validate_spacing(double epsilon = kDefaultEpsilon) const;

private:
    Tiling(const ModelParams& params, double c) : params_(params), c_(c) {}

    ModelParams params_;
    double c_;
    std::vector<double> h_;  // h_[0] = h_{-1}
    std::uint64_t n0_ = 1;
};

// rho(C) = R - ln(C R / nu) / (1 - alpha)
double rho_threshold(const ModelParams& params, double C);
// rho'(C') = R - ln(2 C' / nu) / (1 - alpha)
double rho_prime_threshold(const ModelParams& params, double Cprime);
// Largest level i >= -1 with h_i <= radius; absent when radius < 0.
std::optional<int> last_level_within(const Tiling& tiling, double radius);

inline constexpr double kDefaultC = 20.0;
inline constexpr double kDefaultCprime = 22.180709777918249;  // 32 ln 2

// Vertices of a graph grouped by half-tile.
class TileMembership {
public:
    TileMembership(const HrgGraph& g, const Tiling& tiling);

    const HalfTileId& half_tile_of(VertexId v) const { return location_[v]; }
    std::size_t count(const HalfTileId& h) const;
    std::size_t count(const TileId& t) const;
    // Members sorted by vertex id.
    std::span<const VertexId> members(const HalfTileId& h) const;

private:
    std::vector<HalfTileId> location_;
    // Per level: CSR over the 2 N_i half-tile slots.
    std::vector<std::vector<std::uint32_t>> offsets_;
    std::vector<std::vector<VertexId>> members_;
};

class OccupancyReport {
public:
    OccupancyReport(const TileMembership& members, const Tiling& tiling, double C, double Cprime);

    std::size_t count(const HalfTileId& h) const;
    // Expected number of vertices per half-tile at a level (exact measure).
    double expected_half(int level) const { return expected_half_[static_cast<std::size_t>(level)]; }
    double expected_tile(int level) const { return 2.0 * expected_half(level); }

    bool sparse(const HalfTileId& h) const;
    bool faulty(const TileId& t) const;
    bool robust(const TileId& t) const;

    double C() const { return C_; }
    double Cprime() const { return Cprime_; }
    double rho() const { return rho_; }
    double rho_prime() const { return rho_prime_; }
    std::optional<int> ell() const { return ell_; }
    std::optional<int> ell_prime() const { return ell_prime_; }

    // Faulty tiles among those meeting B_O(radius), i.e. with h_{i-1} < radius.
    std::vector<TileId> faulty_within(double radius) const;
    std::size_t faulty_count(int level) const;
    std::size_t robust_count(int level) const;

    std::string to_json() const;

    const Tiling& tiling() const { return tiling_; }

private:
    Tiling tiling_;
    double C_;
    double Cprime_;
    double rho_;
    double rho_prime_;
    std::optional<int> ell_;
    std::optional<int> ell_prime_;
    std::vector<double> expected_half_;
    std::vector<std::vector<std::uint32_t>> counts_;  // per level, per half slot
    std::vector<std::vector<std::uint8_t>> faulty_;   // per level, per tile
    std::vector<std::vector<std::uint8_t>> robust_;
};

// Convenience: membership + report in one call.
OccupancyReport classify_occupancy(const HrgGraph& g, const Tiling& tiling, double C = kDefaultC,
                                   double Cprime = kDefaultCprime);

} // namespace hyperwalk
