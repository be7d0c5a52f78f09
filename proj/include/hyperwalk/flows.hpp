#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <hyperwalk/graph.hpp>
#include <hyperwalk/hrg.hpp>
#include <hyperwalk/tiling.hpp>

namespace hyperwalk {

// Antisymmetric edge flow. One value per undirected edge, kept on the
// (lower id -> higher id) orientation; f(v->u) is read as -f(u->v).
class Flow {
public:
    explicit Flow(const Graph& g) : graph_(&g) {}

    const Graph& graph() const { return *graph_; }

    // f(u->v) += value. Throws InternalError when uv is not an edge.
    void add(VertexId u, VertexId v, double value);
    double operator()(VertexId u, VertexId v) const;

    // Nonzero entries as ((lo, hi), f(lo->hi)), ordered by (lo, hi).
    std::vector<std::pair<Edge, double>> entries() const;
    std::size_t support_size() const { return values_.size(); }

    // Per-vertex sum of f(v->u) over neighbours u.
    std::vector<double> net_outflow() const;

    Flow& operator+=(const Flow& other);
    Flow& operator*=(double factor);

    // "u,v,value" rows on the canonical orientation.
    std::string to_csv() const;

    std::vector<VertexId> sources;
    std::vector<VertexId> sinks;

private:
    static std::uint64_t key(VertexId lo, VertexId hi) { return (std::uint64_t{lo} << 32) | hi; }

    const Graph* graph_;
    std::unordered_map<std::uint64_t, double> values_;
};

Flow operator+(Flow a, const Flow& b);
Flow operator-(Flow a);

// Sum of f(e)^2 over undirected edges (unit conductances).
double energy(const Flow& f);

struct FlowReport {
    double strength = 0.0;           // total net outflow of the sources
    double max_node_residual = 0.0;  // worst |net outflow| over vertices outside S and T
    double energy = 0.0;
    bool balanced = false;           // equal outflow per source and equal inflow per sink
};

inline constexpr double kFlowTolerance = 1e-9;

FlowReport validate_flow(const Flow& f, double tol = kFlowTolerance);

enum class FlowDirection { source, sink };

// source: v sends 1/|V ∩ H(v)| to every other vertex of its half-tile.
// sink: every other vertex of H(v) sends 1/|V ∩ H(v)| to v.
Flow source_sink_flow(const Graph& g, const TileMembership& members, VertexId v, FlowDirection direction);

// Balanced unit flow from the vertices of Hs to the vertices of Ht, routed
// down the two lineages and across at the highest common ancestor.
Flow half_tile_flow(const Graph& g, const Tiling& tiling, const TileMembership& members, const HalfTileId& Hs,
                    const HalfTileId& Ht);

// Source flow at s, half-tile flow H(s) -> H(t), sink flow at t.
Flow st_flow(const Graph& g, const Tiling& tiling, const TileMembership& members, VertexId s, VertexId t);

struct CommuteLevels {
    int ell;          // last level with h <= rho(C)
    int ell_w;        // level of the tile holding w
    int ell_prime_w;  // level of the fan-out tiles
    int k_w;          // generations between T_w and the fan-out tiles
};

// Requires (1 - 1/(2 alpha)) R <= r_w < rho(C).
CommuteLevels commute_levels(const Tiling& tiling, double r_w, double C = kDefaultC);

struct CommuteOptions {
    double C = kDefaultC;
    double Cprime = kDefaultCprime;
    // Refuse to build when some tile meeting B_O(rho) is faulty.
    bool check_faulty = true;
};

struct CommuteFlow {
    std::shared_ptr<const HrgGraph> graph;  // input graph plus w
    VertexId w;
    CommuteLevels levels;
    HalfTileId Hw;
    Flow flow;  // unit flow from w to the vertices of Hw, on *graph
};

// Adds a vertex at w and builds the unit flow that fans out from w into the
// level ell'_w half-tiles under Hw, then gathers it back up into Hw.
// `members` must be the membership of g (without w).
CommuteFlow commute_flow(const HrgGraph& g, const Tiling& tiling, const TileMembership& members, const PolarPoint& w,
                         const CommuteOptions& options = {});

} // namespace hyperwalk
