#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hyperwalk {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

// Simple undirected graph in compressed adjacency form. Neighbor lists are
// sorted; no self-loops, no multi-edges. Immutable once built.
class Graph {
public:
    Graph() = default;

    // Duplicate edges (in either orientation) are merged. Self-loops and
    // out-of-range endpoints throw InvalidArgument.
    static Graph from_edges(std::size_t num_vertices, std::span<const Edge> edges);

    // Adjacency lists must already be symmetric, sorted and loop-free.
    static Graph from_sorted_adjacency(std::vector<std::size_t> offsets, std::vector<VertexId> targets);

    std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return targets_.size() / 2; }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const VertexId> neighbors(VertexId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    bool has_edge(VertexId u, VertexId v) const;

    // Each edge once as (lo, hi), sorted lexicographically.
    std::vector<Edge> edge_list() const;

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<VertexId>& targets() const { return targets_; }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> targets_;
};

struct Components {
    // Component labels numbered in order of their smallest vertex.
    std::vector<std::uint32_t> label;
    std::vector<std::size_t> size;

    std::size_t count() const { return size.size(); }
};

Components connected_components(const Graph& g);

// Induced subgraph with local ids 0..k-1; to_parent[local] is the original id.
struct Subgraph {
    Graph graph;
    std::vector<VertexId> to_parent;
};

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);
Subgraph component_subgraph(const Graph& g, const Components& comps, std::uint32_t component);

bool is_connected(const Graph& g);

// Small named graphs.
Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

} // namespace hyperwalk
