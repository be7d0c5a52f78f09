#include <hyperwalk/graph.hpp>

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include <hyperwalk/errors.hpp>

namespace hyperwalk {

Graph Graph::from_edges(std::size_t num_vertices, std::span<const Edge> edges) {
    if (num_vertices > std::numeric_limits<VertexId>::max()) {
        throw InvalidArgument("Graph: too many vertices");
    }
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= num_vertices || v >= num_vertices) {
            throw InvalidArgument(fmt::format("Graph: edge ({}, {}) out of range", u, v));
        }
        if (u == v) {
            throw InvalidArgument(fmt::format("Graph: self-loop at {}", u));
        }
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    std::vector<std::size_t> offsets(num_vertices + 1, 0);
    for (auto [u, v] : canon) {
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    for (std::size_t i = 0; i < num_vertices; ++i) {
        offsets[i + 1] += offsets[i];
    }
    std::vector<VertexId> targets(offsets.back());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (auto [u, v] : canon) {
        targets[fill[u]++] = v;
        targets[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < num_vertices; ++i) {
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                  targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
    }
    return from_sorted_adjacency(std::move(offsets), std::move(targets));
}

Graph Graph::from_sorted_adjacency(std::vector<std::size_t> offsets, std::vector<VertexId> targets) {
    Graph g;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    if (g.offsets_.empty()) {
        g.offsets_.push_back(0);
    }
    return g;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    if (u >= num_vertices() || v >= num_vertices()) {
        return false;
    }
    // search the shorter list
    if (degree(u) > degree(v)) {
        std::swap(u, v);
    }
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (VertexId u = 0; u < num_vertices(); ++u) {
        for (VertexId v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

Components connected_components(const Graph& g) {
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = g.num_vertices();
    Components comps;
    comps.label.assign(n, unset);
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < n; ++s) {
        if (comps.label[s] != unset) {
            continue;
        }
        const auto id = static_cast<std::uint32_t>(comps.size.size());
        std::size_t count = 0;
        comps.label[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            ++count;
            for (VertexId v : g.neighbors(u)) {
                if (comps.label[v] == unset) {
                    comps.label[v] = id;
                    stack.push_back(v);
                }
            }
        }
        comps.size.push_back(count);
    }
    return comps;
}

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
    constexpr auto absent = std::numeric_limits<VertexId>::max();
    std::vector<VertexId> local(g.num_vertices(), absent);
    Subgraph sub;
    sub.to_parent.assign(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= g.num_vertices()) {
            throw InvalidArgument("induced_subgraph: vertex out of range");
        }
        local[vertices[i]] = static_cast<VertexId>(i);
    }
    std::vector<std::size_t> offsets{0};
    std::vector<VertexId> targets;
    offsets.reserve(vertices.size() + 1);
    for (VertexId parent : vertices) {
        const std::size_t start = targets.size();
        for (VertexId w : g.neighbors(parent)) {
            if (local[w] != absent) {
                targets.push_back(local[w]);
            }
        }
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(start), targets.end());
        offsets.push_back(targets.size());
    }
    sub.graph = Graph::from_sorted_adjacency(std::move(offsets), std::move(targets));
    return sub;
}

Subgraph component_subgraph(const Graph& g, const Components& comps, std::uint32_t component) {
    std::vector<VertexId> members;
    members.reserve(component < comps.count() ? comps.size[component] : 0);
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (comps.label[v] == component) {
            members.push_back(v);
        }
    }
    return induced_subgraph(g, members);
}

bool is_connected(const Graph& g) {
    return g.num_vertices() <= 1 || connected_components(g).count() == 1;
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u + 1 < n; ++u) {
        edges.emplace_back(u, u + 1);
    }
    return Graph::from_edges(n, edges);
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u + 1 < n; ++u) {
        edges.emplace_back(u, u + 1);
    }
    if (n >= 3) {
        edges.emplace_back(static_cast<VertexId>(n - 1), 0);
    }
    return Graph::from_edges(n, edges);
}

Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v <= leaves; ++v) {
        edges.emplace_back(0, v);
    }
    return Graph::from_edges(leaves + 1, edges);
}

} // namespace hyperwalk
