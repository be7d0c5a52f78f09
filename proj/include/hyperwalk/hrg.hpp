#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <hyperwalk/geometry.hpp>
#include <hyperwalk/graph.hpp>

namespace hyperwalk {

// How many points to place: Poisson(n) many (the default model) or exactly
// `count` many.
class SampleMode {
public:
    enum class Kind { Poissonized, Binomial };

    static SampleMode poissonized() { return SampleMode(Kind::Poissonized, 0); }
    static SampleMode binomial(std::size_t count) { return SampleMode(Kind::Binomial, count); }

    Kind kind() const { return kind_; }
    std::size_t count() const { return count_; }

private:
    SampleMode(Kind kind, std::size_t count) : kind_(kind), count_(count) {}

    Kind kind_;
    std::size_t count_;
};

// A sampled hyperbolic random graph. Vertex ids are indices into `points`,
// assigned in sampling order.
struct HrgGraph {
    ModelParams params;
    std::vector<PolarPoint> points;
    Graph graph;

    std::size_t num_vertices() const { return points.size(); }
    std::size_t edge_count() const { return graph.num_edges(); }
};

std::vector<PolarPoint> sample_points(const ModelParams& params, const SampleMode& mode, std::uint64_t seed);

// All-pairs reference builder, O(m^2).
HrgGraph build_graph_naive(const ModelParams& params, std::vector<PolarPoint> points);

// Radial bands with angle-sorted members; a point only scans the angular
// window theta_R(r_p, band_lower_radius) of each band. Same edge set as the
// naive builder.
HrgGraph build_graph_bucketed(const ModelParams& params, std::vector<PolarPoint> points);

HrgGraph sample_graph(const ModelParams& params, const SampleMode& mode, std::uint64_t seed);

// Copy of g with one more vertex at w (id = g.num_vertices()), joined to every
// point within distance < R.
HrgGraph add_vertex(const HrgGraph& g, const PolarPoint& w);

struct CenterInfo {
    Components components;
    // Component holding the vertices with r < R/2, if any.
    std::optional<std::uint32_t> center;
};

CenterInfo components_and_center(const HrgGraph& g);

struct DegreeBin {
    std::size_t lo;  // inclusive
    std::size_t hi;  // exclusive
    std::size_t count;
};

struct DegreeSummary {
    double mean;
    std::vector<DegreeBin> histogram;  // log2 bins; degree 0 gets its own bin
    // Power-law exponent from a least-squares fit of the log-log
    // complementary CDF over degrees >= 10; NaN with fewer than 3 distinct
    // such degrees.
    double tail_exponent;
};

DegreeSummary degree_summary(const Graph& g);

// Serialization. Numbers are written with 17 significant digits.
std::string to_json(const HrgGraph& g);
HrgGraph from_json(std::string_view text);
void write_json_file(const HrgGraph& g, const std::string& path);
HrgGraph read_json_file(const std::string& path);

std::string vertices_csv(const HrgGraph& g);
std::string edges_csv(const HrgGraph& g);
HrgGraph from_csv(const ModelParams& params, std::string_view vertices, std::string_view edges);

} // namespace hyperwalk
