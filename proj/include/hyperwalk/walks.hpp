#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <hyperwalk/graph.hpp>
#include <hyperwalk/resistance.hpp>

namespace hyperwalk {

struct WalkConfig {
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 1'000'000'000;  // per realization
    std::size_t repetitions = 1000;
    std::size_t workers = 1;  // 0: worker_count()
};

struct WalkStats {
    double mean = 0.0;
    double stderr_mean = 0.0;  // sample sd / sqrt(reps); 0 for a single rep
    std::size_t repetitions = 0;
};

// pi(v) = d(v) / 2|E| on a connected graph with at least one edge.
std::vector<double> stationary(const Graph& g);

// Realization i of every simulator uses the stream derive_seed(cfg.seed, i),
// so results do not depend on the worker count. A realization reaching
// max_steps raises StepCapExceeded once all repetitions have run.
WalkStats simulate_hitting(const Graph& g, VertexId u, VertexId v, const WalkConfig& cfg);
WalkStats simulate_cover(const Graph& g, VertexId start, const WalkConfig& cfg);
// Steps to reach v from u and come back to u.
WalkStats simulate_commute(const Graph& g, VertexId u, VertexId v, const WalkConfig& cfg);

// Visit counts of one walk of `steps` steps from `start` (the start counts
// once, then each position after a step).
std::vector<std::uint64_t> occupation_counts(const Graph& g, VertexId start, std::uint64_t steps,
                                             std::uint64_t seed);

// E_u[tau_v] for every u, from the factored Laplacian: L x = d - 2|E| e_v,
// h = x - x(v).
std::vector<double> exact_hitting_vector(const LaplacianSystem& sys, VertexId v);

inline constexpr std::size_t kDefaultHittingCap = 50000;
std::vector<double> exact_hitting_vector(const Graph& g, VertexId v, std::size_t cap = kDefaultHittingCap);

enum class TargetMethod { exact, sampled };

struct TargetTimeOptions {
    TargetMethod method = TargetMethod::sampled;
    std::size_t samples = 200;      // targets drawn from pi in sampled mode
    std::uint64_t seed = 0;
    std::size_t exact_cap = 2000;   // largest graph for the exact double sum
    SolverOptions solver{};
};

struct TargetTimeResult {
    double value;
    double ci;  // 95% normal half-width; 0 in exact mode
    bool exact;
    std::size_t targets;
};

// sum_{u,v} pi(u) pi(v) E_u[tau_v].
TargetTimeResult target_time(const Graph& g, const TargetTimeOptions& options = {});

// Constant c in t = (c / |E|) sum_{u,v ordered} R(u,v) d(u) d(v), fixed by
// the definition sum on K_3 (t = 4/3).
inline constexpr double kTargetTimeResistanceConstant = 0.25;

// The resistance form of the target time (exact resistance matrix, capped).
double target_time_resistance_form(const Graph& g, double constant = kTargetTimeResistanceConstant,
                                   std::size_t cap = kDefaultResistanceCap);

struct MaxHittingOptions {
    std::size_t exact_limit = 500;  // all targets up to this many vertices
    std::size_t candidates = 20;    // targets tried above the limit
    SolverOptions solver{};
};

struct MaxHittingResult {
    double value;
    bool exact;  // false: maximum over candidate targets only, a lower bound
    VertexId source;
    VertexId target;
    std::size_t targets_tried;
};

// Candidate targets above the limit: tips of the longest dangling paths, then
// lowest degree, ties broken by larger radius (when given) and smaller id.
MaxHittingResult max_hitting_estimate(const Graph& g, std::span<const double> radii = {},
                                      const MaxHittingOptions& options = {});

double harmonic_number(std::size_t n);
// t_hit * (1 + 1/2 + ... + 1/n)
double matthews_upper(double t_hit, std::size_t n);

// (1/2) kappa_U ln|U| with kappa_U = 2|E| min_{u != v in U} R(u, v).
double kklv_lower(const LaplacianSystem& sys, std::span<const VertexId> U);
double kklv_lower(const Graph& g, std::span<const VertexId> U);

struct DanglingPath {
    std::vector<VertexId> vertices;  // from the degree-1 tip towards the attachment
    VertexId attachment;             // degree >= 3 vertex the chain hangs from

    VertexId tip() const { return vertices.front(); }
    std::size_t length() const { return vertices.size(); }
};

// Pendant chains: a degree-1 tip followed by degree-2 vertices up to the first
// vertex of degree >= 3. Components that are paths are skipped. Sorted by
// length (longest first), then tip id.
std::vector<DanglingPath> find_dangling_paths(const Graph& g, std::size_t min_length = 1);

} // namespace hyperwalk
