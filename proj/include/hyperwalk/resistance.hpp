#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include <hyperwalk/geometry.hpp>
#include <hyperwalk/graph.hpp>
#include <hyperwalk/hrg.hpp>

namespace hyperwalk {

enum class SolverKind {
    automatic,  // dense below dense_limit vertices, sparse Cholesky above
    dense,
    sparse,     // sparse LDL^T with fill-reducing ordering
    cg,         // Jacobi-preconditioned conjugate gradient, sum-zero gauge
};

struct SolverOptions {
    SolverKind kind = SolverKind::automatic;
    double tolerance = 1e-10;  // relative residual ||Lx - b|| / ||b||
    std::size_t dense_limit = 500;
    std::size_t max_cg_iterations = 0;  // 0: 20 |V| + 100
};

// Laplacian of a connected graph, factored once and solved against many
// right-hand sides. Solves are const and may run concurrently.
class LaplacianSystem {
public:
    explicit LaplacianSystem(const Graph& g, const SolverOptions& options = {});
    ~LaplacianSystem();
    LaplacianSystem(LaplacianSystem&&) noexcept;
    LaplacianSystem& operator=(LaplacianSystem&&) noexcept;

    const Graph& graph() const { return *graph_; }
    std::size_t size() const { return graph_->num_vertices(); }
    SolverKind kind() const { return kind_; }
    const Eigen::VectorXd& degrees() const { return degree_; }

    // Potentials x with L x = b and sum(x) = 0. b must sum to zero (within
    // 1e-9 ||b||_1). Throws SolverFailure when the residual check fails.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

    // x(u) - x(v) for L x = e_u - e_v.
    double resistance(VertexId u, VertexId v) const;

    // ||L x - b|| / ||b||, for callers that want to report it.
    double relative_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const;

private:
    struct Impl;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::VectorXd solve_once(const Eigen::VectorXd& b) const;
    Eigen::VectorXd solve_cg(const Eigen::VectorXd& b) const;

    const Graph* graph_;
    SolverOptions options_;
    SolverKind kind_;
    Eigen::VectorXd degree_;
    std::unique_ptr<Impl> impl_;
};

// Resistance between u and v in g (any graph); 0 when u == v.
// Throws DisconnectedPair when they lie in different components.
double effective_resistance(const Graph& g, VertexId u, VertexId v, const SolverOptions& options = {});

inline constexpr std::size_t kDefaultResistanceCap = 2000;

// All-pairs resistances of a connected graph with at most `cap` vertices.
Eigen::MatrixXd resistance_matrix(const Graph& g, std::size_t cap = kDefaultResistanceCap);

struct KirchhoffOptions {
    std::size_t cap = kDefaultResistanceCap;  // exact up to this many vertices
    std::size_t pairs = 1000;                 // sampled ordered pairs above the cap
    std::uint64_t seed = 0;
    SolverOptions solver{};
};

struct KirchhoffResult {
    double kirchhoff;    // sum over ordered pairs of R(u, v)
    double average;      // kirchhoff / |V|^2
    double average_ci;   // 95% normal half-width; 0 when exact
    bool exact;
    std::size_t pairs;   // pairs evaluated (|V|^2 when exact)
};

KirchhoffResult kirchhoff_and_average(const Graph& g, const KirchhoffOptions& options = {});

struct CutSpec {
    PolarPoint apex;
    double phi;
    std::vector<std::uint8_t> inside;  // per vertex
    std::vector<Edge> edges;           // (lo, hi) with exactly one endpoint inside
};

// Sector of central angle phi bisected by the ray through p, taken half-open:
// angle offsets in [-phi/2, phi/2) from theta_p.
bool in_sector(const PolarPoint& p, double phi, double theta);

CutSpec sector_cut(const HrgGraph& g, const PolarPoint& p, double phi);

// 2 pi nu e^{-omega} / (n mu(B_O(r))), for (1 - 1/(2 alpha)) R < r <= R.
double phi_r(double r, const ModelParams& params, double omega);
// The estimate 2 pi (nu / n) e^{alpha (R - r) - omega}.
double phi_r_estimate(double r, const ModelParams& params, double omega);
// ln ln n
double default_omega(const ModelParams& params);

// 1 / |cut|. Throws EmptyCut for an empty cut.
double nash_williams_lower(const CutSpec& cut);

} // namespace hyperwalk
