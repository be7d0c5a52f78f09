#include <hyperwalk/resistance.hpp>

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include <hyperwalk/errors.hpp>
#include <hyperwalk/rng.hpp>

namespace hyperwalk {

struct LaplacianSystem::Impl {
    Eigen::Index ground = 0;
    Eigen::LLT<Eigen::MatrixXd> dense;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> sparse;
};

namespace {

// Index in the grounded system (ground vertex removed).
Eigen::Index reduced(Eigen::Index v, Eigen::Index ground) { return v < ground ? v : v - 1; }

void center(Eigen::VectorXd& x) {
    if (x.size() > 0) {
        x.array() -= x.mean();
    }
}

} // namespace

LaplacianSystem::LaplacianSystem(const Graph& g, const SolverOptions& options)
    : graph_(&g), options_(options), kind_(options.kind), impl_(std::make_unique<Impl>()) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    if (n == 0) {
        throw EmptyGraphError("laplacian: empty graph");
    }
    if (!is_connected(g)) {
        throw InvalidArgument("laplacian: graph must be connected");
    }
    if (!(options.tolerance > 0.0)) {
        throw InvalidArgument("laplacian: tolerance must be positive");
    }
    degree_.resize(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        degree_[v] = static_cast<double>(g.degree(static_cast<VertexId>(v)));
    }
    if (kind_ == SolverKind::automatic) {
        kind_ = static_cast<std::size_t>(n) <= options.dense_limit ? SolverKind::dense : SolverKind::sparse;
    }
    // Grounding the best-connected vertex keeps the reduced system well scaled.
    Eigen::Index ground = 0;
    degree_.maxCoeff(&ground);
    impl_->ground = ground;
    const Eigen::Index m = n - 1;
    if (kind_ == SolverKind::dense) {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index v = 0; v < n; ++v) {
            if (v == ground) {
                continue;
            }
            const Eigen::Index rv = reduced(v, ground);
            L(rv, rv) = degree_[v];
            for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
                if (u != ground) {
                    L(rv, reduced(u, ground)) = -1.0;
                }
            }
        }
        impl_->dense.compute(L);
        if (impl_->dense.info() != Eigen::Success) {
            throw SolverFailure("laplacian: dense Cholesky failed");
        }
    } else if (kind_ == SolverKind::sparse) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(g.targets().size() + static_cast<std::size_t>(n));
        for (Eigen::Index v = 0; v < n; ++v) {
            if (v == ground) {
                continue;
            }
            const Eigen::Index rv = reduced(v, ground);
            trips.emplace_back(rv, rv, degree_[v]);
            for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
                if (u != ground) {
                    trips.emplace_back(rv, reduced(u, ground), -1.0);
                }
            }
        }
        Eigen::SparseMatrix<double> L(m, m);
        L.setFromTriplets(trips.begin(), trips.end());
        impl_->sparse.compute(L);
        if (impl_->sparse.info() != Eigen::Success) {
            throw SolverFailure("laplacian: sparse LDL^T failed");
        }
    }
}

LaplacianSystem::~LaplacianSystem() = default;
LaplacianSystem::LaplacianSystem(LaplacianSystem&&) noexcept = default;
LaplacianSystem& LaplacianSystem::operator=(LaplacianSystem&&) noexcept = default;

Eigen::VectorXd LaplacianSystem::apply(const Eigen::VectorXd& x) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::VectorXd y(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        double acc = degree_[v] * x[v];
        for (VertexId u : graph_->neighbors(static_cast<VertexId>(v))) {
            acc -= x[u];
        }
        y[v] = acc;
    }
    return y;
}

double LaplacianSystem::relative_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const {
    const double nb = b.norm();
    const double nr = (apply(x) - b).norm();
    return nb == 0.0 ? nr : nr / nb;
}

Eigen::VectorXd LaplacianSystem::solve_once(const Eigen::VectorXd& b) const {
    if (kind_ == SolverKind::cg) {
        return solve_cg(b);
    }
    const auto n = static_cast<Eigen::Index>(size());
    const Eigen::Index ground = impl_->ground;
    Eigen::VectorXd br(n - 1);
    for (Eigen::Index v = 0; v < n; ++v) {
        if (v != ground) {
            br[reduced(v, ground)] = b[v];
        }
    }
    const Eigen::VectorXd y = kind_ == SolverKind::dense ? Eigen::VectorXd(impl_->dense.solve(br))
                                                         : Eigen::VectorXd(impl_->sparse.solve(br));
    Eigen::VectorXd x(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        x[v] = v == ground ? 0.0 : y[reduced(v, ground)];
    }
    center(x);
    return x;
}

Eigen::VectorXd LaplacianSystem::solve_cg(const Eigen::VectorXd& b) const {
    const auto n = static_cast<Eigen::Index>(size());
    const std::size_t max_iter =
        options_.max_cg_iterations > 0 ? options_.max_cg_iterations : 20 * static_cast<std::size_t>(n) + 100;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b;
    center(r);
    const double nb = r.norm();
    if (nb == 0.0) {
        return x;
    }
    const double stop = 0.25 * options_.tolerance * nb;
    Eigen::VectorXd z = r.cwiseQuotient(degree_);
    center(z);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd Ap = apply(p);
        const double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        if (r.norm() <= stop) {
            center(x);
            return x;
        }
        z = r.cwiseQuotient(degree_);
        center(z);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw SolverFailure(fmt::format("laplacian: CG did not reach {} in {} iterations", options_.tolerance, max_iter));
}

Eigen::VectorXd LaplacianSystem::solve(const Eigen::VectorXd& b) const {
    if (b.size() != static_cast<Eigen::Index>(size())) {
        throw InvalidArgument("laplacian: right-hand side has the wrong length");
    }
    if (std::fabs(b.sum()) > 1e-9 * std::max(1.0, b.lpNorm<1>())) {
        throw InvalidArgument("laplacian: right-hand side must sum to zero");
    }
    Eigen::VectorXd x = solve_once(b);
    double res = relative_residual(x, b);
    // A few rounds of iterative refinement absorb the rounding of large,
    // poorly conditioned systems.
    for (int round = 0; round < 4 && res > options_.tolerance; ++round) {
        Eigen::VectorXd r = b - apply(x);
        center(r);
        x += solve_once(r);
        center(x);
        res = relative_residual(x, b);
    }
    if (!(res <= options_.tolerance)) {
        throw SolverFailure(fmt::format("laplacian: relative residual {:.3g} above {:.3g}", res, options_.tolerance));
    }
    return x;
}

double LaplacianSystem::resistance(VertexId u, VertexId v) const {
    if (u >= size() || v >= size()) {
        throw InvalidArgument("laplacian: vertex out of range");
    }
    if (u == v) {
        return 0.0;
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
    b[u] = 1.0;
    b[v] = -1.0;
    const Eigen::VectorXd x = solve(b);
    return x[u] - x[v];
}

double effective_resistance(const Graph& g, VertexId u, VertexId v, const SolverOptions& options) {
    if (u >= g.num_vertices() || v >= g.num_vertices()) {
        throw InvalidArgument("effective_resistance: vertex out of range");
    }
    if (u == v) {
        return 0.0;
    }
    const auto comps = connected_components(g);
    if (comps.label[u] != comps.label[v]) {
        throw DisconnectedPair(fmt::format("effective_resistance: {} and {} are in different components", u, v));
    }
    const auto sub = component_subgraph(g, comps, comps.label[u]);
    const auto local = [&](VertexId x) {
        return static_cast<VertexId>(std::lower_bound(sub.to_parent.begin(), sub.to_parent.end(), x) -
                                     sub.to_parent.begin());
    };
    const LaplacianSystem sys(sub.graph, options);
    return sys.resistance(local(u), local(v));
}

Eigen::MatrixXd resistance_matrix(const Graph& g, std::size_t cap) {
    const std::size_t n = g.num_vertices();
    if (n > cap) {
        throw SizeCapExceeded(fmt::format("resistance_matrix: {} vertices above the cap {}", n, cap));
    }
    if (n == 0) {
        throw EmptyGraphError("resistance_matrix: empty graph");
    }
    if (!is_connected(g)) {
        throw InvalidArgument("resistance_matrix: graph must be connected");
    }
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
    if (n == 1) {
        return out;
    }
    // Inverse of the Laplacian grounded at the last vertex; its potentials
    // give R(u, v) = G_uu + G_vv - 2 G_uv with G = 0 on the ground row.
    const Eigen::Index m = N - 1;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index v = 0; v < m; ++v) {
        L(v, v) = static_cast<double>(g.degree(static_cast<VertexId>(v)));
        for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
            if (static_cast<Eigen::Index>(u) < m) {
                L(v, u) = -1.0;
            }
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(L);
    if (llt.info() != Eigen::Success) {
        throw SolverFailure("resistance_matrix: Cholesky failed");
    }
    const Eigen::MatrixXd G = llt.solve(Eigen::MatrixXd::Identity(m, m));
    auto at = [&](Eigen::Index i, Eigen::Index j) { return i < m && j < m ? G(i, j) : 0.0; };
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double r = at(i, i) + at(j, j) - at(i, j) - at(j, i);
            out(i, j) = r;
            out(j, i) = r;
        }
    }
    return out;
}

KirchhoffResult kirchhoff_and_average(const Graph& g, const KirchhoffOptions& options) {
    const std::size_t n = g.num_vertices();
    if (n == 0) {
        throw EmptyGraphError("kirchhoff: empty graph");
    }
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    if (n <= options.cap) {
        const Eigen::MatrixXd M = resistance_matrix(g, options.cap);
        const double K = M.sum();
        return {K, K / n2, 0.0, true, n * n};
    }
    if (options.pairs < 2) {
        throw InvalidArgument("kirchhoff: need at least two sampled pairs");
    }
    const LaplacianSystem sys(g, options.solver);
    CounterRng rng(options.seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < options.pairs; ++i) {
        const auto u = static_cast<VertexId>(rng.below(n));
        const auto v = static_cast<VertexId>(rng.below(n));
        const double r = sys.resistance(u, v);
        sum += r;
        sum_sq += r * r;
    }
    const double m = static_cast<double>(options.pairs);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    return {mean * n2, mean, 1.96 * std::sqrt(var / m), false, options.pairs};
}

bool in_sector(const PolarPoint& p, double phi, double theta) {
    return canonical_angle(theta - p.theta() + 0.5 * phi) < phi;
}

CutSpec sector_cut(const HrgGraph& g, const PolarPoint& p, double phi) {
    if (!(phi > 0.0 && phi < kTwoPi)) {
        throw InvalidArgument(fmt::format("sector_cut: angle {} outside (0, 2 pi)", phi));
    }
    CutSpec cut{p, phi, {}, {}};
    cut.inside.resize(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        cut.inside[v] = in_sector(p, phi, g.points[v].theta()) ? 1 : 0;
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        for (VertexId u : g.graph.neighbors(v)) {
            if (u > v && cut.inside[u] != cut.inside[v]) {
                cut.edges.emplace_back(v, u);
            }
        }
    }
    return cut;
}

double phi_r(double r, const ModelParams& params, double omega) {
    const double R = params.R();
    const double lower = (1.0 - 1.0 / (2.0 * params.alpha())) * R;
    if (!(r > lower && r <= R)) {
        throw InvalidArgument(fmt::format("phi_r: radius {} outside ({}, {}]", r, lower, R));
    }
    return kTwoPi * params.nu() * std::exp(-omega) / (params.n() * mu_ball_origin(r, params));
}

double phi_r_estimate(double r, const ModelParams& params, double omega) {
    return kTwoPi * params.nu() / params.n() * std::exp(params.alpha() * (params.R() - r) - omega);
}

double default_omega(const ModelParams& params) {
    if (!(params.n() > std::exp(1.0))) {
        throw InvalidArgument("default_omega: ln ln n needs n > e");
    }
    return std::log(std::log(params.n()));
}

double nash_williams_lower(const CutSpec& cut) {
    if (cut.edges.empty()) {
        throw EmptyCut("nash_williams_lower: empty cut");
    }
    return 1.0 / static_cast<double>(cut.edges.size());
}

} // namespace hyperwalk
