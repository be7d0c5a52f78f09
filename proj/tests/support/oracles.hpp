#pragma once

// Independent reference computations used only by tests. Each one takes a
// different route from the library code it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include <hyperwalk/geometry.hpp>
#include <hyperwalk/graph.hpp>

namespace oracle {

using hyperwalk::PolarPoint;

// Distance through the Poincare disk: |z| = tanh(r/2),
// d = acosh(1 + 2|z - w|^2 / ((1 - |z|^2)(1 - |w|^2))).
inline double poincare_distance(const PolarPoint& p, const PolarPoint& q) {
    const long double a = std::tanh(static_cast<long double>(p.r()) / 2);
    const long double b = std::tanh(static_cast<long double>(q.r()) / 2);
    const long double zx = a * std::cos(static_cast<long double>(p.theta()));
    const long double zy = a * std::sin(static_cast<long double>(p.theta()));
    const long double wx = b * std::cos(static_cast<long double>(q.theta()));
    const long double wy = b * std::sin(static_cast<long double>(q.theta()));
    const long double diff = (zx - wx) * (zx - wx) + (zy - wy) * (zy - wy);
    return static_cast<double>(std::acosh(1 + 2 * diff / ((1 - a * a) * (1 - b * b))));
}

// Length of the geodesic from (r1, pi) to (r2, 0), which is a diameter of the
// Poincare disk: midpoint-rule integral of the metric 2|dz|/(1-|z|^2).
inline double diameter_length(double r1, double r2) {
    const int steps = 200000;
    const double a = -std::tanh(r1 / 2);
    const double b = std::tanh(r2 / 2);
    double total = 0.0;
    const double h = (b - a) / steps;
    for (int i = 0; i < steps; ++i) {
        const double x = a + (i + 0.5) * h;
        total += 2.0 * h / (1.0 - x * x);
    }
    return total;
}

// Largest angle with d((r1,0),(r2,phi)) < R, by bisection on the distance.
inline double theta_by_bisection(double r1, double r2, double R) {
    if (poincare_distance(PolarPoint(r1, 0), PolarPoint(r2, hyperwalk::kPi)) < R) {
        return hyperwalk::kPi;
    }
    double lo = 0.0;
    double hi = hyperwalk::kPi;
    if (!(poincare_distance(PolarPoint(r1, 0), PolarPoint(r2, 0)) < R)) {
        return 0.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (poincare_distance(PolarPoint(r1, 0), PolarPoint(r2, mid)) < R) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2 != 0) {
        ++panels;
    }
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

// Expected hitting times E_u[tau_target] by first-step analysis:
// h(u) = 1 + mean over neighbors of h, h(target) = 0. Dense solve.
inline std::vector<double> hitting_first_step(const hyperwalk::Graph& g, hyperwalk::VertexId target) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (Eigen::Index u = 0; u < n; ++u) {
        A(u, u) = 1.0;
        if (u == target) {
            continue;
        }
        const auto nb = g.neighbors(static_cast<hyperwalk::VertexId>(u));
        for (auto w : nb) {
            A(u, w) -= 1.0 / static_cast<double>(nb.size());
        }
        b(u) = 1.0;
    }
    Eigen::VectorXd h = A.fullPivLu().solve(b);
    return {h.data(), h.data() + n};
}

// Effective resistance by the Laplacian pseudoinverse (dense).
inline Eigen::MatrixXd resistance_by_pinv(const hyperwalk::Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edge_list()) {
        L(u, u) += 1;
        L(v, v) += 1;
        L(u, v) -= 1;
        L(v, u) -= 1;
    }
    // L + J/n is invertible on a connected graph; (L + J/n)^{-1} - J/n = L^+.
    Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd P = (L + J).inverse() - J;
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = P(i, i) + P(j, j) - 2 * P(i, j);
        }
    }
    return out;
}

// Exact expected cover time from `start` by dynamic programming over
// (visited set, position). Visited sets only grow, so states are processed in
// decreasing set order; within a set the walk is an absorbing chain solved
// densely. Practical for up to ~12 vertices.
inline double cover_time_exact(const hyperwalk::Graph& g, hyperwalk::VertexId start) {
    const int n = static_cast<int>(g.num_vertices());
    if (n <= 1) {
        return 0.0;
    }
    const std::uint32_t full = (1u << n) - 1;
    // T[S][v]: expected remaining time with visited set S, walker at v in S.
    std::vector<std::vector<double>> T(full + 1, std::vector<double>(n, 0.0));
    for (std::uint32_t S = full - 1; S >= 1; --S) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v) {
            if (S & (1u << v)) {
                members.push_back(v);
            }
        }
        const auto k = static_cast<Eigen::Index>(members.size());
        std::vector<int> local(n, -1);
        for (Eigen::Index i = 0; i < k; ++i) {
            local[members[i]] = static_cast<int>(i);
        }
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
        Eigen::VectorXd b = Eigen::VectorXd::Ones(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto nb = g.neighbors(static_cast<hyperwalk::VertexId>(members[i]));
            const double p = 1.0 / static_cast<double>(nb.size());
            for (auto w : nb) {
                if (S & (1u << w)) {
                    A(i, local[w]) -= p;
                } else {
                    b(i) += p * T[S | (1u << w)][w];
                }
            }
        }
        Eigen::VectorXd x = A.fullPivLu().solve(b);
        for (Eigen::Index i = 0; i < k; ++i) {
            T[S][members[i]] = x(i);
        }
        if (S == 1) {
            break;
        }
    }
    return T[1u << start][start];
}

} // namespace oracle
