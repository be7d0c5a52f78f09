#pragma once

// Hyperbolic-plane primitives for the native (polar) disk model of curvature -1.

#include <cmath>
#include <numbers>

namespace hyperwalk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps any angle into [0, 2pi).
double canonical_angle(double theta);

// Point of the hyperbolic plane in polar coordinates. The angle is always
// kept in [0, 2pi).
class PolarPoint {
public:
    PolarPoint() = default;
    PolarPoint(double r, double theta);

    double r() const { return r_; }
    double theta() const { return theta_; }

    friend bool operator==(const PolarPoint&, const PolarPoint&) = default;

private:
    double r_ = 0.0;
    double theta_ = 0.0;
};

// Model constants of G_{alpha,nu}(n). R is derived, never stored.
class ModelParams {
public:
    ModelParams(double alpha, double nu, double n);

    double alpha() const { return alpha_; }
    double nu() const { return nu_; }
    double n() const { return n_; }
    double R() const;

    // Asymptotic mean degree 2 alpha^2 nu / (pi (alpha - 1/2)^2).
    double expected_mean_degree() const;

private:
    double alpha_;
    double nu_;
    double n_;
};

// Angle at the origin between two directions, in [0, pi].
inline double angular_difference(double theta_p, double theta_q) {
    const double d = theta_p > theta_q ? theta_p - theta_q : theta_q - theta_p;
    return kPi - (d > kPi ? d - kPi : kPi - d);
}

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q);

// Largest angle at the origin between points at radii r and r2 that are still
// within distance R of each other. Returns pi when r + r2 < R and 0 when no
// angle works (one radius is zero and the other is at least R).
double theta_r_exact(double r, double r2, double R);

// Leading-order estimate 2 e^{(R - r - r2)/2}; requires 0 <= r <= R and r + r2 >= R.
double theta_r_approx(double r, double r2, double R);

// Probability mass of B_O(r) under the radial law (exact closed form).
double mu_ball_origin(double r, const ModelParams& params);
// e^{-alpha (R - r)}, valid for r <= R.
double mu_ball_origin_approx(double r, const ModelParams& params);

// (2 alpha / (pi (alpha - 1/2))) e^{-r_p / 2}; requires r_p <= R.
double mu_ball_intersection_approx(const PolarPoint& p, const ModelParams& params);
// Numerical evaluation of mu(B_p(R) ∩ B_O(R)) by adaptive quadrature of the
// radial density against the angular width 2 theta_R(r_p, r).
double mu_ball_intersection_exact(const PolarPoint& p, const ModelParams& params);
// The approximation's relative error term e^{-(alpha-1/2) r_p} + e^{-r_p} is
// below 1/2.
bool mu_ball_intersection_approx_valid(const PolarPoint& p, const ModelParams& params);

// Inverse of the radial CDF mu_ball_origin; u in [0, 1].
double radial_quantile(double u, const ModelParams& params);

// Precomputed hyperbolic functions of a radius, for hot loops.
struct RadialTerms {
    double r;
    double sinh_r;

    static RadialTerms of(double r);
};

// d(p, q) < R expressed as cosh d < cosh R, without inverse functions. Uses
// cosh d = cosh(r_p - r_q) + 2 sinh r_p sinh r_q sin^2(dtheta / 2), which has no
// cancellation for nearby points.
inline bool is_edge_terms(const RadialTerms& p, double theta_p, const RadialTerms& q,
                          double theta_q, double cosh_R) {
    const double s = std::sin(0.5 * angular_difference(theta_p, theta_q));
    return std::cosh(std::fabs(p.r - q.r)) + 2.0 * p.sinh_r * q.sinh_r * s * s < cosh_R;
}

bool is_edge(const PolarPoint& p, const PolarPoint& q, double R);

} // namespace hyperwalk
