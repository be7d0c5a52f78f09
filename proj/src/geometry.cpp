#include <hyperwalk/geometry.hpp>

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <hyperwalk/errors.hpp>

namespace hyperwalk {

namespace {

// acosh(1 + y) without losing the low bits of small y.
double acosh1p(double y) {
    return std::log1p(y + std::sqrt(y * (y + 2.0)));
}

} // namespace

double canonical_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    // fmod of a tiny negative value can round back up to exactly 2pi.
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

PolarPoint::PolarPoint(double r, double theta) : r_(r), theta_(canonical_angle(theta)) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidArgument(fmt::format("PolarPoint: radius must be finite and >= 0, got {}", r));
    }
    if (!std::isfinite(theta)) {
        throw InvalidArgument("PolarPoint: angle must be finite");
    }
}

ModelParams::ModelParams(double alpha, double nu, double n) : alpha_(alpha), nu_(nu), n_(n) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw InvalidArgument(fmt::format("alpha must lie in (1/2, 1), got {}", alpha));
    }
    if (!(nu > 0.0)) {
        throw InvalidArgument(fmt::format("nu must be positive, got {}", nu));
    }
    if (!(n >= 1.0) || !(n > nu)) {
        throw InvalidArgument(fmt::format("n must be >= 1 and exceed nu (R > 0), got n={} nu={}", n, nu));
    }
}

double ModelParams::R() const {
    return 2.0 * std::log(n_ / nu_);
}

double ModelParams::expected_mean_degree() const {
    const double a = alpha_ - 0.5;
    return 2.0 * alpha_ * alpha_ * nu_ / (kPi * a * a);
}

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q) {
    // cosh d - 1 = 2 sinh^2(dr/2) + 2 sinh r_p sinh r_q sin^2(dtheta/2)
    const double half_dr = 0.5 * std::fabs(p.r() - q.r());
    const double sh = std::sinh(half_dr);
    const double s = std::sin(0.5 * angular_difference(p.theta(), q.theta()));
    const double y = 2.0 * sh * sh + 2.0 * std::sinh(p.r()) * std::sinh(q.r()) * s * s;
    return acosh1p(y);
}

double theta_r_exact(double r, double r2, double R) {
    if (r + r2 < R) {
        return kPi;
    }
    const double denom = 2.0 * std::sinh(r) * std::sinh(r2);
    if (denom <= 0.0) {
        return 0.0;
    }
    // cosh R = cosh(r - r2) + 2 sinh r sinh r2 sin^2(theta/2)
    const double s2 = (std::cosh(R) - std::cosh(r - r2)) / denom;
    const double clamped = std::clamp(s2, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(clamped));
}

double theta_r_approx(double r, double r2, double R) {
    if (!(r >= 0.0 && r <= R && r + r2 >= R)) {
        throw InvalidArgument(
            fmt::format("theta_r_approx requires 0 <= r <= R and r + r2 >= R (r={}, r2={}, R={})", r, r2, R));
    }
    return 2.0 * std::exp(0.5 * (R - r - r2));
}

double mu_ball_origin(double r, const ModelParams& params) {
    if (!(r >= 0.0)) {
        throw InvalidArgument("mu_ball_origin: radius must be >= 0");
    }
    const double a = params.alpha();
    const double R = params.R();
    const double x = std::min(r, R);
    // cosh t - 1 = 2 sinh^2(t/2)
    const double num = std::sinh(0.5 * a * x);
    const double den = std::sinh(0.5 * a * R);
    return (num * num) / (den * den);
}

double mu_ball_origin_approx(double r, const ModelParams& params) {
    return std::exp(-params.alpha() * (params.R() - r));
}

double mu_ball_intersection_approx(const PolarPoint& p, const ModelParams& params) {
    if (p.r() > params.R()) {
        throw InvalidArgument("mu_ball_intersection_approx: point outside B_O(R)");
    }
    const double a = params.alpha();
    return 2.0 * a * std::exp(-0.5 * p.r()) / (kPi * (a - 0.5));
}

bool mu_ball_intersection_approx_valid(const PolarPoint& p, const ModelParams& params) {
    const double err = std::exp(-(params.alpha() - 0.5) * p.r()) + std::exp(-p.r());
    return err < 0.5;
}

double mu_ball_intersection_exact(const PolarPoint& p, const ModelParams& params) {
    if (p.r() > params.R()) {
        throw InvalidArgument("mu_ball_intersection_exact: point outside B_O(R)");
    }
    const double a = params.alpha();
    const double R = params.R();
    const double norm = std::cosh(a * R) - 1.0;
    const double rp = p.r();
    auto integrand = [&](double r) {
        const double density = a * std::sinh(a * r) / norm;
        return density * theta_r_exact(rp, r, R) / kPi;
    };
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    // The angular width stops being pi at r = R - r_p; integrate both sides separately.
    const double kink = std::clamp(R - rp, 0.0, R);
    double total = 0.0;
    if (kink > 0.0) {
        total += Quad::integrate(integrand, 0.0, kink, 20, 1e-13);
    }
    if (kink < R) {
        total += Quad::integrate(integrand, kink, R, 20, 1e-13);
    }
    return total;
}

double radial_quantile(double u, const ModelParams& params) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw InvalidArgument(fmt::format("radial_quantile: u must lie in [0, 1], got {}", u));
    }
    const double a = params.alpha();
    const double R = params.R();
    if (u == 1.0) {
        return R;
    }
    const double half = std::sinh(0.5 * a * R);
    // u (cosh(aR) - 1) = 2 u sinh^2(aR/2)
    const double y = 2.0 * u * half * half;
    return std::min(acosh1p(y) / a, R);
}

RadialTerms RadialTerms::of(double r) {
    return RadialTerms{r, std::sinh(r)};
}

bool is_edge(const PolarPoint& p, const PolarPoint& q, double R) {
    return is_edge_terms(RadialTerms::of(p.r()), p.theta(), RadialTerms::of(q.r()), q.theta(),
                         std::cosh(R));
}

} // namespace hyperwalk
