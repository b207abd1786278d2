#include "hypmnnr/hypgeom.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypmnnr {

namespace {

void require_finite_position(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("atom position must be finite");
}

void require_positive_mark(double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::invalid_argument("resource mark must be > 0, got " + std::to_string(z));
}

} // namespace

MarkedAtom::MarkedAtom(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    require_finite_position(x_, y_);
    require_positive_mark(z_);
}

double hyperbolic_distance(double s, double z, double z_t) {
    require_positive_mark(z);
    require_positive_mark(z_t);
    if (s < 0.0 || !std::isfinite(s))
        throw std::invalid_argument("planar separation must be finite and >= 0");
    const double dz = z - z_t;
    const double t = (s * s + dz * dz) / (2.0 * z * z_t);
    return acosh1p(t);
}

double hyperbolic_distance(const MarkedAtom& a, const MarkedAtom& b) {
    return hyperbolic_distance(std::hypot(a.x - b.x, a.y - b.y), a.z, b.z);
}

Ball3 euclidean_ball(const MarkedAtom& a, double eps) {
    require_positive_mark(a.z);
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("ball radius must be > 0");
    Ball3 ball;
    ball.center_x = a.x;
    ball.center_y = a.y;
    ball.center_h = a.z * std::cosh(eps);
    ball.radius = a.z * std::sinh(eps);
    return ball;
}

LensGeometry lens_geometry(double s, double z, double z_t) {
    require_positive_mark(z);
    require_positive_mark(z_t);
    if (s < 0.0 || !std::isfinite(s))
        throw std::invalid_argument("planar separation must be finite and >= 0");
    if (s == 0.0 && z == z_t)
        throw std::invalid_argument("degenerate pair: coincident atoms have zero-size balls");

    LensGeometry g;
    g.s = s;
    g.z = z;
    g.z_t = z_t;

    const double dz = z - z_t;
    const double t = (s * s + dz * dz) / (2.0 * z * z_t); // cosh(R) - 1
    g.cosh_m1 = t;
    g.R = acosh1p(t);

    const double cosh_r = 1.0 + t;
    const double sinh_r = std::sqrt(t * (t + 2.0));
    g.r = z * sinh_r;
    g.r_t = z_t * sinh_r;
    g.c = z * cosh_r;
    g.c_t = z_t * cosh_r;
    g.d = std::sqrt(s * s + dz * dz * cosh_r * cosh_r);

    g.h = (g.r_t - g.r + g.d) * (g.r + g.r_t - g.d) / (2.0 * g.d);
    g.h_t = (g.r - g.r_t + g.d) * (g.r + g.r_t - g.d) / (2.0 * g.d);

    // |c_t - c| <= d holds exactly but can round past 1; clamp before asin.
    const double q = std::clamp((g.c_t - g.c) / g.d, -1.0, 1.0);
    constexpr double half_pi = std::numbers::pi / 2.0;
    g.delta = half_pi - std::asin(q);
    g.delta_t = half_pi - std::asin(-q);
    return g;
}

double circle_intersection_area(double rho1, double rho2, double s) {
    if (rho1 < 0.0 || rho2 < 0.0 || s < 0.0)
        throw std::invalid_argument("disk radii and center distance must be >= 0");
    constexpr double pi = std::numbers::pi;
    if (rho1 == 0.0 || rho2 == 0.0)
        return 0.0;
    if (s >= rho1 + rho2)
        return 0.0;
    const double rmin = std::min(rho1, rho2);
    if (s <= std::abs(rho1 - rho2))
        return pi * rmin * rmin;

    const double a1 = std::clamp((s * s + rho1 * rho1 - rho2 * rho2) / (2.0 * s * rho1), -1.0, 1.0);
    const double a2 = std::clamp((s * s + rho2 * rho2 - rho1 * rho1) / (2.0 * s * rho2), -1.0, 1.0);
    const double heron = std::max(0.0, (-s + rho1 + rho2) * (s + rho1 - rho2) *
                                           (s - rho1 + rho2) * (s + rho1 + rho2));
    return rho1 * rho1 * std::acos(a1) + rho2 * rho2 * std::acos(a2) - 0.5 * std::sqrt(heron);
}

double circle_union_area(double rho1, double rho2, double s) {
    constexpr double pi = std::numbers::pi;
    return pi * rho1 * rho1 + pi * rho2 * rho2 - circle_intersection_area(rho1, rho2, s);
}

} // namespace hypmnnr
