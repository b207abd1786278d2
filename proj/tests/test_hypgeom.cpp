#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypmnnr/hypgeom.hpp"
#include "hypmnnr/rng.hpp"

using namespace hypmnnr;

namespace {

constexpr double pi = std::numbers::pi;

double random_mark(SeededRng& rng) {
    // log-uniform over [0.05, 20]
    return 0.05 * std::exp(rng.uniform() * std::log(400.0));
}

/// Independent re-derivation of the cap height from the triangle with sides
/// (r, r_t, d): Heron's formula gives the triangle height a over the center
/// segment, and h = r - sign(r^2 - r_t^2 + d^2) * sqrt(r^2 - a^2). The sign
/// term covers caps that extend past the equator (r_t^2 > r^2 + d^2).
double cap_height_heron(double r, double r_t, double d) {
    const double p = 0.5 * (r + r_t + d);
    const double area = std::sqrt(p * (p - r) * (p - r_t) * (p - d));
    const double a = 2.0 * area / d;
    const double leg = std::sqrt(std::max(0.0, r * r - a * a));
    const double sign = (r * r - r_t * r_t + d * d) >= 0.0 ? 1.0 : -1.0;
    return r - sign * leg;
}

} // namespace

TEST_CASE("hyperbolic distance: identical atoms are at distance zero") {
    CHECK(hyperbolic_distance(MarkedAtom(0, 0, 1), MarkedAtom(0, 0, 1)) == 0.0);
    CHECK(hyperbolic_distance(MarkedAtom(3.5, -2, 0.7), MarkedAtom(3.5, -2, 0.7)) == 0.0);
}

TEST_CASE("hyperbolic distance: axial separation is the log of the mark ratio") {
    const double e = std::exp(1.0);
    CHECK(hyperbolic_distance(MarkedAtom(0, 0, 1), MarkedAtom(0, 0, e)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hyperbolic distance: planar separation sqrt(2) at unit marks") {
    const double d = hyperbolic_distance(MarkedAtom(0, 0, 1), MarkedAtom(std::sqrt(2.0), 0, 1));
    CHECK(d == doctest::Approx(1.316957896924817).epsilon(1e-14)); // acosh(2)
}

TEST_CASE("hyperbolic distance: symmetric in its arguments") {
    SeededRng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const MarkedAtom a(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        const MarkedAtom b(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        CHECK(hyperbolic_distance(a, b) == hyperbolic_distance(b, a));
    }
}

TEST_CASE("hyperbolic distance: triangle inequality") {
    SeededRng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const MarkedAtom a(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        const MarkedAtom b(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        const MarkedAtom c(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        CHECK(hyperbolic_distance(a, c) <=
              hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-12);
    }
}

TEST_CASE("hyperbolic distance: rejects non-positive marks") {
    CHECK_THROWS_AS(MarkedAtom(0, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(MarkedAtom(0, 0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(hyperbolic_distance(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("euclidean ball: lifted center and mark-scaled radius") {
    const Ball3 b = euclidean_ball(MarkedAtom(0, 0, 1), 1.0);
    CHECK(b.center_x == 0.0);
    CHECK(b.center_y == 0.0);
    CHECK(b.center_h == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
    CHECK(b.radius == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));

    // cosh(ln 3) = 5/3, sinh(ln 3) = 4/3
    const Ball3 b2 = euclidean_ball(MarkedAtom(2, 3, 0.5), std::log(3.0));
    CHECK(b2.center_x == 2.0);
    CHECK(b2.center_y == 3.0);
    CHECK(b2.center_h == doctest::Approx(0.5 * 5.0 / 3.0).epsilon(1e-14));
    CHECK(b2.radius == doctest::Approx(0.5 * 4.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(euclidean_ball(MarkedAtom(0, 0, 1), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(euclidean_ball(MarkedAtom(0, 0, 1), -0.5), std::invalid_argument);
}

TEST_CASE("euclidean ball: (0,0,e) sits on the boundary of the unit-eps ball around (0,0,1)") {
    const Ball3 b = euclidean_ball(MarkedAtom(0, 0, 1), 1.0);
    const double dist = std::abs(std::exp(1.0) - b.center_h);
    CHECK(dist == doctest::Approx(b.radius).epsilon(1e-14));
    CHECK(hyperbolic_distance(MarkedAtom(0, 0, 1), MarkedAtom(0, 0, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ball membership is equivalent to hyperbolic proximity") {
    SeededRng rng(13);
    int tested = 0;
    for (int i = 0; i < 100000; ++i) {
        const MarkedAtom a(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        const MarkedAtom b(rng.uniform(-5, 5), rng.uniform(-5, 5), random_mark(rng));
        const double eps = rng.uniform(0.01, 3.0);
        const double dist = hyperbolic_distance(a, b);
        if (std::abs(dist - eps) <= 1e-9)
            continue; // boundary band
        ++tested;
        const bool inside_ball = euclidean_ball(a, eps).contains(b.x, b.y, b.z);
        CHECK(inside_ball == (dist < eps));
    }
    CHECK(tested > 90000);
}

TEST_CASE("lens geometry: symmetric equal-mark case") {
    const LensGeometry g = lens_geometry(1.0, 1.0, 1.0);
    CHECK(g.R == doctest::Approx(0.962423650119207).epsilon(1e-14)); // acosh(1.5)
    CHECK(g.d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.r == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));
    CHECK(g.r_t == g.r);
    CHECK(g.c == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(g.c_t == g.c);
    CHECK(g.delta == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(g.delta_t == doctest::Approx(pi / 2).epsilon(1e-14));
    // Equal radii at distance d: h = r - d/2.
    CHECK(g.h == doctest::Approx(std::sqrt(1.25) - 0.5).epsilon(1e-14));
    CHECK(g.h_t == doctest::Approx(g.h).epsilon(1e-14));
}

TEST_CASE("lens geometry: matches the independent cap-height re-derivation") {
    // This configuration has an obtuse radical plane (h > r), which the
    // signed Heron derivation must also produce.
    const LensGeometry g = lens_geometry(1.0, 1.0, 2.0);
    CHECK(g.h == doctest::Approx(cap_height_heron(g.r, g.r_t, g.d)).epsilon(1e-12));
    CHECK(g.h_t == doctest::Approx(cap_height_heron(g.r_t, g.r, g.d)).epsilon(1e-12));
    CHECK(g.h > g.r);
    CHECK(g.h == doctest::Approx(1.256709037806202).epsilon(1e-13));
    CHECK(g.h_t == doctest::Approx(0.294617290711488).epsilon(1e-13));

    SeededRng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double s = rng.uniform(0.01, 5.0);
        const double z = random_mark(rng);
        const double z_t = random_mark(rng);
        const LensGeometry lg = lens_geometry(s, z, z_t);
        CHECK(lg.h ==
              doctest::Approx(cap_height_heron(lg.r, lg.r_t, lg.d)).epsilon(1e-9));
    }
}

TEST_CASE("lens geometry: cap height identity h + h_t = r + r_t - d") {
    SeededRng rng(19);
    for (int i = 0; i < 100000; ++i) {
        const double s = rng.uniform(0.0, 8.0);
        const double z = random_mark(rng);
        const double z_t = random_mark(rng);
        if (s == 0.0 && z == z_t)
            continue;
        const LensGeometry g = lens_geometry(s, z, z_t);
        const double lhs = g.h + g.h_t;
        const double rhs = g.r + g.r_t - g.d;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("lens geometry: balls intersect and are never nested") {
    SeededRng rng(23);
    for (int i = 0; i < 100000; ++i) {
        const double s = rng.uniform(1e-6, 8.0);
        const double z = random_mark(rng);
        const double z_t = random_mark(rng);
        const LensGeometry g = lens_geometry(s, z, z_t);
        CHECK(g.r + g.r_t > g.d);
        CHECK(g.d + std::min(g.r, g.r_t) > std::max(g.r, g.r_t));
        // Cap heights are positive and no larger than the ball diameter.
        CHECK(g.h > 0.0);
        CHECK(g.h_t > 0.0);
        CHECK(g.h <= 2.0 * g.r * (1.0 + 1e-12));
        CHECK(g.h_t <= 2.0 * g.r_t * (1.0 + 1e-12));
    }
}

TEST_CASE("lens geometry: swapping marks swaps the paired fields") {
    SeededRng rng(29);
    for (int i = 0; i < 10000; ++i) {
        const double s = rng.uniform(0.001, 8.0);
        const double z = random_mark(rng);
        const double z_t = random_mark(rng);
        const LensGeometry g = lens_geometry(s, z, z_t);
        const LensGeometry gs = lens_geometry(s, z_t, z);
        CHECK(g.R == gs.R);
        CHECK(g.d == gs.d);
        CHECK(g.s == gs.s);
        CHECK(g.r == gs.r_t);
        CHECK(g.r_t == gs.r);
        CHECK(g.c == gs.c_t);
        CHECK(g.c_t == gs.c);
        CHECK(g.h == gs.h_t);
        CHECK(g.h_t == gs.h);
        CHECK(g.delta == gs.delta_t);
        CHECK(g.delta_t == gs.delta);
    }
}

TEST_CASE("lens geometry: degenerate pair is rejected, stacked atoms are legal") {
    CHECK_THROWS_AS(lens_geometry(0.0, 1.0, 1.0), std::invalid_argument);
    const LensGeometry g = lens_geometry(0.0, 1.0, 2.0);
    CHECK(g.R == doctest::Approx(std::acosh(1.25)).epsilon(1e-14)); // (1/2+2)/2
    CHECK(g.R > 0.0);
    CHECK(g.d > 0.0);
}

TEST_CASE("circle union area: coincident, disjoint, nested, and overlapping disks") {
    CHECK(circle_union_area(1, 1, 0) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(circle_union_area(1, 1, 3) == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(circle_union_area(1, 3, 1) == doctest::Approx(9 * pi).epsilon(1e-15));
    CHECK(circle_union_area(0, 2, 1) == doctest::Approx(4 * pi).epsilon(1e-15));
    // Unit disks at unit distance: 2 pi - (2 pi/3 - sqrt(3)/2).
    CHECK(circle_union_area(1, 1, 1) == doctest::Approx(5.054815608570829).epsilon(1e-14));
}

TEST_CASE("circle union area: matches 2-D Monte Carlo hit counting") {
    SeededRng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const double rho1 = rng.uniform(0.2, 2.0);
        const double rho2 = rng.uniform(0.2, 2.0);
        const double s = rng.uniform(0.0, 3.5);
        const double x_lo = std::min(-rho1, s - rho2), x_hi = std::max(rho1, s + rho2);
        const double y_hi = std::max(rho1, rho2);
        const long long n = 2000000;
        long long hits = 0;
        for (long long i = 0; i < n; ++i) {
            const double x = rng.uniform(x_lo, x_hi);
            const double y = rng.uniform(-y_hi, y_hi);
            if (x * x + y * y < rho1 * rho1 || (x - s) * (x - s) + y * y < rho2 * rho2)
                ++hits;
        }
        const double box = (x_hi - x_lo) * 2.0 * y_hi;
        const double p = static_cast<double>(hits) / static_cast<double>(n);
        const double estimate = box * p;
        const double stderr_est = box * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        CHECK(std::abs(circle_union_area(rho1, rho2, s) - estimate) <= 4.0 * stderr_est);
    }
}
