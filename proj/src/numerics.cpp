#include "hypmnnr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypmnnr/errors.hpp"

namespace hypmnnr {

namespace {

constexpr double pi = std::numbers::pi;

double slice_union_area(const LensGeometry& g, double w) {
    const double r1sq = g.slice_radius_sq_a(w);
    const double r2sq = g.slice_radius_sq_b(w);
    const double rho1 = r1sq > 0.0 ? std::sqrt(r1sq) : 0.0;
    const double rho2 = r2sq > 0.0 ? std::sqrt(r2sq) : 0.0;
    if (rho1 == 0.0 && rho2 == 0.0)
        return 0.0;
    return circle_union_area(rho1, rho2, g.s);
}

// Integral of f over one lens cap in rotated cylindrical coordinates:
// heights w in [rr - hh, rr], full disk of radius sqrt(rr^2 - w^2) per height,
// original height reconstructed as cc + w*cos(tilt) - x*sin(tilt).
double lens_cap_integral(const MarkModel& marks, double rr, double hh, double cc, double tilt,
                         const QuadratureSpec& inner, const QuadratureSpec& mid,
                         const QuadratureSpec& outer) {
    const double cos_t = std::cos(tilt);
    const double sin_t = std::sin(tilt);
    const double lo = marks.support_lo();
    const double hi = marks.support_hi();

    auto height_integrand = [&](double w) {
        const double disk_radius = std::sqrt(std::max(0.0, (rr - w) * (rr + w)));
        if (disk_radius <= 0.0)
            return 0.0;
        auto angle_integrand = [&](double theta) {
            const double a0 = cc + w * cos_t;
            const double b0 = std::cos(theta) * sin_t;
            // f's support boundaries cross the ray at known radii; split there.
            double splits[2];
            std::size_t nsplit = 0;
            if (b0 != 0.0) {
                for (double edge : {lo, hi}) {
                    const double sc = (a0 - edge) / b0;
                    if (sc > 0.0 && sc < disk_radius)
                        splits[nsplit++] = sc;
                }
            }
            return adaptive_quad(
                [&](double sc) {
                    const double height = a0 - sc * b0;
                    const double f = (height > lo && height < hi) ? marks.density(height) : 0.0;
                    return f * sc;
                },
                0.0, disk_radius, inner, std::span<const double>(splits, nsplit));
        };
        // The integrand is symmetric about theta = pi.
        return 2.0 * adaptive_quad(angle_integrand, 0.0, pi, mid);
    };

    return adaptive_quad(height_integrand, rr - hh, rr, outer);
}

} // namespace

const char* volume_method_name(VolumeMethod m) {
    switch (m) {
    case VolumeMethod::Slice: return "slice";
    case VolumeMethod::Triple: return "triple";
    case VolumeMethod::MonteCarlo: return "mc";
    case VolumeMethod::ClosedForm: return "closed-form";
    }
    return "?";
}

VolumeEstimate volume_f_slice(double s, double z, double z_t, const MarkModel& marks,
                              const QuadratureSpec& spec) {
    const LensGeometry g = lens_geometry(s, z, z_t);

    if (marks.kind() == MarkModel::Kind::Degenerate) {
        // Point mass at mu: F is exactly the slice union area at that height.
        return {slice_union_area(g, marks.degenerate_mu()), 0.0, VolumeMethod::ClosedForm};
    }

    const double w_lo = std::max(g.height_lo(), marks.support_lo());
    const double w_hi = std::min(g.height_hi(), marks.support_hi());
    if (!(w_lo < w_hi))
        return {0.0, 0.0, VolumeMethod::Slice};

    // Substitute u = CDF(w): du = f(w) dw, so F = integral of area(Q(u)) du.
    const double u_lo = marks.cdf(w_lo);
    const double u_hi = marks.cdf(w_hi);
    if (!(u_lo < u_hi))
        return {0.0, 0.0, VolumeMethod::Slice};

    // Ball top/bottom heights are kinks of the area; split there (in u).
    std::vector<double> breaks;
    for (double edge : {g.c - g.r, g.c + g.r, g.c_t - g.r_t, g.c_t + g.r_t})
        if (edge > w_lo && edge < w_hi)
            breaks.push_back(marks.cdf(edge));

    const double value = adaptive_quad(
        [&](double u) { return slice_union_area(g, marks.quantile_fast(u)); }, u_lo, u_hi, spec,
        breaks);
    return {std::max(0.0, value), 0.0, VolumeMethod::Slice};
}

VolumeEstimate volume_f_triple(double s, double z, double z_t, const MarkModel& marks,
                               const QuadratureSpec& spec) {
    if (!marks.has_density())
        throw UnsupportedOperation(
            "the nested-integral route integrates the mark density; degenerate marks have none "
            "(use the slice route)");
    const LensGeometry g = lens_geometry(s, z, z_t);
    const double lo = marks.support_lo();
    const double hi = marks.support_hi();

    auto ball_integral = [&](double rr, double cc) {
        // pi * integral of f(w + cc) (rr^2 - w^2) dw over [-rr, rr].
        double splits[2];
        std::size_t nsplit = 0;
        for (double edge : {lo - cc, hi - cc})
            if (edge > -rr && edge < rr)
                splits[nsplit++] = edge;
        return pi * adaptive_quad(
                        [&](double w) {
                            const double height = w + cc;
                            const double f =
                                (height > lo && height < hi) ? marks.density(height) : 0.0;
                            return f * (rr - w) * (rr + w);
                        },
                        -rr, rr, spec.scaled(0.25), std::span<const double>(splits, nsplit));
    };

    QuadratureSpec inner{1e-13, 1e-12, 36};
    QuadratureSpec mid{1e-12, 5e-12, 42};
    QuadratureSpec outer = spec.scaled(0.25);
    outer.max_depth = std::max(outer.max_depth, 48);

    const double balls = ball_integral(g.r, g.c) + ball_integral(g.r_t, g.c_t);
    const double lens_a =
        lens_cap_integral(marks, g.r, g.h, g.c, g.delta, inner, mid, outer);
    const double lens_b =
        lens_cap_integral(marks, g.r_t, g.h_t, g.c_t, g.delta_t, inner, mid, outer);

    return {std::max(0.0, balls - lens_a - lens_b), 0.0, VolumeMethod::Triple};
}

VolumeEstimate volume_f_mc(double s, double z, double z_t, const MarkModel& marks, long long n,
                           SeededRng& rng) {
    if (n < 1000)
        throw std::invalid_argument("volume Monte Carlo requires n >= 1000 samples");
    const LensGeometry g = lens_geometry(s, z, z_t);

    double sum = 0.0, sum_sq = 0.0;
    for (long long i = 0; i < n; ++i) {
        const double w = marks.sample_one(rng);
        const double r1sq = g.slice_radius_sq_a(w);
        const double r2sq = g.slice_radius_sq_b(w);
        const double rho1 = r1sq > 0.0 ? std::sqrt(r1sq) : 0.0;
        const double rho2 = r2sq > 0.0 ? std::sqrt(r2sq) : 0.0;
        double x_lo, x_hi, half_height;
        if (rho1 > 0.0 && rho2 > 0.0) {
            x_lo = std::min(-rho1, s - rho2);
            x_hi = std::max(rho1, s + rho2);
            half_height = std::max(rho1, rho2);
        } else if (rho1 > 0.0) {
            x_lo = -rho1;
            x_hi = rho1;
            half_height = rho1;
        } else if (rho2 > 0.0) {
            x_lo = s - rho2;
            x_hi = s + rho2;
            half_height = rho2;
        } else {
            continue; // height outside both balls: contributes zero
        }
        const double box_area = (x_hi - x_lo) * 2.0 * half_height;
        const double px = rng.uniform(x_lo, x_hi);
        const double py = rng.uniform(-half_height, half_height);
        const bool inside = (px * px + py * py < rho1 * rho1) ||
                            ((px - s) * (px - s) + py * py < rho2 * rho2);
        if (inside) {
            sum += box_area;
            sum_sq += box_area * box_area;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double stderr_sq =
        std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean) / static_cast<double>(n - 1);
    return {mean, std::sqrt(stderr_sq), VolumeMethod::MonteCarlo};
}

} // namespace hypmnnr
