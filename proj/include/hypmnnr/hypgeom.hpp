#pragma once

#include <cmath>

namespace hypmnnr {

/// A wireless node: planar position (km) plus a strictly positive resource
/// mark. Positions and marks together embed the node in the hyperbolic
/// half-space, so proximity accounts for both location and resources.
struct MarkedAtom {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0; // resource mark, > 0

    MarkedAtom() = default;
    MarkedAtom(double x_, double y_, double z_);
};

/// A Euclidean ball in 3-space. Hyperbolic balls around a marked atom are
/// Euclidean balls with lifted center and mark-scaled radius.
struct Ball3 {
    double center_x = 0.0;
    double center_y = 0.0;
    double center_h = 1.0; // third coordinate of the center, > 0
    double radius = 1.0;   // > 0

    bool contains(double px, double py, double ph) const {
        const double dx = px - center_x, dy = py - center_y, dh = ph - center_h;
        return dx * dx + dy * dy + dh * dh < radius * radius;
    }
};

/// Derived variables of the union of the two mutual-neighbor balls around a
/// pair of atoms with planar separation s and marks z, z_t. All quantities
/// are functions of (s, z, z_t) only.
struct LensGeometry {
    double R = 0.0;       // hyperbolic separation of the two atoms
    double s = 0.0;       // planar distance between the atoms
    double z = 0.0;       // mark of the first atom
    double z_t = 0.0;     // mark of the second atom
    double d = 0.0;       // 3-D distance between the ball centers
    double r = 0.0;       // radius of the first ball
    double r_t = 0.0;     // radius of the second ball
    double c = 0.0;       // center height of the first ball
    double c_t = 0.0;     // center height of the second ball
    double h = 0.0;       // height of the first ball's lens cap
    double h_t = 0.0;     // height of the second ball's lens cap
    double delta = 0.0;   // tilt angle of the first cap axis (rad)
    double delta_t = 0.0; // tilt angle of the second cap axis (rad)
    double cosh_m1 = 0.0; // cosh(R) - 1, kept separately for precision

    /// Squared radius of the first ball's horizontal slice at height w;
    /// negative when the slice is empty. The form 2*w*z*(cosh R - 1) - (w-z)^2
    /// is exact even when R is tiny.
    double slice_radius_sq_a(double w) const { return 2.0 * w * z * cosh_m1 - (w - z) * (w - z); }
    double slice_radius_sq_b(double w) const { return 2.0 * w * z_t * cosh_m1 - (w - z_t) * (w - z_t); }

    double height_lo() const { return std::min(c - r, c_t - r_t); }
    double height_hi() const { return std::max(c + r, c_t + r_t); }
};

/// acosh(1 + t) for t >= 0 without precision loss near t = 0.
inline double acosh1p(double t) {
    return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

/// Hyperbolic distance between atoms with planar separation s and marks z, z_t.
/// The acosh argument is carried as 1 + t with t = (s^2 + (z - z_t)^2) / (2 z z_t),
/// which is exact for coincident atoms.
double hyperbolic_distance(double s, double z, double z_t);

/// Hyperbolic distance between two atoms under the open-plane metric.
double hyperbolic_distance(const MarkedAtom& a, const MarkedAtom& b);

/// The Euclidean ball that realizes the hyperbolic ball of radius eps around a.
Ball3 euclidean_ball(const MarkedAtom& a, double eps);

/// All derived variables of the two-ball union for a distinct pair
/// (s > 0, or s = 0 with z != z_t). Throws std::invalid_argument on a
/// degenerate pair.
LensGeometry lens_geometry(double s, double z, double z_t);

/// Area of the union of two coplanar disks with radii rho1, rho2 and center
/// distance s. Handles disjoint and nested configurations.
double circle_union_area(double rho1, double rho2, double s);

/// Area of the intersection of the same two disks.
double circle_intersection_area(double rho1, double rho2, double s);

} // namespace hypmnnr
