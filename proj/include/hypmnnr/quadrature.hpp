#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hypmnnr/errors.hpp"

namespace hypmnnr {

/// Tolerances for adaptive integration. The estimate is accepted once the
/// accumulated error bound drops below max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    int max_depth = 40;

    void validate() const;
    QuadratureSpec scaled(double factor) const {
        QuadratureSpec q = *this;
        q.abs_tol *= factor;
        q.rel_tol *= factor;
        return q;
    }
};

/// Adaptive Gauss-Kronrod (7-15) integration of fn over [lo, hi].
/// Throws NonConvergence (carrying the best estimate) if max_depth bisections
/// cannot reach the tolerance.
double adaptive_quad(const std::function<double(double)>& fn, double lo, double hi,
                     const QuadratureSpec& spec);

/// Same, but the interval is pre-split at the given breakpoints (values outside
/// (lo, hi) are ignored). Use for integrands with known kinks or jumps, e.g.
/// the support boundary of a mark density.
double adaptive_quad(const std::function<double(double)>& fn, double lo, double hi,
                     const QuadratureSpec& spec, std::span<const double> breakpoints);

} // namespace hypmnnr
