#include "hypmnnr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypmnnr {

namespace {

// Gauss 7 / Kronrod 15 on [-1, 1]: abscissa, Gauss weight, Kronrod weight.
// Gauss-only nodes have zero Gauss weight entries for the Kronrod extension.
constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& fn, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = fn(mid);
    double gauss = kNodes[0][1] * f0;
    double kronrod = kNodes[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i][0];
        const double fsum = fn(mid + dx) + fn(mid - dx);
        gauss += kNodes[i][1] * fsum;
        kronrod += kNodes[i][2] * fsum;
    }
    gauss *= half;
    kronrod *= half;

    double err = 200.0 * std::abs(gauss - kronrod);
    err *= std::sqrt(err);
    return {kronrod, err};
}

// Depth-first refinement with a width-proportional error budget.
double integrate_piece(const std::function<double(double)>& fn, double a, double b,
                       double tol, int depth, int max_depth, bool& converged) {
    const PanelResult whole = gk15(fn, a, b);
    if (whole.error <= tol || !std::isfinite(whole.value))
        return whole.value;
    if (depth >= max_depth) {
        converged = false;
        return whole.value;
    }
    const double mid = 0.5 * (a + b);
    return integrate_piece(fn, a, mid, 0.5 * tol, depth + 1, max_depth, converged) +
           integrate_piece(fn, mid, b, 0.5 * tol, depth + 1, max_depth, converged);
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be > 0");
    if (max_depth < 1)
        throw std::invalid_argument("quadrature max_depth must be >= 1");
}

double adaptive_quad(const std::function<double(double)>& fn, double lo, double hi,
                     const QuadratureSpec& spec) {
    return adaptive_quad(fn, lo, hi, spec, {});
}

double adaptive_quad(const std::function<double(double)>& fn, double lo, double hi,
                     const QuadratureSpec& spec, std::span<const double> breakpoints) {
    spec.validate();
    if (!(lo <= hi))
        throw std::invalid_argument("integration bounds must satisfy lo <= hi");
    if (lo == hi)
        return 0.0;

    std::vector<double> edges;
    edges.push_back(lo);
    for (double b : breakpoints)
        if (b > lo && b < hi)
            edges.push_back(b);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());

    // First pass to estimate the magnitude, so the relative tolerance has a scale.
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        rough += gk15(fn, edges[i], edges[i + 1]).value;

    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough));
    const double total_width = hi - lo;

    double sum = 0.0;
    bool converged = true;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double w = edges[i + 1] - edges[i];
        sum += integrate_piece(fn, edges[i], edges[i + 1], tol * std::max(w / total_width, 1e-3),
                               0, spec.max_depth, converged);
    }
    if (!converged)
        throw NonConvergence("adaptive quadrature did not reach tolerance", sum);
    return sum;
}

} // namespace hypmnnr
