#include "hypmnnr/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypmnnr/errors.hpp"

namespace hypmnnr {

namespace {

constexpr double pi = std::numbers::pi;

/// Weighted mark pairs representing E[g(Z, Z_t) 1_D] as sum w_k g(z_k, zt_k).
struct MarkPairTable {
    struct Entry {
        double z, z_t, weight;
    };
    std::vector<Entry> entries;
};

/// Tensor Gauss-Legendre in quantile space. For control sets with an interval
/// form, the admissible z_t range per z-node is mapped through the CDF and
/// integrated exactly on that subinterval, so the indicator never appears as a
/// discontinuous integrand.
MarkPairTable build_pair_table(const MarkModel& marks, const ControlSet& control, int nodes) {
    MarkPairTable table;
    if (marks.kind() == MarkModel::Kind::Degenerate) {
        const double mu = marks.degenerate_mu();
        if (control.contains(mu, mu))
            table.entries.push_back({mu, mu, 1.0});
        return table;
    }

    std::vector<double> x, w;
    gauss_legendre_01(nodes, x, w);
    const double lo = marks.support_lo();
    const double hi = marks.support_hi();

    std::vector<double> z_nodes(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z_nodes[i] = marks.quantile(x[i]);

    table.entries.reserve(x.size() * x.size());
    if (control.has_interval_form()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto [a, b] = control.admissible_interval(z_nodes[i], lo, hi);
            if (!(a < b))
                continue;
            const double va = marks.cdf(a);
            const double vb = marks.cdf(b);
            const double span = vb - va;
            if (!(span > 0.0))
                continue;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double zt = marks.quantile(va + x[j] * span);
                table.entries.push_back({z_nodes[i], zt, w[i] * w[j] * span});
            }
        }
    } else {
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j)
                if (control.contains(z_nodes[i], z_nodes[j]))
                    table.entries.push_back({z_nodes[i], z_nodes[j], w[i] * w[j]});
    }
    return table;
}

/// 2 pi lambda * integral over s of G(s) s ds on doubling panels [0,s1],
/// [s1,2s1], [2s1,4s1], ... Stops once a panel contributes less than
/// abs_tol * total and the integrand has decayed below 1e-12.
double radial_pair_integral(const std::function<double(double)>& survival, double lambda,
                            const QuadratureSpec& spec) {
    auto integrand = [&](double s) { return 2.0 * pi * lambda * survival(s) * s; };

    const double s1 = 1.0 / std::sqrt(lambda);
    double total = 0.0;
    double a = 0.0, b = s1;
    const int max_panels = 60;
    for (int panel = 0; panel < max_panels; ++panel) {
        const double contribution = adaptive_quad(integrand, a, b, spec);
        total += contribution;
        const double edge_max =
            std::max({integrand(a + 1e-12 * (b - a)), integrand(0.5 * (a + b)), integrand(b)});
        if (panel > 0 && std::abs(contribution) < spec.abs_tol * std::max(total, 1e-3) &&
            edge_max < 1e-12)
            return total;
        a = b;
        b = 2.0 * b;
    }
    throw NonConvergence("pair-fraction radial integral tail did not decay", total);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

void PathlossModel::validate() const {
    if (!(beta > 2.0))
        throw std::invalid_argument("pathloss exponent must be > 2 (tail integral diverges)");
    if (!(excl_radius > 0.0) || !std::isfinite(excl_radius))
        throw std::invalid_argument("exclusion radius must be > 0");
}

void ExpectationSpec::validate() const {
    if (method == Method::TensorQuadrature && nodes < 8)
        throw std::invalid_argument("tensor quadrature requires >= 8 nodes per axis");
    if (method == Method::MonteCarlo && samples < 1000)
        throw std::invalid_argument("Monte Carlo expectation requires >= 1000 samples");
}

double pair_probability(double s, double z, double z_t, double lambda, const ControlSet& control,
                        const MarkModel& marks, const QuadratureSpec& spec) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("intensity lambda must be > 0");
    if (!control.contains(z, z_t))
        return 0.0;
    const VolumeEstimate f = volume_f_slice(s, z, z_t, marks, spec);
    return std::exp(-lambda * f.value);
}

Estimate pair_fraction(double lambda, const MarkModel& marks, const ControlSet& control,
                       const ExpectationSpec& expect, const QuadratureSpec& spec) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("intensity lambda must be > 0");
    expect.validate();
    spec.validate();

    const bool tensor = expect.method == ExpectationSpec::Method::TensorQuadrature ||
                        marks.kind() == MarkModel::Kind::Degenerate;
    if (tensor) {
        const MarkPairTable table = build_pair_table(marks, control, expect.nodes);
        if (table.entries.empty())
            return {0.0, 0.0};
        auto survival = [&](double s) {
            double acc = 0.0;
            for (const auto& e : table.entries) {
                const double surv =
                    (s == 0.0 && e.z == e.z_t)
                        ? 1.0
                        : std::exp(-lambda * volume_f_slice(s, e.z, e.z_t, marks, spec).value);
                acc += e.weight * surv;
            }
            return acc;
        };
        return {clamp01(radial_pair_integral(survival, lambda, spec)), 0.0};
    }

    // Monte Carlo over mark pairs: each pair contributes its own radial
    // integral, so the spread of those per-pair values gives the std error.
    SeededRng rng(expect.seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long long k = 0; k < expect.samples; ++k) {
        const double z = marks.sample_one(rng);
        const double z_t = marks.sample_one(rng);
        double value = 0.0;
        if (control.contains(z, z_t)) {
            auto survival = [&](double s) {
                if (s == 0.0)
                    return z == z_t ? 1.0 : std::exp(-lambda * volume_f_slice(0.0, z, z_t, marks, spec).value);
                return std::exp(-lambda * volume_f_slice(s, z, z_t, marks, spec).value);
            };
            value = radial_pair_integral(survival, lambda, spec);
        }
        sum += value;
        sum_sq += value * value;
    }
    const double n = static_cast<double>(expect.samples);
    const double mean = sum / n;
    const double stderr_sq = std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0);
    return {clamp01(mean), std::sqrt(stderr_sq)};
}

double pathloss_tail_integral(const PathlossModel& pl, double max_radius) {
    pl.validate();
    if (!(max_radius > pl.excl_radius))
        return 0.0;
    const double p = 2.0 - pl.beta; // negative
    const double outer = std::isinf(max_radius) ? 0.0 : std::pow(max_radius, p);
    return 2.0 * pi * (std::pow(pl.excl_radius, p) - outer) / (pl.beta - 2.0);
}

Estimate expected_interference_singles(double lambda, const MarkModel& marks,
                                       const ControlSet& control, const PathlossModel& pl,
                                       const ExpectationSpec& expect, const QuadratureSpec& spec,
                                       double max_radius) {
    const Estimate p = pair_fraction(lambda, marks, control, expect, spec);
    const double tail = pathloss_tail_integral(pl, max_radius);
    return {(1.0 - p.value) * lambda * tail, p.std_error * lambda * tail};
}

Estimate expected_interference_pairs(double lambda, const MarkModel& marks,
                                     const ControlSet& control, const PathlossModel& pl,
                                     const ExpectationSpec& expect, const QuadratureSpec& spec,
                                     double max_radius) {
    const Estimate p = pair_fraction(lambda, marks, control, expect, spec);
    const double tail = pathloss_tail_integral(pl, max_radius);
    return {p.value * lambda * tail, p.std_error * lambda * tail};
}

VolumeEstimate expected_interference_pairs_general(double lambda, const MarkModel& marks,
                                                   const ControlSet& control,
                                                   const PairKernel& kernel, long long mc_budget,
                                                   std::uint64_t seed,
                                                   const PlaneProposal& proposal) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("intensity lambda must be > 0");
    if (mc_budget < 1000)
        throw std::invalid_argument("general pair interference requires >= 1000 samples");
    if (!kernel)
        throw std::invalid_argument("kernel must be callable");
    if (!(proposal.core_radius > 0.0) || !(proposal.pareto_alpha > 0.0) ||
        !(proposal.sigma_scale > 0.0))
        throw std::invalid_argument("invalid plane proposal parameters");

    SeededRng rng(seed);
    const double rho0 = proposal.core_radius;
    const double alpha_p = proposal.pareto_alpha;
    const double sigma = proposal.sigma_scale / std::sqrt(lambda);
    const QuadratureSpec f_spec{1e-8, 1e-6, 40};

    double sum = 0.0, sum_sq = 0.0;
    for (long long k = 0; k < mc_budget; ++k) {
        // First atom: half uniform in the core disc, half Pareto radial tail.
        double rho, density_a;
        if (rng.uniform() < 0.5) {
            rho = rho0 * std::sqrt(rng.uniform());
            density_a = 0.5 / (pi * rho0 * rho0);
        } else {
            rho = rho0 * std::pow(1.0 - rng.uniform(), -1.0 / alpha_p);
            const double radial = alpha_p * std::pow(rho0, alpha_p) * std::pow(rho, -alpha_p - 1.0);
            density_a = 0.5 * radial / (2.0 * pi * rho);
        }
        const double phi = rng.uniform(0.0, 2.0 * pi);
        const double ax = rho * std::cos(phi);
        const double ay = rho * std::sin(phi);

        // Partner displacement: Rayleigh radius, uniform angle.
        const double s = sigma * std::sqrt(-2.0 * std::log1p(-rng.uniform()));
        const double theta = rng.uniform(0.0, 2.0 * pi);
        const double bx = ax + s * std::cos(theta);
        const double by = ay + s * std::sin(theta);
        const double density_u =
            std::exp(-0.5 * s * s / (sigma * sigma)) / (2.0 * pi * sigma * sigma);

        const double z = marks.sample_one(rng);
        const double z_t = marks.sample_one(rng);

        double value = 0.0;
        const double kv = kernel(ax, ay, bx, by);
        if (kv > 0.0 && s > 0.0 && control.contains(z, z_t)) {
            const double f = volume_f_slice(s, z, z_t, marks, f_spec).value;
            value = 0.5 * lambda * lambda * kv * std::exp(-lambda * f) /
                    (density_a * density_u);
        }
        sum += value;
        sum_sq += value * value;
    }
    const double n = static_cast<double>(mc_budget);
    const double mean = sum / n;
    const double stderr_sq = std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0);
    return {mean, std::sqrt(stderr_sq), VolumeMethod::MonteCarlo};
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre_01 requires n >= 1");
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
}

} // namespace hypmnnr
