#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypmnnr/rng.hpp"

namespace hypmnnr {

/// Distribution of the resource marks. Degenerate is a first-class model with
/// no density; analytic paths that would integrate against the density must
/// use the closed-form point-mass route instead.
class MarkModel {
public:
    enum class Kind { Degenerate, Beta, Uniform };

    static MarkModel degenerate(double mu);
    /// Beta model parameterized by its first two moments (support (0,1)).
    /// Requires 0 < mean < 1 and 0 < variance < mean*(1-mean).
    static MarkModel beta_mean_var(double mean, double variance);
    static MarkModel uniform(double lo, double hi);

    /// Parses the textual model spec: "degenerate:mu=0.5",
    /// "beta:mean=0.5,var=0.05", "uniform:lo=0.2,hi=0.8".
    static MarkModel parse(std::string_view spec);

    Kind kind() const { return kind_; }
    bool has_density() const { return kind_ != Kind::Degenerate; }

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    double mean() const;
    double variance() const;

    /// Density f(z); zero outside the support. Throws UnsupportedOperation for
    /// the Degenerate model.
    double density(double z) const;

    /// P(Z <= z). Degenerate: step at mu.
    double cdf(double z) const;

    /// Inverse CDF, u in [0,1]. Refined to full precision.
    double quantile(double u) const;

    /// Inverse CDF from the precomputed interpolant, accurate to ~1e-10 in the
    /// bulk of the distribution. Intended for integrand-level use where a
    /// root-solve per evaluation would dominate the cost.
    double quantile_fast(double u) const;

    double sample_one(SeededRng& rng) const;
    std::vector<double> sample(std::size_t n, SeededRng& rng) const;

    /// Canonical spec string, parseable by parse().
    std::string describe() const;

    // Kind-specific parameters.
    double degenerate_mu() const;
    double beta_alpha() const;
    double beta_beta() const;

private:
    MarkModel() = default;

    struct BetaDist;

    Kind kind_ = Kind::Degenerate;
    double lo_ = 0.0, hi_ = 0.0;   // support interval
    double mu_ = 0.0;              // Degenerate value / Uniform midpoint unused
    std::shared_ptr<const BetaDist> beta_;
};

/// Symmetric set of admissible mark pairs gating cooperation.
class ControlSet {
public:
    enum class Kind { Full, Empty, MinProduct, MaxRatio, Custom };

    static ControlSet full();
    static ControlSet empty();
    /// Pairs with z * z_t >= tau.
    static ControlSet min_product(double tau);
    /// Pairs with max(z,z_t)/min(z,z_t) <= rho (rho >= 1).
    static ControlSet max_ratio(double rho);
    /// Arbitrary symmetric predicate. Symmetry is verified by randomized
    /// testing at construction; an asymmetric predicate is rejected.
    static ControlSet custom(std::function<bool(double, double)> predicate,
                             std::uint64_t check_seed = 1, int check_samples = 10000);

    /// Parses "full", "empty", "minproduct:tau=0.25", "maxratio:rho=2.0".
    static ControlSet parse(std::string_view spec);

    bool contains(double z, double z_t) const;
    Kind kind() const { return kind_; }

    /// For the non-custom kinds, the set {z_t : (z, z_t) in D} intersected with
    /// [lo, hi] is an interval; returns it (empty -> lo > hi). Custom kinds
    /// have no interval form (see has_interval_form).
    std::pair<double, double> admissible_interval(double z, double lo, double hi) const;
    bool has_interval_form() const { return kind_ != Kind::Custom; }

    std::string describe() const;
    double min_product_tau() const { return tau_; }
    double max_ratio_rho() const { return rho_; }

private:
    ControlSet() = default;
    Kind kind_ = Kind::Full;
    double tau_ = 0.0;
    double rho_ = 1.0;
    std::function<bool(double, double)> predicate_;
};

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

} // namespace hypmnnr
