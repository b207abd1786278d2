#pragma once

#include <functional>
#include <limits>

#include "hypmnnr/marks.hpp"
#include "hypmnnr/numerics.hpp"
#include "hypmnnr/quadrature.hpp"

namespace hypmnnr {

/// Power-law pathloss with an exclusion radius: a node at planar distance u
/// from the observer contributes u^(-beta) when u > excl_radius.
struct PathlossModel {
    double beta = 2.5;        // must exceed 2 for an integrable tail
    double excl_radius = 1.0; // km

    void validate() const;
};

/// How expectations over the i.i.d. mark pair (Z, Z_t) are evaluated.
struct ExpectationSpec {
    enum class Method {
        TensorQuadrature, // Gauss-Legendre in quantile space, nodes^2 pairs
        MonteCarlo,       // i.i.d. mark pairs; std_error reported
    };
    Method method = Method::TensorQuadrature;
    int nodes = 32;             // per axis (TensorQuadrature)
    long long samples = 5000;   // mark pairs (MonteCarlo)
    std::uint64_t seed = 1;

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0; // zero for deterministic evaluation
};

constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// Probability that two given atoms (separation s, marks z, z_t) form a
/// cooperative pair: exp(-lambda * F(s,z,z_t)) gated by the control set.
double pair_probability(double s, double z, double z_t, double lambda, const ControlSet& control,
                        const MarkModel& marks, const QuadratureSpec& spec = {});

/// Fraction of atoms that belong to cooperative pairs:
/// P_D = 2 pi lambda * integral over s of E[exp(-lambda F(s,Z,Z_t)) 1_D] s ds.
/// The s-integral runs over doubling panels until the tail is negligible.
Estimate pair_fraction(double lambda, const MarkModel& marks, const ControlSet& control,
                       const ExpectationSpec& expect = {}, const QuadratureSpec& spec = {});

/// Integral of the pathloss kernel over the annulus excl_radius < u <= max_radius:
/// 2 pi (R^(2-beta) - max_radius^(2-beta)) / (beta - 2); max_radius may be infinite.
double pathloss_tail_integral(const PathlossModel& pl, double max_radius = kInfiniteRadius);

/// Expected interference at the origin from single atoms:
/// (1 - P_D) * lambda * tail integral. (The raw tail-expansion form of the
/// singles expectation diverges; this is the equivalent finite intensity-split
/// form.) max_radius < infinity gives the window-truncated value.
Estimate expected_interference_singles(double lambda, const MarkModel& marks,
                                       const ControlSet& control, const PathlossModel& pl,
                                       const ExpectationSpec& expect = {},
                                       const QuadratureSpec& spec = {},
                                       double max_radius = kInfiniteRadius);

/// Expected interference from atoms in cooperative pairs, for the additive
/// per-atom pathloss kernel: P_D * lambda * tail integral.
Estimate expected_interference_pairs(double lambda, const MarkModel& marks,
                                     const ControlSet& control, const PathlossModel& pl,
                                     const ExpectationSpec& expect = {},
                                     const QuadratureSpec& spec = {},
                                     double max_radius = kInfiniteRadius);

/// Importance-sampling proposal for the general pair-interference estimator:
/// the first atom is drawn half uniform-in-disc(core_radius), half with a
/// Pareto(pareto_alpha) radial tail; the partner displacement is Rayleigh with
/// scale sigma_scale/sqrt(lambda).
struct PlaneProposal {
    double core_radius = 8.0;
    double pareto_alpha = 1.25;
    double sigma_scale = 1.4142135623730951;
};

using PairKernel = std::function<double(double ax, double ay, double bx, double by)>;

/// Monte Carlo estimate of the general pair-interference double integral
/// (lambda^2/2) * iint k(a,b) E[exp(-lambda F(|a-b|,Z,Z_t)) 1_D] da db.
/// The kernel must be integrable over the plane pair (caller-asserted).
VolumeEstimate expected_interference_pairs_general(double lambda, const MarkModel& marks,
                                                   const ControlSet& control,
                                                   const PairKernel& kernel, long long mc_budget,
                                                   std::uint64_t seed,
                                                   const PlaneProposal& proposal = {});

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace hypmnnr
