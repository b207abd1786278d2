#pragma once

#include <cstdint>
#include <span>

#include "hypmnnr/analytics.hpp"
#include "hypmnnr/marks.hpp"
#include "hypmnnr/mnnr.hpp"
#include "hypmnnr/pointprocess.hpp"

namespace hypmnnr {

/// One Monte Carlo experiment: repeated sampled patterns, partitioned and
/// reduced to a statistic, with reproducible per-replicate seeding.
/// Replicate i always uses derive_seed(master_seed, i) and the aggregation
/// order is fixed, so results are identical for any worker count.
struct ExperimentConfig {
    double lambda = 1.0;
    Window window{30.0, 30.0, Boundary::Torus};
    MarkModel marks = MarkModel::degenerate(0.5);
    ControlSet control = ControlSet::full();
    long long replicates = 400;
    std::uint64_t master_seed = 1;
    int threads = 0;           // 0: use hardware concurrency
    double guard_margin = 0.0; // Open boundary: border strip excluded from statistics

    void validate() const;
};

struct EstimateSummary {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long long replicates = 0;
};

/// Mean, stderr = sample-sd/sqrt(n) and the 1.96-sigma interval. Requires at
/// least two values.
EstimateSummary summarize(std::span<const double> values);

/// Per replicate: sample a pattern, partition it, record 2*#pairs/#atoms.
/// Empty patterns are excluded from the mean (with the replicate count
/// adjusted); throws if every replicate came up empty.
EstimateSummary run_pair_fraction(const ExperimentConfig& cfg);

struct InterferenceSummary {
    EstimateSummary singles;
    EstimateSummary pairs;
};

/// Per replicate: sum the pathloss kernel over singles and over paired atoms,
/// observed from the window center, counting atoms in the annulus
/// excl_radius < u <= max_radius. Use max_radius = half the window width to
/// compare against the window-truncated analytic tail.
InterferenceSummary run_interference(const ExperimentConfig& cfg, const PathlossModel& pathloss,
                                     double max_radius);

} // namespace hypmnnr
