#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hypmnnr/marks.hpp"
#include "hypmnnr/pointprocess.hpp"

namespace hypmnnr {

/// Disjoint split of a pattern into cooperative pairs and singles. Every index
/// appears exactly once, and each pair is mutually nearest in hyperbolic
/// distance with marks admitted by the control set.
struct ClusterPartition {
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // i < j
    std::vector<std::size_t> singles;
    std::size_t pattern_size = 0;

    double pair_fraction() const {
        return pattern_size == 0 ? 0.0
                                 : 2.0 * static_cast<double>(pairs.size()) /
                                       static_cast<double>(pattern_size);
    }

    /// {"pairs":[[i,j],...],"singles":[k,...],"n":N}
    std::string to_json() const;
};

enum class NeighborSearch {
    Auto,       // grid for large patterns, brute force otherwise
    BruteForce, // reference O(n^2) scan
    Grid,       // uniform planar grid with mark-aware pruning
};

/// Index of the hyperbolic nearest neighbor of atom i (ties broken toward the
/// smaller index; ties are null events for the sampled process). Throws on
/// patterns with fewer than two atoms.
std::size_t nearest_neighbor(const MarkedPattern& pattern, std::size_t i,
                             const PlanarMetric& metric);

/// Nearest neighbors of all atoms at once.
std::vector<std::size_t> all_nearest_neighbors(const MarkedPattern& pattern,
                                               const PlanarMetric& metric,
                                               NeighborSearch strategy = NeighborSearch::Auto);

/// The MNNR partition: atoms i and j pair iff each is the other's nearest
/// neighbor and the control set admits their marks; everything else is single.
ClusterPartition mnnr_partition(const MarkedPattern& pattern, const ControlSet& control,
                                const PlanarMetric& metric,
                                NeighborSearch strategy = NeighborSearch::Auto);

} // namespace hypmnnr
