#include "hypmnnr/mnnr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace hypmnnr {

namespace {

/// acosh argument minus one: strictly increasing in the hyperbolic distance,
/// so argmin comparisons can skip the acosh.
inline double distance_key(const PlanarMetric& metric, const MarkedAtom& a, const MarkedAtom& b) {
    const double s = metric.distance(a.x, a.y, b.x, b.y);
    const double dz = a.z - b.z;
    return (s * s + dz * dz) / (2.0 * a.z * b.z);
}

struct BestNeighbor {
    double key = std::numeric_limits<double>::infinity();
    std::size_t index = 0;

    void offer(double k, std::size_t idx) {
        if (k < key || (k == key && idx < index)) {
            key = k;
            index = idx;
        }
    }
};

/// Uniform planar grid over the window. Candidate cells are visited in
/// expanding rings; a ring can be skipped entirely once its nearest possible
/// planar distance exceeds the mark-aware cutoff
/// s_cut = sqrt(2 * z_i * z_max * best_key).
class NeighborGrid {
public:
    NeighborGrid(const MarkedPattern& pattern, const PlanarMetric& metric)
        : pattern_(pattern), metric_(metric) {
        const std::size_t n = pattern.size();
        const double area = pattern.window.area();
        const double target_cell = std::sqrt(2.0 * area / static_cast<double>(std::max<std::size_t>(n, 1)));
        nx_ = std::max<long>(1, static_cast<long>(pattern.window.width / target_cell));
        ny_ = std::max<long>(1, static_cast<long>(pattern.window.height / target_cell));
        cell_w_ = pattern.window.width / static_cast<double>(nx_);
        cell_h_ = pattern.window.height / static_cast<double>(ny_);
        cells_.resize(static_cast<std::size_t>(nx_ * ny_));
        stamp_.assign(cells_.size(), 0);
        z_max_ = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cells_[cell_of(pattern.atoms[i])].push_back(i);
            z_max_ = std::max(z_max_, pattern.atoms[i].z);
        }
    }

    std::size_t nearest(std::size_t query) const {
        const MarkedAtom& a = pattern_.atoms[query];
        const bool torus = metric_.boundary == Boundary::Torus;
        const long cx = col_of(a.x), cy = row_of(a.y);

        BestNeighbor best;
        ++epoch_;
        const long max_ring = std::max(nx_, ny_);
        for (long ring = 0; ring <= max_ring; ++ring) {
            if (ring >= 1 && std::isfinite(best.key)) {
                // All unscanned cells lie at least ring-1 cell widths away.
                const double s_cut_sq = 2.0 * a.z * z_max_ * best.key;
                const double ring_min = static_cast<double>(ring - 1) * std::min(cell_w_, cell_h_);
                if (ring_min * ring_min > s_cut_sq)
                    break;
            }
            for_ring_cells(cx, cy, ring, torus, [&](long gx, long gy) {
                const std::size_t cell = static_cast<std::size_t>(gy * nx_ + gx);
                if (stamp_[cell] == epoch_)
                    return;
                stamp_[cell] = epoch_;
                for (std::size_t j : cells_[cell]) {
                    if (j == query)
                        continue;
                    best.offer(distance_key(metric_, a, pattern_.atoms[j]), j);
                }
            });
        }
        if (!std::isfinite(best.key))
            throw std::logic_error("grid search found no neighbor");
        return best.index;
    }

private:
    long col_of(double x) const {
        return std::clamp(static_cast<long>(x / cell_w_), 0L, nx_ - 1);
    }
    long row_of(double y) const {
        return std::clamp(static_cast<long>(y / cell_h_), 0L, ny_ - 1);
    }
    std::size_t cell_of(const MarkedAtom& a) const {
        return static_cast<std::size_t>(row_of(a.y) * nx_ + col_of(a.x));
    }

    template <typename Fn>
    void for_ring_cells(long cx, long cy, long ring, bool torus, Fn&& fn) const {
        auto visit = [&](long gx, long gy) {
            if (torus) {
                gx = ((gx % nx_) + nx_) % nx_;
                gy = ((gy % ny_) + ny_) % ny_;
            } else if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) {
                return;
            }
            fn(gx, gy);
        };
        if (ring == 0) {
            visit(cx, cy);
            return;
        }
        for (long dx = -ring; dx <= ring; ++dx) {
            visit(cx + dx, cy - ring);
            visit(cx + dx, cy + ring);
        }
        for (long dy = -ring + 1; dy <= ring - 1; ++dy) {
            visit(cx - ring, cy + dy);
            visit(cx + ring, cy + dy);
        }
    }

    const MarkedPattern& pattern_;
    PlanarMetric metric_;
    long nx_ = 1, ny_ = 1;
    double cell_w_ = 1.0, cell_h_ = 1.0;
    double z_max_ = 0.0;
    std::vector<std::vector<std::size_t>> cells_;
    mutable std::vector<std::uint64_t> stamp_;
    mutable std::uint64_t epoch_ = 0;
};

std::size_t nearest_brute(const MarkedPattern& pattern, std::size_t i,
                          const PlanarMetric& metric) {
    const MarkedAtom& a = pattern.atoms[i];
    BestNeighbor best;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (j == i)
            continue;
        best.offer(distance_key(metric, a, pattern.atoms[j]), j);
    }
    return best.index;
}

} // namespace

std::size_t nearest_neighbor(const MarkedPattern& pattern, std::size_t i,
                             const PlanarMetric& metric) {
    if (pattern.size() < 2)
        throw std::invalid_argument("nearest neighbor requires a pattern with >= 2 atoms");
    if (i >= pattern.size())
        throw std::invalid_argument("atom index out of range");
    return nearest_brute(pattern, i, metric);
}

std::vector<std::size_t> all_nearest_neighbors(const MarkedPattern& pattern,
                                               const PlanarMetric& metric,
                                               NeighborSearch strategy) {
    const std::size_t n = pattern.size();
    std::vector<std::size_t> nn(n);
    if (n < 2) {
        if (n == 1)
            throw std::invalid_argument("nearest neighbor requires a pattern with >= 2 atoms");
        return nn;
    }
    const bool use_grid =
        strategy == NeighborSearch::Grid || (strategy == NeighborSearch::Auto && n >= 128);
    if (use_grid) {
        NeighborGrid grid(pattern, metric);
        for (std::size_t i = 0; i < n; ++i)
            nn[i] = grid.nearest(i);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            nn[i] = nearest_brute(pattern, i, metric);
    }
    return nn;
}

ClusterPartition mnnr_partition(const MarkedPattern& pattern, const ControlSet& control,
                                const PlanarMetric& metric, NeighborSearch strategy) {
    ClusterPartition part;
    part.pattern_size = pattern.size();
    if (pattern.size() == 0)
        return part;
    if (pattern.size() == 1) {
        part.singles.push_back(0);
        return part;
    }

    const std::vector<std::size_t> nn = all_nearest_neighbors(pattern, metric, strategy);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const std::size_t j = nn[i];
        const bool mutual = nn[j] == i && control.contains(pattern.atoms[i].z, pattern.atoms[j].z);
        if (!mutual)
            part.singles.push_back(i);
        else if (i < j)
            part.pairs.emplace_back(i, j);
    }
    return part;
}

std::string ClusterPartition::to_json() const {
    nlohmann::json doc;
    doc["pairs"] = nlohmann::json::array();
    for (const auto& [i, j] : pairs)
        doc["pairs"].push_back({i, j});
    doc["singles"] = singles;
    doc["n"] = pattern_size;
    return doc.dump();
}

} // namespace hypmnnr
