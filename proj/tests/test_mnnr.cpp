#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "hypmnnr/mnnr.hpp"
#include "hypmnnr/rng.hpp"

using namespace hypmnnr;

namespace {

MarkedPattern pattern_from(std::vector<MarkedAtom> atoms, double w = 100.0, double h = 100.0,
                           Boundary b = Boundary::Open) {
    return make_pattern(std::move(atoms), Window(w, h, b));
}

/// Independent planar-only mutual-nearest-neighbor partition (positions only,
/// no hyperbolic machinery). Ties break toward the smaller index.
ClusterPartition euclid_mnnr(const MarkedPattern& p, const PlanarMetric& metric) {
    const std::size_t n = p.size();
    std::vector<std::size_t> nn(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double d = metric.distance(p.atoms[i].x, p.atoms[i].y, p.atoms[j].x, p.atoms[j].y);
            if (d < best || (d == best && j < best_j)) {
                best = d;
                best_j = j;
            }
        }
        nn[i] = best_j;
    }
    ClusterPartition part;
    part.pattern_size = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (nn[nn[i]] == i) {
            if (i < nn[i])
                part.pairs.emplace_back(i, nn[i]);
        } else {
            part.singles.push_back(i);
        }
    }
    return part;
}

MarkedPattern random_pattern(SeededRng& rng, std::size_t n, double w, double h, Boundary b,
                             bool degenerate_marks = false) {
    std::vector<MarkedAtom> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        atoms.emplace_back(rng.uniform(0, w), rng.uniform(0, h),
                           degenerate_marks ? 0.5 : 0.05 * std::exp(rng.uniform() * std::log(100.0)));
    return pattern_from(std::move(atoms), w, h, b);
}

void check_partition_invariants(const ClusterPartition& part, const MarkedPattern& p,
                                const ControlSet& control, const PlanarMetric& metric) {
    std::set<std::size_t> seen;
    for (const auto& [i, j] : part.pairs) {
        CHECK(i < j);
        CHECK(seen.insert(i).second);
        CHECK(seen.insert(j).second);
        CHECK(nearest_neighbor(p, i, metric) == j);
        CHECK(nearest_neighbor(p, j, metric) == i);
        CHECK(control.contains(p.atoms[i].z, p.atoms[j].z));
    }
    for (std::size_t s : part.singles)
        CHECK(seen.insert(s).second);
    CHECK(seen.size() == p.size());
}

} // namespace

TEST_CASE("nearest neighbor: simple collinear example") {
    const MarkedPattern p =
        pattern_from({MarkedAtom(0, 0, 1), MarkedAtom(1, 0, 1), MarkedAtom(5, 0, 1)});
    const PlanarMetric m = p.metric();
    CHECK(nearest_neighbor(p, 0, m) == 1);
    CHECK(nearest_neighbor(p, 1, m) == 0);
    CHECK(nearest_neighbor(p, 2, m) == 1);
}

TEST_CASE("nearest neighbor: resource imbalance beats planar closeness") {
    // The stacked atom with a far-off mark loses to the planar neighbor whose
    // mark matches: acosh(17/8) = ln 4 = 1.3863 vs acosh(1.005) = 0.09996.
    const MarkedPattern p =
        pattern_from({MarkedAtom(0, 0, 1), MarkedAtom(0, 0, 4), MarkedAtom(0.1, 0, 1)});
    const PlanarMetric m = p.metric();
    CHECK(hyperbolic_distance(p.atoms[0], p.atoms[1]) ==
          doctest::Approx(1.386294361119891).epsilon(1e-14));
    CHECK(hyperbolic_distance(p.atoms[0], p.atoms[2]) ==
          doctest::Approx(0.099958380138696).epsilon(1e-12));
    CHECK(nearest_neighbor(p, 0, m) == 2);
}

TEST_CASE("nearest neighbor: equal marks reduce to the planar argmin") {
    SeededRng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const MarkedPattern p = random_pattern(rng, 40, 10, 10,
                                               trial % 2 ? Boundary::Torus : Boundary::Open,
                                               /*degenerate_marks=*/true);
        const PlanarMetric metric = p.metric();
        for (std::size_t i = 0; i < p.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (j == i)
                    continue;
                const double d =
                    metric.distance(p.atoms[i].x, p.atoms[i].y, p.atoms[j].x, p.atoms[j].y);
                if (d < best || (d == best && j < best_j)) {
                    best = d;
                    best_j = j;
                }
            }
            CHECK(nearest_neighbor(p, i, metric) == best_j);
        }
    }
}

TEST_CASE("nearest neighbor: singleton pattern is an error") {
    const MarkedPattern p = pattern_from({MarkedAtom(1, 1, 1)});
    CHECK_THROWS_AS(nearest_neighbor(p, 0, p.metric()), std::invalid_argument);
}

TEST_CASE("partition: two atoms under a full control set form one pair") {
    const MarkedPattern p = pattern_from({MarkedAtom(0, 0, 1), MarkedAtom(1, 0, 1)});
    const ClusterPartition part = mnnr_partition(p, ControlSet::full(), p.metric());
    REQUIRE(part.pairs.size() == 1);
    CHECK(part.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(part.singles.empty());
    CHECK(part.pair_fraction() == 1.0);
}

TEST_CASE("partition: the asymmetric-neighbor chain leaves a single") {
    // 2's nearest neighbor is 1, but 1 pairs with 0.
    const MarkedPattern p =
        pattern_from({MarkedAtom(0, 0, 1), MarkedAtom(1, 0, 1), MarkedAtom(2.5, 0, 1)});
    const ClusterPartition part = mnnr_partition(p, ControlSet::full(), p.metric());
    REQUIRE(part.pairs.size() == 1);
    CHECK(part.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    REQUIRE(part.singles.size() == 1);
    CHECK(part.singles[0] == 2);
}

TEST_CASE("partition: empty control set makes everything single") {
    SeededRng rng(5);
    const MarkedPattern p = random_pattern(rng, 60, 10, 10, Boundary::Torus);
    const ClusterPartition part = mnnr_partition(p, ControlSet::empty(), p.metric());
    CHECK(part.pairs.empty());
    CHECK(part.singles.size() == p.size());
}

TEST_CASE("partition: singleton and empty patterns") {
    const ClusterPartition single =
        mnnr_partition(pattern_from({MarkedAtom(1, 1, 1)}), ControlSet::full(),
                       PlanarMetric::open_plane());
    CHECK(single.pairs.empty());
    REQUIRE(single.singles.size() == 1);

    const ClusterPartition none = mnnr_partition(pattern_from({}), ControlSet::full(),
                                                 PlanarMetric::open_plane());
    CHECK(none.pattern_size == 0);
    CHECK(none.pairs.empty());
    CHECK(none.singles.empty());
}

TEST_CASE("partition: invariants hold on random patterns") {
    SeededRng rng(7);
    const ControlSet controls[] = {ControlSet::full(), ControlSet::min_product(0.2),
                                   ControlSet::max_ratio(3.0)};
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 160);
        const MarkedPattern p = random_pattern(rng, n, 12, 9,
                                               trial % 2 ? Boundary::Torus : Boundary::Open);
        const ControlSet& control = controls[trial % 3];
        const ClusterPartition part = mnnr_partition(p, control, p.metric());
        check_partition_invariants(part, p, control, p.metric());
    }
}

TEST_CASE("partition: widening the control set only adds pairs") {
    SeededRng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const MarkedPattern p = random_pattern(rng, 120, 12, 12, Boundary::Torus);
        // tau decreasing: each set contains the previous one
        std::vector<std::set<std::pair<std::size_t, std::size_t>>> pair_sets;
        for (double tau : {0.8, 0.4, 0.2, 0.1}) {
            const ClusterPartition part =
                mnnr_partition(p, ControlSet::min_product(tau), p.metric());
            pair_sets.emplace_back(part.pairs.begin(), part.pairs.end());
        }
        for (std::size_t k = 0; k + 1 < pair_sets.size(); ++k)
            CHECK(std::includes(pair_sets[k + 1].begin(), pair_sets[k + 1].end(),
                                pair_sets[k].begin(), pair_sets[k].end()));
    }
}

TEST_CASE("partition: equal marks reproduce the planar-only partition") {
    SeededRng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 60);
        const MarkedPattern p = random_pattern(rng, n, 10, 10,
                                               trial % 2 ? Boundary::Torus : Boundary::Open,
                                               /*degenerate_marks=*/true);
        const ClusterPartition hyp = mnnr_partition(p, ControlSet::full(), p.metric());
        const ClusterPartition euc = euclid_mnnr(p, p.metric());
        CHECK(hyp.pairs == euc.pairs);
        CHECK(hyp.singles == euc.singles);
    }
}

TEST_CASE("partition: grid accelerator matches brute force") {
    SeededRng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 500);
        const MarkedPattern p = random_pattern(rng, n, 15, 11,
                                               trial % 2 ? Boundary::Torus : Boundary::Open);
        const auto brute = all_nearest_neighbors(p, p.metric(), NeighborSearch::BruteForce);
        const auto grid = all_nearest_neighbors(p, p.metric(), NeighborSearch::Grid);
        CHECK(brute == grid);
    }
}

TEST_CASE("partition: degenerate-mark torus pair fraction sits near 0.6215") {
    SeededRng rng(17);
    const MarkModel marks = MarkModel::degenerate(0.5);
    const Window w(30.0, 30.0, Boundary::Torus);
    double sum = 0.0;
    const int reps = 8;
    for (int i = 0; i < reps; ++i) {
        const MarkedPattern p = sample_ppp(1.0, w, marks, rng);
        sum += mnnr_partition(p, ControlSet::full(), p.metric()).pair_fraction();
    }
    CHECK(std::abs(sum / reps - 0.6215) < 0.04);
}

TEST_CASE("partition: JSON output shape") {
    const MarkedPattern p =
        pattern_from({MarkedAtom(0, 0, 1), MarkedAtom(1, 0, 1), MarkedAtom(2.5, 0, 1)});
    const ClusterPartition part = mnnr_partition(p, ControlSet::full(), p.metric());
    const nlohmann::json doc = nlohmann::json::parse(part.to_json());
    CHECK(doc["n"] == 3);
    REQUIRE(doc["pairs"].size() == 1);
    CHECK(doc["pairs"][0][0] == 0);
    CHECK(doc["pairs"][0][1] == 1);
    REQUIRE(doc["singles"].size() == 1);
    CHECK(doc["singles"][0] == 2);
}
