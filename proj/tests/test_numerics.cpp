#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypmnnr/errors.hpp"
#include "hypmnnr/numerics.hpp"

using namespace hypmnnr;

namespace {

// Union coefficient of the equal-mark point-mass case: both slice disks have
// radius s at center distance s, so F = s^2 * (4 pi / 3 + sqrt(3)/2).
const double kDegenerateCoeff = 4.0 * std::numbers::pi / 3.0 + std::sqrt(3.0) / 2.0;

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

TEST_CASE("adaptive quadrature: polynomial and trig integrals") {
    const QuadratureSpec q{1e-10, 1e-10, 40};
    CHECK(adaptive_quad([](double w) { return 3.0 * w * w; }, 0.0, 1.0, q) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(adaptive_quad([](double w) { return std::sin(w); }, 0.0, std::numbers::pi, q) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(adaptive_quad([](double) { return 1.0; }, 2.0, 2.0, q) == 0.0);
}

TEST_CASE("adaptive quadrature: jump integrand converges after a breakpoint split") {
    const QuadratureSpec q{1e-11, 1e-11, 40};
    auto step = [](double w) { return w < 0.3 ? 1.0 : 2.0; };
    const double breaks[] = {0.3};
    const double value = adaptive_quad(step, 0.0, 1.0, q, breaks);
    CHECK(value == doctest::Approx(0.3 + 1.4).epsilon(1e-12)); // piecewise analytic
}

TEST_CASE("adaptive quadrature: reports non-convergence with the best estimate") {
    // A jump at an irrational point with no breakpoint and a tiny depth cap.
    const QuadratureSpec q{1e-15, 1e-15, 3};
    auto step = [](double w) { return w < std::numbers::inv_pi ? 0.0 : 1.0; };
    try {
        adaptive_quad(step, 0.0, 1.0, q);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.best_estimate == doctest::Approx(1.0 - std::numbers::inv_pi).epsilon(1e-2));
    }
}

TEST_CASE("volume F: degenerate closed form s^2 (4pi/3 + sqrt(3)/2)") {
    const MarkModel marks = MarkModel::degenerate(0.5);
    const VolumeEstimate f = volume_f_slice(1.0, 0.5, 0.5, marks);
    CHECK(f.method == VolumeMethod::ClosedForm);
    CHECK(f.std_error == 0.0);
    CHECK(f.value == doctest::Approx(5.054815608570829).epsilon(1e-14));

    for (double s : {1e-12, 1e-6, 0.01, 0.3, 1.0, 7.0, 150.0}) {
        const VolumeEstimate fs = volume_f_slice(s, 0.5, 0.5, marks);
        CHECK(fs.value / (s * s) == doctest::Approx(kDegenerateCoeff).epsilon(1e-13));
    }
    // Other degenerate values behave the same way.
    for (double mu : {0.1, 2.0, 9.0}) {
        const MarkModel m = MarkModel::degenerate(mu);
        const VolumeEstimate fs = volume_f_slice(0.8, mu, mu, m);
        CHECK(fs.value / 0.64 == doctest::Approx(kDegenerateCoeff).epsilon(1e-13));
    }
}

TEST_CASE("volume F: slice is symmetric under mark swap") {
    const MarkModel models[] = {MarkModel::uniform(1.0, 3.0), MarkModel::beta_mean_var(0.5, 0.05)};
    SeededRng rng(3);
    for (const MarkModel& m : models) {
        for (int i = 0; i < 20; ++i) {
            const double s = rng.uniform(0.05, 3.0);
            const double z = rng.uniform(0.1, 2.0);
            const double z_t = rng.uniform(0.1, 2.0);
            const double a = volume_f_slice(s, z, z_t, m).value;
            const double b = volume_f_slice(s, z_t, z, m).value;
            CHECK(rel_diff(a, b) <= 1e-10);
        }
    }
}

TEST_CASE("volume F: slice agrees with the literal nested-integral route") {
    const QuadratureSpec tight{1e-10, 1e-9, 44};
    {
        const MarkModel m = MarkModel::uniform(1.0, 3.0);
        const double slice = volume_f_slice(0.8, 1.5, 2.0, m, tight).value;
        const double triple = volume_f_triple(0.8, 1.5, 2.0, m, tight).value;
        CHECK(rel_diff(slice, triple) <= 1e-6);
    }
    {
        const MarkModel m = MarkModel::beta_mean_var(0.5, 0.05);
        const double slice = volume_f_slice(0.5, 0.4, 0.6, m, tight).value;
        const double triple = volume_f_triple(0.5, 0.4, 0.6, m, tight).value;
        CHECK(rel_diff(slice, triple) <= 1e-6);
    }
}

TEST_CASE("volume F: Monte Carlo covers the deterministic routes") {
    SeededRng rng(5);
    {
        const MarkModel m = MarkModel::degenerate(0.5);
        const VolumeEstimate mc = volume_f_mc(1.0, 0.5, 0.5, m, 1000000, rng);
        CHECK(std::abs(mc.value - 5.054815608570829) <= 3.0 * mc.std_error);
        CHECK(mc.std_error > 0.0);
    }
    {
        const MarkModel m = MarkModel::uniform(1.0, 3.0);
        const double slice = volume_f_slice(0.8, 1.5, 2.0, m).value;
        const VolumeEstimate mc = volume_f_mc(0.8, 1.5, 2.0, m, 400000, rng);
        CHECK(std::abs(mc.value - slice) <= 3.0 * mc.std_error);
    }
    {
        const MarkModel m = MarkModel::beta_mean_var(0.5, 0.05);
        const double slice = volume_f_slice(0.5, 0.4, 0.6, m).value;
        const VolumeEstimate mc = volume_f_mc(0.5, 0.4, 0.6, m, 400000, rng);
        CHECK(std::abs(mc.value - slice) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("volume F: Monte Carlo is deterministic given the seed") {
    const MarkModel m = MarkModel::uniform(1.0, 3.0);
    SeededRng rng_a(77), rng_b(77);
    const VolumeEstimate a = volume_f_mc(0.8, 1.5, 2.0, m, 50000, rng_a);
    const VolumeEstimate b = volume_f_mc(0.8, 1.5, 2.0, m, 50000, rng_b);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("volume F: error paths") {
    const MarkModel deg = MarkModel::degenerate(0.5);
    const MarkModel uni = MarkModel::uniform(1.0, 3.0);
    SeededRng rng(7);
    CHECK_THROWS_AS(volume_f_triple(0.5, 0.4, 0.6, deg), UnsupportedOperation);
    CHECK_THROWS_AS(volume_f_mc(0.5, 0.4, 0.6, uni, 999, rng), std::invalid_argument);
    CHECK_THROWS_AS(volume_f_slice(0.0, 1.0, 1.0, uni), std::invalid_argument);
}

TEST_CASE("volume F: stacked atoms (s = 0 with distinct marks) are finite") {
    const MarkModel m = MarkModel::uniform(1.0, 3.0);
    SeededRng rng(9);
    const double slice = volume_f_slice(0.0, 1.0, 2.0, m).value;
    const double triple = volume_f_triple(0.0, 1.0, 2.0, m).value;
    const VolumeEstimate mc = volume_f_mc(0.0, 1.0, 2.0, m, 400000, rng);
    CHECK(std::isfinite(slice));
    CHECK(slice > 0.0);
    CHECK(rel_diff(slice, triple) <= 1e-6);
    CHECK(std::abs(mc.value - slice) <= 3.0 * mc.std_error);
}

TEST_CASE("volume F: nondecreasing in the planar separation") {
    const MarkModel models[] = {MarkModel::degenerate(0.5), MarkModel::uniform(1.0, 3.0),
                                MarkModel::beta_mean_var(0.5, 0.05)};
    for (const MarkModel& m : models) {
        double prev = 0.0;
        for (double s : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
            const double f = volume_f_slice(s, 0.7, 1.1, m).value;
            CHECK(f >= prev - 1e-12);
            prev = f;
        }
    }
}

TEST_CASE("volume F: positive for all valid distinct-atom inputs") {
    SeededRng rng(11);
    const MarkModel m = MarkModel::beta_mean_var(0.5, 0.05);
    for (int i = 0; i < 200; ++i) {
        const double s = rng.uniform(0.001, 4.0);
        const double z = rng.uniform(0.05, 0.95);
        const double z_t = rng.uniform(0.05, 0.95);
        CHECK(volume_f_slice(s, z, z_t, m).value > 0.0);
    }
}
