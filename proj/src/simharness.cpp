#include "hypmnnr/simharness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hypmnnr {

namespace {

/// Runs fn(replicate_index) over [0, n) on the requested number of workers.
/// Work is claimed through an atomic counter; every output slot is owned by
/// exactly one replicate, so the result is independent of scheduling.
void run_replicates(long long n, int threads, const std::function<void(long long)>& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    if (workers == 1 || n <= 1) {
        for (long long i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const long long i = next.fetch_add(1);
                if (i >= n)
                    return;
                fn(i);
            }
        });
    }
    for (auto& th : pool)
        th.join();
}

bool in_core(const MarkedAtom& a, const Window& w, double margin) {
    return a.x >= margin && a.x <= w.width - margin && a.y >= margin && a.y <= w.height - margin;
}

} // namespace

void ExperimentConfig::validate() const {
    if (replicates < 1)
        throw std::invalid_argument("experiment requires at least one replicate");
    if (!(lambda > 0.0))
        throw std::invalid_argument("intensity lambda must be > 0");
    if (guard_margin < 0.0 || 2.0 * guard_margin >= std::min(window.width, window.height))
        throw std::invalid_argument("guard margin must be >= 0 and leave a nonempty core");
    if (lambda * window.area() < 10.0)
        std::fprintf(stderr,
                     "hypmnnr: warning: lambda*area = %.3g < 10; pair statistics will be noisy\n",
                     lambda * window.area());
}

EstimateSummary summarize(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("summarize requires at least two values");
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);

    EstimateSummary out;
    out.mean = mean;
    out.std_error = std_error;
    out.ci_lo = mean - 1.96 * std_error;
    out.ci_hi = mean + 1.96 * std_error;
    out.replicates = static_cast<long long>(values.size());
    return out;
}

EstimateSummary run_pair_fraction(const ExperimentConfig& cfg) {
    cfg.validate();
    const double nan = std::nan("");
    std::vector<double> results(static_cast<std::size_t>(cfg.replicates), nan);

    run_replicates(cfg.replicates, cfg.threads, [&](long long i) {
        SeededRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
        const MarkedPattern pattern = sample_ppp(cfg.lambda, cfg.window, cfg.marks, rng);
        if (pattern.size() == 0)
            return; // excluded, slot stays NaN
        const ClusterPartition part = mnnr_partition(pattern, cfg.control, pattern.metric());

        const bool guarded = cfg.window.boundary == Boundary::Open && cfg.guard_margin > 0.0;
        if (!guarded) {
            results[static_cast<std::size_t>(i)] = part.pair_fraction();
            return;
        }
        // Guard mode: border atoms still act as neighbors but are not counted.
        std::vector<char> paired(pattern.size(), 0);
        for (const auto& [a, b] : part.pairs)
            paired[a] = paired[b] = 1;
        long long core = 0, core_paired = 0;
        for (std::size_t k = 0; k < pattern.size(); ++k) {
            if (!in_core(pattern.atoms[k], cfg.window, cfg.guard_margin))
                continue;
            ++core;
            core_paired += paired[k];
        }
        if (core > 0)
            results[static_cast<std::size_t>(i)] =
                static_cast<double>(core_paired) / static_cast<double>(core);
    });

    std::vector<double> valid;
    valid.reserve(results.size());
    for (double v : results)
        if (!std::isnan(v))
            valid.push_back(v);
    if (valid.empty())
        throw std::runtime_error("all replicates produced empty patterns");
    if (valid.size() == 1) {
        EstimateSummary out;
        out.mean = valid[0];
        out.replicates = 1;
        out.ci_lo = out.ci_hi = valid[0];
        return out;
    }
    return summarize(valid);
}

InterferenceSummary run_interference(const ExperimentConfig& cfg, const PathlossModel& pathloss,
                                     double max_radius) {
    cfg.validate();
    pathloss.validate();
    if (!(max_radius > 0.0))
        throw std::invalid_argument("max_radius must be > 0");

    std::vector<double> singles(static_cast<std::size_t>(cfg.replicates), 0.0);
    std::vector<double> pairs(static_cast<std::size_t>(cfg.replicates), 0.0);
    const double cx = 0.5 * cfg.window.width;
    const double cy = 0.5 * cfg.window.height;

    run_replicates(cfg.replicates, cfg.threads, [&](long long i) {
        SeededRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
        const MarkedPattern pattern = sample_ppp(cfg.lambda, cfg.window, cfg.marks, rng);
        if (pattern.size() == 0)
            return; // zero interference
        const PlanarMetric metric = pattern.metric();
        const ClusterPartition part = mnnr_partition(pattern, cfg.control, metric);

        auto kernel = [&](const MarkedAtom& a) {
            const double u = metric.distance(a.x, a.y, cx, cy);
            if (u <= pathloss.excl_radius || u > max_radius)
                return 0.0;
            return std::pow(u, -pathloss.beta);
        };
        double i1 = 0.0, i2 = 0.0;
        for (std::size_t k : part.singles)
            i1 += kernel(pattern.atoms[k]);
        for (const auto& [a, b] : part.pairs)
            i2 += kernel(pattern.atoms[a]) + kernel(pattern.atoms[b]);
        singles[static_cast<std::size_t>(i)] = i1;
        pairs[static_cast<std::size_t>(i)] = i2;
    });

    return {summarize(singles), summarize(pairs)};
}

} // namespace hypmnnr
