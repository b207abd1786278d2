#include "hypmnnr/marks.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "hypmnnr/errors.hpp"
#include "hypmnnr/quadrature.hpp"

namespace hypmnnr {

namespace {

[[noreturn]] void bad_spec(std::string_view spec, const std::string& why) {
    throw std::invalid_argument("bad spec '" + std::string(spec) + "': " + why);
}

double parse_double(std::string_view spec, std::string_view token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        bad_spec(spec, "expected a number, got '" + std::string(token) + "'");
    return v;
}

/// Splits "name:k1=v1,k2=v2" into (name, {k:v}). Duplicate keys are errors.
std::pair<std::string, std::map<std::string, double>> parse_kv_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    std::string name(spec.substr(0, colon));
    std::map<std::string, double> kv;
    if (colon == std::string_view::npos)
        return {name, kv};
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = (comma == std::string_view::npos) ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            bad_spec(spec, "expected key=value, got '" + std::string(item) + "'");
        std::string key(item.substr(0, eq));
        if (kv.count(key))
            bad_spec(spec, "duplicate key '" + key + "'");
        kv[key] = parse_double(spec, item.substr(eq + 1));
    }
    return {name, kv};
}

void expect_keys(std::string_view spec, const std::map<std::string, double>& kv,
                 std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (!kv.count(k))
            bad_spec(spec, std::string("missing key '") + k + "'");
    if (kv.size() != keys.size())
        bad_spec(spec, "unexpected extra keys");
}

double format_helper(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    return v;
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cont_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete_beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                            (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cont_fraction(a, b, x) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b))) *
                     beta_cont_fraction(b, a, 1.0 - x) / b;
}

// ---------------------------------------------------------------------------
// MarkModel

struct MarkModel::BetaDist {
    double alpha = 1.0;
    double beta = 1.0;
    double mean = 0.5;
    double variance = 1.0 / 12.0;
    double ln_norm = 0.0; // log B(alpha, beta)

    // Quantile interpolant: exact quantiles on a u-grid with exact slopes
    // dz/du = 1/f(z), evaluated by monotone Hermite cubics. Shapes whose
    // interpolant misses the measured accuracy target get Newton polishing in
    // the fast path.
    std::vector<double> u_grid;
    std::vector<double> z_grid;
    std::vector<double> dz_grid;
    bool polish_fast = false;

    double pdf(double z) const {
        if (z <= 0.0 || z >= 1.0)
            return 0.0;
        return std::exp((alpha - 1.0) * std::log(z) + (beta - 1.0) * std::log1p(-z) - ln_norm);
    }
    double cdf(double z) const {
        if (z <= 0.0) return 0.0;
        if (z >= 1.0) return 1.0;
        return incomplete_beta(alpha, beta, z);
    }

    // Bisection in log-odds space (resolves both tails to relative precision)
    // followed by Newton polishing in z.
    double solve_quantile(double u, double zlo, double zhi) const {
        auto to_y = [](double z) { return std::log(z) - std::log1p(-z); };
        auto to_z = [](double y) { return 1.0 / (1.0 + std::exp(-y)); };
        double ylo = to_y(std::max(zlo, 1e-308));
        double yhi = to_y(std::min(zhi, 1.0 - 1e-16));
        for (int i = 0; i < 120 && yhi - ylo > 1e-14; ++i) {
            const double mid = 0.5 * (ylo + yhi);
            (cdf(to_z(mid)) < u ? ylo : yhi) = mid;
        }
        double zq = to_z(0.5 * (ylo + yhi));
        for (int i = 0; i < 2; ++i) {
            const double f = pdf(zq);
            if (f <= 0.0 || !std::isfinite(f))
                break;
            const double next = zq - (cdf(zq) - u) / f;
            if (next <= 0.0 || next >= 1.0)
                break;
            zq = next;
        }
        return zq;
    }

    void build_grid() {
        // Uniform u-grid plus dyadic refinement toward both tails.
        std::vector<double> us;
        const int n_uniform = 512;
        us.reserve(n_uniform + 96);
        for (int i = 0; i <= n_uniform; ++i)
            us.push_back(static_cast<double>(i) / n_uniform);
        for (int k = 10; k <= 48; ++k) {
            us.push_back(std::ldexp(1.0, -k));
            us.push_back(1.0 - std::ldexp(1.0, -k));
        }
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());

        u_grid = us;
        z_grid.resize(us.size());
        dz_grid.resize(us.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < us.size(); ++i) {
            const double u = us[i];
            double zq;
            if (u <= 0.0)
                zq = 0.0;
            else if (u >= 1.0)
                zq = 1.0;
            else
                zq = solve_quantile(u, prev, 1.0);
            z_grid[i] = zq;
            const double f = pdf(zq);
            dz_grid[i] = (f > 0.0 && std::isfinite(f)) ? 1.0 / f : 0.0;
            prev = std::max(prev, zq);
        }

        // Probe cell midpoints; if the interpolant alone is not accurate
        // enough, the fast path will polish with Newton steps.
        double max_err = 0.0;
        for (std::size_t i = 0; i + 1 < u_grid.size(); ++i) {
            const double um = 0.5 * (u_grid[i] + u_grid[i + 1]);
            if (um <= 0.0 || um >= 1.0)
                continue;
            const double zi = quantile_interp(um);
            if (zi <= 0.0 || zi >= 1.0)
                continue;
            const double f = pdf(zi);
            if (f > 0.0 && std::isfinite(f))
                max_err = std::max(max_err, std::abs(cdf(zi) - um) / f);
        }
        polish_fast = max_err > 1e-10;
    }

    double quantile_polished(double u) const {
        double zq = quantile_interp(u);
        for (int i = 0; i < 2; ++i) {
            const double f = pdf(zq);
            if (f <= 0.0 || !std::isfinite(f))
                break;
            const double next = zq - (cdf(zq) - u) / f;
            if (next <= 0.0 || next >= 1.0)
                break;
            zq = next;
        }
        return zq;
    }

    double quantile_interp(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const auto it = std::upper_bound(u_grid.begin(), u_grid.end(), u);
        const std::size_t j = static_cast<std::size_t>(it - u_grid.begin());
        const std::size_t i = j - 1;
        const double h = u_grid[j] - u_grid[i];
        if (h <= 0.0)
            return z_grid[i];
        const double w = (u - u_grid[i]) / h;
        // Hermite basis with clamped slopes keeps the interpolant monotone.
        const double dz = z_grid[j] - z_grid[i];
        const double secant = dz / h;
        const double m0 = std::min(dz_grid[i], 3.0 * secant);
        const double m1 = std::min(dz_grid[j], 3.0 * secant);
        const double w2 = w * w, w3 = w2 * w;
        return z_grid[i] * (2 * w3 - 3 * w2 + 1) + h * m0 * (w3 - 2 * w2 + w) +
               z_grid[j] * (-2 * w3 + 3 * w2) + h * m1 * (w3 - w2);
    }
};

MarkModel MarkModel::degenerate(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("degenerate mark value must be > 0");
    MarkModel m;
    m.kind_ = Kind::Degenerate;
    m.mu_ = mu;
    m.lo_ = m.hi_ = mu;
    return m;
}

MarkModel MarkModel::uniform(double lo, double hi) {
    if (!(0.0 < lo) || !(lo < hi) || !std::isfinite(hi))
        throw std::invalid_argument("uniform marks require 0 < lo < hi");
    MarkModel m;
    m.kind_ = Kind::Uniform;
    m.lo_ = lo;
    m.hi_ = hi;

    // Sanity check that the density integrates to one over its support.
    const double mass = adaptive_quad([&](double z) { return m.density(z); }, lo, hi,
                                      QuadratureSpec{});
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("uniform mark density failed normalization check");
    return m;
}

MarkModel MarkModel::beta_mean_var(double mean, double variance) {
    if (!(mean > 0.0) || !(mean < 1.0))
        throw std::invalid_argument("beta mark mean must lie in (0,1)");
    const double cap = mean * (1.0 - mean);
    if (!(variance > 0.0) || !(variance < cap))
        throw std::invalid_argument("beta mark variance must lie in (0, mean*(1-mean))");

    const double scale = cap / variance - 1.0;
    auto dist = std::make_shared<BetaDist>();
    dist->alpha = mean * scale;
    dist->beta = (1.0 - mean) * scale;
    dist->mean = mean;
    dist->variance = variance;
    dist->ln_norm = std::lgamma(dist->alpha) + std::lgamma(dist->beta) -
                    std::lgamma(dist->alpha + dist->beta);
    dist->build_grid();

    MarkModel m;
    m.kind_ = Kind::Beta;
    m.lo_ = 0.0;
    m.hi_ = 1.0;
    m.beta_ = dist;

    // Normalization check. A shape parameter below one makes the density blow
    // up at that endpoint; substituting z = v^(1/alpha) (mirrored at the right
    // endpoint) turns the singular piece into a smooth integrand. Bounded
    // shapes integrate directly.
    const double a = dist->alpha, b = dist->beta, ln_norm = dist->ln_norm;
    const QuadratureSpec q{1e-11, 1e-10, 48};
    double left, right;
    if (a < 1.0) {
        left = adaptive_quad(
            [&](double v) {
                const double z = std::pow(v, 1.0 / a);
                return std::exp((b - 1.0) * std::log1p(-z) - ln_norm) / a;
            },
            0.0, std::pow(mean, a), q);
    } else {
        left = adaptive_quad([&](double z) { return dist->pdf(z); }, 0.0, mean, q);
    }
    if (b < 1.0) {
        right = adaptive_quad(
            [&](double w) {
                const double z = 1.0 - std::pow(w, 1.0 / b);
                return std::exp((a - 1.0) * std::log(z) - ln_norm) / b;
            },
            0.0, std::pow(1.0 - mean, b), q);
    } else {
        right = adaptive_quad([&](double z) { return dist->pdf(z); }, mean, 1.0, q);
    }
    if (std::abs(left + right - 1.0) > 1e-8)
        throw std::invalid_argument("beta mark density failed normalization check");
    return m;
}

MarkModel MarkModel::parse(std::string_view spec) {
    auto [name, kv] = parse_kv_spec(spec);
    if (name == "degenerate") {
        expect_keys(spec, kv, {"mu"});
        return degenerate(kv["mu"]);
    }
    if (name == "beta") {
        expect_keys(spec, kv, {"mean", "var"});
        return beta_mean_var(kv["mean"], kv["var"]);
    }
    if (name == "uniform") {
        expect_keys(spec, kv, {"lo", "hi"});
        return uniform(kv["lo"], kv["hi"]);
    }
    bad_spec(spec, "unknown mark model '" + name + "'");
}

double MarkModel::mean() const {
    switch (kind_) {
    case Kind::Degenerate: return mu_;
    case Kind::Beta: return beta_->mean;
    case Kind::Uniform: return 0.5 * (lo_ + hi_);
    }
    return 0.0;
}

double MarkModel::variance() const {
    switch (kind_) {
    case Kind::Degenerate: return 0.0;
    case Kind::Beta: return beta_->variance;
    case Kind::Uniform: {
        const double w = hi_ - lo_;
        return w * w / 12.0;
    }
    }
    return 0.0;
}

double MarkModel::density(double z) const {
    switch (kind_) {
    case Kind::Degenerate:
        throw UnsupportedOperation("degenerate mark model has no density");
    case Kind::Beta:
        return beta_->pdf(z);
    case Kind::Uniform:
        return (z >= lo_ && z <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
    }
    return 0.0;
}

double MarkModel::cdf(double z) const {
    switch (kind_) {
    case Kind::Degenerate:
        return z >= mu_ ? 1.0 : 0.0;
    case Kind::Beta:
        return beta_->cdf(z);
    case Kind::Uniform:
        return std::clamp((z - lo_) / (hi_ - lo_), 0.0, 1.0);
    }
    return 0.0;
}

double MarkModel::quantile(double u) const {
    if (u < 0.0 || u > 1.0)
        throw std::invalid_argument("quantile argument must lie in [0,1]");
    switch (kind_) {
    case Kind::Degenerate:
        return mu_;
    case Kind::Uniform:
        return lo_ + u * (hi_ - lo_);
    case Kind::Beta: {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        // Bracket from the grid, then solve to full precision.
        const auto it = std::upper_bound(beta_->u_grid.begin(), beta_->u_grid.end(), u);
        const std::size_t j = static_cast<std::size_t>(it - beta_->u_grid.begin());
        const double zlo = j > 0 ? beta_->z_grid[j - 1] : 0.0;
        const double zhi = j < beta_->z_grid.size() ? beta_->z_grid[j] : 1.0;
        return beta_->solve_quantile(u, zlo, zhi);
    }
    }
    return 0.0;
}

double MarkModel::quantile_fast(double u) const {
    if (kind_ == Kind::Beta) {
        const double uc = std::clamp(u, 0.0, 1.0);
        return beta_->polish_fast ? beta_->quantile_polished(uc) : beta_->quantile_interp(uc);
    }
    return quantile(std::clamp(u, 0.0, 1.0));
}

double MarkModel::sample_one(SeededRng& rng) const {
    switch (kind_) {
    case Kind::Degenerate:
        return mu_;
    case Kind::Uniform:
        return rng.uniform(lo_, hi_);
    case Kind::Beta: {
        std::gamma_distribution<double> ga(beta_->alpha, 1.0);
        std::gamma_distribution<double> gb(beta_->beta, 1.0);
        const double x = ga(rng.engine());
        const double y = gb(rng.engine());
        const double sum = x + y;
        // Underflow guard: both gamma draws can be denormal-small for tiny
        // shapes; fall back to the median rather than return NaN.
        if (!(sum > 0.0))
            return quantile(0.5);
        double z = x / sum;
        if (z <= 0.0) z = std::numeric_limits<double>::min();
        if (z >= 1.0) z = 1.0 - 1e-16;
        return z;
    }
    }
    return mu_;
}

std::vector<double> MarkModel::sample(std::size_t n, SeededRng& rng) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(sample_one(rng));
    return out;
}

std::string MarkModel::describe() const {
    std::string out;
    switch (kind_) {
    case Kind::Degenerate:
        out = "degenerate:mu=";
        format_helper(out, mu_);
        break;
    case Kind::Beta:
        out = "beta:mean=";
        format_helper(out, beta_->mean);
        out += ",var=";
        format_helper(out, beta_->variance);
        break;
    case Kind::Uniform:
        out = "uniform:lo=";
        format_helper(out, lo_);
        out += ",hi=";
        format_helper(out, hi_);
        break;
    }
    return out;
}

double MarkModel::degenerate_mu() const {
    if (kind_ != Kind::Degenerate)
        throw UnsupportedOperation("not a degenerate mark model");
    return mu_;
}

double MarkModel::beta_alpha() const {
    if (kind_ != Kind::Beta)
        throw UnsupportedOperation("not a beta mark model");
    return beta_->alpha;
}

double MarkModel::beta_beta() const {
    if (kind_ != Kind::Beta)
        throw UnsupportedOperation("not a beta mark model");
    return beta_->beta;
}

// ---------------------------------------------------------------------------
// ControlSet

ControlSet ControlSet::full() {
    ControlSet d;
    d.kind_ = Kind::Full;
    return d;
}

ControlSet ControlSet::empty() {
    ControlSet d;
    d.kind_ = Kind::Empty;
    return d;
}

ControlSet ControlSet::min_product(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("minproduct threshold must be > 0");
    ControlSet d;
    d.kind_ = Kind::MinProduct;
    d.tau_ = tau;
    return d;
}

ControlSet ControlSet::max_ratio(double rho) {
    if (!(rho >= 1.0) || !std::isfinite(rho))
        throw std::invalid_argument("maxratio bound must be >= 1");
    ControlSet d;
    d.kind_ = Kind::MaxRatio;
    d.rho_ = rho;
    return d;
}

ControlSet ControlSet::custom(std::function<bool(double, double)> predicate,
                              std::uint64_t check_seed, int check_samples) {
    if (!predicate)
        throw std::invalid_argument("custom control set requires a predicate");
    SeededRng rng(check_seed);
    for (int i = 0; i < check_samples; ++i) {
        // Log-uniform marks over six decades around 1.
        const double z = std::exp(rng.uniform(-3.0, 3.0) * std::numbers::ln10);
        const double z_t = std::exp(rng.uniform(-3.0, 3.0) * std::numbers::ln10);
        if (predicate(z, z_t) != predicate(z_t, z))
            throw std::invalid_argument("custom control set predicate is not symmetric");
    }
    ControlSet d;
    d.kind_ = Kind::Custom;
    d.predicate_ = std::move(predicate);
    return d;
}

ControlSet ControlSet::parse(std::string_view spec) {
    auto [name, kv] = parse_kv_spec(spec);
    if (name == "full") {
        expect_keys(spec, kv, {});
        return full();
    }
    if (name == "empty") {
        expect_keys(spec, kv, {});
        return empty();
    }
    if (name == "minproduct") {
        expect_keys(spec, kv, {"tau"});
        return min_product(kv["tau"]);
    }
    if (name == "maxratio") {
        expect_keys(spec, kv, {"rho"});
        return max_ratio(kv["rho"]);
    }
    bad_spec(spec, "unknown control set '" + name + "'");
}

bool ControlSet::contains(double z, double z_t) const {
    if (!(z > 0.0) || !(z_t > 0.0))
        throw std::invalid_argument("control set membership requires positive marks");
    switch (kind_) {
    case Kind::Full: return true;
    case Kind::Empty: return false;
    case Kind::MinProduct: return z * z_t >= tau_;
    case Kind::MaxRatio: return std::max(z, z_t) <= rho_ * std::min(z, z_t);
    case Kind::Custom: return predicate_(z, z_t);
    }
    return false;
}

std::pair<double, double> ControlSet::admissible_interval(double z, double lo, double hi) const {
    switch (kind_) {
    case Kind::Full:
        return {lo, hi};
    case Kind::Empty:
        return {1.0, 0.0};
    case Kind::MinProduct:
        return {std::max(lo, tau_ / z), hi};
    case Kind::MaxRatio:
        return {std::max(lo, z / rho_), std::min(hi, z * rho_)};
    case Kind::Custom:
        throw UnsupportedOperation("custom control sets have no interval form");
    }
    return {1.0, 0.0};
}

std::string ControlSet::describe() const {
    std::string out;
    switch (kind_) {
    case Kind::Full: return "full";
    case Kind::Empty: return "empty";
    case Kind::MinProduct:
        out = "minproduct:tau=";
        format_helper(out, tau_);
        return out;
    case Kind::MaxRatio:
        out = "maxratio:rho=";
        format_helper(out, rho_);
        return out;
    case Kind::Custom: return "custom";
    }
    return out;
}

} // namespace hypmnnr
