#include "hypmnnr.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hypmnnr/analytics.hpp"
#include "hypmnnr/errors.hpp"
#include "hypmnnr/hypgeom.hpp"
#include "hypmnnr/marks.hpp"
#include "hypmnnr/mnnr.hpp"
#include "hypmnnr/numerics.hpp"
#include "hypmnnr/pointprocess.hpp"
#include "hypmnnr/simharness.hpp"

using namespace hypmnnr;

// Handle definitions: thin wrappers owning the C++ objects.
struct hypmnnr_markmodel {
    MarkModel model;
};
struct hypmnnr_controlset {
    ControlSet control;
};
struct hypmnnr_pattern {
    MarkedPattern pattern;
};
struct hypmnnr_partition {
    ClusterPartition partition;
};

namespace {

thread_local std::string g_last_error;

hypmnnr_status fail(hypmnnr_status code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

/// Runs fn(), translating C++ exceptions into status codes.
template <typename Fn>
hypmnnr_status guarded(Fn&& fn) {
    try {
        fn();
        return HYPMNNR_OK;
    } catch (const NonConvergence& e) {
        return fail(HYPMNNR_ERR_NO_CONVERGENCE, e.what());
    } catch (const ParseError& e) {
        return fail(HYPMNNR_ERR_PARSE, e.what());
    } catch (const UnsupportedOperation& e) {
        return fail(HYPMNNR_ERR_UNSUPPORTED, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(HYPMNNR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(HYPMNNR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(HYPMNNR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(HYPMNNR_ERR_INTERNAL, "unknown error");
    }
}

hypmnnr_status require(bool ok, const char* what) {
    return ok ? HYPMNNR_OK : fail(HYPMNNR_ERR_INVALID_ARGUMENT, what);
}

QuadratureSpec to_spec(const hypmnnr_quad_opts* quad) {
    if (!quad)
        return QuadratureSpec{};
    QuadratureSpec spec;
    if (quad->abs_tol > 0.0) spec.abs_tol = quad->abs_tol;
    if (quad->rel_tol > 0.0) spec.rel_tol = quad->rel_tol;
    if (quad->max_depth > 0) spec.max_depth = quad->max_depth;
    return spec;
}

ExpectationSpec to_expect(const hypmnnr_expect_opts* expect) {
    if (!expect)
        return ExpectationSpec{};
    ExpectationSpec spec;
    spec.method = expect->method == HYPMNNR_EXPECT_MONTE_CARLO
                      ? ExpectationSpec::Method::MonteCarlo
                      : ExpectationSpec::Method::TensorQuadrature;
    if (expect->nodes > 0) spec.nodes = expect->nodes;
    if (expect->samples > 0) spec.samples = expect->samples;
    spec.seed = expect->seed;
    return spec;
}

Boundary to_boundary(int boundary) {
    if (boundary == HYPMNNR_BOUNDARY_TORUS)
        return Boundary::Torus;
    if (boundary == HYPMNNR_BOUNDARY_OPEN)
        return Boundary::Open;
    throw std::invalid_argument("boundary must be torus (0) or open (1)");
}

double to_max_radius(double max_radius) {
    return max_radius > 0.0 ? max_radius : kInfiniteRadius;
}

hypmnnr_status copy_string(const std::string& text, char* buf, size_t size, size_t* written) {
    if (written)
        *written = text.size();
    if (buf && size > 0) {
        const size_t n = text.size() < size - 1 ? text.size() : size - 1;
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return HYPMNNR_OK;
}

hypmnnr_summary to_summary(const EstimateSummary& s) {
    return {s.mean, s.std_error, s.ci_lo, s.ci_hi, s.replicates};
}

ExperimentConfig to_config(const hypmnnr_experiment* cfg) {
    if (!cfg || !cfg->marks || !cfg->control)
        throw std::invalid_argument("experiment config and its handles must be non-null");
    ExperimentConfig out;
    out.lambda = cfg->lambda;
    out.window = Window(cfg->width, cfg->height, to_boundary(cfg->boundary));
    out.marks = cfg->marks->model;
    out.control = cfg->control->control;
    out.replicates = cfg->replicates;
    out.master_seed = cfg->seed;
    out.threads = cfg->threads;
    out.guard_margin = cfg->guard_margin;
    return out;
}

} // namespace

const char* hypmnnr_version(void) {
    return "0.1.0";
}

const char* hypmnnr_last_error(void) {
    return g_last_error.c_str();
}

// ---- mark models -----------------------------------------------------------

hypmnnr_status hypmnnr_markmodel_parse(const char* spec, hypmnnr_markmodel** out) {
    if (auto rc = require(spec && out, "spec and out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_markmodel{MarkModel::parse(spec)}; });
}

hypmnnr_status hypmnnr_markmodel_degenerate(double mu, hypmnnr_markmodel** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_markmodel{MarkModel::degenerate(mu)}; });
}

hypmnnr_status hypmnnr_markmodel_beta(double mean, double variance, hypmnnr_markmodel** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_markmodel{MarkModel::beta_mean_var(mean, variance)}; });
}

hypmnnr_status hypmnnr_markmodel_uniform(double lo, double hi, hypmnnr_markmodel** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_markmodel{MarkModel::uniform(lo, hi)}; });
}

void hypmnnr_markmodel_free(hypmnnr_markmodel* model) {
    delete model;
}

hypmnnr_status hypmnnr_markmodel_density(const hypmnnr_markmodel* model, double z, double* out) {
    if (auto rc = require(model && out, "model and out must be non-null"))
        return rc;
    return guarded([&] { *out = model->model.density(z); });
}

hypmnnr_status hypmnnr_markmodel_support(const hypmnnr_markmodel* model, double* lo, double* hi) {
    if (auto rc = require(model && lo && hi, "model, lo, hi must be non-null"))
        return rc;
    *lo = model->model.support_lo();
    *hi = model->model.support_hi();
    return HYPMNNR_OK;
}

hypmnnr_status hypmnnr_markmodel_sample(const hypmnnr_markmodel* model, size_t n, uint64_t seed,
                                        double* out) {
    if (auto rc = require(model && (out || n == 0), "model and out must be non-null"))
        return rc;
    return guarded([&] {
        SeededRng rng(seed);
        for (size_t i = 0; i < n; ++i)
            out[i] = model->model.sample_one(rng);
    });
}

hypmnnr_status hypmnnr_markmodel_describe(const hypmnnr_markmodel* model, char* buf, size_t size,
                                          size_t* written) {
    if (auto rc = require(model != nullptr, "model must be non-null"))
        return rc;
    return copy_string(model->model.describe(), buf, size, written);
}

// ---- control sets -----------------------------------------------------------

hypmnnr_status hypmnnr_controlset_parse(const char* spec, hypmnnr_controlset** out) {
    if (auto rc = require(spec && out, "spec and out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_controlset{ControlSet::parse(spec)}; });
}

hypmnnr_status hypmnnr_controlset_full(hypmnnr_controlset** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_controlset{ControlSet::full()}; });
}

hypmnnr_status hypmnnr_controlset_empty(hypmnnr_controlset** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_controlset{ControlSet::empty()}; });
}

hypmnnr_status hypmnnr_controlset_min_product(double tau, hypmnnr_controlset** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_controlset{ControlSet::min_product(tau)}; });
}

hypmnnr_status hypmnnr_controlset_max_ratio(double rho, hypmnnr_controlset** out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = new hypmnnr_controlset{ControlSet::max_ratio(rho)}; });
}

void hypmnnr_controlset_free(hypmnnr_controlset* control) {
    delete control;
}

hypmnnr_status hypmnnr_controlset_contains(const hypmnnr_controlset* control, double z,
                                           double z_other, int* out) {
    if (auto rc = require(control && out, "control and out must be non-null"))
        return rc;
    return guarded([&] { *out = control->control.contains(z, z_other) ? 1 : 0; });
}

hypmnnr_status hypmnnr_controlset_describe(const hypmnnr_controlset* control, char* buf,
                                           size_t size, size_t* written) {
    if (auto rc = require(control != nullptr, "control must be non-null"))
        return rc;
    return copy_string(control->control.describe(), buf, size, written);
}

// ---- geometry ----------------------------------------------------------------

hypmnnr_status hypmnnr_hyperbolic_distance(double planar_dist, double z, double z_other,
                                           double* out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = hyperbolic_distance(planar_dist, z, z_other); });
}

hypmnnr_status hypmnnr_euclidean_ball(double x, double y, double z, double eps,
                                      hypmnnr_ball* out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] {
        const Ball3 b = euclidean_ball(MarkedAtom(x, y, z), eps);
        *out = {b.center_x, b.center_y, b.center_h, b.radius};
    });
}

hypmnnr_status hypmnnr_lens_geometry(double planar_dist, double z, double z_other,
                                     hypmnnr_lens* out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] {
        const LensGeometry g = lens_geometry(planar_dist, z, z_other);
        *out = {g.R, g.s, g.d, g.r, g.r_t, g.c, g.c_t, g.h, g.h_t, g.delta, g.delta_t};
    });
}

hypmnnr_status hypmnnr_circle_union_area(double radius1, double radius2, double center_dist,
                                         double* out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] { *out = circle_union_area(radius1, radius2, center_dist); });
}

// ---- pairing volume and analytics ---------------------------------------------

hypmnnr_status hypmnnr_volume_f(int method, double s, double z, double z_other,
                                const hypmnnr_markmodel* marks, const hypmnnr_quad_opts* quad,
                                long long mc_samples, uint64_t mc_seed, hypmnnr_estimate* out) {
    if (auto rc = require(marks && out, "marks and out must be non-null"))
        return rc;
    return guarded([&] {
        VolumeEstimate est;
        switch (method) {
        case HYPMNNR_VOLUME_SLICE:
            est = volume_f_slice(s, z, z_other, marks->model, to_spec(quad));
            break;
        case HYPMNNR_VOLUME_TRIPLE:
            est = volume_f_triple(s, z, z_other, marks->model, to_spec(quad));
            break;
        case HYPMNNR_VOLUME_MC: {
            SeededRng rng(mc_seed);
            est = volume_f_mc(s, z, z_other, marks->model, mc_samples, rng);
            break;
        }
        default:
            throw std::invalid_argument("unknown volume method");
        }
        *out = {est.value, est.std_error};
    });
}

hypmnnr_status hypmnnr_pair_probability(double s, double z, double z_other, double lambda,
                                        const hypmnnr_controlset* control,
                                        const hypmnnr_markmodel* marks,
                                        const hypmnnr_quad_opts* quad, double* out) {
    if (auto rc = require(control && marks && out, "control, marks, out must be non-null"))
        return rc;
    return guarded([&] {
        *out = pair_probability(s, z, z_other, lambda, control->control, marks->model,
                                to_spec(quad));
    });
}

hypmnnr_status hypmnnr_pair_fraction(double lambda, const hypmnnr_markmodel* marks,
                                     const hypmnnr_controlset* control,
                                     const hypmnnr_expect_opts* expect,
                                     const hypmnnr_quad_opts* quad, hypmnnr_estimate* out) {
    if (auto rc = require(marks && control && out, "marks, control, out must be non-null"))
        return rc;
    return guarded([&] {
        const Estimate est =
            pair_fraction(lambda, marks->model, control->control, to_expect(expect), to_spec(quad));
        *out = {est.value, est.std_error};
    });
}

hypmnnr_status hypmnnr_pathloss_tail_integral(double beta, double excl_radius, double max_radius,
                                              double* out) {
    if (auto rc = require(out != nullptr, "out must be non-null"))
        return rc;
    return guarded([&] {
        *out = pathloss_tail_integral(PathlossModel{beta, excl_radius}, to_max_radius(max_radius));
    });
}

hypmnnr_status hypmnnr_interference_singles(double lambda, const hypmnnr_markmodel* marks,
                                            const hypmnnr_controlset* control, double beta,
                                            double excl_radius, double max_radius,
                                            const hypmnnr_expect_opts* expect,
                                            const hypmnnr_quad_opts* quad,
                                            hypmnnr_estimate* out) {
    if (auto rc = require(marks && control && out, "marks, control, out must be non-null"))
        return rc;
    return guarded([&] {
        const Estimate est = expected_interference_singles(
            lambda, marks->model, control->control, PathlossModel{beta, excl_radius},
            to_expect(expect), to_spec(quad), to_max_radius(max_radius));
        *out = {est.value, est.std_error};
    });
}

hypmnnr_status hypmnnr_interference_pairs(double lambda, const hypmnnr_markmodel* marks,
                                          const hypmnnr_controlset* control, double beta,
                                          double excl_radius, double max_radius,
                                          const hypmnnr_expect_opts* expect,
                                          const hypmnnr_quad_opts* quad, hypmnnr_estimate* out) {
    if (auto rc = require(marks && control && out, "marks, control, out must be non-null"))
        return rc;
    return guarded([&] {
        const Estimate est = expected_interference_pairs(
            lambda, marks->model, control->control, PathlossModel{beta, excl_radius},
            to_expect(expect), to_spec(quad), to_max_radius(max_radius));
        *out = {est.value, est.std_error};
    });
}

hypmnnr_status hypmnnr_interference_pairs_kernel(double lambda, const hypmnnr_markmodel* marks,
                                                 const hypmnnr_controlset* control,
                                                 hypmnnr_pair_kernel kernel, void* ctx,
                                                 long long mc_budget, uint64_t seed,
                                                 double core_radius, double pareto_alpha,
                                                 hypmnnr_estimate* out) {
    if (auto rc = require(marks && control && kernel && out,
                          "marks, control, kernel, out must be non-null"))
        return rc;
    return guarded([&] {
        PlaneProposal proposal;
        if (core_radius > 0.0) proposal.core_radius = core_radius;
        if (pareto_alpha > 0.0) proposal.pareto_alpha = pareto_alpha;
        const VolumeEstimate est = expected_interference_pairs_general(
            lambda, marks->model, control->control,
            [kernel, ctx](double ax, double ay, double bx, double by) {
                return kernel(ax, ay, bx, by, ctx);
            },
            mc_budget, seed, proposal);
        *out = {est.value, est.std_error};
    });
}

// ---- patterns and clustering ---------------------------------------------------

hypmnnr_status hypmnnr_pattern_sample(double lambda, double width, double height, int boundary,
                                      const hypmnnr_markmodel* marks, uint64_t seed,
                                      hypmnnr_pattern** out) {
    if (auto rc = require(marks && out, "marks and out must be non-null"))
        return rc;
    return guarded([&] {
        SeededRng rng(seed);
        *out = new hypmnnr_pattern{
            sample_ppp(lambda, Window(width, height, to_boundary(boundary)), marks->model, rng)};
    });
}

hypmnnr_status hypmnnr_pattern_create(const double* x, const double* y, const double* z, size_t n,
                                      double width, double height, int boundary,
                                      hypmnnr_pattern** out) {
    if (auto rc = require(out && (n == 0 || (x && y && z)),
                          "coordinate arrays and out must be non-null"))
        return rc;
    return guarded([&] {
        std::vector<MarkedAtom> atoms;
        atoms.reserve(n);
        for (size_t i = 0; i < n; ++i)
            atoms.emplace_back(x[i], y[i], z[i]);
        *out = new hypmnnr_pattern{
            make_pattern(std::move(atoms), Window(width, height, to_boundary(boundary)))};
    });
}

hypmnnr_status hypmnnr_pattern_read_csv(const char* path, double width, double height,
                                        int boundary, hypmnnr_pattern** out) {
    if (auto rc = require(path && out, "path and out must be non-null"))
        return rc;
    return guarded([&] {
        std::optional<Window> window;
        if (width > 0.0 && height > 0.0)
            window = Window(width, height, to_boundary(boundary));
        *out = new hypmnnr_pattern{read_pattern_csv(path, window)};
    });
}

hypmnnr_status hypmnnr_pattern_write_csv(const hypmnnr_pattern* pattern, const char* path) {
    if (auto rc = require(pattern && path, "pattern and path must be non-null"))
        return rc;
    return guarded([&] { write_pattern_csv(pattern->pattern, path); });
}

void hypmnnr_pattern_free(hypmnnr_pattern* pattern) {
    delete pattern;
}

size_t hypmnnr_pattern_size(const hypmnnr_pattern* pattern) {
    return pattern ? pattern->pattern.size() : 0;
}

hypmnnr_status hypmnnr_pattern_atom(const hypmnnr_pattern* pattern, size_t i, double* x,
                                    double* y, double* z) {
    if (auto rc = require(pattern && x && y && z, "pattern, x, y, z must be non-null"))
        return rc;
    if (auto rc = require(i < pattern->pattern.size(), "atom index out of range"))
        return rc;
    const MarkedAtom& a = pattern->pattern.atoms[i];
    *x = a.x;
    *y = a.y;
    *z = a.z;
    return HYPMNNR_OK;
}

hypmnnr_status hypmnnr_pattern_window(const hypmnnr_pattern* pattern, double* width,
                                      double* height, int* boundary) {
    if (auto rc = require(pattern && width && height && boundary,
                          "pattern, width, height, boundary must be non-null"))
        return rc;
    *width = pattern->pattern.window.width;
    *height = pattern->pattern.window.height;
    *boundary = pattern->pattern.window.boundary == Boundary::Torus ? HYPMNNR_BOUNDARY_TORUS
                                                                    : HYPMNNR_BOUNDARY_OPEN;
    return HYPMNNR_OK;
}

hypmnnr_status hypmnnr_nearest_neighbor(const hypmnnr_pattern* pattern, size_t i, size_t* out) {
    if (auto rc = require(pattern && out, "pattern and out must be non-null"))
        return rc;
    return guarded(
        [&] { *out = nearest_neighbor(pattern->pattern, i, pattern->pattern.metric()); });
}

hypmnnr_status hypmnnr_partition_compute(const hypmnnr_pattern* pattern,
                                         const hypmnnr_controlset* control,
                                         hypmnnr_partition** out) {
    if (auto rc = require(pattern && control && out, "pattern, control, out must be non-null"))
        return rc;
    return guarded([&] {
        *out = new hypmnnr_partition{
            mnnr_partition(pattern->pattern, control->control, pattern->pattern.metric())};
    });
}

void hypmnnr_partition_free(hypmnnr_partition* partition) {
    delete partition;
}

size_t hypmnnr_partition_pair_count(const hypmnnr_partition* partition) {
    return partition ? partition->partition.pairs.size() : 0;
}

size_t hypmnnr_partition_single_count(const hypmnnr_partition* partition) {
    return partition ? partition->partition.singles.size() : 0;
}

hypmnnr_status hypmnnr_partition_pair(const hypmnnr_partition* partition, size_t k, size_t* i,
                                      size_t* j) {
    if (auto rc = require(partition && i && j, "partition, i, j must be non-null"))
        return rc;
    if (auto rc = require(k < partition->partition.pairs.size(), "pair index out of range"))
        return rc;
    *i = partition->partition.pairs[k].first;
    *j = partition->partition.pairs[k].second;
    return HYPMNNR_OK;
}

hypmnnr_status hypmnnr_partition_single(const hypmnnr_partition* partition, size_t k,
                                        size_t* index) {
    if (auto rc = require(partition && index, "partition and index must be non-null"))
        return rc;
    if (auto rc = require(k < partition->partition.singles.size(), "single index out of range"))
        return rc;
    *index = partition->partition.singles[k];
    return HYPMNNR_OK;
}

// ---- simulation experiments ------------------------------------------------------

hypmnnr_status hypmnnr_run_pair_fraction(const hypmnnr_experiment* cfg, hypmnnr_summary* out) {
    if (auto rc = require(cfg && out, "cfg and out must be non-null"))
        return rc;
    return guarded([&] { *out = to_summary(run_pair_fraction(to_config(cfg))); });
}

hypmnnr_status hypmnnr_run_interference(const hypmnnr_experiment* cfg, double beta,
                                        double excl_radius, double max_radius,
                                        hypmnnr_summary* singles, hypmnnr_summary* pairs) {
    if (auto rc = require(cfg && singles && pairs, "cfg, singles, pairs must be non-null"))
        return rc;
    return guarded([&] {
        const InterferenceSummary result = run_interference(
            to_config(cfg), PathlossModel{beta, excl_radius}, to_max_radius(max_radius));
        *singles = to_summary(result.singles);
        *pairs = to_summary(result.pairs);
    });
}
