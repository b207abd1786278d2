/*
 * hypmnnr: hyperbolic-distance mutually-nearest-neighbor clustering of
 * resource-marked planar nodes, with analytic pair-fraction and interference
 * formulas validated against Monte Carlo simulation.
 *
 * C API over the C++ core. All functions return a status code; on failure a
 * thread-local message is available through hypmnnr_last_error(). Objects are
 * opaque handles released with the matching *_free function. All handles are
 * immutable after creation and safe to share across threads.
 */
#ifndef HYPMNNR_H
#define HYPMNNR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hypmnnr_status {
    HYPMNNR_OK = 0,
    HYPMNNR_ERR_INVALID_ARGUMENT = 1,
    HYPMNNR_ERR_UNSUPPORTED = 2,
    HYPMNNR_ERR_NO_CONVERGENCE = 3,
    HYPMNNR_ERR_PARSE = 4,
    HYPMNNR_ERR_IO = 5,
    HYPMNNR_ERR_INTERNAL = 6
} hypmnnr_status;

typedef enum hypmnnr_boundary {
    HYPMNNR_BOUNDARY_TORUS = 0,
    HYPMNNR_BOUNDARY_OPEN = 1
} hypmnnr_boundary;

typedef enum hypmnnr_volume_method {
    HYPMNNR_VOLUME_SLICE = 0,  /* 1-D height-slice reduction (default) */
    HYPMNNR_VOLUME_TRIPLE = 1, /* literal nested-integral reference form */
    HYPMNNR_VOLUME_MC = 2      /* Monte Carlo oracle */
} hypmnnr_volume_method;

typedef enum hypmnnr_expect_method {
    HYPMNNR_EXPECT_QUADRATURE = 0, /* tensor Gauss-Legendre in quantile space */
    HYPMNNR_EXPECT_MONTE_CARLO = 1
} hypmnnr_expect_method;

/* Opaque handles. */
typedef struct hypmnnr_markmodel hypmnnr_markmodel;
typedef struct hypmnnr_controlset hypmnnr_controlset;
typedef struct hypmnnr_pattern hypmnnr_pattern;
typedef struct hypmnnr_partition hypmnnr_partition;

/* Adaptive quadrature tolerances; pass NULL anywhere for the defaults
 * (abs 1e-9, rel 1e-7, depth 40). */
typedef struct hypmnnr_quad_opts {
    double abs_tol;
    double rel_tol;
    int max_depth;
} hypmnnr_quad_opts;

/* Mark-pair expectation options; pass NULL for the defaults
 * (quadrature, 32 nodes per axis). */
typedef struct hypmnnr_expect_opts {
    int method; /* hypmnnr_expect_method */
    int nodes;
    long long samples;
    uint64_t seed;
} hypmnnr_expect_opts;

typedef struct hypmnnr_estimate {
    double value;
    double std_error; /* zero for deterministic evaluation */
} hypmnnr_estimate;

typedef struct hypmnnr_ball {
    double center_x;
    double center_y;
    double center_h;
    double radius;
} hypmnnr_ball;

typedef struct hypmnnr_lens {
    double hyperbolic_distance; /* R */
    double planar_distance;     /* s */
    double center_distance;     /* d */
    double radius_a;            /* r */
    double radius_b;            /* r~ */
    double center_height_a;     /* c */
    double center_height_b;     /* c~ */
    double cap_height_a;        /* h */
    double cap_height_b;        /* h~ */
    double cap_tilt_a;          /* delta */
    double cap_tilt_b;          /* delta~ */
} hypmnnr_lens;

typedef struct hypmnnr_experiment {
    double lambda;
    double width;
    double height;
    int boundary; /* hypmnnr_boundary */
    const hypmnnr_markmodel* marks;
    const hypmnnr_controlset* control;
    long long replicates;
    uint64_t seed;
    int threads;         /* 0: hardware concurrency */
    double guard_margin; /* open boundary only */
} hypmnnr_experiment;

typedef struct hypmnnr_summary {
    double mean;
    double std_error;
    double ci_lo;
    double ci_hi;
    long long replicates;
} hypmnnr_summary;

/* Library version string ("x.y.z"). */
const char* hypmnnr_version(void);

/* Message for the most recent failure on this thread. */
const char* hypmnnr_last_error(void);

/* ---- mark models ------------------------------------------------------- */

/* Spec strings: "degenerate:mu=0.5", "beta:mean=0.5,var=0.05",
 * "uniform:lo=0.2,hi=0.8". */
hypmnnr_status hypmnnr_markmodel_parse(const char* spec, hypmnnr_markmodel** out);
hypmnnr_status hypmnnr_markmodel_degenerate(double mu, hypmnnr_markmodel** out);
hypmnnr_status hypmnnr_markmodel_beta(double mean, double variance, hypmnnr_markmodel** out);
hypmnnr_status hypmnnr_markmodel_uniform(double lo, double hi, hypmnnr_markmodel** out);
void hypmnnr_markmodel_free(hypmnnr_markmodel* model);
hypmnnr_status hypmnnr_markmodel_density(const hypmnnr_markmodel* model, double z, double* out);
hypmnnr_status hypmnnr_markmodel_support(const hypmnnr_markmodel* model, double* lo, double* hi);
hypmnnr_status hypmnnr_markmodel_sample(const hypmnnr_markmodel* model, size_t n, uint64_t seed,
                                        double* out);
/* Canonical spec string; returns the number of bytes (excluding the
 * terminator) that were or would be written. */
hypmnnr_status hypmnnr_markmodel_describe(const hypmnnr_markmodel* model, char* buf, size_t size,
                                          size_t* written);

/* ---- control sets ------------------------------------------------------ */

/* Spec strings: "full", "empty", "minproduct:tau=0.25", "maxratio:rho=2.0". */
hypmnnr_status hypmnnr_controlset_parse(const char* spec, hypmnnr_controlset** out);
hypmnnr_status hypmnnr_controlset_full(hypmnnr_controlset** out);
hypmnnr_status hypmnnr_controlset_empty(hypmnnr_controlset** out);
hypmnnr_status hypmnnr_controlset_min_product(double tau, hypmnnr_controlset** out);
hypmnnr_status hypmnnr_controlset_max_ratio(double rho, hypmnnr_controlset** out);
void hypmnnr_controlset_free(hypmnnr_controlset* control);
hypmnnr_status hypmnnr_controlset_contains(const hypmnnr_controlset* control, double z,
                                           double z_other, int* out);
hypmnnr_status hypmnnr_controlset_describe(const hypmnnr_controlset* control, char* buf,
                                           size_t size, size_t* written);

/* ---- geometry ----------------------------------------------------------- */

hypmnnr_status hypmnnr_hyperbolic_distance(double planar_dist, double z, double z_other,
                                           double* out);
hypmnnr_status hypmnnr_euclidean_ball(double x, double y, double z, double eps,
                                      hypmnnr_ball* out);
hypmnnr_status hypmnnr_lens_geometry(double planar_dist, double z, double z_other,
                                     hypmnnr_lens* out);
hypmnnr_status hypmnnr_circle_union_area(double radius1, double radius2, double center_dist,
                                         double* out);

/* ---- pairing volume and analytics --------------------------------------- */

/* F(s, z, z_other) by the chosen route. mc_samples/mc_seed are used by the
 * Monte Carlo route only. */
hypmnnr_status hypmnnr_volume_f(int method, double s, double z, double z_other,
                                const hypmnnr_markmodel* marks, const hypmnnr_quad_opts* quad,
                                long long mc_samples, uint64_t mc_seed, hypmnnr_estimate* out);

/* exp(-lambda F) gated by the control set. */
hypmnnr_status hypmnnr_pair_probability(double s, double z, double z_other, double lambda,
                                        const hypmnnr_controlset* control,
                                        const hypmnnr_markmodel* marks,
                                        const hypmnnr_quad_opts* quad, double* out);

/* Fraction of atoms in cooperative pairs, P_D(lambda, f). */
hypmnnr_status hypmnnr_pair_fraction(double lambda, const hypmnnr_markmodel* marks,
                                     const hypmnnr_controlset* control,
                                     const hypmnnr_expect_opts* expect,
                                     const hypmnnr_quad_opts* quad, hypmnnr_estimate* out);

/* Integral of u^-beta over the annulus excl_radius < u <= max_radius.
 * Pass max_radius <= 0 for the infinite-plane tail. */
hypmnnr_status hypmnnr_pathloss_tail_integral(double beta, double excl_radius, double max_radius,
                                              double* out);

/* Expected interference at the origin from singles ((1-P_D) lambda tail) and
 * from paired atoms (P_D lambda tail). max_radius <= 0 means infinite. */
hypmnnr_status hypmnnr_interference_singles(double lambda, const hypmnnr_markmodel* marks,
                                            const hypmnnr_controlset* control, double beta,
                                            double excl_radius, double max_radius,
                                            const hypmnnr_expect_opts* expect,
                                            const hypmnnr_quad_opts* quad,
                                            hypmnnr_estimate* out);
hypmnnr_status hypmnnr_interference_pairs(double lambda, const hypmnnr_markmodel* marks,
                                          const hypmnnr_controlset* control, double beta,
                                          double excl_radius, double max_radius,
                                          const hypmnnr_expect_opts* expect,
                                          const hypmnnr_quad_opts* quad, hypmnnr_estimate* out);

/* General pair-interference kernel k(a, b) as a callback; Monte Carlo
 * estimate of the (lambda^2/2) double integral. core_radius/pareto_alpha
 * shape the importance-sampling proposal (pass 0 for defaults). */
typedef double (*hypmnnr_pair_kernel)(double ax, double ay, double bx, double by, void* ctx);
hypmnnr_status hypmnnr_interference_pairs_kernel(double lambda, const hypmnnr_markmodel* marks,
                                                 const hypmnnr_controlset* control,
                                                 hypmnnr_pair_kernel kernel, void* ctx,
                                                 long long mc_budget, uint64_t seed,
                                                 double core_radius, double pareto_alpha,
                                                 hypmnnr_estimate* out);

/* ---- patterns and clustering -------------------------------------------- */

hypmnnr_status hypmnnr_pattern_sample(double lambda, double width, double height, int boundary,
                                      const hypmnnr_markmodel* marks, uint64_t seed,
                                      hypmnnr_pattern** out);
hypmnnr_status hypmnnr_pattern_create(const double* x, const double* y, const double* z, size_t n,
                                      double width, double height, int boundary,
                                      hypmnnr_pattern** out);
/* Reads an "x,y,z" CSV. If width <= 0, the sidecar JSON (path + ".json") or
 * the bounding box supplies the window. Parse errors carry the line number in
 * hypmnnr_last_error(). */
hypmnnr_status hypmnnr_pattern_read_csv(const char* path, double width, double height,
                                        int boundary, hypmnnr_pattern** out);
hypmnnr_status hypmnnr_pattern_write_csv(const hypmnnr_pattern* pattern, const char* path);
void hypmnnr_pattern_free(hypmnnr_pattern* pattern);
size_t hypmnnr_pattern_size(const hypmnnr_pattern* pattern);
hypmnnr_status hypmnnr_pattern_atom(const hypmnnr_pattern* pattern, size_t i, double* x,
                                    double* y, double* z);
hypmnnr_status hypmnnr_pattern_window(const hypmnnr_pattern* pattern, double* width,
                                      double* height, int* boundary);

/* Hyperbolic nearest neighbor of atom i under the pattern's boundary metric. */
hypmnnr_status hypmnnr_nearest_neighbor(const hypmnnr_pattern* pattern, size_t i, size_t* out);

/* The MNNR partition into cooperative pairs and singles. */
hypmnnr_status hypmnnr_partition_compute(const hypmnnr_pattern* pattern,
                                         const hypmnnr_controlset* control,
                                         hypmnnr_partition** out);
void hypmnnr_partition_free(hypmnnr_partition* partition);
size_t hypmnnr_partition_pair_count(const hypmnnr_partition* partition);
size_t hypmnnr_partition_single_count(const hypmnnr_partition* partition);
hypmnnr_status hypmnnr_partition_pair(const hypmnnr_partition* partition, size_t k, size_t* i,
                                      size_t* j);
hypmnnr_status hypmnnr_partition_single(const hypmnnr_partition* partition, size_t k,
                                        size_t* index);

/* ---- simulation experiments --------------------------------------------- */

hypmnnr_status hypmnnr_run_pair_fraction(const hypmnnr_experiment* cfg, hypmnnr_summary* out);
hypmnnr_status hypmnnr_run_interference(const hypmnnr_experiment* cfg, double beta,
                                        double excl_radius, double max_radius,
                                        hypmnnr_summary* singles, hypmnnr_summary* pairs);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HYPMNNR_H */
