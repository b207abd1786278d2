#pragma once

#include "hypmnnr/hypgeom.hpp"
#include "hypmnnr/marks.hpp"
#include "hypmnnr/quadrature.hpp"
#include "hypmnnr/rng.hpp"

namespace hypmnnr {

enum class VolumeMethod {
    Slice,      // 1-D reduction: integrate slice union areas over the height
    Triple,     // literal two-ball / two-lens nested integral form
    MonteCarlo, // hit-or-miss sampling, the independent oracle
    ClosedForm, // exact point-mass route for degenerate marks
};

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0; // zero for the deterministic routes
    VolumeMethod method = VolumeMethod::Slice;
};

/// F(s, z, z_t): the mark-density-weighted volume of the union of the two
/// mutual-neighbor balls. The pairing probability at BS density lambda is
/// exp(-lambda * F) when the control set admits the mark pair.
///
/// Slice route: the (x,y) integral at each height w is a two-disk union area,
/// leaving a single 1-D integral of f(w) * area(w). Heights are mapped through
/// the mark CDF so densities with endpoint singularities integrate cleanly.
VolumeEstimate volume_f_slice(double s, double z, double z_t, const MarkModel& marks,
                              const QuadratureSpec& spec = {});

/// Literal nested-integral route: two single-ball integrals minus the two lens
/// cap integrals, each evaluated in rotated cylindrical coordinates. Retained
/// as a cross-validation oracle for the slice route; requires a density.
VolumeEstimate volume_f_triple(double s, double z, double z_t, const MarkModel& marks,
                               const QuadratureSpec& spec = {});

/// Monte Carlo route: draw the height from the mark density and a planar point
/// uniformly over the slice bounding box. Unbiased; std_error reported from
/// the sample variance. Requires n >= 1000.
VolumeEstimate volume_f_mc(double s, double z, double z_t, const MarkModel& marks,
                           long long n, SeededRng& rng);

const char* volume_method_name(VolumeMethod m);

} // namespace hypmnnr
