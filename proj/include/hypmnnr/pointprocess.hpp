#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypmnnr/hypgeom.hpp"
#include "hypmnnr/marks.hpp"
#include "hypmnnr/rng.hpp"

namespace hypmnnr {

enum class Boundary {
    Torus, // periodic wrapping; emulates the stationary infinite-plane process
    Open,  // plain rectangle; edge effects present
};

struct Window {
    double width = 1.0;
    double height = 1.0;
    Boundary boundary = Boundary::Torus;

    Window() = default;
    Window(double w, double h, Boundary b);
    double area() const { return width * height; }
};

/// Planar distance under the window's boundary mode. The torus distance wraps
/// each coordinate difference to at most half the window extent.
struct PlanarMetric {
    double width = 0.0;
    double height = 0.0;
    Boundary boundary = Boundary::Open;

    static PlanarMetric open_plane() { return {0.0, 0.0, Boundary::Open}; }
    static PlanarMetric for_window(const Window& w) { return {w.width, w.height, w.boundary}; }

    double distance(double ax, double ay, double bx, double by) const {
        double dx = ax - bx;
        double dy = ay - by;
        if (boundary == Boundary::Torus) {
            dx = std::abs(dx);
            dy = std::abs(dy);
            if (dx > 0.5 * width) dx = width - dx;
            if (dy > 0.5 * height) dy = height - dy;
        }
        return std::hypot(dx, dy);
    }
};

/// A realization of the marked process on a finite window. Atom order is the
/// generation order; indices are stable identifiers within the pattern.
struct MarkedPattern {
    std::vector<MarkedAtom> atoms;
    Window window;
    std::optional<double> intensity; // known for sampled patterns
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return atoms.size(); }
    PlanarMetric metric() const { return PlanarMetric::for_window(window); }
};

/// Samples a homogeneous independently marked Poisson process: the atom count
/// is Poisson(lambda * area), positions are uniform, and marks are i.i.d.
/// draws from the mark model. Deterministic given the rng seed.
MarkedPattern sample_ppp(double lambda, const Window& window, const MarkModel& marks,
                         SeededRng& rng);

/// Builds a pattern from explicit atoms, validating that positions lie inside
/// the window.
MarkedPattern make_pattern(std::vector<MarkedAtom> atoms, const Window& window);

/// Pattern file I/O. The CSV carries "x,y,z" rows; window and metadata live in
/// a sidecar JSON next to the CSV (same path with a ".json" suffix appended to
/// the stem). Parse failures throw ParseError carrying the 1-based line number.
void write_pattern_csv(const MarkedPattern& pattern, const std::string& csv_path);
MarkedPattern read_pattern_csv(const std::string& csv_path,
                               const std::optional<Window>& window_override = std::nullopt);

std::string sidecar_path_for(const std::string& csv_path);

const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& name);

} // namespace hypmnnr
