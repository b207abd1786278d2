#include "hypmnnr/pointprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hypmnnr/errors.hpp"

namespace hypmnnr {

Window::Window(double w, double h, Boundary b) : width(w), height(h), boundary(b) {
    if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h))
        throw std::invalid_argument("window dimensions must be finite and > 0");
}

MarkedPattern sample_ppp(double lambda, const Window& window, const MarkModel& marks,
                         SeededRng& rng) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("intensity lambda must be > 0");

    std::poisson_distribution<long long> count_dist(lambda * window.area());
    const long long n = count_dist(rng.engine());

    MarkedPattern p;
    p.window = window;
    p.intensity = lambda;
    p.seed = rng.seed();
    p.atoms.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, window.width);
        const double y = rng.uniform(0.0, window.height);
        const double z = marks.sample_one(rng);
        if (!(z >= marks.support_lo() && z <= marks.support_hi()))
            throw std::logic_error("mark sampler produced a value outside the model support");
        p.atoms.emplace_back(x, y, z);
    }
    return p;
}

MarkedPattern make_pattern(std::vector<MarkedAtom> atoms, const Window& window) {
    for (const MarkedAtom& a : atoms) {
        if (a.x < 0.0 || a.x > window.width || a.y < 0.0 || a.y > window.height)
            throw std::invalid_argument("atom position outside the window");
    }
    MarkedPattern p;
    p.atoms = std::move(atoms);
    p.window = window;
    return p;
}

std::string sidecar_path_for(const std::string& csv_path) {
    return csv_path + ".json";
}

const char* boundary_name(Boundary b) {
    return b == Boundary::Torus ? "torus" : "open";
}

Boundary parse_boundary(const std::string& name) {
    if (name == "torus") return Boundary::Torus;
    if (name == "open") return Boundary::Open;
    throw std::invalid_argument("unknown boundary mode '" + name + "' (expected torus|open)");
}

void write_pattern_csv(const MarkedPattern& pattern, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out)
        throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    out << "x,y,z\n";
    char buf[128];
    for (const MarkedAtom& a : pattern.atoms) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a.x, a.y, a.z);
        out << buf;
    }
    out.close();

    nlohmann::json side;
    side["width"] = pattern.window.width;
    side["height"] = pattern.window.height;
    side["boundary"] = boundary_name(pattern.window.boundary);
    side["lambda"] = pattern.intensity ? nlohmann::json(*pattern.intensity) : nlohmann::json();
    side["seed"] = pattern.seed ? nlohmann::json(*pattern.seed) : nlohmann::json();
    std::ofstream sidecar(sidecar_path_for(csv_path));
    if (!sidecar)
        throw std::runtime_error("cannot open '" + sidecar_path_for(csv_path) + "' for writing");
    sidecar << side.dump(2) << "\n";
}

MarkedPattern read_pattern_csv(const std::string& csv_path,
                               const std::optional<Window>& window_override) {
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cannot open '" + csv_path + "'");

    std::string line;
    long line_no = 0;
    std::vector<MarkedAtom> atoms;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        // Trim trailing CR for files written on other platforms.
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (!saw_header) {
            if (line != "x,y,z")
                throw ParseError("expected header 'x,y,z', got '" + line + "'", line_no);
            saw_header = true;
            continue;
        }
        std::istringstream row(line);
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            std::string cell;
            if (!std::getline(row, cell, ','))
                throw ParseError("expected 3 comma-separated values", line_no);
            try {
                std::size_t used = 0;
                vals[k] = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size())
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + cell + "'", line_no);
            }
        }
        std::string extra;
        if (std::getline(row, extra, ','))
            throw ParseError("unexpected extra column", line_no);
        if (!(vals[2] > 0.0))
            throw ParseError("mark must be > 0, got " + std::to_string(vals[2]), line_no);
        try {
            atoms.emplace_back(vals[0], vals[1], vals[2]);
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (!saw_header)
        throw ParseError("empty pattern file: missing 'x,y,z' header", 1);

    std::optional<double> lambda;
    std::optional<std::uint64_t> seed;
    std::optional<Window> window = window_override;
    if (!window) {
        std::ifstream sidecar(sidecar_path_for(csv_path));
        if (sidecar) {
            nlohmann::json side = nlohmann::json::parse(sidecar);
            window = Window(side.at("width").get<double>(), side.at("height").get<double>(),
                            parse_boundary(side.at("boundary").get<std::string>()));
            if (side.contains("lambda") && side["lambda"].is_number())
                lambda = side["lambda"].get<double>();
            if (side.contains("seed") && side["seed"].is_number())
                seed = side["seed"].get<std::uint64_t>();
        }
    }
    if (!window) {
        // No sidecar and no override: take the bounding box, open boundary.
        double w = 1.0, h = 1.0;
        for (const MarkedAtom& a : atoms) {
            w = std::max(w, a.x);
            h = std::max(h, a.y);
        }
        for (const MarkedAtom& a : atoms)
            if (a.x < 0.0 || a.y < 0.0)
                throw std::invalid_argument(
                    "pattern has negative coordinates; supply an explicit window");
        window = Window(std::nextafter(w, w + 1.0), std::nextafter(h, h + 1.0), Boundary::Open);
    }

    MarkedPattern p = make_pattern(std::move(atoms), *window);
    p.intensity = lambda;
    p.seed = seed;
    return p;
}

} // namespace hypmnnr
