#include "antipode/plane_renderer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace antipode {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

Complex PlaneImage::viewport_point(int px, int py) const {
    // One scale for both axes keeps pixels square: the vertical half-extent
    // is half_extent * height / width.
    const double scale = spec.half_extent / spec.width;
    const double u = (2 * px + 1 - spec.width) * scale;
    const double v = (spec.height - 1 - 2 * py) * scale; // top row = largest v
    return spec.center + Complex(u, v);
}

bool PlaneImage::sample_point(int px, int py, Complex& z) const {
    const Complex w = viewport_point(px, py);
    switch (spec.projection) {
    case Projection::Plane:
        z = w;
        return true;
    case Projection::SphereOrthonormal: {
        const double r2 = std::norm(w);
        if (r2 >= 1.0) return false;
        // Orthonormal view straight down the sphere axis: (X,Y) in the unit
        // disk lifts to the hemisphere Z = -sqrt(1-X^2-Y^2) around z = 0,
        // and stereographic projection from the opposite pole gives
        // z = (X+iY)/(1 - Z).
        z = w / (1.0 + std::sqrt(1.0 - r2));
        return true;
    }
    case Projection::CircledDisk: {
        const double r2 = std::norm(w);
        if (r2 >= 1.0) return false;
        // Undo the radial compression r -> r/sqrt(1+r^2).
        z = w / std::sqrt(1.0 - r2);
        return true;
    }
    }
    return false;
}

namespace {

// Run `pixel_fn(px, py)` over the whole raster. Work is handed out by row;
// every worker writes only its own rows, so the assembled image is identical
// no matter how the rows were scheduled.
template <class F>
void render_grid(PlaneImage& img, int threads, F&& pixel_fn) {
    img.pixels.assign(static_cast<std::size_t>(img.spec.width) * img.spec.height, PixelRecord{});
    if (threads <= 0) {
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    std::atomic<int> next_row{0};
    auto worker = [&]() {
        for (;;) {
            const int py = next_row.fetch_add(1, std::memory_order_relaxed);
            if (py >= img.spec.height) return;
            PixelRecord* row = img.pixels.data() + static_cast<std::size_t>(py) * img.spec.width;
            for (int px = 0; px < img.spec.width; ++px) {
                try {
                    row[px] = pixel_fn(px, py);
                } catch (const std::exception&) {
                    row[px] = PixelRecord{}; // classifier refused: background pixel
                }
            }
        }
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

std::optional<double> cycle_hue_exact(const OrbitClass& oc) {
    if (oc.kind != OrbitKind::AttractingCycle || !oc.self_antipodal) return std::nullopt;
    try {
        return cycle_rotation_number(oc.cycle).to_double();
    } catch (const std::runtime_error&) {
        return std::nullopt; // attracting but not rotationally ordered
    }
}

float cycle_hue(const OrbitClass& oc) {
    const auto h = cycle_hue_exact(oc);
    return h ? static_cast<float>(*h) : -1.0f;
}

// Mean argument advance (in turns) around 0 along the critical orbit,
// after a burn-in of half the budget. Used as a ring rotation-number
// estimate for Herman candidates; bails out if the orbit is not bounded
// away from 0 and infinity.
std::optional<double> herman_advance(Complex q, int budget) {
    Complex z = critical_points(q).first;
    const int burn = std::max(16, budget / 2);
    const int count = std::clamp(budget / 2, 16, 4096);
    for (int i = 0; i < burn; ++i) {
        z = f_eval(q, z);
        const double m = std::abs(z);
        if (!(m > 1e-12) || !(m < 1e12)) return std::nullopt;
    }
    double sum = 0.0;
    for (int i = 0; i < count; ++i) {
        const Complex zn = f_eval(q, z);
        const double m = std::abs(zn);
        if (!(m > 1e-12) || !(m < 1e12)) return std::nullopt;
        sum += std::remainder(std::arg(zn) - std::arg(z), kTwoPi);
        z = zn;
    }
    double turns = sum / (count * kTwoPi);
    turns -= std::floor(turns);
    return turns;
}

std::optional<double> hue_from_verdict(const ParamVerdict& v, Complex q, int budget) {
    const OrbitClass& oc = v.critical_orbit;
    if (oc.kind == OrbitKind::AttractingCycle && oc.self_antipodal) return cycle_hue_exact(oc);
    if (v.kind == ParamClass::HermanCandidate) return herman_advance(q, budget);
    return std::nullopt;
}

} // namespace

PlaneImage render_julia(Complex q, const RenderSpec& spec) {
    PlaneImage img;
    img.kind = PlaneImage::Kind::Julia;
    img.spec = spec;
    img.q = q;
    render_grid(img, spec.threads, [&](int px, int py) {
        PixelRecord rec;
        Complex z;
        if (!img.sample_point(px, py, z)) return rec;
        rec.valid = 1;
        const OrbitClass oc = classify_orbit(q, z, spec.budget, spec.eps);
        rec.cls = static_cast<std::uint8_t>(oc.kind);
        rec.period = static_cast<std::int16_t>(std::min(oc.period, 32767));
        rec.hue = cycle_hue(oc);
        return rec;
    });
    return img;
}

PlaneImage render_param(ParamPlane plane, ParamColoring coloring, const RenderSpec& spec) {
    PlaneImage img;
    img.kind = PlaneImage::Kind::Parameter;
    img.spec = spec;
    img.plane = plane;
    img.coloring = coloring;
    render_grid(img, spec.threads, [&](int px, int py) {
        PixelRecord rec;
        Complex w;
        if (!img.sample_point(px, py, w)) return rec;
        rec.valid = 1;
        const Complex q = (plane == ParamPlane::Q) ? w : std::sqrt(w);
        const ParamVerdict v = classify_parameter(q, spec.budget, spec.eps);
        rec.cls = static_cast<std::uint8_t>(v.kind);
        rec.period = static_cast<std::int16_t>(std::min(v.critical_orbit.period, 32767));
        if (coloring == ParamColoring::RotationNumber) {
            if (auto h = hue_from_verdict(v, q, spec.budget)) rec.hue = static_cast<float>(*h);
        }
        return rec;
    });
    return img;
}

std::optional<double> estimate_rotation_hue(Complex q, int budget) {
    return hue_from_verdict(classify_parameter(q, budget), q, budget);
}

std::array<std::uint8_t, 3> hsv_to_rgb(double h_deg, double s, double v) {
    h_deg = h_deg - 360.0 * std::floor(h_deg / 360.0);
    const double c = v * s;
    const double x = c * (1.0 - std::abs(std::fmod(h_deg / 60.0, 2.0) - 1.0));
    const double m = v - c;
    double r = 0, g = 0, b = 0;
    if (h_deg < 60)       { r = c; g = x; }
    else if (h_deg < 120) { r = x; g = c; }
    else if (h_deg < 180) { g = c; b = x; }
    else if (h_deg < 240) { g = x; b = c; }
    else if (h_deg < 300) { r = x; b = c; }
    else                  { r = c; b = x; }
    auto to8 = [m](double t) {
        return static_cast<std::uint8_t>(std::clamp((t + m) * 255.0 + 0.5, 0.0, 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

std::array<std::uint8_t, 3> pixel_color(const PlaneImage& img, const PixelRecord& rec,
                                        const Palette& pal) {
    if (!rec.valid) return pal.background;
    auto hue_color = [&pal](float h) {
        return hsv_to_rgb(static_cast<double>(h) * 240.0, pal.hue_saturation, pal.hue_value);
    };
    if (img.kind == PlaneImage::Kind::Julia) {
        switch (static_cast<OrbitKind>(rec.cls)) {
        case OrbitKind::ToZero: return pal.julia_zero;
        case OrbitKind::ToInfinity: return pal.julia_inf;
        case OrbitKind::AttractingCycle:
            return rec.hue >= 0.0f ? hue_color(rec.hue) : pal.julia_cycle;
        case OrbitKind::Undecided: return pal.julia_undecided;
        }
        return pal.background;
    }
    if (img.coloring == ParamColoring::RotationNumber && rec.hue >= 0.0f) {
        return hue_color(rec.hue);
    }
    return pal.param[std::min<std::size_t>(rec.cls, pal.param.size() - 1)];
}

namespace {

std::string sidecar_path_for(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".ppm") == 0) {
        return path.substr(0, path.size() - 4) + ".json";
    }
    return path + ".json";
}

const char* projection_name(Projection p) {
    switch (p) {
    case Projection::Plane: return "plane";
    case Projection::SphereOrthonormal: return "sphere-orthonormal";
    case Projection::CircledDisk: return "circled-disk";
    }
    return "?";
}

} // namespace

void write_sidecar(const PlaneImage& img, const Palette& pal, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = (img.kind == PlaneImage::Kind::Julia) ? "julia" : "parameter";
    j["width"] = img.spec.width;
    j["height"] = img.spec.height;
    j["center"] = {img.spec.center.real(), img.spec.center.imag()};
    j["half_extent"] = img.spec.half_extent;
    j["projection"] = projection_name(img.spec.projection);
    j["budget"] = img.spec.budget;
    j["eps"] = img.spec.eps;
    j["threads"] = img.spec.threads;
    if (img.kind == PlaneImage::Kind::Julia) {
        j["q"] = {img.q.real(), img.q.imag()};
    } else {
        j["plane"] = (img.plane == ParamPlane::Q) ? "q" : "q_squared";
        j["coloring"] =
            (img.coloring == ParamColoring::ComponentType) ? "component-type" : "rotation-number";
    }
    nlohmann::json pj;
    pj["param"] = pal.param;
    pj["julia_zero"] = pal.julia_zero;
    pj["julia_inf"] = pal.julia_inf;
    pj["julia_cycle"] = pal.julia_cycle;
    pj["julia_undecided"] = pal.julia_undecided;
    pj["background"] = pal.background;
    pj["hue_saturation"] = pal.hue_saturation;
    pj["hue_value"] = pal.hue_value;
    j["palette"] = pj;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open sidecar for writing: " + path);
    out << j.dump(2) << '\n';
}

void write_ppm(const PlaneImage& img, const Palette& pal, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open image for writing: " + path);
    out << "P6\n" << img.spec.width << ' ' << img.spec.height << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.spec.width) * 3);
    for (int py = 0; py < img.spec.height; ++py) {
        for (int px = 0; px < img.spec.width; ++px) {
            const auto rgb = pixel_color(img, img.at(px, py), pal);
            row[3 * px] = rgb[0];
            row[3 * px + 1] = rgb[1];
            row[3 * px + 2] = rgb[2];
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw std::runtime_error("short write on image: " + path);
    // Every image carries its provenance: a JSON sidecar with the effective
    // render configuration and palette.
    write_sidecar(img, pal, sidecar_path_for(path));
}

} // namespace antipode
