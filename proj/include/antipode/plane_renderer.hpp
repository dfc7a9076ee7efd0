#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "antipode/map_dynamics.hpp"

namespace antipode {

// How raster coordinates map to points of the complex plane / sphere.
//   Plane           : straight affine window, center + half-extent.
//   SphereOrthonormal: the viewport disk |w| < 1 is the orthonormal
//                      (straight-down) projection of one hemisphere of the
//                      unit sphere; we show the hemisphere around z = 0, so
//                      a disk point w maps to z = w / (1 + sqrt(1 - |w|^2)).
//   CircledDisk     : the compactification r -> r/sqrt(1+r^2) applied to |z|;
//                      the open unit disk shows the whole plane and the rim
//                      circle is the horizon at infinity.  Inverse map:
//                      z = w / sqrt(1 - |w|^2).
enum class Projection { Plane, SphereOrthonormal, CircledDisk };

enum class ParamPlane { Q, QSquared };
enum class ParamColoring { ComponentType, RotationNumber };

struct RenderSpec {
    int width = 512;
    int height = 512;
    Complex center{0.0, 0.0};
    double half_extent = 2.0; // half the horizontal span; vertical scales by height/width
    Projection projection = Projection::Plane;
    int budget = 2000;   // iteration budget handed to the classifiers
    double eps = 1e-3;   // classifier tolerance
    int threads = 1;     // 0 = use hardware concurrency
};

// Compact per-pixel classification record. `cls` holds the OrbitKind (Julia
// renders) or ParamClass (parameter renders) value; `hue` is a rotation
// number in [0,1) when one was measured, negative otherwise.
struct PixelRecord {
    std::uint8_t cls = 0;
    std::uint8_t valid = 0; // 0 = outside the projection's domain
    std::int16_t period = 0;
    float hue = -1.0f;
};

struct PlaneImage {
    enum class Kind { Julia, Parameter } kind = Kind::Julia;
    RenderSpec spec;
    // Julia renders:
    Complex q{0.0, 0.0};
    // Parameter renders:
    ParamPlane plane = ParamPlane::Q;
    ParamColoring coloring = ParamColoring::ComponentType;

    std::vector<PixelRecord> pixels; // row-major, top row first

    const PixelRecord& at(int px, int py) const { return pixels[py * spec.width + px]; }

    // Viewport coordinate of a pixel centre.  Computed as
    // (2*px + 1 - width) * (half_extent / width) so that mirrored pixel
    // indices give exactly negated coordinates (the leading factor is an
    // odd integer); 180-degree raster symmetry is then bit-exact.
    Complex viewport_point(int px, int py) const;

    // Point of the complex plane sampled by a pixel, after undoing the
    // projection. Returns false for pixels outside the projection's domain
    // (e.g. beyond the rim of the circled disk).
    bool sample_point(int px, int py, Complex& z) const;
};

// Classify the orbit of every sampled pixel under f_q: basin of 0, basin of
// infinity, attracting cycle (with period, and rotation hue when the cycle
// is self-antipodal and rotationally ordered), or undecided.
PlaneImage render_julia(Complex q, const RenderSpec& spec);

// Classify every sampled parameter. In the QSquared plane the pixel value is
// read as q^2 and the principal square root is classified; since the whole
// classification is invariant under q -> -q the branch choice is immaterial,
// which is exactly why the quotient plane is well defined.
PlaneImage render_param(ParamPlane plane, ParamColoring coloring, const RenderSpec& spec);

// Rotation number to color by at parameter q:
//   - attracting self-antipodal cycle -> its combinatorial rotation number;
//   - Herman candidate -> mean argument advance around 0 along the bounded
//     critical orbit (heuristic estimate of the ring rotation number);
//   - basins / non-rotational cycles -> nothing.
std::optional<double> estimate_rotation_hue(Complex q, int budget = 2000);

// Fixed, documented color scheme; a palette is data handed to the writer,
// not behaviour baked into the renderer.
struct Palette {
    // Indexed by ParamClass order: Central, MandelbrotType, TricornType,
    // CaptureZero, CaptureInfinity, HermanCandidate.
    std::array<std::array<std::uint8_t, 3>, 6> param{{
        {255, 255, 255}, // Central: white
        {187, 187, 187}, // MandelbrotType: light grey
        {102, 102, 102}, // TricornType: dark grey
        {228, 228, 228}, // CaptureZero
        {64, 64, 64},    // CaptureInfinity
        {16, 16, 16},    // HermanCandidate: near black
    }};
    std::array<std::uint8_t, 3> julia_zero{255, 255, 255};
    std::array<std::uint8_t, 3> julia_inf{0, 0, 0};
    std::array<std::uint8_t, 3> julia_cycle{170, 170, 170};
    std::array<std::uint8_t, 3> julia_undecided{110, 110, 110};
    std::array<std::uint8_t, 3> background{28, 28, 40};
    // Rotation hue h in [0,1) maps to HSV angle h*240 degrees (red at 0
    // through green to blue at 1), with the saturation/value below.
    double hue_saturation = 0.85;
    double hue_value = 0.96;
};

std::array<std::uint8_t, 3> hsv_to_rgb(double h_deg, double s, double v);

// Color of one record under a palette (rotation hue wins when present).
std::array<std::uint8_t, 3> pixel_color(const PlaneImage& img, const PixelRecord& rec,
                                        const Palette& pal);

// Binary PPM (P6). Deterministic bytes for identical images and palettes.
void write_ppm(const PlaneImage& img, const Palette& pal, const std::string& path);

// JSON sidecar describing the effective render: viewport, projection,
// budgets, palette. Written next to every image so a run is reproducible
// from its outputs alone.
void write_sidecar(const PlaneImage& img, const Palette& pal, const std::string& path);

} // namespace antipode
