#include <doctest.h>

#include <cstring>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "antipode/angle_calculus.hpp"
#include "antipode/plane_renderer.hpp"
#include "antipode/ray_engine.hpp"

using namespace antipode;

namespace {

// Attracting self-antipodal period-26 cycle with rotation number 21/26
// (core of the corresponding tongue, near its head).
const Complex kQTongue26(-3.0280883184458327, 1.8567135308635765);
const Complex kQHerman(1.0, -6.0);
// Mid-ray parameter on the 2/7 parameter ray (central component).
const Complex kQCentral(0.814955, 1.110246);

RenderSpec make_spec(int n, double he, int budget, int threads = 2) {
    RenderSpec s;
    s.width = s.height = n;
    s.half_extent = he;
    s.budget = budget;
    s.threads = threads;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("projection geometry: plane, circled disk, orthonormal sphere") {
    PlaneImage img;
    img.spec = make_spec(200, 2.0, 1);
    img.spec.height = 100; // non-square raster: vertical extent scales

    // pixel centres mirror exactly under 180-degree raster rotation
    for (int px : {0, 7, 99, 180}) {
        for (int py : {0, 13, 50, 99}) {
            const Complex a = img.viewport_point(px, py);
            const Complex b = img.viewport_point(199 - px, 99 - py);
            CHECK(a.real() == -b.real());
            CHECK(a.imag() == -b.imag());
        }
    }
    // top-left pixel centre of a 200x100 window with half-width 2
    Complex z;
    REQUIRE(img.sample_point(0, 0, z));
    CHECK(z.real() == doctest::Approx(-2.0 + 2.0 / 200).epsilon(1e-14));
    CHECK(z.imag() == doctest::Approx(0.99).epsilon(1e-14));

    PlaneImage disk;
    disk.spec = make_spec(101, 1.0, 1);
    disk.spec.projection = Projection::CircledDisk;
    int valid = 0, invalid = 0;
    for (int py = 0; py < 101; py += 7) {
        for (int px = 0; px < 101; px += 7) {
            const Complex w = disk.viewport_point(px, py);
            Complex zz;
            if (disk.sample_point(px, py, zz)) {
                valid++;
                // eta(|z|) = |z|/sqrt(1+|z|^2) must reproduce the viewport radius
                const double r = std::abs(zz) / std::sqrt(1.0 + std::norm(zz));
                CHECK(r == doctest::Approx(std::abs(w)).epsilon(1e-12));
                if (std::abs(w) > 1e-9) {
                    CHECK(std::arg(zz) == doctest::Approx(std::arg(w)).epsilon(1e-12));
                }
            } else {
                invalid++;
                CHECK(std::abs(w) >= 1.0);
            }
        }
    }
    CHECK(valid > 100);
    CHECK(invalid > 10); // corners lie beyond the rim

    PlaneImage sph;
    sph.spec = make_spec(101, 1.0, 1);
    sph.spec.projection = Projection::SphereOrthonormal;
    for (int py = 10; py < 101; py += 17) {
        for (int px = 4; px < 101; px += 13) {
            const Complex w = sph.viewport_point(px, py);
            Complex zz;
            if (!sph.sample_point(px, py, zz)) {
                CHECK(std::abs(w) >= 1.0);
                continue;
            }
            const double r = std::abs(w);
            CHECK(std::abs(zz) ==
                  doctest::Approx(r / (1.0 + std::sqrt(1.0 - r * r))).epsilon(1e-12));
            if (r > 1e-9) CHECK(std::arg(zz) == doctest::Approx(std::arg(w)).epsilon(1e-12));
        }
    }
    Complex corner;
    CHECK_FALSE(sph.sample_point(0, 0, corner));
}

TEST_CASE("julia render at q=0: the unit circle separates the basins") {
    const PlaneImage img = render_julia(Complex(0.0, 0.0), make_spec(64, 1.6, 300));
    int checked = 0;
    for (int py = 0; py < 64; ++py) {
        for (int px = 0; px < 64; ++px) {
            Complex z;
            REQUIRE(img.sample_point(px, py, z));
            const double m = std::abs(z);
            if (m < 0.9) {
                CHECK(img.at(px, py).cls == static_cast<std::uint8_t>(OrbitKind::ToZero));
                checked++;
            } else if (m > 1.15) {
                CHECK(img.at(px, py).cls == static_cast<std::uint8_t>(OrbitKind::ToInfinity));
                checked++;
            }
        }
    }
    CHECK(checked > 3000);
}

TEST_CASE("julia renders are antipode-symmetric up to raster resolution") {
    for (const Complex q : {kQCentral, kQHerman, Complex(0.0, 3.5)}) {
        CAPTURE(q.real());
        CAPTURE(q.imag());
        const int n = 101;
        const double he = 2.2;
        const PlaneImage img = render_julia(q, make_spec(n, he, 800));
        const double s = he / n;
        auto swap_cls = [](std::uint8_t c) {
            if (c == static_cast<std::uint8_t>(OrbitKind::ToZero))
                return static_cast<std::uint8_t>(OrbitKind::ToInfinity);
            if (c == static_cast<std::uint8_t>(OrbitKind::ToInfinity))
                return static_cast<std::uint8_t>(OrbitKind::ToZero);
            return c; // cycles and undecided are antipode-invariant classes
        };
        int total = 0, mismatch = 0;
        for (int py = 0; py < n; ++py) {
            for (int px = 0; px < n; ++px) {
                Complex z;
                REQUIRE(img.sample_point(px, py, z));
                if (std::abs(z) < 0.05) continue;
                const Complex a = -1.0 / std::conj(z);
                const int ax = static_cast<int>(std::llround((a.real() / s - 1 + n) / 2));
                const int ay = static_cast<int>(std::llround(((n - 1) - a.imag() / s) / 2));
                if (ax < 0 || ax >= n || ay < 0 || ay >= n) continue;
                total++;
                if (img.at(ax, ay).cls != swap_cls(img.at(px, py).cls)) mismatch++;
            }
        }
        CAPTURE(total);
        CAPTURE(mismatch);
        CHECK(total > 1500);
        // only pixels straddling basin boundaries may disagree after the
        // nearest-pixel antipodal lookup
        CHECK(mismatch < total / 10);
    }
}

TEST_CASE("parameter renders: exact 180-degree symmetry and the q^2 quotient") {
    const int n = 81;
    const RenderSpec spec = make_spec(n, 3.2, 800, 3);
    const PlaneImage img = render_param(ParamPlane::Q, ParamColoring::ComponentType, spec);
    int mismatch = 0;
    for (int py = 0; py < n; ++py) {
        for (int px = 0; px < n; ++px) {
            const PixelRecord& a = img.at(px, py);
            const PixelRecord& b = img.at(n - 1 - px, n - 1 - py);
            if (a.cls != b.cls || a.period != b.period) mismatch++;
        }
    }
    CHECK(mismatch == 0);

    // q^2-plane pixels agree with classification of either square root
    const RenderSpec spec2 = make_spec(41, 8.0, 600);
    const PlaneImage img2 = render_param(ParamPlane::QSquared, ParamColoring::ComponentType, spec2);
    for (const auto [px, py] : {std::pair{3, 5}, {11, 30}, {20, 20}, {33, 8}, {38, 38}}) {
        Complex w;
        REQUIRE(img2.sample_point(px, py, w));
        const ParamVerdict v = classify_parameter(-std::sqrt(w), spec2.budget, spec2.eps);
        CHECK(img2.at(px, py).cls == static_cast<std::uint8_t>(v.kind));
    }

    // the 1/2-tongue head sits on the imaginary axis: tricorn-type, period 2
    const ParamVerdict half = classify_parameter(Complex(0.0, 3.5), 2000);
    CHECK(half.kind == ParamClass::TricornType);
    CHECK(half.critical_orbit.period == 2);
    CHECK(half.critical_orbit.self_antipodal);
}

TEST_CASE("rotation hues: 21/26 tongue, 1/2 tongue, herman estimate, basins") {
    // pinned tongue-core parameter: attracting self-antipodal 26-cycle
    const OrbitClass oc = classify_orbit(kQTongue26, critical_points(kQTongue26).first, 5000);
    REQUIRE(oc.kind == OrbitKind::AttractingCycle);
    CHECK(oc.period == 26);
    CHECK(oc.self_antipodal);
    CHECK(std::abs(oc.multiplier) < 0.5);
    CHECK(cycle_rotation_number(oc.cycle) == Angle(BigRat(21, 26)));
    CHECK(classify_parameter(kQTongue26, 5000).kind == ParamClass::TricornType);

    const auto h26 = estimate_rotation_hue(kQTongue26, 5000);
    REQUIRE(h26.has_value());
    CHECK(*h26 == 21.0 / 26.0); // exact rational, exactly converted

    const auto h2 = estimate_rotation_hue(Complex(0.0, 4.0), 2000);
    REQUIRE(h2.has_value());
    CHECK(*h2 == 0.5);

    // Herman candidate: heuristic ring rotation estimate, near arg(q)/pi
    const auto hh = estimate_rotation_hue(kQHerman, 4000);
    REQUIRE(hh.has_value());
    CHECK(*hh > 0.53);
    CHECK(*hh < 0.58);

    // basins carry no rotation hue
    CHECK_FALSE(estimate_rotation_hue(kQCentral, 2000).has_value());
}

TEST_CASE("herman ring: annular undecided band separates the basins") {
    const int n = 161;
    const PlaneImage img = render_julia(kQHerman, make_spec(n, 3.4, 1500, 4));
    const std::uint8_t und = static_cast<std::uint8_t>(OrbitKind::Undecided);
    CHECK(img.at(n / 2, n / 2).cls == static_cast<std::uint8_t>(OrbitKind::ToZero));
    // the basin of infinity reaches the border frame (the basin of zero may
    // also graze it through preimage components near z = q, where f(q) = 0)
    int border_inf = 0;
    for (int k = 0; k < n; ++k) {
        for (const PixelRecord* r : {&img.at(k, 0), &img.at(k, n - 1), &img.at(0, k),
                                     &img.at(n - 1, k)}) {
            if (r->cls == static_cast<std::uint8_t>(OrbitKind::ToInfinity)) border_inf++;
        }
    }
    CHECK(border_inf > 0);

    int undecided = 0;
    for (const PixelRecord& r : img.pixels)
        if (r.valid && r.cls == und) undecided++;
    CHECK(undecided > 100);

    // 4-connected flood fill from the centre through non-undecided pixels
    // must not reach the border: the undecided band encircles the origin.
    std::vector<char> seen(img.pixels.size(), 0);
    std::queue<int> bfs;
    const int start = (n / 2) * n + n / 2;
    bfs.push(start);
    seen[start] = 1;
    bool reached_border = false;
    while (!bfs.empty() && !reached_border) {
        const int idx = bfs.front();
        bfs.pop();
        const int px = idx % n, py = idx / n;
        if (px == 0 || py == 0 || px == n - 1 || py == n - 1) {
            reached_border = true;
            break;
        }
        const int nb[4] = {idx - 1, idx + 1, idx - n, idx + n};
        for (const int j : nb) {
            if (seen[j] || img.pixels[j].cls == und) continue;
            seen[j] = 1;
            bfs.push(j);
        }
    }
    CHECK_FALSE(reached_border);
}

TEST_CASE("fjord parameter: Jordan-curve Julia picture for the 5/11 fjord") {
    const Angle theta = rho_inverse_plus(Angle(BigRat(5, 11)));
    CHECK(theta == Angle(BigRat(682, 2047)));
    const Complex q = parameter_ray(theta, {0.1, 0.3, 0.5}).back().q;
    CHECK(classify_parameter(q, 2000).kind == ParamClass::Central);

    const int n = 101;
    const PlaneImage img = render_julia(q, make_spec(n, 2.5, 1200));
    int zero = 0, inf = 0, cyc = 0, undecided = 0;
    for (const PixelRecord& r : img.pixels) {
        switch (static_cast<OrbitKind>(r.cls)) {
        case OrbitKind::ToZero: zero++; break;
        case OrbitKind::ToInfinity: inf++; break;
        case OrbitKind::AttractingCycle: cyc++; break;
        case OrbitKind::Undecided: undecided++; break;
        }
    }
    const int total = n * n;
    CHECK(cyc == 0);                  // no attracting cycles in the central component
    CHECK(zero > total / 10);         // both basins fill the picture...
    CHECK(inf > total / 10);
    CHECK(undecided < total * 8 / 100); // ...up to a thin boundary ribbon
}

TEST_CASE("renders are deterministic and thread-count independent; ppm and sidecar") {
    const RenderSpec s4 = make_spec(64, 2.2, 500, 4);
    RenderSpec s1 = s4;
    s1.threads = 1;
    const PlaneImage a = render_julia(kQHerman, s4);
    const PlaneImage b = render_julia(kQHerman, s1);
    const PlaneImage c = render_julia(kQHerman, s4);
    REQUIRE(a.pixels.size() == b.pixels.size());
    int diff = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        if (std::memcmp(&a.pixels[i], &b.pixels[i], sizeof(PixelRecord)) != 0) diff++;
        if (std::memcmp(&a.pixels[i], &c.pixels[i], sizeof(PixelRecord)) != 0) diff++;
    }
    CHECK(diff == 0);

    const Palette pal;
    write_ppm(a, pal, "/tmp/antipode_det_a.ppm");
    write_ppm(c, pal, "/tmp/antipode_det_b.ppm");
    const std::string bytes_a = slurp("/tmp/antipode_det_a.ppm");
    const std::string bytes_b = slurp("/tmp/antipode_det_b.ppm");
    CHECK(bytes_a == bytes_b);
    CHECK(bytes_a.size() == 13 + 64 * 64 * 3); // "P6\n64 64\n255\n" + raw RGB
    CHECK(bytes_a.compare(0, 13, "P6\n64 64\n255\n") == 0);

    const nlohmann::json j = nlohmann::json::parse(slurp("/tmp/antipode_det_a.json"));
    CHECK(j.at("kind") == "julia");
    CHECK(j.at("width") == 64);
    CHECK(j.at("height") == 64);
    CHECK(j.at("budget") == 500);
    CHECK(j.at("palette").at("hue_value") == doctest::Approx(0.96));
    CHECK(j.at("q").at(0) == doctest::Approx(1.0));
    CHECK(j.at("q").at(1) == doctest::Approx(-6.0));
}
