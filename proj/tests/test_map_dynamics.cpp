#include "antipode/map_dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace antipode;

namespace {

std::vector<Complex> sample_qs(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> mod(0.05, 10.0);
    std::uniform_real_distribution<double> arg(0.0, 2.0 * 3.14159265358979);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(std::polar(mod(rng), arg(rng)));
    return out;
}

bool complex_close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

TEST_CASE("f_eval: special points and chart consistency") {
    for (Complex q : {Complex(2.0, 1.0), Complex(0.5, -3.0), Complex(1.0, 0.0)}) {
        CHECK(f_eval(q, Complex(0.0, 0.0)) == Complex(0.0, 0.0));
        CHECK(f_eval(q, q) == Complex(0.0, 0.0));
        // the pole maps (numerically) to the far end of the sphere
        const Complex pole = -1.0 / std::conj(q);
        CHECK(chordal_distance(f_eval(q, pole), Complex(1e300, 1e300)) < 1e-7);
        // infinity is fixed
        CHECK(is_infinite(f_eval(q, Complex(1e160, 0.0))));
    }
    CHECK(f_eval(Complex(1.0, 0.0), Complex(1.0, 0.0)) == Complex(0.0, 0.0));

    // the reciprocal chart agrees with the plain formula where both are safe
    const Complex q(2.0, 1.0);
    for (double phi : {0.3, 1.1, 2.9, 4.2, 5.8}) {
        const Complex z = std::polar(4.2 * 1.7, phi); // above the chart switch
        const Complex direct = z * z * (q - z) / (1.0 + std::conj(q) * z);
        const Complex chart = f_eval(q, z);
        CHECK(std::abs(direct - chart) <= 1e-10 * std::abs(direct));
    }
}

TEST_CASE("antipodal equivariance") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> mod(0.1, 10.0);
    std::uniform_real_distribution<double> arg(0.0, 6.2831853);
    for (Complex q : {Complex(2.0, 1.0), Complex(0.5, -3.0), Complex(1.7320508075688772, 0.0),
                      Complex(0.0, -3.0)}) {
        for (int i = 0; i < 300; ++i) {
            const Complex z = std::polar(mod(rng), arg(rng));
            CHECK(chordal_distance(f_eval(q, antipode_of(z)), antipode_of(f_eval(q, z))) < 1e-12);
        }
    }
}

TEST_CASE("conjugation symmetry is exact in floating point") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> re(-8.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        const Complex q(re(rng), re(rng));
        const Complex z(re(rng), re(rng));
        const Complex lhs = f_eval(-q, -z);
        const Complex rhs = -f_eval(q, z);
        if (is_infinite(lhs) || is_infinite(rhs)) {
            CHECK(is_infinite(lhs));
            CHECK(is_infinite(rhs));
        } else {
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("critical points") {
    auto [c0, cinf] = critical_points(Complex(std::sqrt(3.0), 0.0));
    CHECK(complex_close(c0, Complex(1.0, 0.0), 1e-12));
    CHECK(complex_close(cinf, Complex(-1.0, 0.0), 1e-12));

    CHECK_THROWS_AS(critical_points(Complex(0.0, 0.0)), std::domain_error);

    // q -> 0+ along the reals: c0 -> 0 and cinf -> -infinity, monotonically
    auto [c0a, cia] = critical_points(Complex(1e-3, 0.0));
    auto [c0b, cib] = critical_points(Complex(1e-6, 0.0));
    CHECK(std::abs(c0b) < std::abs(c0a));
    CHECK(std::abs(c0a) < 1e-2);
    CHECK(cia.real() < -100.0);
    CHECK(cib.real() < cia.real());

    for (const Complex& q : sample_qs(300, 4242)) {
        const MapParam m = MapParam::from_q(q);
        // antipodal pair of critical points
        CHECK(std::abs(m.cinf - antipode_of(m.c0)) <= 1e-12 * (1.0 + std::abs(m.cinf)));
        // collinear with 0 and q: both are real multiples of q
        const Complex r0 = m.c0 / q, ri = m.cinf / q;
        CHECK(std::abs(r0.imag()) < 1e-10);
        CHECK(std::abs(ri.imag()) < 1e-10);
        CHECK(r0.real() > 0.0);
        CHECK(r0.real() < 1.0);
        CHECK(ri.real() < 0.0);
        // chart-corrected derivative vanishes at both
        CHECK(spherical_derivative(q, m.c0) < 1e-9);
        CHECK(spherical_derivative(q, m.cinf) < 1e-9);
        // critical values are antipodal to each other
        CHECK(chordal_distance(f_eval(q, m.cinf), antipode_of(f_eval(q, m.c0))) < 1e-11);
    }
}

TEST_CASE("fixed points") {
    FixedPoints fp = fixed_points(Complex(1.5, 0.0));
    CHECK(complex_close(fp.plus, Complex(0.0, 1.0), 1e-14));
    CHECK(complex_close(fp.minus, Complex(0.0, -1.0), 1e-14));

    fp = fixed_points(Complex(0.3, 1.0));
    CHECK(complex_close(fp.plus, Complex(0.0, 1.0 + std::sqrt(2.0)), 1e-13));
    CHECK(complex_close(fp.minus, Complex(0.0, 1.0 - std::sqrt(2.0)), 1e-13));

    for (const Complex& q : sample_qs(300, 99)) {
        FixedPoints f = fixed_points(q);
        CHECK(f.plus.imag() > 0.0);
        CHECK(chordal_distance(f_eval(q, f.plus), f.plus) < 1e-10);
        CHECK(chordal_distance(f_eval(q, f.minus), f.minus) < 1e-10);
        // free fixed points are always repelling
        CHECK(std::abs(f.mult_plus) > 1.0);
        CHECK(std::abs(f.mult_minus) > 1.0);
    }
}

TEST_CASE("orbit classification: frozen examples") {
    // small q: critical orbit falls straight into the basin of zero
    const MapParam small = MapParam::from_q(Complex(0.1, 0.0));
    OrbitClass oc = classify_orbit(small.q, small.c0);
    CHECK(oc.kind == OrbitKind::ToZero);
    CHECK(oc.iterations_used < 20);
    CHECK(classify_orbit(small.q, antipode_of(small.c0)).kind == OrbitKind::ToInfinity);

    // Herman-ring parameter: the critical orbit never settles
    const MapParam herman = MapParam::from_q(Complex(1.0, -6.0));
    oc = classify_orbit(herman.q, herman.c0, 3000);
    CHECK(oc.kind == OrbitKind::Undecided);
    CHECK(oc.iterations_used == 3000);

    // bounded tricorn: period-6 self-antipodal attracting cycle
    const MapParam tri = MapParam::from_q(Complex(0.394, -2.24));
    oc = classify_orbit(tri.q, tri.c0, 5000);
    CHECK(oc.kind == OrbitKind::AttractingCycle);
    CHECK(oc.period == 6);
    CHECK(oc.self_antipodal);
    CHECK(std::abs(oc.multiplier) < 1.0);
    REQUIRE(oc.cycle.size() == 6);
    Complex w = oc.cycle[0];
    for (int i = 0; i < 6; ++i) w = f_eval(tri.q, w);
    CHECK(chordal_distance(w, oc.cycle[0]) < 1e-9);

    // small Mandelbrot set: period-3 cycle, not self-antipodal
    const MapParam mand = MapParam::from_q(Complex(0.1476, -1.927));
    oc = classify_orbit(mand.q, mand.c0, 5000);
    CHECK(oc.kind == OrbitKind::AttractingCycle);
    CHECK(oc.period == 3);
    CHECK_FALSE(oc.self_antipodal);
    CHECK(cycle_rotation_number(oc.cycle) == Angle(BigRat(1, 3)));

    // center of the lower half-tongue: the two critical points form a
    // superattracting period-2 cycle with rotation number 1/2
    const MapParam tongue = MapParam::from_q(Complex(0.0, -3.0));
    oc = classify_orbit(tongue.q, tongue.c0, 5000);
    CHECK(oc.kind == OrbitKind::AttractingCycle);
    CHECK(oc.period == 2);
    CHECK(oc.self_antipodal);
    CHECK(std::abs(oc.multiplier) < 1e-8);
    CHECK(cycle_rotation_number(oc.cycle) == Angle(BigRat(1, 2)));
    REQUIRE(oc.cycle.size() == 2);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::min(std::abs(oc.cycle[0]), std::abs(oc.cycle[1])) == doctest::Approx(phi - 1.0));
    CHECK(std::max(std::abs(oc.cycle[0]), std::abs(oc.cycle[1])) == doctest::Approx(phi));

    CHECK_THROWS_AS(classify_orbit(Complex(1.0, 0.0), Complex(0.5, 0.0), 0),
                    std::invalid_argument);
}

TEST_CASE("orbit classification: antipodal swap") {
    const std::vector<Complex> qs{Complex(0.1, 0.0), Complex(2.0, 1.0), Complex(0.394, -2.24),
                                  Complex(0.1476, -1.927)};
    const std::vector<Complex> z0s{Complex(0.3, 0.2), Complex(0.0, 1.5), Complex(-2.0, 0.0),
                                   Complex(3.0, 3.0)};
    for (const Complex& q : qs)
        for (const Complex& z0 : z0s) {
            OrbitClass a = classify_orbit(q, z0, 1500);
            OrbitClass b = classify_orbit(q, antipode_of(z0), 1500);
            if (a.kind == OrbitKind::ToZero) CHECK(b.kind == OrbitKind::ToInfinity);
            else if (a.kind == OrbitKind::ToInfinity) CHECK(b.kind == OrbitKind::ToZero);
            else {
                CHECK(a.kind == b.kind);
                if (a.kind == OrbitKind::AttractingCycle) {
                    CHECK(a.period == b.period);
                    CHECK(a.self_antipodal == b.self_antipodal);
                }
            }
        }
}

TEST_CASE("parameter classification") {
    CHECK(classify_parameter(Complex(0.1, 0.0)).kind == ParamClass::Central);
    CHECK(classify_parameter(Complex(1.0, -6.0), 3000).kind == ParamClass::HermanCandidate);
    CHECK(classify_parameter(Complex(0.394, -2.24)).kind == ParamClass::TricornType);
    CHECK(classify_parameter(Complex(0.0, -3.0)).kind == ParamClass::TricornType);
    CHECK(classify_parameter(Complex(0.1476, -1.927)).kind == ParamClass::MandelbrotType);
    // islands beside the small Mandelbrot copy are captures; the main white
    // region further right is the central component
    CHECK(classify_parameter(Complex(0.1176, -1.927)).kind == ParamClass::CaptureZero);
    CHECK(classify_parameter(Complex(0.1476, -1.987)).kind == ParamClass::CaptureInfinity);
    CHECK(classify_parameter(Complex(0.2076, -1.927)).kind == ParamClass::Central);

    // conjugation symmetry q <-> -q
    for (Complex q : {Complex(0.1, 0.0), Complex(1.0, -6.0), Complex(0.394, -2.24),
                      Complex(0.1476, -1.927), Complex(0.1176, -1.927), Complex(0.1476, -1.987),
                      Complex(0.2076, -1.927), Complex(0.0, -3.0)}) {
        CHECK(classify_parameter(q, 3000).kind == classify_parameter(-q, 3000).kind);
    }
}

TEST_CASE("cycle rotation numbers on synthetic cycles") {
    CHECK(cycle_rotation_number({Complex(0.3, 0.4)}) == Angle(BigRat(0)));

    // antipodal period-2 pair
    CHECK(cycle_rotation_number({Complex(0.0, 0.6), Complex(0.0, -1.6)}) == Angle(BigRat(1, 2)));

    // a tongue-like period-26 cycle advancing 21 argument-positions per step
    std::vector<Complex> tongue;
    for (int k = 0; k < 26; ++k) {
        const double t = 2.0 * 3.14159265358979 * (0.03 + 21.0 * k / 26.0);
        tongue.push_back(std::polar(1.0 + 0.2 * ((k * 7) % 5), t));
    }
    CHECK(cycle_rotation_number(tongue) == Angle(BigRat(21, 26)));

    // argument order 0, 2, 1, 3 is not a rigid advance
    std::vector<Complex> bad;
    for (double t : {0.0, 0.5, 0.25, 0.75}) bad.push_back(std::polar(1.0, 6.2831853 * t));
    CHECK_THROWS_AS(cycle_rotation_number(bad), std::runtime_error);

    // the bounded tricorn cycle is not rotational as seen from the origin
    const MapParam tri = MapParam::from_q(Complex(0.394, -2.24));
    OrbitClass oc = classify_orbit(tri.q, tri.c0, 5000);
    REQUIRE(oc.kind == OrbitKind::AttractingCycle);
    CHECK_THROWS_AS(cycle_rotation_number(oc.cycle), std::runtime_error);

    CHECK_THROWS_AS(cycle_rotation_number({}), std::invalid_argument);
}

TEST_CASE("large |q^2| maps approach rigid rotations on the annulus") {
    CHECK(large_q_rotation_check(Complex(100.0, 0.0), 0.0) < 0.1);
    CHECK(large_q_rotation_check(Complex(1000.0, 0.0), 0.0) < 0.01);
    CHECK(large_q_rotation_check(Complex(1000.0, 0.0), 0.0) <
          large_q_rotation_check(Complex(100.0, 0.0), 0.0));

    // q^2 pointing in direction 1/6 of a turn
    const Complex q6 = std::polar(100.0, 3.14159265358979 / 6.0);
    CHECK(large_q_rotation_check(q6, 1.0 / 6.0) < 0.1);
    // against the wrong rotation the deviation is large
    CHECK(large_q_rotation_check(Complex(100.0, 0.0), 0.3) > 0.3);

    CHECK_THROWS_AS(large_q_rotation_check(Complex(100.0, 0.0), 0.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("chordal metric and the antipodal involution") {
    const Complex inf(std::numeric_limits<double>::infinity(), 0.0);
    CHECK(chordal_distance(Complex(0.0, 0.0), inf) == doctest::Approx(2.0));
    CHECK(chordal_distance(inf, inf) == 0.0);
    CHECK(is_infinite(antipode_of(Complex(0.0, 0.0))));
    CHECK(antipode_of(inf) == Complex(0.0, 0.0));

    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Complex a(re(rng), re(rng)), b(re(rng), re(rng));
        CHECK(std::abs(chordal_distance(antipode_of(a), antipode_of(b)) -
                       chordal_distance(a, b)) < 1e-12);
        CHECK(std::abs(antipode_of(antipode_of(a)) - a) < 1e-13 * (1.0 + std::abs(a)));
        // the antipode is never closer than the sphere diameter allows
        CHECK(chordal_distance(a, antipode_of(a)) == doctest::Approx(2.0));
    }
}
