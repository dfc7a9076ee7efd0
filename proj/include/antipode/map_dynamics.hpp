#pragma once

// Numerics of the cubic family f_q(z) = z^2 (q - z) / (1 + conj(q) z):
// evaluation on the sphere, critical and fixed points, orbit classification,
// and the hyperbolic-component taxonomy of the parameter plane.

#include "antipode/angle.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace antipode {

using Complex = std::complex<double>;

// The antipodal involution z -> -1/conj(z); exchanges 0 and infinity.
Complex antipode_of(Complex z);

// Distance in the chordal metric on the Riemann sphere, normalized to
// diameter 2; antipode_of is an isometry for it. Infinities are handled.
double chordal_distance(Complex a, Complex b);

bool is_infinite(Complex z);

// f_q(z), with the reciprocal chart taking over for large |z| so the pole
// -1/conj(q) and the fixed point at infinity are handled without overflow.
Complex f_eval(Complex q, Complex z);

// df/dz in plane coordinates; infinity at the pole.
Complex f_prime(Complex q, Complex z);

// |df| measured sphere-to-sphere: |f'(z)| (1+|z|^2) / (1+|f(z)|^2).
// Vanishes at critical points in every chart.
double spherical_derivative(Complex q, Complex z);

struct MapParam {
    Complex q;
    double a = 0.0; // |q|^2
    Complex c0, cinf;
    Complex fix_plus, fix_minus;

    // q != 0 required: f_0(z) = -z^3 has no free critical points.
    static MapParam from_q(Complex q);
};

// (c0, cinf): the two free critical points; c0 lies strictly between 0 and q
// on the segment [0, q], and cinf = -1/conj(c0) is a negative multiple of q.
std::pair<Complex, Complex> critical_points(Complex q);

struct FixedPoints {
    Complex plus, minus;          // i (y +- sqrt(y^2 + 1)), y = Im q
    Complex mult_plus, mult_minus; // multipliers f'(...), always repelling
};
FixedPoints fixed_points(Complex q);

enum class OrbitKind { ToZero, ToInfinity, AttractingCycle, Undecided };

struct OrbitClass {
    OrbitKind kind = OrbitKind::Undecided;
    int iterations_used = 0;
    // populated when kind == AttractingCycle
    int period = 0;
    bool self_antipodal = false;
    std::vector<Complex> cycle; // in dynamical order
    Complex multiplier{0.0, 0.0};
};

// Classify the forward orbit of z0: certified convergence to 0 or infinity
// (the orbit enters an invariant contracting disk), an attracting cycle
// (Brent detection + Newton refinement, multiplier strictly inside the unit
// circle), or Undecided at budget exhaustion.
OrbitClass classify_orbit(Complex q, Complex z0, int budget = 2000, double eps = 1e-3);

enum class ParamClass {
    Central,
    MandelbrotType,
    TricornType,
    CaptureZero,
    CaptureInfinity,
    HermanCandidate,
};

const char* param_class_name(ParamClass c);

struct ParamVerdict {
    ParamClass kind = ParamClass::HermanCandidate;
    OrbitClass critical_orbit; // classification of the orbit of c0
    double max_excursion = 0.0; // max |z| along that orbit before first entry
};

// Hyperbolic-component taxonomy at q, driven by the orbit of c0 (the orbit
// of cinf is its exact antipodal image). Central versus capture-to-zero is
// decided by a documented heuristic: the orbit must reach the contracting
// disk of 0 without excursions beyond a few times the fixed-point scale.
ParamVerdict classify_parameter(Complex q, int budget = 2000, double eps = 1e-3);

// Combinatorial rotation number of a cycle as seen from the origin: sort the
// points by argument and read off the constant advance per iterate.
// Throws if the dynamical successor is not a constant cyclic shift.
Angle cycle_rotation_number(const std::vector<Complex>& cycle);

// sup (over a sample grid of the annulus eps <= |z| <= 1/eps) of the chordal
// distance between f_q(z) and the rigid rotation by t_expected turns.
double large_q_rotation_check(Complex q, double t_expected, double eps = 0.1,
                              int radial_samples = 24, int angular_samples = 96);

} // namespace antipode
