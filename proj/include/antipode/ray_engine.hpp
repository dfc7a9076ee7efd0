#pragma once

// Böttcher coordinates in the superattracting basin of zero, dynamic
// internal/external rays and their landing points, coordinate measurement on
// the Julia curve, the parameter map of the central hyperbolic component, and
// parameter-ray tracing (including deep "fjord" escapes).

#include "antipode/angle.hpp"
#include "antipode/map_dynamics.hpp"

#include <limits>
#include <string>
#include <vector>

namespace antipode {

// Böttcher coordinate β near 0, normalized by β(z)/(q z) -> 1 as z -> 0 and
// satisfying β(f(z)) = β(z)². Throws std::domain_error when z is outside the
// regime where the defining product converges cleanly (callers must pull the
// point toward 0 through the dynamics first).
Complex boettcher(Complex q, Complex z);
Complex boettcher_log(Complex q, Complex z); // log β with principal branches per factor

// Solutions of the cubic a3 w³ + a2 w² + a1 w + a0 = 0 (a3 ≠ 0).
std::vector<Complex> cubic_roots(Complex a3, Complex a2, Complex a1, Complex a0);

// The three f_q-preimages of a finite value v ≠ 0.
std::vector<Complex> preimages(Complex q, Complex v);

struct RayTrace {
    Angle theta;
    double base_potential = 1e-4; // |β| of the first sample
    int sublevels = 8;            // samples per potential-doubling step
    // sample j sits at potential base_potential^(2^(-j/sublevels))
    std::vector<Complex> points;
    std::vector<double> potentials;
    bool landed = false;
    Complex landing_point{0.0, 0.0};
    bool bifurcated = false;                 // ray has distinct one-sided limits
    double closest_critical_approach =       // min distance of the traced orbit to c0
        std::numeric_limits<double>::infinity();
};

// Trace the internal ray of angle theta in the basin of zero out to
// `depth` potential-doubling levels. A bifurcating ray (one whose forward
// angle orbit hits the angle of the critical value ray, arg Φ(q)) runs into
// the critical point and has two one-sided continuations; its trace follows
// one of them and the flag records the bifurcation.
RayTrace internal_ray(Complex q, const Angle& theta, int depth, int sublevels = 8);

// External ray of angle theta: the pointwise antipodal image of the internal
// ray of the same angle (the convention under which the external ray of angle
// theta lands at Julia coordinate x(theta) + 1/2).
RayTrace external_ray(Complex q, const Angle& theta, int depth, int sublevels = 8);

struct MeridianCheck {
    bool meridian = false;   // both rays land at a common point
    Complex common_point{0.0, 0.0};
    double gap = std::numeric_limits<double>::infinity(); // distance between the two landings
    RayTrace internal_trace, external_trace;
};

// Does the internal ray of angle theta_internal and the external ray of angle
// theta_external land together (forming a meridian from 0 to ∞)?
MeridianCheck doubly_visible_check(Complex q, const Angle& theta_internal,
                                   const Angle& theta_external, int depth = 40);

// Coordinate frame for reading Julia-curve coordinates x ∈ ℝ/ℤ for central
// parameters (Julia set a Jordan curve): x = 0 is anchored at the landing
// point of the internal 0-ray (a fixed point), orientation is positive as
// seen from the origin, and the two remaining preimages of the anchor cut the
// curve at x = 1/3 and x = 2/3.
struct JuliaFrame {
    Complex q{0.0, 0.0};
    Complex anchor{0.0, 0.0};     // η(0), a repelling fixed point
    Complex cut_third{0.0, 0.0};  // η(1/3)
    Complex cut_two_thirds{0.0, 0.0}; // η(2/3)
};

JuliaFrame julia_frame(Complex q, int depth = 40);

// Approximate coordinate of a Julia point by reading its base-3 itinerary
// against the frame cuts (digits limited by orbit drift off the curve).
double measure_x(const JuliaFrame& frame, Complex z, int digits = 18);

// Exact coordinates for a finite f-invariant set of periodic Julia points:
// first digits are read geometrically and chained along the measured cycles,
// so each coordinate comes out as an exact rational with periodic expansion.
std::vector<Angle> measure_cycle_x(const JuliaFrame& frame, const std::vector<Complex>& points);

// Combinatorial rotation number of a finite f-invariant set of plane points
// (constant cyclic advance in the argument order; throws when not rotational).
Angle set_rotation_number(Complex q, const std::vector<Complex>& points);

// Parameter map Φ of the central component: the Böttcher coordinate of the
// marked critical point c0, computed by the critical-orbit product with
// principal branches. Throws std::domain_error when the critical orbit does
// not reach the convergence regime (parameter outside the central component).
Complex param_map(Complex q, int max_iter = 400);
Complex param_map_log(Complex q, int max_iter = 400);

struct ParamRayPoint {
    Complex q{0.0, 0.0};
    Complex q_squared{0.0, 0.0};
    int level = 0;       // N: iterations taken before reading the Böttcher value
    double sigma = 0.0;  // scaled potential: -log|Φ| = sigma · 2^(-N)
    double log_potential = 0.0; // log|Φ| (underflows toward 0 deep in a fjord)
};

// Solve Φ(q²) = r e^{2πiΘ} for each radius of the schedule by
// predictor-corrector continuation starting from the small-q model.
std::vector<ParamRayPoint> parameter_ray(const Angle& theta_c, const std::vector<double>& r_schedule);

struct ParamRayResult {
    std::vector<ParamRayPoint> points;
    bool escaped = false;
    std::string diagnostics;
};

// Follow the parameter ray outward until |q²| exceeds q2_abs_target, stepping
// the potential down a geometric ladder. The corrector works at the orbit
// depth N where the Böttcher value is well scaled, so the trace can go far
// beyond the potentials representable as 1 - ε in doubles; fjord depth grows
// like |q²| ~ 2 N^(2/3), so reaching |q²| = 10³ takes roughly 11000 levels.
ParamRayResult parameter_ray_escape(const Angle& theta_c, double q2_abs_target,
                                    int max_level = 12000);

} // namespace antipode
