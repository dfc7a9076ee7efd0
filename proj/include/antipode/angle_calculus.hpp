#pragma once

// The angle calculus linking doubling to tripling: the critical gap of a
// parameter angle, the base-3 landing coordinate phi and its inverse psi,
// visible and doubly-visible sets, the dynamic rotation number, balanced
// angles, and the explicit bit formula for the inverse of the rotation number.

#include "antipode/angle.hpp"
#include "antipode/rotation_set.hpp"

#include <utility>

namespace antipode {

// Open interval of coordinates not realized by any landing angle: bounded by
// the one-sided landing limits at theta itself.
struct CriticalGap {
    Angle theta;
    Angle a, b;    // phi_minus(theta, theta), phi_plus(theta, theta)
    BigRat length; // frac(b - a): 1/3 <= length <= 1/2

    CircleInterval interval() const { return CircleInterval{a, b, false, false}; }
};

// True iff the doubling orbit of theta (including theta itself) never hits
// theta_c. Exact: rational orbits are eventually periodic.
bool in_lambda(const Angle& theta_c, const Angle& theta);

// Base-3 landing coordinate of theta: digit m is 0/1/2 according as
// 2^{m-1} theta falls in [0, tmin), [tmin, tmax), [tmax, 1) where
// tmin = min(theta_c, 1/2), tmax = max(theta_c, 1/2). Requires theta in
// Lambda (otherwise the two one-sided versions differ; use phi_pm).
Angle phi(const Angle& theta_c, const Angle& theta);
DigitStream phi_digits(const Angle& theta_c, const Angle& theta);

// One-sided landing coordinates when the orbit of theta hits theta_c: the
// plus version uses the half-open-left digit intervals above, the minus
// version the half-open-right ones (with 2^{m-1} theta = 0 read as 1).
// Requires theta NOT in Lambda.
std::pair<Angle, Angle> phi_pm(const Angle& theta_c, const Angle& theta);

CriticalGap critical_gap(const Angle& theta_c);

// Exact critical-gap endpoints for doubling-periodic theta (odd denominator),
// as unreduced numerators over the common denominator 3^p - 1 (p = doubling
// period). Cheap bulk form: no rational normalization is performed.
struct GapEndpointNumerators {
    BigInt a_num, b_num; // a = a_num / modulus, b = b_num / modulus
    unsigned long period = 0;
    BigInt modulus; // 3^period - 1
};
GapEndpointNumerators critical_gap_endpoint_numerators(const Angle& theta_c);

// Monotone degree-one inverse of phi: base-3 digits of x are turned back into
// binary digits via the threshold 2/3 (theta_c < 1/2) or 1/3 (theta_c >=
// 1/2); if the tripling orbit of x enters the open critical gap at step m the
// value closes up as (collected bits + theta_c)/2^{m-1}.
Angle psi(const Angle& theta_c, const Angle& x);

// True iff the tripling orbit of x avoids the open critical gap.
bool visible(const Angle& theta_c, const Angle& x);

// Total length of the complement components of the visible set whose orbit
// first enters the critical gap within max_depth steps (the gap itself is
// depth 0). Exact; increases to 1 as max_depth grows.
BigRat gap_sum_truncated(const Angle& theta_c, int max_depth);

// The pair of collapsed intervals (I1 inside the critical gap with length
// exactly 1/3, and I2 = I1 + 1/2) whose degree-one monotone extension of
// x -> 3x computes the dynamic rotation number.
std::pair<CircleInterval, CircleInterval> collapse_intervals(const Angle& theta_c);

// Rotation number of the doubly-visible set; exact for rational theta_c.
Angle dynamic_rotation_number(const Angle& theta_c);

// X = V intersect (V + 1/2): the self-antipodal rotation set of coordinates
// visible from both 0 and infinity; one or two cycles.
RotationSet doubly_visible_set(const Angle& theta_c);

// The doubling-periodic angle with rotation number t (odd denominator) whose
// orbit splits evenly around it: the middle element of the sorted Goldberg
// orbit. Even denominators are rejected (use balanced_pair).
Angle balanced_angle(const Angle& t);

// The middle two elements of the sorted Goldberg orbit (even denominator).
std::pair<Angle, Angle> balanced_pair(const Angle& t);

// Right-continuous inverse of the dynamic rotation number: theta_t^+ with
// binary digit b_l = 1 iff frac(1/2 + l t) in [1-t, 1); exact for rational t.
Angle rho_inverse_plus(const Angle& t);

// Floating variant for irrational t: first `bits` binary digits of theta_t^+
// (truncation error at most 2^-bits, plus double rounding in the digit rule).
double rho_inverse_plus_real(double t, int bits);

// Jump of the inverse at t: 2^{k-1}/(2^{2k} - 1) when the denominator of t is
// even (= 2k), zero otherwise.
BigRat rho_discontinuity(const Angle& t);

} // namespace antipode
