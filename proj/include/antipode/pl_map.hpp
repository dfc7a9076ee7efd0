#pragma once

// Piecewise-linear monotone circle maps with exact rational data: lifts,
// monotone extensions of x -> d*x that collapse prescribed intervals, exact
// rotation numbers via orbit iteration, and the iterated-lift semiconjugacy
// down to a multiplication map.

#include "antipode/angle.hpp"
#include "antipode/rational.hpp"

#include <utility>
#include <vector>

namespace antipode {

struct RotationResult {
    BigRat value;      // exact value when exact, midpoint of [lo,hi] otherwise
    bool exact = false;
    BigRat lo, hi;     // enclosure (lo == hi == value when exact)
    long iterations = 0;
};

class PLCircleMap {
public:
    // Graph vertices of one period of the lift: xs strictly increasing with
    // xs[0] arbitrary (window base) and all xs within [xs[0], xs[0]+1);
    // vs[i] = lift value at xs[i], nondecreasing, and the wrap segment up to
    // (xs[0]+1, vs[0]+degree) must keep the lift monotone.
    PLCircleMap(std::vector<BigRat> xs, std::vector<BigRat> vs, BigInt degree);

    static PLCircleMap multiplication(const BigInt& d);   // x -> d*x
    static PLCircleMap rigid_rotation(const BigRat& alpha); // x -> x + alpha

    const BigInt& degree() const { return degree_; }
    std::size_t breakpoint_count() const { return xs_.size(); }
    const std::vector<BigRat>& breakpoint_xs() const { return xs_; }
    const std::vector<BigRat>& breakpoint_vals() const { return vs_; }

    BigRat lift(const BigRat& x) const;      // canonical lift, any real input
    Angle apply(const Angle& x) const { return Angle(lift(x.value())); }

    bool slopes_integral() const;

    // h = R_alpha o g o R_{-alpha}
    PLCircleMap conjugate_by_rotation(const BigRat& alpha) const;

    // Exact rotation number for degree-one maps. Iterates the window-base
    // breakpoint, tracking lift displacement; with rational data the orbit is
    // eventually periodic and the result is exact. If no cycle appears within
    // max_iter steps, returns the (l-1)/n..(l+1)/n enclosure instead.
    RotationResult rotation_number(long max_iter = 2000000) const;

private:
    std::vector<BigRat> xs_, vs_;
    BigInt degree_;

    BigRat window_lift(const BigRat& x) const; // x must lie in [xs_[0], xs_[0]+1)
    RotationResult rotation_number_fast(long max_iter) const;   // integral slopes
    RotationResult rotation_number_generic(long max_iter) const;
};

// Monotone circle map agreeing with x -> d*x outside the given open intervals
// and constant on each. Every interval must have length exactly 1/d; with k
// intervals the result has degree d-k (degree one when k = d-1). Intervals
// must be pairwise disjoint.
PLCircleMap monotone_extension(const std::vector<CircleInterval>& intervals, const BigInt& d);

struct SemiconjugacyResult {
    BigRat value;       // h_n(x) in [0,1)
    BigRat error_bound; // |h(x) - h_n(x)| <= this
};

// n-th approximant of the unique semiconjugacy from g (monotone, degree d>=2)
// onto x -> d*x sending the fixed point x0 to 0: lift-iterate and divide by
// d^n. Exact rational output; error decays like C/d^n.
SemiconjugacyResult semiconjugacy_to_md(const PLCircleMap& g, const Angle& x0, const Angle& x,
                                        unsigned n);

} // namespace antipode
