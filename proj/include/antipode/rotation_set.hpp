#pragma once

// Rotation sets for multiplication maps x -> d*x: exact finite (rational)
// representations as unions of periodic orbits, their gap structure, Goldberg
// orbits under doubling, deployment sequences, and compatibility tests.

#include "antipode/angle.hpp"
#include "antipode/pl_map.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace antipode {

struct GapInfo {
    CircleInterval interval; // open gap between consecutive points
    long multiplicity = 0;   // floor(d * length); the full-circle gap counts d-1
};

struct RotationSet {
    BigInt d;
    std::vector<std::vector<Angle>> orbits; // each listed in forward orbit order
    std::vector<GapInfo> gaps;              // gaps of the union, ccw from the smallest point
    Angle rotation_number;

    std::vector<Angle> points() const; // sorted union of all orbit points
    bool contains(const Angle& x) const;
};

// True iff x -> d*x restricted to the orbit preserves cyclic order (acts as a
// rigid rotation of the circularly ordered points). Input: one periodic orbit.
bool preserves_cyclic_order(const std::vector<Angle>& orbit, const BigInt& d);

// Rotation number advance/period of a periodic rotation orbit of x -> d*x;
// nullopt if the orbit does not preserve cyclic order.
std::optional<Angle> orbit_rotation_number(const std::vector<Angle>& orbit, const BigInt& d);

// How many disjoint open length-1/d intervals fit in the complement of the
// point set: sum over gaps of floor(d * gap length), with the convention that
// a single point (full-circle gap) yields d-1.
long gap_capacity(const std::vector<Angle>& sorted_points, const BigInt& d);

// Assemble a RotationSet from periodic orbits (validates: orbits preserve
// cyclic order, share a rotation number, and gap multiplicities sum to d-1).
RotationSet make_rotation_set(const BigInt& d, std::vector<std::vector<Angle>> orbits);

// All single periodic orbits of x -> d*x with rotation number t, one per
// deployment class, built from the gap-length recurrence: assign the d-1
// multiplicity drops to cyclic gap positions, solve the resulting linear
// system for the gap lengths, anchor, and keep the genuine single orbits.
std::vector<std::vector<Angle>> rotation_orbits_with_number(const Angle& t, const BigInt& d);

// The unique periodic orbit under doubling with rotation number t (den n),
// via the explicit gap-length construction: gap lengths 2^{k-1}/(2^n - 1)
// arranged so the gap of length l doubles onto its successor.
RotationSet goldberg_orbit(const Angle& t);

// (shortest, longest) gap length of the Goldberg orbit with denominator n:
// (1/(2^n - 1), 2^{n-1}/(2^n - 1)).
std::pair<BigRat, BigRat> gap_length_extremes(const Angle& t);

// Width of the plateau of the rotation number at rational height t = m/n:
// 1/(2 (2^n - 1)).
BigRat plateau_length(const Angle& t);

// Points of X whose forward orbit under x -> d*x avoids every given open
// interval (exact: rational orbits are finite).
bool orbit_avoids(const Angle& x, const BigInt& d, const std::vector<CircleInterval>& intervals);

// X_d(I): the rotation set of points whose orbit avoids the open set I, given
// as d-1 disjoint open intervals of length 1/d. Returns the periodic skeleton
// (the reduced part) with gap structure; membership in the full set is
// available via orbit_avoids. Algorithm: exact rotation number of the
// monotone extension, then the rotation orbits with that number filtered by
// avoidance.
RotationSet x_d_of(const std::vector<CircleInterval>& intervals, const BigInt& d);

// Periodic points among `points`, grouped into full cycles (each completed
// even if only partially listed). Used by reduce and directly testable on raw
// point lists that include preperiodic points.
std::vector<std::vector<Angle>> periodic_part(const std::vector<Angle>& points, const BigInt& d);

// Non-wandering part: drop every stored point that is not on a cycle.
RotationSet reduce(const RotationSet& X);

struct DeploymentSequence {
    std::vector<long> counts; // d-1 entries: points in [j/(d-1), (j+1)/(d-1))
};

DeploymentSequence deployment_sequence(const RotationSet& X);

// True iff each gap of either orbit contains exactly one point of the other
// (identical orbits: true by convention). Orbits must share a rotation number.
bool compatible(const std::vector<Angle>& o1, const std::vector<Angle>& o2, const BigInt& d);

} // namespace antipode
