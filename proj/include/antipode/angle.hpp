#pragma once

// Exact circle arithmetic: angles are rationals mod 1, kept in canonical
// reduced form with value in [0, 1). Everything downstream (rotation sets,
// itineraries, gap computations) leans on this being exact.

#include "antipode/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace antipode {

class Angle {
public:
    Angle() : v_(0) {}
    explicit Angle(const BigRat& r) : v_(rat_frac(r)) {}
    Angle(const BigInt& num, const BigInt& den);

    const BigRat& value() const { return v_; }
    BigInt num() const { return rat_num(v_); }
    BigInt den() const { return rat_den(v_); }

    bool is_zero() const { return v_ == 0; }

    // multiplication-by-d map on the circle: x -> frac(d * x)
    Angle mul_by(const BigInt& d) const { return Angle(v_ * BigRat(d)); }

    Angle operator+(const Angle& o) const { return Angle(v_ + o.v_); }
    Angle operator-(const Angle& o) const { return Angle(v_ - o.v_); }
    Angle operator+(const BigRat& r) const { return Angle(v_ + r); }
    Angle operator-(const BigRat& r) const { return Angle(v_ - r); }

    bool operator==(const Angle& o) const { return v_ == o.v_; }
    bool operator!=(const Angle& o) const { return v_ != o.v_; }
    // order as representatives in [0,1); callers needing circular order use cyclic_order
    bool operator<(const Angle& o) const { return v_ < o.v_; }
    bool operator<=(const Angle& o) const { return v_ <= o.v_; }
    bool operator>(const Angle& o) const { return v_ > o.v_; }
    bool operator>=(const Angle& o) const { return v_ >= o.v_; }

    double to_double() const { return rat_to_double(v_); }
    std::string str() const { return rat_to_string(v_); }
    static Angle parse(const std::string& s) { return Angle(rat_parse(s)); }

private:
    BigRat v_; // canonical representative in [0,1)
};

std::ostream& operator<<(std::ostream& os, const Angle& a);

// strict counterclockwise order: true iff walking ccw from a one meets b before c
// (false whenever any two of the three coincide)
bool cyclic_order(const Angle& a, const Angle& b, const Angle& c);

struct AngleHash {
    std::size_t operator()(const Angle& a) const {
        return static_cast<std::size_t>(big_hash(rat_num(a.value())) * 1000003ULL ^
                                        big_hash(rat_den(a.value())));
    }
};

// Half-open / open / closed arc on the circle, possibly wrapping through 0.
// Empty arcs are not representable; a full circle is represented by lo == hi
// with both ends closed being disallowed too — intervals here always have
// length in (0, 1).
struct CircleInterval {
    Angle lo, hi;
    bool closed_lo = false, closed_hi = false;

    BigRat length() const {
        BigRat l = hi.value() - lo.value();
        if (l <= 0) l += 1;
        return l;
    }
    bool wraps() const { return hi.value() <= lo.value(); }
    bool contains(const Angle& x) const;
    std::string str() const;
};

// Orbit of x under multiplication by d: eventually periodic since x is
// rational. preperiod holds the non-recurring head, cycle the periodic part.
struct Orbit {
    std::vector<Angle> preperiod;
    std::vector<Angle> cycle;
};

Orbit orbit_under_mul(const Angle& x, const BigInt& d);

// true iff x is periodic (no preperiod) under multiplication by d,
// i.e. den(x) coprime to d.
bool is_periodic_under_mul(const Angle& x, const BigInt& d);

// Exact period of a periodic angle under mul-by-d (multiplicative order of d
// modulo den). Throws if x is not periodic.
unsigned long period_under_mul(const Angle& x, const BigInt& d);

// Base-d digits of x: x = sum digits[i] / d^(i+1) with the itinerary
// convention digit_i = floor(d * frac(d^i x)). For rationals the stream is
// eventually periodic; this returns the head + repeating block.
struct DigitStream {
    std::vector<int> head;      // non-repeating prefix
    std::vector<int> block;     // repeating block (empty means terminating, all further digits 0)
    int base = 0;

    std::vector<int> first(std::size_t n) const; // expanded first n digits
    BigRat value() const;                        // exact sum of digits[i]/base^(i+1)
};

DigitStream base_digits(const Angle& x, int base);

// Value of a purely periodic digit block in base b: sum block[i] b^(p-1-i) / (b^p - 1).
BigRat periodic_digits_value(const std::vector<int>& block, int base);

// Digit string read as a base-b integer (chunked Horner evaluation).
BigInt digits_to_integer(const std::vector<int>& digits, int base);

} // namespace antipode
