#pragma once

// Exact arithmetic backbone. Denominators in the digit calculus grow like 3^p
// with p in the hundreds, so everything here sits on arbitrary-precision
// integers (boost::multiprecision, header-only).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace antipode {

// expression templates are disabled so values behave like plain value types
// (auto, doctest assertion decomposition, std::pair, ... all stay predictable)
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using BigRat = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline BigInt rat_num(const BigRat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const BigRat& r) { return boost::multiprecision::denominator(r); }

// floor(r) as a BigInt (works for negative values too).
inline BigInt rat_floor(const BigRat& r) {
    BigInt n = rat_num(r), d = rat_den(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

// Fractional part in [0, 1).
inline BigRat rat_frac(const BigRat& r) { return r - BigRat(rat_floor(r)); }

inline BigInt big_pow(BigInt base, unsigned long e) {
    BigInt out = 1;
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

inline double rat_to_double(const BigRat& r) { return r.template convert_to<double>(); }

// "num/den" (canonical reduced form; integers print without "/1" suffix kept
// explicit so parsing round-trips: 0 prints as "0/1").
inline std::string rat_to_string(const BigRat& r) {
    return rat_num(r).str() + "/" + rat_den(r).str();
}

inline BigRat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(s));
        BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator");
        return BigRat(n, d);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational '" + s + "'");
    }
}

struct BigIntHash {
    std::size_t operator()(const BigInt& v) const;
};

struct BigRatHash {
    std::size_t operator()(const BigRat& v) const;
};

inline std::uint64_t big_hash(const BigInt& v) {
    // cheap stable hash: low 64 bits mixed with the sign and bit count
    std::uint64_t lo = static_cast<std::uint64_t>(v & 0xffffffffffffffffULL);
    std::uint64_t mix = lo ^ (0x9e3779b97f4a7c15ULL * (msb(v == 0 ? BigInt(1) : abs(v)) + (v < 0 ? 131 : 0)));
    mix ^= mix >> 33;
    mix *= 0xff51afd7ed558ccdULL;
    mix ^= mix >> 33;
    return mix;
}

inline std::size_t BigIntHash::operator()(const BigInt& v) const {
    return static_cast<std::size_t>(big_hash(v));
}

inline std::size_t BigRatHash::operator()(const BigRat& v) const {
    return static_cast<std::size_t>(big_hash(rat_num(v)) * 1000003ULL ^ big_hash(rat_den(v)));
}

} // namespace antipode
