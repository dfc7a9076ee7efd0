#include "antipode/angle.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace antipode {

Angle::Angle(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("Angle: zero denominator");
    v_ = rat_frac(BigRat(num, den));
}

std::ostream& operator<<(std::ostream& os, const Angle& a) { return os << a.str(); }

bool cyclic_order(const Angle& a, const Angle& b, const Angle& c) {
    if (a == b || b == c || a == c) return false;
    // rotate so a sits at 0, then compare representatives
    BigRat rb = rat_frac(b.value() - a.value());
    BigRat rc = rat_frac(c.value() - a.value());
    return rb < rc;
}

bool CircleInterval::contains(const Angle& x) const {
    if (x == lo) return closed_lo;
    if (x == hi) return closed_hi;
    // strict interior test; wrapping handled by rotating lo to the origin
    BigRat rx = rat_frac(x.value() - lo.value());
    BigRat rh = rat_frac(hi.value() - lo.value());
    if (rh == 0) rh = 1; // lo == hi means full-length-1 arc (used nowhere critical)
    return rx > 0 && rx < rh;
}

std::string CircleInterval::str() const {
    std::string s;
    s += closed_lo ? '[' : '(';
    s += lo.str();
    s += ", ";
    s += hi.str();
    s += closed_hi ? ']' : ')';
    return s;
}

Orbit orbit_under_mul(const Angle& x, const BigInt& d) {
    Orbit out;
    std::vector<Angle> seq;
    std::unordered_map<Angle, std::size_t, AngleHash> seen;
    Angle cur = x;
    for (;;) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            std::size_t start = it->second;
            out.preperiod.assign(seq.begin(), seq.begin() + static_cast<long>(start));
            out.cycle.assign(seq.begin() + static_cast<long>(start), seq.end());
            return out;
        }
        seen.emplace(cur, seq.size());
        seq.push_back(cur);
        cur = cur.mul_by(d);
    }
}

bool is_periodic_under_mul(const Angle& x, const BigInt& d) {
    return gcd(x.den(), d) == 1;
}

unsigned long period_under_mul(const Angle& x, const BigInt& d) {
    if (!is_periodic_under_mul(x, d))
        throw std::invalid_argument("period_under_mul: angle not periodic under mul-by-" + d.str());
    BigInt n = x.den();
    if (n == 1) return 1; // fixed point 0
    BigInt pow = d % n;
    unsigned long p = 1;
    while (pow != 1) {
        pow = (pow * d) % n;
        ++p;
    }
    return p;
}

std::vector<int> DigitStream::first(std::size_t n) const {
    std::vector<int> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < head.size()) out.push_back(head[i]);
        else if (!block.empty()) out.push_back(block[(i - head.size()) % block.size()]);
        else out.push_back(0);
    }
    return out;
}

// Horner evaluation of a digit string as a base-b integer, consuming digits
// in word-sized chunks so the number of big-integer operations stays small.
BigInt digits_to_integer(const std::vector<int>& digits, int base) {
    const std::size_t chunk = (base == 2) ? 62 : (base == 3) ? 39 : 15;
    BigInt chunk_scale = big_pow(base, static_cast<unsigned long>(chunk));
    BigInt acc = 0;
    std::size_t i = 0;
    while (i < digits.size()) {
        std::size_t take = std::min(chunk, digits.size() - i);
        std::uint64_t part = 0;
        for (std::size_t j = 0; j < take; ++j)
            part = part * static_cast<std::uint64_t>(base) +
                   static_cast<std::uint64_t>(digits[i + j]);
        if (take == chunk)
            acc = acc * chunk_scale + part;
        else
            acc = acc * big_pow(base, static_cast<unsigned long>(take)) + part;
        i += take;
    }
    return acc;
}

BigRat DigitStream::value() const {
    const BigInt H = digits_to_integer(head, base);
    const BigInt scale = big_pow(base, static_cast<unsigned long>(head.size()));
    if (block.empty()) return BigRat(H, scale);
    const BigInt B = digits_to_integer(block, base);
    const BigInt M = big_pow(base, static_cast<unsigned long>(block.size())) - 1;
    return BigRat(H * M + B, scale * M);
}

DigitStream base_digits(const Angle& x, int base) {
    if (base < 2) throw std::invalid_argument("base_digits: base must be >= 2");
    DigitStream out;
    out.base = base;
    // long division with cycle detection on the remainder num/den
    BigInt den = x.den();
    BigInt num = x.num();
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<int> digits;
    for (;;) {
        if (num == 0) { out.head = digits; out.block.clear(); return out; }
        std::string key = num.str();
        auto it = seen.find(key);
        if (it != seen.end()) {
            std::size_t start = it->second;
            out.head.assign(digits.begin(), digits.begin() + static_cast<long>(start));
            out.block.assign(digits.begin() + static_cast<long>(start), digits.end());
            return out;
        }
        seen.emplace(std::move(key), digits.size());
        num *= base;
        BigInt q = num / den;
        digits.push_back(static_cast<int>(q));
        num -= q * den;
    }
}

BigRat periodic_digits_value(const std::vector<int>& block, int base) {
    if (block.empty()) return BigRat(0);
    BigInt acc = 0;
    for (int d : block) acc = acc * base + d;
    return BigRat(acc, big_pow(base, static_cast<unsigned long>(block.size())) - 1);
}

} // namespace antipode
