#include "antipode/angle_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace antipode {

namespace {

enum class Side { Plus, Minus };

// One base-3 digit per doubling step of theta, recorded until the orbit
// revisits a point. `split` is the index where the cycle begins; `hits` says
// whether the orbit passed through theta_c.
struct RawRun {
    std::vector<int> digits;
    std::size_t split = 0;
    bool hits = false;
};

// Doubling orbits of k/n live on numerators mod n, so when both denominators
// are machine-sized the whole run works in integers with a flat visited table.
bool fast_run(const Angle& theta_c, const Angle& theta, Side side, RawRun& out) {
    constexpr std::int64_t kMaxDen = 8000000;
    if (theta.den() > kMaxDen) return false;
    if (theta_c.den() > std::numeric_limits<std::int32_t>::max()) return false;
    const std::int64_t n = theta.den().convert_to<std::int64_t>();
    std::int64_t k = theta.num().convert_to<std::int64_t>();
    const std::int64_t cn = theta_c.num().convert_to<std::int64_t>();
    const std::int64_t cd = theta_c.den().convert_to<std::int64_t>();
    // thresholds t1 = min(theta_c, 1/2), t2 = max(theta_c, 1/2) as p/q
    std::int64_t p1, q1, p2, q2;
    if (static_cast<__int128>(cn) * 2 < cd) {
        p1 = cn; q1 = cd; p2 = 1; q2 = 2;
    } else {
        p1 = 1; q1 = 2; p2 = cn; q2 = cd;
    }
    std::vector<std::int32_t> visited(static_cast<std::size_t>(n), -1);
    out.digits.clear();
    out.hits = false;
    for (;;) {
        std::int32_t& slot = visited[static_cast<std::size_t>(k)];
        if (slot >= 0) {
            out.split = static_cast<std::size_t>(slot);
            return true;
        }
        slot = static_cast<std::int32_t>(out.digits.size());
        if (static_cast<__int128>(k) * cd == static_cast<__int128>(cn) * n) out.hits = true;
        const bool below1 = static_cast<__int128>(k) * q1 < static_cast<__int128>(p1) * n;
        const bool below2 = static_cast<__int128>(k) * q2 < static_cast<__int128>(p2) * n;
        const bool at1 = static_cast<__int128>(k) * q1 == static_cast<__int128>(p1) * n;
        const bool at2 = static_cast<__int128>(k) * q2 == static_cast<__int128>(p2) * n;
        int d;
        if (side == Side::Plus) {
            d = below1 ? 0 : (below2 ? 1 : 2);
        } else {
            // right-closed digit intervals; the point 0 is read as 1
            if (k == 0) d = 2;
            else d = (below1 || at1) ? 0 : ((below2 || at2) ? 1 : 2);
        }
        out.digits.push_back(d);
        k = (2 * k) % n;
    }
}

void generic_run(const Angle& theta_c, const Angle& theta, Side side, RawRun& out) {
    const BigRat half(1, 2);
    const BigRat tc = theta_c.value();
    const BigRat tmin = std::min(tc, half);
    const BigRat tmax = std::max(tc, half);
    std::unordered_map<Angle, std::size_t, AngleHash> seen;
    out.digits.clear();
    out.hits = false;
    Angle y = theta;
    for (;;) {
        auto it = seen.find(y);
        if (it != seen.end()) {
            out.split = it->second;
            return;
        }
        seen.emplace(y, out.digits.size());
        if (y == theta_c) out.hits = true;
        const BigRat v = y.value();
        int d;
        if (side == Side::Plus) d = (v < tmin) ? 0 : (v < tmax ? 1 : 2);
        else d = (v == 0) ? 2 : (v <= tmin ? 0 : (v <= tmax ? 1 : 2));
        out.digits.push_back(d);
        y = y.mul_by(2);
    }
}

RawRun run_digits(const Angle& theta_c, const Angle& theta, Side side) {
    RawRun out;
    if (!fast_run(theta_c, theta, side, out)) generic_run(theta_c, theta, side, out);
    return out;
}

DigitStream to_stream(const RawRun& run) {
    DigitStream s;
    s.base = 3;
    s.head.assign(run.digits.begin(),
                  run.digits.begin() + static_cast<std::ptrdiff_t>(run.split));
    s.block.assign(run.digits.begin() + static_cast<std::ptrdiff_t>(run.split),
                   run.digits.end());
    return s;
}

// Largest integer strictly less than v.
BigInt floor_strict(const BigRat& v) {
    BigInt f = rat_floor(v);
    return (BigRat(f) == v) ? f - 1 : f;
}

} // namespace

bool in_lambda(const Angle& theta_c, const Angle& theta) {
    return !run_digits(theta_c, theta, Side::Plus).hits;
}

DigitStream phi_digits(const Angle& theta_c, const Angle& theta) {
    RawRun run = run_digits(theta_c, theta, Side::Plus);
    if (run.hits)
        throw std::domain_error("phi: the doubling orbit of theta hits theta_c; use phi_pm");
    return to_stream(run);
}

Angle phi(const Angle& theta_c, const Angle& theta) {
    return Angle(phi_digits(theta_c, theta).value());
}

std::pair<Angle, Angle> phi_pm(const Angle& theta_c, const Angle& theta) {
    RawRun plus = run_digits(theta_c, theta, Side::Plus);
    if (!plus.hits)
        throw std::domain_error("phi_pm: the doubling orbit of theta misses theta_c; use phi");
    RawRun minus = run_digits(theta_c, theta, Side::Minus);
    return {Angle(to_stream(minus).value()), Angle(to_stream(plus).value())};
}

CriticalGap critical_gap(const Angle& theta_c) {
    auto [a, b] = phi_pm(theta_c, theta_c);
    return CriticalGap{theta_c, a, b, (b - a).value()};
}

GapEndpointNumerators critical_gap_endpoint_numerators(const Angle& theta_c) {
    if (!is_periodic_under_mul(theta_c, 2))
        throw std::domain_error(
            "critical_gap_endpoint_numerators: theta must have odd denominator");
    RawRun minus = run_digits(theta_c, theta_c, Side::Minus);
    RawRun plus = run_digits(theta_c, theta_c, Side::Plus);
    if (minus.split != 0 || plus.split != 0 || minus.digits.size() != plus.digits.size())
        throw std::logic_error("critical_gap_endpoint_numerators: run not purely periodic");
    GapEndpointNumerators out;
    out.period = static_cast<unsigned long>(plus.digits.size());
    out.a_num = digits_to_integer(minus.digits, 3);
    out.b_num = digits_to_integer(plus.digits, 3);
    out.modulus = big_pow(3, out.period) - 1;
    return out;
}

Angle psi(const Angle& theta_c, const Angle& x) {
    const CriticalGap g = critical_gap(theta_c);
    const CircleInterval gap = g.interval();
    const BigRat tau = (theta_c.value() < BigRat(1, 2)) ? BigRat(2, 3) : BigRat(1, 3);
    std::vector<int> bits;
    std::unordered_map<Angle, std::size_t, AngleHash> seen;
    Angle z = x;
    for (;;) {
        if (gap.contains(z)) {
            // first entry into the gap: the value closes up over theta_c
            const BigInt p = digits_to_integer(bits, 2);
            return Angle((BigRat(p) + theta_c.value()) /
                         BigRat(big_pow(2, static_cast<unsigned long>(bits.size()))));
        }
        auto it = seen.find(z);
        if (it != seen.end()) {
            DigitStream s;
            s.base = 2;
            s.head.assign(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(it->second));
            s.block.assign(bits.begin() + static_cast<std::ptrdiff_t>(it->second), bits.end());
            return Angle(s.value());
        }
        seen.emplace(z, bits.size());
        bits.push_back(z.value() >= tau ? 1 : 0);
        z = z.mul_by(3);
    }
}

bool visible(const Angle& theta_c, const Angle& x) {
    const CriticalGap g = critical_gap(theta_c);
    return orbit_avoids(x, 3, {g.interval()});
}

BigRat gap_sum_truncated(const Angle& theta_c, int max_depth) {
    if (max_depth < 0)
        throw std::invalid_argument("gap_sum_truncated: max_depth must be >= 0");
    const CriticalGap g = critical_gap(theta_c);
    const BigRat ga = g.a.value();
    const BigRat gb = ga + g.length;
    BigRat total = g.length;
    // closed arcs [lo, hi] of the surviving set, in lift coordinates
    std::vector<std::pair<BigRat, BigRat>> arcs;
    arcs.push_back({gb, ga + 1});
    BigInt t = 1; // 3^depth
    for (int depth = 1; depth <= max_depth; ++depth) {
        t *= 3;
        const BigRat tr(t);
        std::vector<std::pair<BigRat, BigRat>> next;
        next.reserve(arcs.size() * 2);
        for (const auto& [lo, hi] : arcs) {
            // translates (ga + j)/t .. (gb + j)/t of the gap meeting (lo, hi);
            // they never straddle an arc endpoint because endpoints are visible
            BigInt j = rat_floor(lo * tr - gb) + 1;
            const BigInt jmax = floor_strict(hi * tr - ga);
            BigRat cur = lo;
            for (; j <= jmax; ++j) {
                const BigRat glo = (ga + BigRat(j)) / tr;
                const BigRat ghi = (gb + BigRat(j)) / tr;
                total += ghi - glo;
                if (glo > cur) next.push_back({cur, glo});
                cur = ghi;
            }
            if (hi > cur) next.push_back({cur, hi});
        }
        arcs = std::move(next);
    }
    return total;
}

std::pair<CircleInterval, CircleInterval> collapse_intervals(const Angle& theta_c) {
    const CriticalGap g = critical_gap(theta_c);
    Angle lo1 = g.a, hi1 = g.b;
    if (g.length != BigRat(1, 3)) {
        // shrink to the centered length-1/3 subinterval of the gap
        const BigRat c = g.a.value() + g.length / 2;
        lo1 = Angle(c - BigRat(1, 6));
        hi1 = Angle(c + BigRat(1, 6));
    }
    const Angle half(BigRat(1, 2));
    CircleInterval i1{lo1, hi1, false, false};
    CircleInterval i2{lo1 + half, hi1 + half, false, false};
    return {i1, i2};
}

Angle dynamic_rotation_number(const Angle& theta_c) {
    auto [i1, i2] = collapse_intervals(theta_c);
    const PLCircleMap g = monotone_extension({i1, i2}, 3);
    const RotationResult r = g.rotation_number();
    if (!r.exact)
        throw std::runtime_error("dynamic_rotation_number: rotation number did not resolve");
    return Angle(r.value);
}

RotationSet doubly_visible_set(const Angle& theta_c) {
    auto [i1, i2] = collapse_intervals(theta_c);
    const std::vector<CircleInterval> collapsed{i1, i2};
    const Angle t = dynamic_rotation_number(theta_c);
    const RotationSet theta_orbit = goldberg_orbit(t);
    std::vector<std::vector<Angle>> cycles;
    if (theta_orbit.contains(theta_c)) {
        // theta sits on the boundary of its rotation-number plateau; the gap
        // endpoints are periodic and carry the one-sided limit cycles
        const CriticalGap g = critical_gap(theta_c);
        for (const Angle& e : {g.a, g.b}) {
            if (!orbit_avoids(e, 3, collapsed)) continue;
            const Orbit o = orbit_under_mul(e, 3);
            if (!o.preperiod.empty())
                throw std::logic_error("doubly_visible_set: gap endpoint is not periodic");
            cycles.push_back(o.cycle);
        }
    } else {
        // the doubling orbit with rotation number t transfers through phi
        std::vector<Angle> image;
        for (const Angle& th : theta_orbit.points()) image.push_back(phi(theta_c, th));
        cycles.push_back(std::move(image));
    }
    if (cycles.empty())
        throw std::logic_error("doubly_visible_set: no cycle survives the collapse");
    return make_rotation_set(3, cycles);
}

Angle balanced_angle(const Angle& t) {
    if (t.den() % 2 == 0)
        throw std::domain_error("balanced_angle: denominator must be odd (use balanced_pair)");
    const std::vector<Angle> pts = goldberg_orbit(t).points();
    return pts[(pts.size() - 1) / 2];
}

std::pair<Angle, Angle> balanced_pair(const Angle& t) {
    if (t.den() % 2 != 0)
        throw std::domain_error("balanced_pair: denominator must be even (use balanced_angle)");
    const std::vector<Angle> pts = goldberg_orbit(t).points();
    const std::size_t n = pts.size();
    return {pts[n / 2 - 1], pts[n / 2]};
}

Angle rho_inverse_plus(const Angle& t) {
    const unsigned long n = t.den().convert_to<unsigned long>();
    const BigRat threshold = BigRat(1) - t.value();
    std::vector<int> bits;
    bits.reserve(n);
    Angle cur(BigRat(1, 2)); // frac(1/2 + l t)
    for (unsigned long l = 0; l < n; ++l) {
        bits.push_back(cur.value() >= threshold ? 1 : 0);
        cur = cur + t;
    }
    const BigInt b = digits_to_integer(bits, 2);
    return Angle(BigRat(b, big_pow(2, n) - 1));
}

double rho_inverse_plus_real(double t, int bits) {
    if (bits <= 0 || bits > 64)
        throw std::invalid_argument("rho_inverse_plus_real: bits must be in [1, 64]");
    t -= std::floor(t);
    const double threshold = 1.0 - t;
    double acc = 0.0;
    double cur = 0.5;
    for (int l = 0; l < bits; ++l) {
        if (cur >= threshold) acc += std::ldexp(1.0, -(l + 1));
        cur += t;
        if (cur >= 1.0) cur -= 1.0;
    }
    return acc;
}

BigRat rho_discontinuity(const Angle& t) {
    const BigInt n = t.den();
    if (n % 2 != 0) return BigRat(0);
    const unsigned long k = BigInt(n / 2).convert_to<unsigned long>();
    return BigRat(big_pow(2, k - 1), big_pow(2, 2 * k) - 1);
}

} // namespace antipode
