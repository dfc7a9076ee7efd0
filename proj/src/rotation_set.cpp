#include "antipode/rotation_set.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace antipode {

namespace {

std::vector<Angle> sorted_unique(const std::vector<Angle>& pts) {
    std::vector<Angle> out = pts;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// index of d*pts[i] within sorted pts; nullopt if the image is missing
std::optional<std::size_t> image_index(const std::vector<Angle>& pts, std::size_t i,
                                       const BigInt& d) {
    Angle img = pts[i].mul_by(d);
    auto it = std::lower_bound(pts.begin(), pts.end(), img);
    if (it == pts.end() || *it != img) return std::nullopt;
    return static_cast<std::size_t>(it - pts.begin());
}

// rotation amount m if x -> d*x acts on the sorted points as index shift by m
std::optional<std::size_t> rotation_offset(const std::vector<Angle>& pts, const BigInt& d) {
    const std::size_t n = pts.size();
    auto first = image_index(pts, 0, d);
    if (!first) throw std::invalid_argument("orbit is not invariant under x -> d*x");
    std::size_t m = (*first + n - 0) % n;
    for (std::size_t i = 1; i < n; ++i) {
        auto idx = image_index(pts, i, d);
        if (!idx) throw std::invalid_argument("orbit is not invariant under x -> d*x");
        if (*idx != (i + m) % n) return std::nullopt;
    }
    return m;
}

// forward orbit order starting from the smallest point
std::vector<Angle> canonical_orbit_order(const std::vector<Angle>& orbit, const BigInt& d) {
    std::vector<Angle> sorted = sorted_unique(orbit);
    std::vector<Angle> out;
    out.reserve(sorted.size());
    Angle cur = sorted.front();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back(cur);
        cur = cur.mul_by(d);
    }
    if (cur != out.front() || sorted_unique(out) != sorted)
        throw std::invalid_argument("points do not form a single periodic orbit");
    return out;
}

} // namespace

std::vector<Angle> RotationSet::points() const {
    std::vector<Angle> all;
    for (const auto& o : orbits) all.insert(all.end(), o.begin(), o.end());
    return sorted_unique(all);
}

bool RotationSet::contains(const Angle& x) const {
    for (const auto& o : orbits)
        for (const auto& p : o)
            if (p == x) return true;
    return false;
}

bool preserves_cyclic_order(const std::vector<Angle>& orbit, const BigInt& d) {
    std::vector<Angle> pts = sorted_unique(orbit);
    if (pts.size() != orbit.size())
        throw std::invalid_argument("orbit contains duplicate points");
    return rotation_offset(pts, d).has_value();
}

std::optional<Angle> orbit_rotation_number(const std::vector<Angle>& orbit, const BigInt& d) {
    std::vector<Angle> pts = sorted_unique(orbit);
    auto m = rotation_offset(pts, d);
    if (!m) return std::nullopt;
    return Angle(BigInt(*m), BigInt(pts.size()));
}

long gap_capacity(const std::vector<Angle>& sorted_points, const BigInt& d) {
    const std::size_t n = sorted_points.size();
    if (n == 0) throw std::invalid_argument("gap_capacity: empty point set");
    if (n == 1) return static_cast<long>(d - 1); // full-circle gap convention
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        BigRat len = (i + 1 < n ? sorted_points[i + 1].value()
                                : sorted_points[0].value() + 1) -
                     sorted_points[i].value();
        total += static_cast<long>(rat_floor(len * BigRat(d)));
    }
    return total;
}

RotationSet make_rotation_set(const BigInt& d, std::vector<std::vector<Angle>> orbits) {
    if (d < 2) throw std::invalid_argument("make_rotation_set: need d >= 2");
    if (orbits.empty()) throw std::invalid_argument("make_rotation_set: no orbits");

    RotationSet X;
    X.d = d;

    std::optional<Angle> rho;
    std::set<std::vector<Angle>> seen;
    for (auto& o : orbits) {
        auto canon = canonical_orbit_order(o, d);
        auto r = orbit_rotation_number(canon, d);
        if (!r) throw std::invalid_argument("make_rotation_set: orbit is not a rotation orbit");
        if (rho && *rho != *r)
            throw std::invalid_argument("make_rotation_set: orbits have different rotation numbers");
        rho = *r;
        std::vector<Angle> key = sorted_unique(canon);
        if (seen.insert(key).second) X.orbits.push_back(std::move(canon));
    }
    X.rotation_number = *rho;

    std::vector<Angle> pts = X.points();
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Angle& lo = pts[i];
        const Angle& hi = pts[(i + 1) % n];
        GapInfo gap;
        gap.interval = CircleInterval{lo, hi, false, false};
        BigRat len = (n == 1) ? BigRat(1) : gap.interval.length();
        gap.multiplicity = (n == 1) ? static_cast<long>(d - 1)
                                    : static_cast<long>(rat_floor(len * BigRat(d)));
        X.gaps.push_back(std::move(gap));
    }
    long total = 0;
    for (const auto& g : X.gaps) total += g.multiplicity;
    if (total != static_cast<long>(d - 1))
        throw std::invalid_argument("make_rotation_set: gap multiplicities do not sum to d-1 "
                                    "(orbits not pairwise compatible?)");
    return X;
}

std::vector<std::vector<Angle>> rotation_orbits_with_number(const Angle& t, const BigInt& d) {
    if (d < 2) throw std::invalid_argument("rotation_orbits_with_number: need d >= 2");
    const long n = static_cast<long>(t.den());
    const long m = static_cast<long>(t.num());
    const long drops = static_cast<long>(d - 1);

    // enumerate all assignments of the d-1 multiplicity drops to the n cyclic
    // gap positions (compositions of d-1 into n nonnegative parts)
    std::vector<std::vector<long>> assignments;
    std::vector<long> cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, long pos, long left) -> void {
        if (pos == n - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            assignments.push_back(cur);
            return;
        }
        for (long k = 0; k <= left; ++k) {
            cur[static_cast<std::size_t>(pos)] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, drops);

    const BigInt dn1 = big_pow(d, static_cast<unsigned long>(n)) - 1;
    std::set<std::vector<Angle>> found;
    for (const auto& kappa : assignments) {
        // gap lengths from the recurrence len[(p+m) mod n] = d*len[p] - kappa[p]
        std::vector<BigRat> len(static_cast<std::size_t>(n));
        for (long p = 0; p < n; ++p) {
            BigInt acc = 0;
            for (long i = 0; i < n; ++i)
                acc = acc * d + kappa[static_cast<std::size_t>((p + i * m) % n)];
            len[static_cast<std::size_t>(p)] = BigRat(acc, dn1);
        }
        // anchor: (d-1) x0 = sum of the first m gap lengths + j
        BigRat Sm = 0;
        for (long p = 0; p < m; ++p) Sm += len[static_cast<std::size_t>(p)];
        for (long j = 0; j < drops; ++j) {
            BigRat x0 = (Sm + j) / BigRat(d - 1);
            std::vector<Angle> pts;
            pts.reserve(static_cast<std::size_t>(n));
            BigRat x = x0;
            bool ok = true;
            for (long p = 0; p < n; ++p) {
                pts.push_back(Angle(x));
                x += len[static_cast<std::size_t>(p)];
            }
            // validate the m_d action advances every sorted index by m
            std::vector<Angle> sorted = sorted_unique(pts);
            if (sorted.size() != pts.size()) continue;
            // rotate sorted so it starts at Angle(x0)
            for (long p = 0; p < n && ok; ++p) {
                Angle img = pts[static_cast<std::size_t>(p)].mul_by(d);
                if (img != pts[static_cast<std::size_t>((p + m) % n)]) ok = false;
            }
            if (!ok) continue;
            found.insert(sorted);
        }
    }
    std::vector<std::vector<Angle>> out;
    for (const auto& s : found) out.push_back(canonical_orbit_order(s, d));
    return out;
}

RotationSet goldberg_orbit(const Angle& t) {
    const long n = static_cast<long>(t.den());
    const long m = static_cast<long>(t.num());
    const BigInt den = big_pow(2, static_cast<unsigned long>(n)) - 1;

    // gap at cyclic position k*m mod n has length 2^{k-1}/(2^n - 1);
    // position 0 is the (major) gap containing the angle 0
    std::vector<BigRat> len(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k)
        len[static_cast<std::size_t>((k * m) % n)] =
            BigRat(big_pow(2, static_cast<unsigned long>(k - 1)), den);

    // points: a_1 = sum of the first m gap lengths, a_{p+1} = a_p + len[p]
    std::vector<Angle> pts;
    pts.reserve(static_cast<std::size_t>(n));
    BigRat x = 0;
    for (long p = 1; p <= m; ++p) x += len[static_cast<std::size_t>(p % n)];
    for (long p = 1; p <= n; ++p) {
        pts.push_back(Angle(x));
        x += len[static_cast<std::size_t>(p % n)];
    }

    RotationSet X = make_rotation_set(2, {pts});
    if (X.rotation_number != t)
        throw std::logic_error("goldberg_orbit: constructed orbit has wrong rotation number");
    return X;
}

std::pair<BigRat, BigRat> gap_length_extremes(const Angle& t) {
    const unsigned long n = static_cast<unsigned long>(t.den());
    const BigInt den = big_pow(2, n) - 1;
    return {BigRat(1, den), BigRat(big_pow(2, n - 1), den)};
}

BigRat plateau_length(const Angle& t) {
    const unsigned long n = static_cast<unsigned long>(t.den());
    return BigRat(1, 2 * (big_pow(2, n) - 1));
}

bool orbit_avoids(const Angle& x, const BigInt& d, const std::vector<CircleInterval>& intervals) {
    // treat the intervals as open regardless of stored end flags
    auto hits = [&](const Angle& p) {
        for (const auto& iv : intervals) {
            CircleInterval open{iv.lo, iv.hi, false, false};
            if (open.contains(p)) return true;
        }
        return false;
    };
    Orbit o = orbit_under_mul(x, d);
    for (const auto& p : o.preperiod)
        if (hits(p)) return false;
    for (const auto& p : o.cycle)
        if (hits(p)) return false;
    return true;
}

RotationSet x_d_of(const std::vector<CircleInterval>& intervals, const BigInt& d) {
    if (BigInt(intervals.size()) != d - 1)
        throw std::invalid_argument("x_d_of: exact path needs d-1 intervals of length 1/d");
    PLCircleMap g = monotone_extension(intervals, d);
    RotationResult rr = g.rotation_number();
    if (!rr.exact)
        throw std::logic_error("x_d_of: rotation number iteration did not close up");
    Angle t(rr.value);

    std::vector<std::vector<Angle>> kept;
    for (auto& o : rotation_orbits_with_number(t, d)) {
        bool avoid = true;
        for (const auto& p : o)
            if (!orbit_avoids(p, d, intervals)) { avoid = false; break; }
        if (avoid) kept.push_back(std::move(o));
    }
    if (kept.empty())
        throw std::logic_error("x_d_of: no rotation orbit avoids the intervals (defect)");
    return make_rotation_set(d, std::move(kept));
}

std::vector<std::vector<Angle>> periodic_part(const std::vector<Angle>& points, const BigInt& d) {
    std::vector<Angle> kept;
    for (const auto& p : points)
        if (is_periodic_under_mul(p, d)) kept.push_back(p);
    std::vector<Angle> pool = sorted_unique(kept);
    std::vector<std::vector<Angle>> orbits;
    std::set<std::vector<Angle>> seen;
    for (const auto& p : pool) {
        std::vector<Angle> cyc;
        Angle cur = p;
        do {
            cyc.push_back(cur);
            cur = cur.mul_by(d);
        } while (cur != p);
        auto key = sorted_unique(cyc);
        if (seen.insert(key).second) orbits.push_back(canonical_orbit_order(key, d));
    }
    return orbits;
}

RotationSet reduce(const RotationSet& X) {
    auto orbits = periodic_part(X.points(), X.d);
    if (orbits.empty()) throw std::invalid_argument("reduce: no periodic points");
    return make_rotation_set(X.d, std::move(orbits));
}

DeploymentSequence deployment_sequence(const RotationSet& X) {
    if (X.d < 2) throw std::invalid_argument("deployment_sequence: undefined for d < 2");
    const long buckets = static_cast<long>(X.d - 1);
    DeploymentSequence seq;
    seq.counts.assign(static_cast<std::size_t>(buckets), 0);
    for (const auto& p : X.points()) {
        long j = static_cast<long>(rat_floor(p.value() * BigRat(buckets)));
        ++seq.counts[static_cast<std::size_t>(j)];
    }
    return seq;
}

bool compatible(const std::vector<Angle>& o1, const std::vector<Angle>& o2, const BigInt& d) {
    std::vector<Angle> a = sorted_unique(o1), b = sorted_unique(o2);
    auto r1 = orbit_rotation_number(a, d), r2 = orbit_rotation_number(b, d);
    if (!r1 || !r2) throw std::invalid_argument("compatible: inputs must be rotation orbits");
    if (*r1 != *r2) throw std::invalid_argument("compatible: rotation numbers differ");
    if (a == b) return true; // identical orbits: compatible by convention

    auto each_gap_has_one = [](const std::vector<Angle>& host, const std::vector<Angle>& guest) {
        const std::size_t n = host.size();
        for (std::size_t i = 0; i < n; ++i) {
            CircleInterval gap{host[i], host[(i + 1) % n], false, false};
            long cnt = 0;
            for (const auto& q : guest)
                if (n == 1 ? q != host[0] : gap.contains(q)) ++cnt;
            if (cnt != 1) return false;
        }
        return true;
    };
    return each_gap_has_one(a, b) && each_gap_has_one(b, a);
}

} // namespace antipode
