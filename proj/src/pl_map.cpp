#include "antipode/pl_map.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace antipode {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

} // namespace

PLCircleMap::PLCircleMap(std::vector<BigRat> xs, std::vector<BigRat> vs, BigInt degree)
    : xs_(std::move(xs)), vs_(std::move(vs)), degree_(std::move(degree)) {
    if (xs_.empty() || xs_.size() != vs_.size())
        throw std::invalid_argument("PLCircleMap: breakpoint/value size mismatch");
    if (degree_ < 0) throw std::invalid_argument("PLCircleMap: negative degree");
    const BigRat& w = xs_.front();
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (!(xs_[i] < xs_[i + 1]))
            throw std::invalid_argument("PLCircleMap: breakpoints not strictly increasing");
        if (vs_[i] > vs_[i + 1])
            throw std::invalid_argument("PLCircleMap: lift not monotone");
    }
    if (!(xs_.back() < w + 1))
        throw std::invalid_argument("PLCircleMap: breakpoints must span less than one period");
    if (vs_.back() > vs_.front() + BigRat(degree_))
        throw std::invalid_argument("PLCircleMap: lift not monotone across the wrap segment");
}

PLCircleMap PLCircleMap::multiplication(const BigInt& d) {
    if (d < 1) throw std::invalid_argument("multiplication: degree must be >= 1");
    return PLCircleMap({BigRat(0)}, {BigRat(0)}, d);
}

PLCircleMap PLCircleMap::rigid_rotation(const BigRat& alpha) {
    return PLCircleMap({BigRat(0)}, {alpha}, 1);
}

BigRat PLCircleMap::window_lift(const BigRat& x) const {
    // binary search for the segment containing x in [xs_[0], xs_[0]+1)
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
    // x >= xs_[0] by contract, so i >= 1; segment starts at xs_[i-1]
    --i;
    BigRat x0 = xs_[i], v0 = vs_[i];
    BigRat x1, v1;
    if (i + 1 < xs_.size()) {
        x1 = xs_[i + 1];
        v1 = vs_[i + 1];
    } else {
        x1 = xs_.front() + 1;
        v1 = vs_.front() + BigRat(degree_);
    }
    if (x == x0) return v0;
    return v0 + (x - x0) * (v1 - v0) / (x1 - x0);
}

BigRat PLCircleMap::lift(const BigRat& x) const {
    BigInt k = rat_floor(x - xs_.front());
    return window_lift(x - BigRat(k)) + BigRat(k * degree_);
}

bool PLCircleMap::slopes_integral() const {
    auto integral = [](const BigRat& r) { return rat_den(r) == 1; };
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
        if (!integral((vs_[i + 1] - vs_[i]) / (xs_[i + 1] - xs_[i]))) return false;
    BigRat x1 = xs_.front() + 1, v1 = vs_.front() + BigRat(degree_);
    if (x1 != xs_.back() && !integral((v1 - vs_.back()) / (x1 - xs_.back()))) return false;
    return true;
}

PLCircleMap PLCircleMap::conjugate_by_rotation(const BigRat& alpha) const {
    // h(x) = g(x - alpha) + alpha: every graph vertex shifts diagonally, and
    // the window base is arbitrary, so no renormalization is needed.
    std::vector<BigRat> xs = xs_, vs = vs_;
    for (auto& x : xs) x += alpha;
    for (auto& v : vs) v += alpha;
    return PLCircleMap(std::move(xs), std::move(vs), degree_);
}

RotationResult PLCircleMap::rotation_number(long max_iter) const {
    if (degree_ != 1)
        throw std::invalid_argument("rotation_number: map must have degree one");
    if (slopes_integral()) return rotation_number_fast(max_iter);
    return rotation_number_generic(max_iter);
}

RotationResult PLCircleMap::rotation_number_fast(long max_iter) const {
    // All slopes are integers, so with D = lcm of all breakpoint denominators
    // every orbit of the window base stays on the 1/D lattice: exact integer
    // iteration with guaranteed eventual periodicity.
    BigInt D = 1;
    for (const auto& x : xs_) D = lcm(D, rat_den(x));
    for (const auto& v : vs_) D = lcm(D, rat_den(v));

    std::size_t k = xs_.size();
    std::vector<BigInt> XD(k + 1), VD(k + 1), S(k);
    for (std::size_t i = 0; i < k; ++i) {
        XD[i] = rat_num(xs_[i] * BigRat(D));
        VD[i] = rat_num(vs_[i] * BigRat(D));
    }
    XD[k] = XD[0] + D;
    VD[k] = VD[0] + degree_ * D;
    for (std::size_t i = 0; i < k; ++i) {
        BigInt dx = XD[i + 1] - XD[i];
        S[i] = (VD[i + 1] - VD[i]) / dx; // exact: slope integral by dispatch
    }

    const BigInt wD = XD[0];
    BigInt repD = wD, LD = 0;
    std::unordered_map<BigInt, std::pair<long, BigInt>, BigIntHash> seen;
    for (long n = 0; n <= max_iter; ++n) {
        auto it = seen.find(repD);
        if (it != seen.end()) {
            auto [j, LDj] = it->second;
            BigRat rho = rat_frac(BigRat(LD - LDj, D * (n - j)));
            return {rho, true, rho, rho, n};
        }
        seen.emplace(repD, std::make_pair(n, LD));
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(XD.begin(), XD.begin() + static_cast<long>(k), repD) - XD.begin());
        --i;
        BigInt yD = VD[i] + S[i] * (repD - XD[i]);
        LD += yD - repD;
        repD = yD - floor_div(yD - wD, D) * D;
    }
    BigRat mean(LD, BigInt(max_iter) * D);
    RotationResult r;
    r.value = rat_frac(mean);
    r.exact = false;
    r.lo = mean - BigRat(1, max_iter);
    r.hi = mean + BigRat(1, max_iter);
    r.iterations = max_iter;
    return r;
}

RotationResult PLCircleMap::rotation_number_generic(long max_iter) const {
    const BigRat w = xs_.front();
    BigRat rep = w, L = 0;
    std::unordered_map<BigRat, std::pair<long, BigRat>, BigRatHash> seen;
    for (long n = 0; n <= max_iter; ++n) {
        auto it = seen.find(rep);
        if (it != seen.end()) {
            auto [j, Lj] = it->second;
            BigRat rho = rat_frac((L - Lj) / BigRat(n - j));
            return {rho, true, rho, rho, n};
        }
        seen.emplace(rep, std::make_pair(n, L));
        BigRat y = window_lift(rep);
        L += y - rep;
        rep = y - BigRat(rat_floor(y - w));
    }
    BigRat mean = L / BigRat(max_iter);
    RotationResult r;
    r.value = rat_frac(mean);
    r.exact = false;
    r.lo = mean - BigRat(1, max_iter);
    r.hi = mean + BigRat(1, max_iter);
    r.iterations = max_iter;
    return r;
}

PLCircleMap monotone_extension(const std::vector<CircleInterval>& intervals, const BigInt& d) {
    if (d < 2) throw std::invalid_argument("monotone_extension: need d >= 2");
    if (intervals.empty() || BigInt(intervals.size()) > d - 1)
        throw std::invalid_argument("monotone_extension: need between 1 and d-1 intervals");
    const BigRat unit(1, d);
    for (const auto& iv : intervals)
        if (iv.length() != unit)
            throw std::invalid_argument("monotone_extension: every interval must have length 1/d");

    std::vector<CircleInterval> sorted = intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const CircleInterval& a, const CircleInterval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const BigRat lo = sorted[i].lo.value();
        const BigRat next_lo = (i + 1 < sorted.size()) ? sorted[i + 1].lo.value()
                                                       : sorted[0].lo.value() + 1;
        if (lo + unit > next_lo)
            throw std::invalid_argument("monotone_extension: intervals overlap");
    }

    // walk one period starting at the first interval's left endpoint: slope 0
    // across each collapsed interval, slope d in between
    const BigRat w = sorted[0].lo.value();
    std::vector<BigRat> xs, vs;
    BigRat x = w, v = BigRat(d) * w;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        xs.push_back(x);
        vs.push_back(v);
        BigRat hi = x + unit; // lift coordinate of the interval's right end
        BigRat next_lo = (i + 1 < sorted.size()) ? sorted[i + 1].lo.value() : w + 1;
        if (hi < next_lo) {
            xs.push_back(hi);
            vs.push_back(v);
        }
        v += BigRat(d) * (next_lo - hi);
        x = next_lo;
    }
    return PLCircleMap(std::move(xs), std::move(vs), d - BigInt(sorted.size()));
}

SemiconjugacyResult semiconjugacy_to_md(const PLCircleMap& g, const Angle& x0, const Angle& x,
                                        unsigned n) {
    const BigInt d = g.degree();
    if (d < 2) throw std::invalid_argument("semiconjugacy_to_md: map must have degree >= 2");
    if (g.apply(x0) != x0)
        throw std::invalid_argument("semiconjugacy_to_md: x0 is not a fixed point");

    const BigRat xhat0 = x0.value();
    BigRat K = g.lift(xhat0) - xhat0;
    if (rat_den(K) != 1)
        throw std::logic_error("semiconjugacy_to_md: fixed point lift offset not integral");

    // sup |g_adj(y) - d*y| over one period: attained at a graph vertex
    BigRat C0 = 0;
    const auto& xs = g.breakpoint_xs();
    const auto& vs = g.breakpoint_vals();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        BigRat phi = vs[i] - K - BigRat(d) * xs[i];
        if (phi < 0) phi = -phi;
        if (phi > C0) C0 = phi;
    }

    BigRat cur = xhat0 + (x - x0).value();
    for (unsigned i = 0; i < n; ++i) cur = g.lift(cur) - K;

    BigInt dn = big_pow(d, n);
    SemiconjugacyResult out;
    out.value = (cur - xhat0) / BigRat(dn);
    out.error_bound = C0 / (BigRat(dn) * BigRat(d - 1));
    return out;
}

} // namespace antipode
