#include "antipode/map_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace antipode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHuge = 1e150; // saturate to infinity beyond this modulus

Complex infinity_point() { return {kInf, kInf}; }

// Radius of a disk around 0 on which f_q is strictly contracting:
// |f(z)| <= |z|^2 (|q|+r)/(1-|q|r) < |z| whenever r^2 + 2|q|r - 1 < 0.
double contracting_radius(double mod_q) {
    return 0.9 * (std::sqrt(mod_q * mod_q + 1.0) - mod_q);
}

} // namespace

bool is_infinite(Complex z) {
    return std::isinf(z.real()) || std::isinf(z.imag());
}

Complex antipode_of(Complex z) {
    if (is_infinite(z)) return {0.0, 0.0};
    if (z == Complex(0.0, 0.0)) return infinity_point();
    return -1.0 / std::conj(z);
}

double chordal_distance(Complex a, Complex b) {
    const bool ia = is_infinite(a), ib = is_infinite(b);
    if (ia && ib) return 0.0;
    if (ia || ib) {
        const Complex& finite = ia ? b : a;
        return 2.0 / std::sqrt(1.0 + std::norm(finite));
    }
    return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

Complex f_eval(Complex q, Complex z) {
    if (is_infinite(z) || std::abs(z) > kHuge) return infinity_point();
    const Complex qc = std::conj(q);
    if (std::abs(z) > 2.0 * std::max(1.0, std::abs(q))) {
        // reciprocal chart: f(1/w) = (q w - 1) / (w^2 (w + conj(q)))
        const Complex w = 1.0 / z;
        const Complex den = w * w * (w + qc);
        if (den == Complex(0.0, 0.0)) return infinity_point();
        const Complex value = (q * w - 1.0) / den;
        return std::abs(value) > kHuge ? infinity_point() : value;
    }
    const Complex den = 1.0 + qc * z;
    if (den == Complex(0.0, 0.0)) return infinity_point();
    const Complex value = z * z * (q - z) / den;
    return std::abs(value) > kHuge ? infinity_point() : value;
}

Complex f_prime(Complex q, Complex z) {
    if (is_infinite(z)) return infinity_point();
    const Complex qc = std::conj(q);
    const double a = std::norm(q);
    const Complex den = 1.0 + qc * z;
    if (den == Complex(0.0, 0.0)) return infinity_point();
    const Complex num = 2.0 * q * z - 3.0 * z * z + a * z * z - 2.0 * qc * z * z * z;
    return num / (den * den);
}

double spherical_derivative(Complex q, Complex z) {
    if (is_infinite(z)) {
        // at infinity f has a triple pole onto itself; derivative of the
        // chart map w -> w^2 (w+conj q)/(q w - 1) at w = 0 is zero
        return 0.0;
    }
    const Complex fz = f_eval(q, z);
    const Complex dz = f_prime(q, z);
    if (is_infinite(fz) || is_infinite(dz)) {
        // pole of f: switch the target to the reciprocal chart, where the
        // relevant derivative is d(1/f)/dz = -f'/f^2; with f = n/d and
        // f' = p/d^2 this is -p/n^2, independent of the vanishing d
        const Complex n = z * z * (q - z);
        const double a = std::norm(q);
        const Complex p = 2.0 * q * z - 3.0 * z * z + a * z * z -
                          2.0 * std::conj(q) * z * z * z;
        if (n == Complex(0.0, 0.0)) return kInf;
        return std::abs(p / (n * n)) * (1.0 + std::norm(z));
    }
    return std::abs(dz) * (1.0 + std::norm(z)) / (1.0 + std::norm(fz));
}

MapParam MapParam::from_q(Complex q) {
    if (q == Complex(0.0, 0.0))
        throw std::domain_error("MapParam: q = 0 is degenerate (f(z) = -z^3)");
    MapParam m;
    m.q = q;
    m.a = std::norm(q);
    const double root = std::sqrt(9.0 + 10.0 * m.a + m.a * m.a);
    m.c0 = ((m.a - 3.0 + root) / (4.0 * m.a)) * q;
    m.cinf = ((m.a - 3.0 - root) / (4.0 * m.a)) * q;
    const double y = q.imag();
    const double s = std::sqrt(y * y + 1.0);
    m.fix_plus = Complex(0.0, y + s);
    m.fix_minus = Complex(0.0, y - s);
    return m;
}

std::pair<Complex, Complex> critical_points(Complex q) {
    const MapParam m = MapParam::from_q(q);
    return {m.c0, m.cinf};
}

FixedPoints fixed_points(Complex q) {
    FixedPoints fp;
    const double y = q.imag();
    const double s = std::sqrt(y * y + 1.0);
    fp.plus = Complex(0.0, y + s);
    fp.minus = Complex(0.0, y - s);
    fp.mult_plus = f_prime(q, fp.plus);
    fp.mult_minus = f_prime(q, fp.minus);
    return fp;
}

namespace {

// Evaluate f^p and the chain-rule derivative along the way.
struct IterateResult {
    Complex value;
    Complex derivative;
    bool finite = true;
};

IterateResult iterate_with_derivative(Complex q, Complex z, int p) {
    IterateResult r{z, {1.0, 0.0}, true};
    for (int i = 0; i < p; ++i) {
        const Complex d = f_prime(q, r.value);
        if (is_infinite(d) || is_infinite(r.value)) {
            r.finite = false;
            return r;
        }
        r.derivative *= d;
        r.value = f_eval(q, r.value);
    }
    if (is_infinite(r.value)) r.finite = false;
    return r;
}

// Newton refinement of a period-p point near z; returns false on failure.
bool refine_periodic(Complex q, int p, Complex& z) {
    for (int it = 0; it < 40; ++it) {
        const IterateResult r = iterate_with_derivative(q, z, p);
        if (!r.finite) return false;
        const Complex g = r.value - z;
        const Complex dg = r.derivative - 1.0;
        if (std::abs(dg) < 1e-14) return false;
        const Complex step = g / dg;
        z -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(z))) return true;
        if (std::abs(z) > 1e8) return false;
    }
    return false;
}

Complex cycle_multiplier(Complex q, Complex z, int p) {
    return iterate_with_derivative(q, z, p).derivative;
}

bool cycles_self_antipodal(const std::vector<Complex>& cycle) {
    for (const Complex& z : cycle) {
        double best = kInf;
        for (const Complex& w : cycle) best = std::min(best, chordal_distance(antipode_of(z), w));
        if (best > 1e-7) return false;
    }
    return true;
}

} // namespace

OrbitClass classify_orbit(Complex q, Complex z0, int budget, double eps) {
    if (budget < 1) throw std::invalid_argument("classify_orbit: budget must be >= 1");
    OrbitClass out;
    const double r0 = contracting_radius(std::abs(q));
    const double zero_r = std::min(eps, r0);
    const double inf_r = 1.0 / zero_r;

    Complex z = z0;
    Complex anchor = z;
    int power = 1, lam = 0;
    int refine_attempts = 0;

    for (int n = 0; n <= budget; ++n) {
        out.iterations_used = n;
        if (std::isnan(z.real()) || std::isnan(z.imag())) return out; // defect guard
        const double mod = std::abs(z);
        if (is_infinite(z) || mod > inf_r) {
            out.kind = OrbitKind::ToInfinity;
            return out;
        }
        if (mod < zero_r) {
            out.kind = OrbitKind::ToZero;
            return out;
        }

        // Brent cycle search
        if (lam == power) {
            anchor = z;
            power *= 2;
            lam = 0;
        }
        z = f_eval(q, z);
        ++lam;
        if (chordal_distance(anchor, z) < 1e-9 && refine_attempts < 12) {
            ++refine_attempts;
            Complex zhat = z;
            if (refine_periodic(q, lam, zhat)) {
                // reduce to the minimal period among divisors
                int period = lam;
                for (int d = 1; d < lam; ++d) {
                    if (lam % d != 0) continue;
                    const IterateResult r = iterate_with_derivative(q, zhat, d);
                    if (r.finite && chordal_distance(r.value, zhat) < 1e-10) {
                        period = d;
                        break;
                    }
                }
                // the superattracting fixed point at 0 counts as ToZero, not
                // as a cycle (orbits can park beside it before entering the
                // eps ball that the direct test below uses)
                if (period == 1 && std::abs(zhat) < r0) {
                    out.kind = OrbitKind::ToZero;
                    return out;
                }
                const Complex mu = cycle_multiplier(q, zhat, period);
                if (std::abs(mu) < 1.0 - 1e-9) {
                    out.kind = OrbitKind::AttractingCycle;
                    out.period = period;
                    out.multiplier = mu;
                    out.cycle.clear();
                    Complex w = zhat;
                    for (int i = 0; i < period; ++i) {
                        out.cycle.push_back(w);
                        w = f_eval(q, w);
                    }
                    out.self_antipodal = cycles_self_antipodal(out.cycle);
                    return out;
                }
            }
            if (chordal_distance(anchor, z) == 0.0) return out; // parked on a repelling cycle
        }
    }
    return out;
}

const char* param_class_name(ParamClass c) {
    switch (c) {
        case ParamClass::Central: return "central";
        case ParamClass::MandelbrotType: return "mandelbrot";
        case ParamClass::TricornType: return "tricorn";
        case ParamClass::CaptureZero: return "capture-zero";
        case ParamClass::CaptureInfinity: return "capture-infinity";
        case ParamClass::HermanCandidate: return "herman-candidate";
    }
    return "unknown";
}

ParamVerdict classify_parameter(Complex q, int budget, double eps) {
    if (q == Complex(0.0, 0.0)) {
        // Degenerate centre of the central component: f_0(z) = -z^3 has no
        // free critical points, and 0 and infinity are superattracting.
        ParamVerdict v;
        v.kind = ParamClass::Central;
        v.critical_orbit.kind = OrbitKind::ToZero;
        return v;
    }
    const MapParam m = MapParam::from_q(q);
    ParamVerdict v;
    v.critical_orbit = classify_orbit(q, m.c0, budget, eps);

    switch (v.critical_orbit.kind) {
        case OrbitKind::AttractingCycle:
            v.kind = v.critical_orbit.self_antipodal ? ParamClass::TricornType
                                                     : ParamClass::MandelbrotType;
            return v;
        case OrbitKind::ToInfinity:
            // c0 can never lie in the immediate basin of infinity, so a
            // critical orbit escaping outward is always a capture
            v.kind = ParamClass::CaptureInfinity;
            return v;
        case OrbitKind::Undecided:
            v.kind = ParamClass::HermanCandidate;
            return v;
        case OrbitKind::ToZero:
            break;
    }

    // Central versus capture-to-zero. Heuristic: in the central component the
    // immediate basin of 0 is a topological disk containing both 0 and c0, so
    // the whole segment [0, c0] should converge to 0; a capture island is
    // separated from that basin by the Julia set, which the segment must
    // cross. Misclassification near component boundaries is possible.
    const double r0 = contracting_radius(std::abs(q));
    const double zero_r = std::min(eps, r0);
    Complex z = m.c0;
    double excursion = 0.0;
    for (int n = 0; n <= v.critical_orbit.iterations_used; ++n) {
        excursion = std::max(excursion, std::abs(z));
        if (std::abs(z) < zero_r) break;
        z = f_eval(q, z);
    }
    v.max_excursion = excursion;
    v.kind = ParamClass::Central;
    for (int k = 1; k < 16; ++k) {
        const Complex zs = (static_cast<double>(k) / 16.0) * m.c0;
        if (classify_orbit(q, zs, budget, eps).kind != OrbitKind::ToZero) {
            v.kind = ParamClass::CaptureZero;
            break;
        }
    }
    return v;
}

Angle cycle_rotation_number(const std::vector<Complex>& cycle) {
    const std::size_t n = cycle.size();
    if (n == 0) throw std::invalid_argument("cycle_rotation_number: empty cycle");
    if (n == 1) return Angle(BigRat(0));
    // rank the points by argument around the origin
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::arg(cycle[i]) < std::arg(cycle[j]);
    });
    std::vector<std::size_t> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = pos;
    // dynamical successor of cycle[i] is cycle[i+1]; its circular advance
    // must be the same for every i
    const std::size_t k = (rank[1] + n - rank[0]) % n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if ((rank[j] + n - rank[i]) % n != k)
            throw std::runtime_error("cycle_rotation_number: cycle is not rotational");
    }
    return Angle(BigRat(static_cast<long>(k), static_cast<long>(n)));
}

double large_q_rotation_check(Complex q, double t_expected, double eps,
                              int radial_samples, int angular_samples) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("large_q_rotation_check: eps must be in (0,1)");
    const Complex rot = std::polar(1.0, 2.0 * std::numbers::pi * t_expected);
    double worst = 0.0;
    for (int i = 0; i < radial_samples; ++i) {
        // log-spaced radii across [eps, 1/eps]
        const double u = static_cast<double>(i) / (radial_samples - 1);
        const double r = eps * std::pow(1.0 / (eps * eps), u);
        for (int j = 0; j < angular_samples; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / angular_samples;
            const Complex z = std::polar(r, phi);
            worst = std::max(worst, chordal_distance(f_eval(q, z), rot * z));
        }
    }
    return worst;
}

} // namespace antipode
