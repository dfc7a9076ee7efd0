#include "antipode/ray_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace antipode {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// --- Böttcher product -------------------------------------------------------
//
// log β(z) = Log(q z) + Σ_{k≥0} 2^{-(k+1)} Log u_k,
// u_k = (1 - z_k/q)/(1 + conj(q) z_k)  with  z_k = f^k(z).
//
// Squaring a principal 2^{-(k+1)} power gives the matching 2^{-k} power of the
// same factor, so the value automatically satisfies β(f(z)) = β(z)²; the
// normalization β(z)/(qz) -> 1 holds because every factor tends to 1.

struct BoettcherCore {
    Complex log_beta{0.0, 0.0};
    Complex dlog{0.0, 0.0}; // d/dz log β
    bool ok = false;
    int terms = 0;
};

BoettcherCore boettcher_core(Complex q, Complex z, bool want_deriv, int max_terms = 300) {
    BoettcherCore out;
    if (z == Complex(0.0, 0.0)) return out; // caller handles β(0) = 0
    const Complex qc = std::conj(q);
    const double qmod = std::abs(q);
    const double scale = 1.0 / qmod + qmod;

    Complex sum = std::log(q * z);
    Complex dsum = want_deriv ? 1.0 / z : Complex(0.0, 0.0);
    Complex t = z;       // current orbit point
    Complex D(1.0, 0.0); // (f^k)'(z)
    double weight = 0.5; // 2^{-(k+1)}

    for (int k = 0; k < max_terms; ++k) {
        if (!finite(t) || is_infinite(t)) return out;
        const Complex one_minus = 1.0 - t / q;
        const Complex one_plus = 1.0 + qc * t;
        const Complex u = one_minus / one_plus;
        const double um = std::abs(u);
        if (!(um > 1e-14) || !(um < 1e14)) return out;
        if (std::abs(std::arg(u)) > 3.0) return out; // too close to the branch cut
        sum += weight * std::log(u);
        if (want_deriv) {
            // u'/u = -((1+|q|²)/q) (f^k)'(z) / ((1 - z_k/q)(1 + conj(q) z_k))
            const Complex num = -((1.0 + qmod * qmod) / q) * D;
            dsum += weight * num / (one_minus * one_plus);
        }
        out.terms = k + 1;
        if (std::abs(t) * scale < 1e-17) {
            out.ok = true;
            break;
        }
        if (want_deriv) D *= f_prime(q, t);
        t = f_eval(q, t);
        weight *= 0.5;
    }
    if (!out.ok) return out; // never reached the tail bound
    out.log_beta = sum;
    out.dlog = dsum;
    return out;
}

// Inverse of β near 0: solve β(z) = w for |w| small.
Complex boettcher_inverse(Complex q, Complex w) {
    Complex z = w / q; // leading-order model β(z) ≈ q z
    const Complex logw = std::log(w);
    for (int it = 0; it < 30; ++it) {
        BoettcherCore c = boettcher_core(q, z, true);
        if (!c.ok) throw std::runtime_error("boettcher_inverse: evaluation left its domain");
        // branch-safe error: log β is only canonical modulo 2πi, and the target
        // may sit on the principal cut, so wrap the imaginary part
        Complex e = c.log_beta - logw;
        e = Complex(e.real(), std::remainder(e.imag(), kTwoPi));
        z -= e / c.dlog;
        if (std::abs(e) < 1e-13) return z;
    }
    throw std::runtime_error("boettcher_inverse: no convergence");
}

double mod_two_pi(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0) y += kTwoPi;
    return y;
}

// Doubling orbit of theta as ray angles in turns, O(1) lookup per level.
class DoublingAngles {
public:
    explicit DoublingAngles(const Angle& theta) {
        Orbit o = orbit_under_mul(theta, 2);
        for (const Angle& a : o.preperiod) head_.push_back(a.to_double());
        for (const Angle& a : o.cycle) cycle_.push_back(a.to_double());
    }
    double turns(std::size_t k) const {
        if (k < head_.size()) return head_[k];
        return cycle_[(k - head_.size()) % cycle_.size()];
    }

private:
    std::vector<double> head_, cycle_;
};

// Core ray tracer: Newton on f^m(w) = B at each sub-level, continuing from the
// previous sample. No bifurcation probing here (the public wrapper adds it).
RayTrace trace_core(Complex q, const MapParam& m, const Angle& theta, int depth, int sublevels,
                    double r0) {
    RayTrace tr;
    tr.theta = theta;
    tr.base_potential = r0;
    tr.sublevels = sublevels;
    const DoublingAngles angles(theta);
    const int total = depth * sublevels;
    tr.points.reserve(static_cast<std::size_t>(total) + 1);

    // Newton continuation of f^kk(w) = B starting from the previous sample.
    // Near a critical sub-level the derivative collapses; the step cap keeps
    // the iteration on the branch it is continuing.
    const auto continue_to = [&](int kk, Complex B, Complex& w) {
        Complex wn = w;
        for (int it = 0; it < 60; ++it) {
            Complex t = wn, D(1.0, 0.0);
            for (int i = 0; i < kk; ++i) {
                D *= f_prime(q, t);
                t = f_eval(q, t);
                if (!finite(t)) return false;
            }
            if (D == Complex(0.0, 0.0)) return false;
            const Complex F = t - B;
            Complex step = F / D;
            const double cap = 0.1 * (1.0 + std::abs(wn));
            const double sn = std::abs(step);
            if (sn > cap) step *= cap / sn;
            wn -= step;
            if (!finite(wn)) return false;
            if (std::abs(step) <= 3e-14 * (1.0 + std::abs(wn)) ||
                std::abs(F) <= 1e-13 * (1.0 + std::abs(B))) {
                w = wn;
                return true;
            }
        }
        return false;
    };

    Complex w(0.0, 0.0);
    for (int j = 0; j <= total; ++j) {
        const int kk = (j + sublevels - 1) / sublevels; // ceil(j / sublevels)
        const double angle_kk = kTwoPi * angles.turns(static_cast<std::size_t>(kk));

        if (j == 0) {
            try {
                w = boettcher_inverse(q, std::polar(r0, angle_kk));
            } catch (const std::runtime_error&) {
                break;
            }
        } else {
            // Descend the sub-level step adaptively. In the level-kk frame the
            // whole step is a radius descent at fixed angle: the previous
            // sample sits at exponent 2^(kk - (j-1)/P) there (squaring the
            // level-(kk-1) potential doubles the angle and the exponent), so
            // parameterize by s in [0,1] and bisect the advance whenever the
            // Newton continuation fails. Rays that squeeze past a critical
            // pinch need micro-steps comparable to the pinch distance.
            bool stuck = false;
            double s_lo = 0.0;
            int attempts = 0;
            while (s_lo < 1.0) {
                double ds = 1.0 - s_lo;
                bool advanced = false;
                while (!advanced) {
                    if (++attempts > 64 || ds < 1e-4) {
                        stuck = true;
                        break;
                    }
                    const double expo =
                        std::exp2(kk - (static_cast<double>(j - 1) + s_lo + ds) / sublevels);
                    Complex B;
                    try {
                        B = boettcher_inverse(q, std::polar(std::pow(r0, expo), angle_kk));
                    } catch (const std::runtime_error&) {
                        ds *= 0.5;
                        continue;
                    }
                    Complex w_try = w;
                    if (continue_to(kk, B, w_try)) {
                        w = w_try;
                        s_lo += ds;
                        advanced = true;
                    } else {
                        ds *= 0.5;
                    }
                }
                if (stuck) break;
            }
            if (stuck) break; // truncated; landing analysis still runs on what we have
        }

        // closest approach of the sample's forward orbit to the critical point
        {
            Complex t = w;
            for (int i = 0; i <= kk; ++i) {
                const double d = std::abs(t - m.c0);
                if (d < tr.closest_critical_approach) tr.closest_critical_approach = d;
                if (i < kk) t = f_eval(q, t);
            }
        }

        tr.points.push_back(w);
        tr.potentials.push_back(std::pow(r0, std::exp2(-static_cast<double>(j) / sublevels)));

        // once consecutive samples collapse the ray has landed to double
        // precision; deeper sub-levels would only amplify round-off
        const std::size_t np = tr.points.size();
        if (np >= 2 &&
            std::abs(tr.points[np - 1] - tr.points[np - 2]) < 1e-12 * (1.0 + std::abs(w)))
            break;
    }

    // landing: sample diameter collapse at the tail, Aitken-extrapolated
    const std::size_t n = tr.points.size();
    if (n >= 3) {
        const Complex z1 = tr.points[n - 3], z2 = tr.points[n - 2], z3 = tr.points[n - 1];
        if (std::abs(z3 - z2) < 1e-8 * (1.0 + std::abs(z3))) {
            tr.landed = true;
            const Complex denom = (z3 - z2) - (z2 - z1);
            tr.landing_point =
                (std::abs(denom) > 1e-300) ? z3 - (z3 - z2) * (z3 - z2) / denom : z3;
            // periodic angles land on periodic points: polish with Newton on f^p
            if (is_periodic_under_mul(theta, 2)) {
                const int p = static_cast<int>(period_under_mul(theta, 2));
                Complex zz = tr.landing_point;
                for (int it = 0; it < 30; ++it) {
                    Complex t = zz, D(1.0, 0.0);
                    for (int i = 0; i < p; ++i) {
                        D *= f_prime(q, t);
                        t = f_eval(q, t);
                    }
                    if (!finite(t) || std::abs(D - 1.0) < 1e-12) break;
                    const Complex step = (t - zz) / (D - 1.0);
                    zz -= step;
                    if (std::abs(step) < 1e-13 * (1.0 + std::abs(zz))) break;
                }
                if (finite(zz) && std::abs(zz - tr.landing_point) < 1e-4 * (1.0 + std::abs(zz)))
                    tr.landing_point = zz;
            }
        }
    }
    return tr;
}

} // namespace

Complex boettcher_log(Complex q, Complex z) {
    if (q == Complex(0.0, 0.0)) throw std::domain_error("boettcher: q = 0 is degenerate");
    if (z == Complex(0.0, 0.0))
        throw std::domain_error("boettcher_log: log β(0) is not finite");
    if (std::abs(z / q) > 0.7 || std::abs(std::conj(q) * z) > 0.7)
        throw std::domain_error("boettcher: z outside the superattracting regime");
    BoettcherCore c = boettcher_core(q, z, false);
    if (!c.ok) throw std::domain_error("boettcher: product did not converge");
    return c.log_beta;
}

Complex boettcher(Complex q, Complex z) {
    if (z == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    return std::exp(boettcher_log(q, z));
}

std::vector<Complex> cubic_roots(Complex a3, Complex a2, Complex a1, Complex a0) {
    if (a3 == Complex(0.0, 0.0)) throw std::invalid_argument("cubic_roots: leading coefficient 0");
    const Complex b2 = a2 / a3, b1 = a1 / a3, b0 = a0 / a3;
    auto p = [&](Complex w) { return ((w + b2) * w + b1) * w + b0; };
    // Durand-Kerner from a non-symmetric starting triple
    std::vector<Complex> r = {Complex(0.4, 0.9), Complex(0.4, 0.9) * Complex(0.4, 0.9),
                              Complex(0.4, 0.9) * Complex(0.4, 0.9) * Complex(0.4, 0.9)};
    const double scale = 1.0 + std::max({std::abs(b2), std::abs(b1), std::abs(b0)});
    for (auto& x : r) x *= scale;
    for (int it = 0; it < 300; ++it) {
        double moved = 0.0;
        for (int i = 0; i < 3; ++i) {
            Complex den(1.0, 0.0);
            for (int j = 0; j < 3; ++j)
                if (j != i) den *= r[i] - r[j];
            if (den == Complex(0.0, 0.0)) {
                r[i] += Complex(1e-8, 1e-8) * scale;
                continue;
            }
            const Complex delta = p(r[i]) / den;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14 * scale) break;
    }
    return r;
}

std::vector<Complex> preimages(Complex q, Complex v) {
    // z²(q - z) = v (1 + conj(q) z)  ⟺  -z³ + q z² - v conj(q) z - v = 0
    return cubic_roots(Complex(-1.0, 0.0), q, -v * std::conj(q), -v);
}

RayTrace internal_ray(Complex q, const Angle& theta, int depth, int sublevels) {
    if (depth < 1 || sublevels < 1)
        throw std::invalid_argument("internal_ray: depth and sublevels must be >= 1");
    const MapParam m = MapParam::from_q(q);
    const double r0 = 1e-4;
    RayTrace tr = trace_core(q, m, theta, depth, sublevels, r0);

    // A ray has distinct one-sided limits exactly when its trace runs into
    // the critical point, i.e. when the forward angle-orbit contains the
    // angle of the critical value ray. That angle is arg Φ(q); Φ's domain is
    // precisely the set of parameters whose immediate basin contains the free
    // critical point, and elsewhere no internal ray can bifurcate. (Probing
    // with nearby rays is tempting but unreliable: the landing map is only
    // Hölder, and traces that squeeze past the pinch can hop branches.)
    try {
        double thc = std::arg(param_map(q)) / kTwoPi;
        if (thc < 0) thc += 1.0;
        const Orbit o = orbit_under_mul(theta, 2);
        const auto hits = [thc](const Angle& a) {
            double d = std::abs(a.to_double() - thc);
            d = std::min(d, 1.0 - d);
            return d < 1e-5;
        };
        for (const Angle& a : o.preperiod)
            if (hits(a)) tr.bifurcated = true;
        for (const Angle& a : o.cycle)
            if (hits(a)) tr.bifurcated = true;
    } catch (const std::domain_error&) {
        // no critical point in the immediate basin
    } catch (const std::runtime_error&) {
    }
    return tr;
}

RayTrace external_ray(Complex q, const Angle& theta, int depth, int sublevels) {
    RayTrace tr = internal_ray(q, theta, depth, sublevels);
    for (Complex& z : tr.points) z = antipode_of(z);
    if (tr.landed) tr.landing_point = antipode_of(tr.landing_point);
    return tr;
}

MeridianCheck doubly_visible_check(Complex q, const Angle& theta_internal,
                                   const Angle& theta_external, int depth) {
    MeridianCheck mc;
    mc.internal_trace = internal_ray(q, theta_internal, depth);
    mc.external_trace = external_ray(q, theta_external, depth);
    if (mc.internal_trace.landed && mc.external_trace.landed) {
        const Complex a = mc.internal_trace.landing_point;
        const Complex b = mc.external_trace.landing_point;
        mc.gap = std::abs(a - b);
        if (mc.gap < 1e-6 * (1.0 + std::abs(a))) {
            mc.meridian = true;
            mc.common_point = 0.5 * (a + b);
        }
    }
    return mc;
}

JuliaFrame julia_frame(Complex q, int depth) {
    JuliaFrame fr;
    fr.q = q;
    // Land the ray just below angle 0; for every marked angle this approaches
    // η(0), including the ray-0-bifurcating case (real q > 0) where η(0) is
    // the left limit.
    const MapParam m = MapParam::from_q(q);
    const BigRat eps(1, 1 << 20);
    RayTrace t0 = trace_core(q, m, Angle(BigRat(0)) - eps, depth, 8, 1e-4);
    if (!t0.landed) throw std::runtime_error("julia_frame: the 0-ray did not land");
    const FixedPoints fp = fixed_points(q);
    const Complex cand =
        (std::abs(t0.landing_point - fp.plus) <= std::abs(t0.landing_point - fp.minus))
            ? fp.plus
            : fp.minus;
    if (std::abs(t0.landing_point - cand) > 0.1 * (1.0 + std::abs(cand)))
        throw std::runtime_error("julia_frame: 0-ray landing is not near a fixed point");
    fr.anchor = cand;

    std::vector<Complex> pre = preimages(q, fr.anchor);
    // drop the anchor itself, order the two cuts counterclockwise from it
    std::sort(pre.begin(), pre.end(), [&](Complex a, Complex b) {
        return std::abs(a - fr.anchor) < std::abs(b - fr.anchor);
    });
    Complex w1 = pre[1], w2 = pre[2];
    const double a0 = std::arg(fr.anchor);
    if (mod_two_pi(std::arg(w1) - a0) > mod_two_pi(std::arg(w2) - a0)) std::swap(w1, w2);
    fr.cut_third = w1;
    fr.cut_two_thirds = w2;
    return fr;
}

namespace {

int frame_digit(const JuliaFrame& fr, Complex p) {
    const double a0 = std::arg(fr.anchor);
    const double g1 = mod_two_pi(std::arg(fr.cut_third) - a0);
    const double g2 = mod_two_pi(std::arg(fr.cut_two_thirds) - a0);
    const double gp = mod_two_pi(std::arg(p) - a0);
    if (gp < g1) return 0;
    if (gp < g2) return 1;
    return 2;
}

} // namespace

double measure_x(const JuliaFrame& frame, Complex z, int digits) {
    double x = 0.0, w = 1.0 / 3.0;
    Complex t = z;
    for (int k = 0; k < digits; ++k) {
        x += w * frame_digit(frame, t);
        w /= 3.0;
        t = f_eval(frame.q, t);
        if (!finite(t) || is_infinite(t)) break;
    }
    return x;
}

std::vector<Angle> measure_cycle_x(const JuliaFrame& frame, const std::vector<Complex>& points) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("measure_cycle_x: empty point set");
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex img = f_eval(frame.q, points[i]);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::abs(img - points[j]);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        if (bd > 1e-5 * (1.0 + std::abs(img)))
            throw std::runtime_error("measure_cycle_x: set is not f-invariant");
        next[i] = best;
    }
    std::vector<Angle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> dig;
        std::size_t k = i;
        do {
            dig.push_back(frame_digit(frame, points[k]));
            k = next[k];
        } while (k != i && dig.size() <= n);
        if (k != i) throw std::runtime_error("measure_cycle_x: orbit did not close");
        out.push_back(Angle(periodic_digits_value(dig, 3)));
    }
    return out;
}

Angle set_rotation_number(Complex q, const std::vector<Complex>& points) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("set_rotation_number: empty point set");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::arg(points[a]) < std::arg(points[b]); });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

    std::size_t advance = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex img = f_eval(q, points[i]);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::abs(img - points[j]);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        if (bd > 1e-5 * (1.0 + std::abs(img)))
            throw std::runtime_error("set_rotation_number: set is not f-invariant");
        const std::size_t a = (rank[best] + n - rank[i]) % n;
        if (i == 0) advance = a;
        else if (a != advance)
            throw std::runtime_error("set_rotation_number: advance is not constant");
    }
    return Angle(BigRat(static_cast<long>(advance), static_cast<long>(n)));
}

Complex param_map_log(Complex q, int max_iter) {
    const MapParam m = MapParam::from_q(q); // throws for q = 0
    const Complex qc = std::conj(q);
    const double qmod = std::abs(q);
    const double scale = 1.0 / qmod + qmod;

    Complex sum = std::log(q * m.c0);
    Complex t = m.c0;
    double weight = 0.5;
    for (int k = 0; k < max_iter; ++k) {
        if (!finite(t) || is_infinite(t))
            throw std::domain_error("param_map: critical orbit left the plane");
        const Complex u = (1.0 - t / q) / (1.0 + qc * t);
        const double um = std::abs(u);
        if (!(um > 1e-14) || !(um < 1e14) || std::abs(std::arg(u)) > 3.0)
            throw std::domain_error("param_map: product factor left its branch domain");
        sum += weight * std::log(u);
        if (std::abs(t) * scale < 1e-17) return sum;
        t = f_eval(q, t);
        weight *= 0.5;
    }
    throw std::domain_error("param_map: critical orbit did not reach the convergence regime");
}

Complex param_map(Complex q, int max_iter) {
    if (q == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    return std::exp(param_map_log(q, max_iter));
}

namespace {

// One rung of the parameter-ray ladder: find q with
//   β(f^N(c0(q))) = exp(-sigma) · e^{2πi · frac(2^N Θ)},
// which says q² lies on the Θ-ray at potential exp(-sigma · 2^{-N}).
struct RungTarget {
    int level = 0;
    double sigma = 0.0;
    Complex w{0.0, 0.0};
};

// Forward-mode Wirtinger derivative: value plus d/dq and d/dconj(q).
// The deep composition's second derivatives grow so fast that finite
// differences stop working (no stencil width is simultaneously inside the
// linear zone and representable), so the Newton corrector needs the exact
// Jacobian propagated alongside the value.
struct QDual {
    Complex v{0.0, 0.0}, dq{0.0, 0.0}, dc{0.0, 0.0};
};

QDual dual_const(Complex c) { return {c, {0.0, 0.0}, {0.0, 0.0}}; }
QDual dual_var(Complex q) { return {q, {1.0, 0.0}, {0.0, 0.0}}; }

QDual operator+(const QDual& a, const QDual& b) { return {a.v + b.v, a.dq + b.dq, a.dc + b.dc}; }
QDual operator-(const QDual& a, const QDual& b) { return {a.v - b.v, a.dq - b.dq, a.dc - b.dc}; }
QDual operator*(const QDual& a, const QDual& b) {
    return {a.v * b.v, a.dq * b.v + a.v * b.dq, a.dc * b.v + a.v * b.dc};
}
QDual operator/(const QDual& a, const QDual& b) {
    const Complex inv = 1.0 / b.v;
    const Complex val = a.v * inv;
    return {val, (a.dq - val * b.dq) * inv, (a.dc - val * b.dc) * inv};
}
QDual operator*(double s, const QDual& a) { return {s * a.v, s * a.dq, s * a.dc}; }
QDual operator+(double s, const QDual& a) { return {s + a.v, a.dq, a.dc}; }
QDual operator-(double s, const QDual& a) { return {s - a.v, -a.dq, -a.dc}; }
QDual operator+(const QDual& a, double s) { return {a.v + s, a.dq, a.dc}; }
QDual operator-(const QDual& a, double s) { return {a.v - s, a.dq, a.dc}; }

QDual dual_conj(const QDual& a) {
    return {std::conj(a.v), std::conj(a.dc), std::conj(a.dq)};
}
QDual dual_log(const QDual& a) {
    const Complex inv = 1.0 / a.v;
    return {std::log(a.v), a.dq * inv, a.dc * inv};
}
QDual dual_exp(const QDual& a) {
    const Complex e = std::exp(a.v);
    return {e, a.dq * e, a.dc * e};
}
QDual dual_sqrt(const QDual& a) {
    const Complex s = std::sqrt(a.v);
    const Complex half = 0.5 / s;
    return {s, a.dq * half, a.dc * half};
}

// marked critical point c0 = s0(|q|^2) q as a dual value
QDual dual_c0(const QDual& q) {
    const QDual a = q * dual_conj(q);
    const QDual S = dual_sqrt(9.0 + 10.0 * a + a * a);
    const QDual s0 = (a - 3.0 + S) / (4.0 * a);
    return s0 * q;
}

bool rung_residual(Complex q, const RungTarget& t, Complex& out) {
    if (!finite(q) || std::abs(q) < 1e-6) return false;
    Complex z;
    try {
        z = MapParam::from_q(q).c0;
    } catch (const std::domain_error&) {
        return false;
    }
    // lean orbit loop: the critical orbit of a ray parameter stays in the
    // basin of 0, far from the pole and from overflow territory
    const Complex qc = std::conj(q);
    for (int i = 0; i < t.level; ++i) {
        const Complex den = 1.0 + qc * z;
        if (!(std::norm(den) > 1e-240)) return false;
        z = z * z * (q - z) / den;
        if (!(std::norm(z) < 1e240)) return false;
    }
    if (!finite(z)) return false;
    BoettcherCore c = boettcher_core(q, z, false);
    if (!c.ok) return false;
    out = std::exp(c.log_beta) - t.w;
    return true;
}

// Residual together with its exact Wirtinger derivatives (d/dq, d/dconj q).
bool rung_residual_ad(Complex q, const RungTarget& t, Complex& F, Complex& A, Complex& B) {
    if (!finite(q) || std::abs(q) < 1e-6) return false;
    const QDual qd = dual_var(q);
    const QDual qc = dual_conj(qd);
    QDual z = dual_c0(qd);
    for (int i = 0; i < t.level; ++i) {
        const QDual den = 1.0 + qc * z;
        if (!(std::norm(den.v) > 1e-240)) return false;
        z = z * z * (qd - z) / den;
        if (!(std::norm(z.v) < 1e240)) return false;
    }
    if (!finite(z.v)) return false;

    // dual mirror of boettcher_core (value-only branch checks)
    const double qmod = std::abs(q);
    const double scale = 1.0 / qmod + qmod;
    QDual sum = dual_log(qd * z);
    QDual tp = z;
    double weight = 0.5;
    bool tail = false;
    for (int k = 0; k < 300; ++k) {
        if (!finite(tp.v)) return false;
        const QDual u = (1.0 - tp / qd) / (1.0 + qc * tp);
        const double um = std::abs(u.v);
        if (!(um > 1e-14) || !(um < 1e14)) return false;
        if (std::abs(std::arg(u.v)) > 3.0) return false;
        sum = sum + weight * dual_log(u);
        if (std::abs(tp.v) * scale < 1e-17) {
            tail = true;
            break;
        }
        const QDual den = 1.0 + qc * tp;
        if (!(std::norm(den.v) > 1e-240)) return false;
        tp = tp * tp * (qd - tp) / den;
        weight *= 0.5;
    }
    if (!tail) return false;
    const QDual beta = dual_exp(sum);
    F = beta.v - t.w;
    A = beta.dq;
    B = beta.dc;
    return finite(F) && finite(A) && finite(B);
}

bool solve_rung(const RungTarget& t, Complex& q) {
    Complex F0, A, B;
    if (!rung_residual_ad(q, t, F0, A, B)) return false;
    for (int it = 0; it < 30; ++it) {
        if (std::abs(F0) < 1e-11) return true;
        // Exact Jacobian in the real coordinates (x, y) of q = x + iy:
        // dF/dx = A + B, dF/dy = i (A - B).
        const Complex colx = A + B;
        const Complex coly = Complex(0.0, 1.0) * (A - B);
        const double a = colx.real(), b = coly.real();
        const double c = colx.imag(), d = coly.imag();
        const double det = a * d - b * c;
        if (!(std::abs(det) > 1e-300)) {
            return false;
        }
        const double dx = -(d * F0.real() - b * F0.imag()) / det;
        const double dy = -(-c * F0.real() + a * F0.imag()) / det;
        Complex step(dx, dy);
        // backtracking line search; candidates only need the plain residual
        bool accepted = false;
        for (int half = 0; half < 7; ++half) {
            Complex qn = q + step, Fn;
            if (rung_residual(qn, t, Fn) && std::abs(Fn) < std::abs(F0)) {
                q = qn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            return false;
        }
        const bool small_step = std::abs(step) < 1e-13 * (1.0 + std::abs(q));
        if (!rung_residual_ad(q, t, F0, A, B)) {
            return false;
        }
        // Step collapsed below double resolution in q: accept if the residual
        // is a small fraction of the target modulus (the phase is then locked
        // to the ray's angle track, which is what keeps the ladder honest).
        if (small_step) return std::abs(F0) < 5e-2 * std::exp(-t.sigma);
    }
    return std::abs(F0) < 1e-9;
}

RungTarget make_target(const DoublingAngles& angles, int level, double sigma) {
    RungTarget t;
    t.level = level;
    t.sigma = sigma;
    t.w = std::polar(std::exp(-sigma), kTwoPi * angles.turns(static_cast<std::size_t>(level)));
    return t;
}

// Small-q model: Φ(q²) ≈ (2 / 3√3) q², so q² ≈ Φ · 3√3/2.
Complex seed_from_model(Complex phi_target) {
    return std::sqrt(phi_target * (3.0 * std::sqrt(3.0) / 2.0));
}

ParamRayPoint record_point(Complex q, const RungTarget& t) {
    ParamRayPoint p;
    p.q = q;
    p.q_squared = q * q;
    p.level = t.level;
    p.sigma = t.sigma;
    p.log_potential = -t.sigma * std::exp2(-t.level);
    return p;
}

} // namespace

std::vector<ParamRayPoint> parameter_ray(const Angle& theta_c,
                                         const std::vector<double>& r_schedule) {
    const DoublingAngles angles(theta_c);
    std::vector<ParamRayPoint> out;
    Complex q(0.0, 0.0);
    bool have_q = false;
    for (double r : r_schedule) {
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("parameter_ray: radii must lie in (0, 1)");
        const double s = -std::log(r);
        const int level = std::max(0, static_cast<int>(std::ceil(std::log2(1.8 / s))));
        const RungTarget t = make_target(angles, level, s * std::exp2(level));
        if (!have_q) {
            q = seed_from_model(std::polar(r, kTwoPi * theta_c.to_double()));
            have_q = true;
        }
        Complex attempt = q;
        if (!solve_rung(t, attempt)) break; // truncated schedule
        q = attempt;
        out.push_back(record_point(q, t));
    }
    return out;
}

ParamRayResult parameter_ray_escape(const Angle& theta_c, double q2_abs_target, int max_level) {
    const DoublingAngles angles(theta_c);
    ParamRayResult res;
    const double sigma_lo = 1.8;
    const double step_factor = std::pow(2.0, 0.5);

    int level = 0;
    double sigma = 2.2;
    RungTarget t = make_target(angles, level, sigma);
    Complex q = seed_from_model(std::polar(std::exp(-sigma), kTwoPi * theta_c.to_double()));
    if (!solve_rung(t, q)) {
        // colder seeds deeper in the component
        bool ok = false;
        for (double s0 : {2.8, 3.4, 4.0}) {
            t = make_target(angles, level, s0);
            q = seed_from_model(std::polar(std::exp(-s0), kTwoPi * theta_c.to_double()));
            if (solve_rung(t, q)) {
                sigma = s0;
                ok = true;
                break;
            }
        }
        if (!ok) {
            res.diagnostics = "seed rung failed";
            return res;
        }
    }
    res.points.push_back(record_point(q, t));

    Complex q_prev = q;
    int failures = 0;
    double shrink = 1.0; // fraction of a full rung to attempt
    while (true) {
        if (std::abs(q * q) >= q2_abs_target) {
            res.escaped = true;
            return res;
        }
        if (level > max_level) {
            res.diagnostics = "level cap reached";
            return res;
        }
        double sigma_next = sigma * (1.0 - shrink * (1.0 - 1.0 / step_factor));
        int level_next = level;
        if (sigma_next < sigma_lo) {
            sigma_next *= 2.0;
            ++level_next;
        }
        RungTarget tn = make_target(angles, level_next, sigma_next);
        Complex guess = shrink == 1.0 ? q + (q - q_prev) : q;
        if (!solve_rung(tn, guess)) {
            if (++failures >= 5) {
                res.diagnostics = "corrector divergence";
                return res;
            }
            shrink *= 0.5; // same state, smaller rung next attempt
            continue;
        }
        failures = 0;
        shrink = std::min(1.0, shrink * 2.0);
        q_prev = q;
        q = guess;
        sigma = tn.sigma;
        level = tn.level;
        res.points.push_back(record_point(q, tn));
    }
}

} // namespace antipode
