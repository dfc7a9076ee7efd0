#include "antipode/angle_calculus.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using namespace antipode;

namespace {

Angle A(long n, long d) { return Angle(BigRat(n, d)); }

std::vector<Angle> reduced_angles(long max_den) {
    std::vector<Angle> out;
    for (long d = 1; d <= max_den; ++d)
        for (long n = 0; n < d; ++n) {
            Angle a(BigRat(n, d));
            if (a.den() == d) out.push_back(a);
        }
    return out;
}

std::vector<Angle> sorted_points(const RotationSet& s) {
    std::vector<Angle> pts = s.points();
    std::sort(pts.begin(), pts.end());
    return pts;
}

} // namespace

TEST_CASE("phi: frozen landing coordinates and digit streams") {
    CHECK(phi(A(2, 7), A(1, 3)) == A(5, 8));
    DigitStream s = phi_digits(A(2, 7), A(1, 3));
    CHECK(s.head.empty());
    CHECK(s.block == std::vector<int>{1, 2});

    CHECK(phi(A(2, 7), A(0, 1)) == A(0, 1));

    // degenerate middle interval at theta_c = 1/2: digits take values in {0,2}
    CHECK(phi(A(1, 2), A(1, 3)) == A(1, 4));
    CHECK(phi_digits(A(1, 2), A(1, 3)).first(2) == std::vector<int>{0, 2});
    CHECK(phi(A(1, 2), A(2, 3)) == A(3, 4));

    // equivariance: phi(2 theta) = 3 phi(theta)
    for (Angle th : {A(1, 9), A(1, 5), A(1, 3), A(3, 5), A(5, 9)}) {
        CHECK(phi(A(2, 7), th.mul_by(2)) == phi(A(2, 7), th).mul_by(3));
        CHECK(phi(A(1, 2), th.mul_by(2)) == phi(A(1, 2), th).mul_by(3));
    }

    CHECK(in_lambda(A(2, 7), A(1, 3)));
    CHECK_FALSE(in_lambda(A(2, 7), A(2, 7)));
    CHECK_FALSE(in_lambda(A(2, 7), A(1, 7)));
    CHECK_THROWS_AS(phi(A(2, 7), A(2, 7)), std::domain_error);
    CHECK_THROWS_AS(phi(A(2, 7), A(9, 14)), std::domain_error);
}

TEST_CASE("phi_pm: one-sided values and the difference law") {
    auto pm = phi_pm(A(2, 7), A(2, 7));
    CHECK(pm.first == A(6, 26));
    CHECK(pm.second == A(15, 26));
    CHECK((pm.second - pm.first).value() == BigRat(9, 26));

    pm = phi_pm(A(2, 7), A(4, 7));
    CHECK(pm.first == A(18, 26));
    CHECK(pm.second == A(19, 26));
    // the orbit of 4/7 first hits 2/7 at step 3, then every 3 steps:
    // sum of 3^-m over m = 3, 6, 9, ... is 1/26
    CHECK((pm.second - pm.first).value() == BigRat(1, 26));

    pm = phi_pm(A(2, 7), A(1, 7));
    CHECK(pm.first == A(2, 26));
    CHECK(pm.second == A(5, 26));
    CHECK((pm.second - pm.first).value() == BigRat(3, 26));

    CHECK_THROWS_AS(phi_pm(A(2, 7), A(1, 3)), std::domain_error);
}

TEST_CASE("critical gap: frozen gaps") {
    CriticalGap g = critical_gap(A(2, 7));
    CHECK(g.a == A(6, 26));
    CHECK(g.b == A(15, 26));
    CHECK(g.length == BigRat(9, 26));
    CHECK(g.interval().contains(A(1, 2)));
    CHECK_FALSE(g.interval().contains(A(6, 26)));

    g = critical_gap(A(0, 1));
    CHECK(g.a == A(0, 1));
    CHECK(g.b == A(1, 2));
    CHECK(g.length == BigRat(1, 2));

    g = critical_gap(A(1, 2));
    CHECK(g.a == A(1, 3));
    CHECK(g.b == A(2, 3));
    CHECK(g.length == BigRat(1, 3));

    g = critical_gap(A(1, 5));
    CHECK(g.a == A(17, 80));
    CHECK(g.b == A(44, 80));
    CHECK(g.length == BigRat(27, 80));

    g = critical_gap(A(1, 3));
    CHECK(g.a == A(1, 4));
    CHECK(g.b == A(5, 8));
    CHECK(g.length == BigRat(3, 8));

    // not periodic under doubling: length is exactly 1/3
    g = critical_gap(A(1, 6));
    CHECK(g.a == A(5, 24));
    CHECK(g.b == A(13, 24));
    CHECK(g.length == BigRat(1, 3));

    // endpoints are tripling-periodic with the doubling period
    Orbit oa = orbit_under_mul(critical_gap(A(2, 7)).a, 3);
    CHECK(oa.preperiod.empty());
    CHECK(oa.cycle.size() == 3);
}

TEST_CASE("critical gap: length law across denominators") {
    for (const Angle& th : reduced_angles(63)) {
        CriticalGap g = critical_gap(th);
        CHECK(g.length >= BigRat(1, 3));
        CHECK(g.length <= BigRat(1, 2));
        CHECK((g.b - g.a).value() == g.length);
        if (is_periodic_under_mul(th, 2)) {
            unsigned long p = period_under_mul(th, 2);
            CHECK(g.length == BigRat(big_pow(3, p - 1), big_pow(3, p) - 1));
        } else {
            CHECK(g.length == BigRat(1, 3));
        }
    }
}

TEST_CASE("critical gap endpoint numerators") {
    GapEndpointNumerators e = critical_gap_endpoint_numerators(A(2, 7));
    CHECK(e.a_num == 6);
    CHECK(e.b_num == 15);
    CHECK(e.period == 3);
    CHECK(e.modulus == 26);

    // theta = 0: a = (.222...) = 1 == 0 and b = (.111...) = 1/2; the length
    // law survives as a congruence even across the wrap
    e = critical_gap_endpoint_numerators(A(0, 1));
    CHECK(e.a_num == 2);
    CHECK(e.b_num == 1);
    CHECK(e.period == 1);
    CHECK(e.modulus == 2);

    for (const Angle& th : reduced_angles(99)) {
        if (th.den() % 2 == 0) continue;
        GapEndpointNumerators n = critical_gap_endpoint_numerators(th);
        BigInt diff = ((n.b_num - n.a_num) % n.modulus + n.modulus) % n.modulus;
        CHECK(diff == big_pow(3, n.period - 1));
        CriticalGap g = critical_gap(th);
        CHECK(Angle(BigRat(n.a_num, n.modulus)) == g.a);
        CHECK(Angle(BigRat(n.b_num, n.modulus)) == g.b);
    }

    CHECK_THROWS_AS(critical_gap_endpoint_numerators(A(1, 6)), std::domain_error);
}

TEST_CASE("psi: frozen values") {
    CHECK(psi(A(2, 7), A(5, 8)) == A(1, 3));
    CHECK(psi(A(2, 7), A(7, 26)) == A(2, 7)); // inside the gap
    CHECK(psi(A(2, 7), A(0, 1)) == A(0, 1));
    CHECK(psi(A(2, 7), A(6, 26)) == A(2, 7));  // left endpoint
    CHECK(psi(A(2, 7), A(15, 26)) == A(2, 7)); // right endpoint
    CHECK(psi(A(2, 7), A(2, 26)) == A(1, 7));
    CHECK(psi(A(2, 7), A(7, 78)) == A(1, 7)); // enters the gap at step 1
    CHECK(psi(A(1, 3), A(5, 8)) == A(1, 3));
    CHECK(psi(A(1, 2), A(1, 4)) == A(1, 3));
}

TEST_CASE("psi inverts phi on Lambda") {
    for (Angle th_c : {A(2, 7), A(1, 5), A(1, 2), A(1, 6)}) {
        for (const Angle& th : reduced_angles(20)) {
            if (!in_lambda(th_c, th)) continue;
            CHECK(psi(th_c, phi(th_c, th)) == th);
        }
    }
}

TEST_CASE("psi semiconjugates tripling to doubling on the visible set") {
    for (const Angle& th_c : reduced_angles(127)) {
        CriticalGap g = critical_gap(th_c);
        // the left endpoint is always visible; add a second probe while the
        // denominators stay small
        std::vector<Angle> xs{g.a};
        if (th_c.den() <= 64) xs.push_back(g.b + A(1, 3));
        for (const Angle& x : xs) {
            if (!visible(th_c, x)) continue;
            CHECK(psi(th_c, x.mul_by(3)) == psi(th_c, x).mul_by(2));
        }
    }
    // denser x sampling for a few parameters
    for (Angle th_c : {A(2, 7), A(1, 5), A(1, 2), A(3, 11)}) {
        for (const Angle& x : reduced_angles(40)) {
            if (!visible(th_c, x)) continue;
            CHECK(psi(th_c, x.mul_by(3)) == psi(th_c, x).mul_by(2));
        }
    }
}

TEST_CASE("psi is monotone of degree one") {
    for (Angle th_c : {A(2, 7), A(1, 5), A(1, 2)}) {
        Angle prev = psi(th_c, A(0, 1));
        CHECK(prev == A(0, 1));
        for (long k = 1; k < 97; ++k) {
            Angle cur = psi(th_c, A(k, 97));
            CHECK(prev.value() <= cur.value());
            prev = cur;
        }
    }
}

TEST_CASE("visible: frozen membership") {
    CHECK(visible(A(2, 7), A(6, 26)));
    CHECK_FALSE(visible(A(2, 7), A(7, 26)));
    CHECK_FALSE(visible(A(2, 7), A(1, 2)));
    CHECK(visible(A(2, 7), A(0, 1)));
}

TEST_CASE("gap sums increase to full measure") {
    CHECK(gap_sum_truncated(A(2, 7), 0) == BigRat(9, 26));
    CHECK(gap_sum_truncated(A(2, 7), 5) == BigRat(323, 351));
    CHECK(gap_sum_truncated(A(2, 7), 14) == BigRat(6894397, 6908733));
    // exactly-1/3 gap: the surviving set loses a factor 2/3 per depth
    BigRat expect = BigRat(1) - BigRat(big_pow(2, 15), big_pow(3, 15));
    CHECK(gap_sum_truncated(A(1, 6), 14) == expect);
    CHECK(expect == BigRat(14316139, 14348907));
    CHECK(gap_sum_truncated(A(0, 1), 14) == BigRat(4774777, 4782969));

    BigRat prev = gap_sum_truncated(A(2, 7), 0);
    for (int d = 1; d <= 8; ++d) {
        BigRat cur = gap_sum_truncated(A(2, 7), d);
        CHECK(cur > prev);
        CHECK(cur < 1);
        prev = cur;
    }
}

TEST_CASE("collapse intervals") {
    auto [i1, i2] = collapse_intervals(A(2, 7));
    CHECK(i1.lo == A(37, 156));
    CHECK(i1.hi == A(89, 156));
    CHECK(i2.lo == A(115, 156));
    CHECK(i2.hi == A(11, 156));

    auto [j1, j2] = collapse_intervals(A(1, 2));
    CHECK(j1.lo == A(1, 3));
    CHECK(j1.hi == A(2, 3));
    CHECK(j2.lo == A(5, 6));
    CHECK(j2.hi == A(1, 6));
}

TEST_CASE("dynamic rotation number: frozen values and plateaus") {
    CHECK(dynamic_rotation_number(A(2, 7)) == A(1, 3));
    CHECK(dynamic_rotation_number(A(0, 1)) == A(0, 1));
    CHECK(dynamic_rotation_number(A(1, 5)) == A(1, 4));
    CHECK(dynamic_rotation_number(A(1, 4)) == A(1, 4));
    CHECK(dynamic_rotation_number(A(2, 15)) == A(1, 4));
    CHECK(dynamic_rotation_number(A(4, 15)) == A(1, 4));
    CHECK(dynamic_rotation_number(A(1, 3)) == A(1, 2));
    CHECK(dynamic_rotation_number(A(1, 2)) == A(1, 2));
    CHECK(dynamic_rotation_number(A(5, 7)) == A(2, 3));

    // odd-denominator values are attained at a single parameter angle
    CHECK(dynamic_rotation_number(A(2000 - 7, 7000)).value() < BigRat(1, 3));
    CHECK(dynamic_rotation_number(A(2007, 7000)).value() > BigRat(1, 3));
    // even-denominator values fill the closed balanced-pair interval
    CHECK(dynamic_rotation_number(A(26, 200)).value() < BigRat(1, 4));
    CHECK(dynamic_rotation_number(A(55, 200)).value() > BigRat(1, 4));
}

TEST_CASE("dynamic rotation number: symmetry and monotonicity") {
    for (const Angle& th : reduced_angles(12)) {
        Angle r = dynamic_rotation_number(th);
        CHECK(dynamic_rotation_number(A(0, 1) - th) == A(0, 1) - r);
    }
    Angle prev = dynamic_rotation_number(A(0, 1));
    CHECK(prev == A(0, 1));
    for (long k = 1; k < 200; ++k) {
        Angle cur = dynamic_rotation_number(A(k, 200));
        CHECK(prev.value() <= cur.value());
        prev = cur;
    }
}

TEST_CASE("gap endpoints are monotone on a 10^4 grid") {
    const long n = 10000;
    BigRat pa(-1), pb(-1);
    for (long k = 0; k < n; ++k) {
        CriticalGap g = critical_gap(A(k, n));
        CHECK(g.a.value() >= pa);
        CHECK(g.b.value() >= pb);
        pa = g.a.value();
        pb = g.b.value();
    }
}

TEST_CASE("doubly visible set: frozen sets") {
    RotationSet x = doubly_visible_set(A(2, 7));
    CHECK(x.orbits.size() == 2);
    CHECK(x.rotation_number == A(1, 3));
    CHECK(sorted_points(x) ==
          std::vector<Angle>{A(2, 26), A(5, 26), A(6, 26), A(15, 26), A(18, 26), A(19, 26)});

    x = doubly_visible_set(A(0, 1));
    CHECK(x.orbits.size() == 2);
    CHECK(x.rotation_number == A(0, 1));
    CHECK(sorted_points(x) == std::vector<Angle>{A(0, 1), A(1, 2)});

    const std::vector<Angle> quad{A(1, 16), A(3, 16), A(9, 16), A(11, 16)};
    x = doubly_visible_set(A(1, 5));
    CHECK(x.orbits.size() == 1);
    CHECK(x.rotation_number == A(1, 4));
    CHECK(sorted_points(x) == quad);
    // the whole plateau of 1/4 shares one doubly-visible cycle
    CHECK(sorted_points(doubly_visible_set(A(1, 4))) == quad);
    CHECK(sorted_points(doubly_visible_set(A(2, 15))) == quad);

    x = doubly_visible_set(A(1, 3));
    CHECK(x.orbits.size() == 1);
    CHECK(x.rotation_number == A(1, 2));
    CHECK(sorted_points(x) == std::vector<Angle>{A(1, 4), A(3, 4)});
}

TEST_CASE("doubly visible set: self-antipodal, visible, rotation number agrees") {
    for (const Angle& th : reduced_angles(20)) {
        RotationSet x = doubly_visible_set(th);
        CHECK(x.rotation_number == dynamic_rotation_number(th));
        std::vector<Angle> pts = sorted_points(x);
        std::set<Angle> set(pts.begin(), pts.end());
        for (const Angle& p : pts) {
            CHECK(set.count(p + A(1, 2)) == 1);
            CHECK(visible(th, p));
        }
    }
}

TEST_CASE("cycle-count law at balanced angles and inside pair intervals") {
    // balanced angle of odd-denominator t: two cycles of odd period
    for (const Angle& t : reduced_angles(15)) {
        if (t.den() % 2 == 0) continue;
        Angle th = balanced_angle(t);
        CHECK(dynamic_rotation_number(th) == t);
        RotationSet x = doubly_visible_set(th);
        CHECK(x.orbits.size() == 2);
        for (const auto& orb : x.orbits) CHECK(orb.size() % 2 == 1);
    }
    // midpoint of an even-denominator balanced pair: one cycle of even period
    for (const Angle& t : reduced_angles(12)) {
        if (t.den() % 2 != 0) continue;
        auto [lo, hi] = balanced_pair(t);
        Angle mid((lo.value() + hi.value()) / 2);
        CHECK(dynamic_rotation_number(mid) == t);
        RotationSet x = doubly_visible_set(mid);
        CHECK(x.orbits.size() == 1);
        CHECK(x.orbits[0].size() % 2 == 0);
    }
}

TEST_CASE("balanced angles and pairs") {
    CHECK(balanced_angle(A(1, 3)) == A(2, 7));
    CHECK(balanced_angle(A(0, 1)) == A(0, 1));
    CHECK(balanced_angle(A(2, 5)) == A(10, 31));
    CHECK_THROWS_AS(balanced_angle(A(1, 2)), std::domain_error);

    auto pr = balanced_pair(A(1, 4));
    CHECK(pr.first == A(2, 15));
    CHECK(pr.second == A(4, 15));
    pr = balanced_pair(A(1, 2));
    CHECK(pr.first == A(1, 3));
    CHECK(pr.second == A(2, 3));
    pr = balanced_pair(A(3, 4));
    CHECK(pr.first == A(11, 15));
    CHECK(pr.second == A(13, 15));
    CHECK_THROWS_AS(balanced_pair(A(1, 3)), std::domain_error);
}

TEST_CASE("rho_inverse_plus: frozen values and identities") {
    CHECK(rho_inverse_plus(A(1, 3)) == A(2, 7));
    CHECK(rho_inverse_plus(A(0, 1)) == A(0, 1));
    CHECK(rho_inverse_plus(A(1, 2)) == A(2, 3));
    CHECK(rho_inverse_plus(A(1, 4)) == A(4, 15));
    CHECK(rho_inverse_plus(A(2, 5)) == A(10, 31));

    for (const Angle& t : reduced_angles(31)) {
        if (t.den() % 2 == 0) continue;
        CHECK(rho_inverse_plus(t) == balanced_angle(t));
    }
    for (const Angle& t : reduced_angles(16)) {
        if (t.den() % 2 != 0) continue;
        auto pr = balanced_pair(t);
        CHECK(rho_inverse_plus(t) == pr.second);
        // the jump of the inverse equals the width of the balanced pair
        CHECK((pr.second - pr.first).value() == rho_discontinuity(t));
    }
}

TEST_CASE("rho round trip") {
    for (const Angle& t : reduced_angles(15)) {
        CHECK(dynamic_rotation_number(rho_inverse_plus(t)) == t);
    }
}

TEST_CASE("rho_inverse_plus_real approximates the exact inverse") {
    CHECK(std::abs(rho_inverse_plus_real(1.0 / 3.0, 50) - 2.0 / 7.0) < 1e-14);
    double exact = rat_to_double(rho_inverse_plus(A(37, 100)).value());
    CHECK(std::abs(rho_inverse_plus_real(0.37, 40) - exact) < 4e-12);
    double g = rho_inverse_plus_real(0.6180339887498949, 52);
    CHECK(g > 0.0);
    CHECK(g < 1.0);
    CHECK_THROWS_AS(rho_inverse_plus_real(0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(rho_inverse_plus_real(0.5, 65), std::invalid_argument);
}

TEST_CASE("rho_discontinuity: frozen values") {
    CHECK(rho_discontinuity(A(1, 2)) == BigRat(1, 3));
    CHECK(rho_discontinuity(A(1, 4)) == BigRat(2, 15));
    CHECK(rho_discontinuity(A(3, 4)) == BigRat(2, 15));
    CHECK(rho_discontinuity(A(1, 6)) == BigRat(4, 63));
    CHECK(rho_discontinuity(A(1, 3)) == BigRat(0));
    CHECK(rho_discontinuity(A(0, 1)) == BigRat(0));
}
