#include "doctest.h"

#include "cubesum/heegner.hpp"

#include <set>

using namespace cubesum;

namespace
{

Complex c(double re, double im) { return Complex(Real(re), Real(im)); }

bool small(const Real &x, double tol) { return x < Real(tol); }

// x(P + T) == x for some T in E(Q)[3] = {O, (0, +-sqrt k)}
bool x_up_to_3_torsion(const RatPoint &P, const CurveK &E, const BigRat &x)
{
    std::vector<RatPoint> T{RatPoint::infinity()};
    if (auto t = lift_x(BigRat(0), E)) {
        T.push_back(*t);
        T.push_back(negate(*t));
    }
    for (const RatPoint &t : T) {
        RatPoint R = add(P, t, E);
        if (!R.inf && R.x == x)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("q-series symmetries")
{
    precision_guard g(192);
    ModularParametrization mp(192);
    const PeriodLattice &L = mp.lattice();
    Complex tau = c(0.1, 0.5);
    CHECK(small(lattice_distance(mp.series(tau) - mp.evaluate(tau), L), 1e-50));
    CHECK(small(abs(mp.series(tau) - mp.series(tau + c(1, 0))), 1e-50));
    // z(tau + 1/6) = -omega^2 z(tau)
    Complex w2 = root_of_unity(2, 3);
    CHECK(small(abs(mp.series(tau + Complex(Real(1) / Real(6))) + w2 * mp.series(tau)), 1e-50));

    // Fricke, with both sides from the raw series
    Complex cusp0 = Complex(L.omega) / Real(6);
    Complex t = c(0.05, 0.15);
    Complex tf = Complex(Real(-1)) / (t * Real(36));
    CHECK(small(lattice_distance(mp.series(tf) + mp.series(t) - cusp0, L), 1e-40));
    Complex fixed = Complex(Real(0), Real(1) / Real(6));
    CHECK(small(abs(mp.series(fixed) - L.omega / Real(12)), 1e-40));

    CHECK_THROWS_AS(mp.series(c(0, 0.01)), domain_error);
    // evaluate() handles points close to the real axis
    CHECK(small(lattice_distance(mp.evaluate(t) - mp.series(t), L), 1e-40));
    Complex near = c(0.3141, 0.002);
    CHECK(small(lattice_distance(mp.evaluate(near) - mp.evaluate(near + c(1, 0)), L), 1e-40));
}

TEST_CASE("the cusp [0] maps to (2, 3)")
{
    precision_guard g(192);
    ModularParametrization mp(192);
    for (double y : {0.002, 0.001}) {
        ComplexPoint P = mp.point(c(0, y));
        REQUIRE_FALSE(P.inf);
        CHECK(small(abs(P.x - c(2, 0)), 1e-30));
        CHECK(small(abs(P.y - c(3, 0)), 1e-30));
    }
    // oo maps to the origin
    CHECK(small(abs(mp.evaluate(c(0, 20))), 1e-40));
}

TEST_CASE("CM points")
{
    precision_guard g(128);
    for (long N : {5, 11, 23}) {
        CMPoint P = base_cm_point(N);
        CHECK(P.form.disc() == BigInt(-108) * N * N);
        Complex h0 = Complex(Real(N) / Real(4), Real(N) * sqrt(Real(3)) / Real(36));
        CHECK(small(abs(P.tau - h0), 1e-30));
    }
    PicGroup G(BigInt(-108 * 25));
    CHECK(G.size() == 18);
    auto orbit = galois_orbit(5, G);
    REQUIRE(orbit.size() == 18);
    std::set<std::size_t> seen;
    for (const CMPoint &P : orbit) {
        CHECK(P.form.a % 36 == 0);
        CHECK(P.form.disc() == G.disc());
        CHECK(gcd(P.class_rep.a, BigInt(30)) == 1);
        seen.insert(G.index_of(P.form));
    }
    CHECK(seen.size() == 18);
    CHECK(PicGroup(BigInt(-108 * 121)).size() == 36);
    CHECK(PicGroup(BigInt(-108 * 529)).size() == 72);
}

TEST_CASE("Heegner primes and p*")
{
    CHECK(heegner_primes(55) == std::vector<long>{5, 11});
    CHECK_THROWS_AS(heegner_primes(7), domain_error);
    CHECK_THROWS_AS(heegner_primes(25), domain_error);
    CHECK(p_star(11) == BigRat(11));
    CHECK(p_star(5) == BigRat(1, 5));
    CHECK(d_grid(55).size() == 9);
    CHECK(expected_vanishing(5, BigRat(1)));
    CHECK(expected_vanishing(5, BigRat(5)));
    CHECK_FALSE(expected_vanishing(5, BigRat(1, 5)));
    CHECK_FALSE(expected_vanishing(11, BigRat(11)));
    CHECK(expected_vanishing(11, BigRat(1, 11)));
}

TEST_CASE("torsion logs")
{
    precision_guard g(128);
    PeriodLattice L = periods(CurveK(BigRat(1)));
    auto logs = torsion_logs(L);
    REQUIRE(logs.size() == 12);
    for (const Complex &t : logs)
        CHECK(small(lattice_distance(t * Real(12), L), 1e-25));
    Classified z = classify(c(0, 0), L, Real(1e-20));
    CHECK(z.status == ZStatus::zero);
    Classified t = classify(logs[3], L, Real(1e-20));
    CHECK(t.status == ZStatus::torsion);
    Classified p = classify(c(0.123, 0.0456), L, Real(1e-20));
    CHECK(p.status == ZStatus::point);
}

TEST_CASE("vanishing pattern for one prime")
{
    for (long p : {5, 11, 23}) {
        INFO(p);
        OrbitValues ov = heegner_orbit(p, 192);
        precision_guard g(192);
        Real tol(1e-20);
        BigRat ps = p_star(p);
        Classified z1 = classify(divisor_value(ov, BigRat(1)), ov.L, tol);
        Classified zinv = classify(divisor_value(ov, BigRat(1) / ps), ov.L, tol);
        Classified zs = classify(divisor_value(ov, ps), ov.L, tol);
        CHECK(z1.status == ZStatus::zero);
        CHECK(zinv.status == ZStatus::zero);
        CHECK(zs.status == ZStatus::point);
        CHECK(small(lattice_distance(divisor_value(ov, ps) - genus_value(ov) * Real(3), ov.L), 1e-40));

        OrbitChecks oc = orbit_checks(ov);
        CHECK(small(oc.conjugation, 1e-40));
        CHECK(small(oc.conj_sum, 1e-40));
        CHECK(small(oc.omega_action, 1e-40));
        CHECK(small(oc.omega2_split, 1e-40));
        CHECK(small(oc.divisor_sum, 1e-40));
    }
}

TEST_CASE("reconstruction for p = 11")
{
    HeegnerResult h = heegner_divisor(11, p_star(11), 192, Real(1e-20));
    REQUIRE(h.rec);
    const Reconstruction &r = *h.rec;
    CHECK(r.curve.k == BigRat(121));
    CHECK(on_curve(r.P, r.curve));
    CHECK(on_curve(r.Q, r.twist));
    CHECK_FALSE(is_torsion(r.P, r.curve));
    CHECK(r.height_P > Real(1e-3));
    CHECK(small(abs(r.height_Q - r.height_P * Real(3)), 1e-20));
    BigRat known = parse_rational("-1642442635507343269075385399311215240/468498542688497071700056598539205089");
    CHECK(x_up_to_3_torsion(r.P, r.curve, known));
    CHECK(small(abs(r.height_Q - Real("246.5586337397")), 1e-9));
    CHECK(h.bits >= 192);
}

TEST_CASE("reconstruction for p = 5")
{
    HeegnerResult h = heegner_divisor(5, p_star(5), 192, Real(1e-20));
    REQUIRE(h.rec);
    const Reconstruction &r = *h.rec;
    CHECK(r.curve.k == BigRat(625));
    CHECK(on_curve(r.P, r.curve));
    CHECK_FALSE(is_torsion(r.P, r.curve));
    CHECK(small(abs(r.height_Q - r.height_P * Real(3)), 1e-20));
    BigRat known = parse_rational("263839339/37344321");
    CHECK(x_up_to_3_torsion(r.P, r.curve, known));
}
