#include "doctest.h"

#include "cubesum/x36.hpp"

#include <random>

using namespace cubesum;

namespace
{

Cusp q(long n, long d) { return Cusp::of(BigInt(n), BigInt(d)); }

// g in SL_2(Z) with g(oo) = c
Mat2 lift_cusp(const Cusp &c)
{
    if (c.is_infinity())
        return Mat2();
    BigInt g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.num.get_mpz_t(), c.den.get_mpz_t());
    // num * s + den * t = 1
    return Mat2{BigRat(c.num), BigRat(-t), BigRat(c.den), BigRat(s)};
}

// x ~ y iff g_y (+-T^n) g_x^{-1} lies in Gamma_0(36) for some n mod 36.
bool equivalent_oracle(const Cusp &x, const Cusp &y)
{
    Mat2 gx = inverse(lift_cusp(x)), gy = lift_cusp(y);
    for (long n = 0; n < 36; ++n)
        for (long s : {1, -1}) {
            Mat2 t{BigRat(s), BigRat(s * n), BigRat(0), BigRat(s)};
            if (in_gamma0(gy * t * gx))
                return true;
        }
    return false;
}

Mat2 random_gamma0(std::mt19937_64 &rng)
{
    for (;;) {
        long c = 36 * (static_cast<long>(rng() % 11) - 5);
        long d = static_cast<long>(rng() % 101) - 50;
        BigInt g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), BigInt(d).get_mpz_t(), BigInt(-c).get_mpz_t());
        if (g != 1)
            continue;
        // s d - t c = 1
        return Mat2{BigRat(s), BigRat(t), BigRat(c), BigRat(d)};
    }
}

bool on_curve(const KPoint &P)
{
    return P.inf || P.y * P.y == P.x * P.x * P.x + EisInt(1);
}

} // namespace

TEST_CASE("cusp classification")
{
    CHECK(cusp_classify(Cusp::infinity()) == Cusp::infinity());
    CHECK(cusp_classify(q(1, 36)) == Cusp::infinity());
    CHECK(cusp_classify(q(-1, 2)) == cusp_classify(q(1, 2)));
    CHECK(cusp_classify(q(-1, 2)) == q(1, 2));
    CHECK(cusp_classify(q(0, 1)) == q(0, 1));
    auto classes = cusp_classes();
    REQUIRE(classes.size() == 12);
    for (size_t i = 0; i < classes.size(); ++i)
        for (size_t j = 0; j < classes.size(); ++j)
            CHECK(equivalent_oracle(classes[i], classes[j]) == (i == j));

    auto listed = listed_cusps();
    REQUIRE(listed.size() == 12);
    for (size_t i = 0; i < listed.size(); ++i)
        for (size_t j = 0; j < listed.size(); ++j) {
            CHECK(cusps_equivalent(listed[i], listed[j]) == (i == j));
            CHECK(equivalent_oracle(listed[i], listed[j]) == (i == j));
        }
}

TEST_CASE("cusp classes agree with the stabilizer oracle")
{
    std::vector<Cusp> cs;
    for (long d = 0; d <= 40; ++d)
        for (long n = -12; n <= 12; ++n)
            if (std::gcd(n, d) == 1 && !(d == 0 && n != 1))
                cs.push_back(q(n, d));
    for (size_t i = 0; i < cs.size(); i += 3)
        for (size_t j = 0; j < cs.size(); j += 7)
            CHECK(cusps_equivalent(cs[i], cs[j]) == equivalent_oracle(cs[i], cs[j]));
}

TEST_CASE("classification is constant on Gamma_0(36) orbits")
{
    std::mt19937_64 rng(36);
    for (const Cusp &c : listed_cusps())
        for (int k = 0; k < 40; ++k) {
            Mat2 g = random_gamma0(rng);
            REQUIRE(in_gamma0(g));
            CHECK(cusp_classify(act(g, c)) == cusp_classify(c));
        }
}

TEST_CASE("Gamma_0(36) generators")
{
    CHECK(gamma0_index() == 72);
    for (const Mat2 &g : gamma0_generators())
        CHECK(in_gamma0(g));
    CHECK(normalizes_gamma0(Mat2()));
    CHECK(normalizes_gamma0(matrix_B()));
    CHECK(normalizes_gamma0(Mat2{BigRat(1), BigRat(1, 2), BigRat(0), BigRat(1)}));
    CHECK_FALSE(normalizes_gamma0(Mat2{BigRat(1), BigRat(1, 5), BigRat(0), BigRat(1)}));
    CHECK_FALSE(normalizes_gamma0(Mat2{2, 0, 0, 1}));
    CHECK(in_scalar_gamma0(Mat2{3, 0, 108, 3}));
    CHECK_FALSE(in_scalar_gamma0(Mat2{1, 0, 18, 1}));
}

TEST_CASE("torsion points of E over K")
{
    std::vector<KPoint> pts;
    for (const Residue &r : all_residues()) {
        KPoint P = torsion_point(r);
        CHECK(on_curve(P));
        for (const KPoint &Q : pts)
            CHECK_FALSE(Q == P);
        pts.push_back(P);
    }
    CHECK(torsion_point(Residue::of(EisInt(0))).inf);
    CHECK(to_string(torsion_point(Residue::of(EisInt(1)))) == "(2,3)");
    CHECK(to_string(torsion_point(Residue::of(EisInt(2)))) == "(0,1)");
    CHECK(to_string(torsion_point(Residue::of(EisInt(3)))) == "(-1,0)");
    CHECK(to_string(torsion_point(Residue::of(EisInt::omega()))) == "(2w,3)");
    // 2 sqrt(-3) = 2 + 4 omega kills everything
    CHECK(Residue::of(EisInt(BigInt(2), BigInt(4))) == Residue::of(EisInt(0)));
    CHECK(Residue::of(EisInt(12)) == Residue::of(EisInt(0)));
}

TEST_CASE("normalizer table")
{
    StructureReport rep = verify_normalizer_table();
    for (const auto &e : rep.errors)
        INFO(e);
    CHECK(rep.errors.empty());
    CHECK(rep.cusps_distinct);
    CHECK(rep.tau_bijective);
    CHECK(rep.rows.size() == 12);
    for (const auto &r : rep.rows) {
        INFO(r.label);
        CHECK(r.normalizes);
        CHECK(r.cusp_ok);
    }
    CHECK(rep.translations_on_cusps);
    CHECK(rep.translations_as_matrices);
    CHECK(rep.A_order_six);
    CHECK(rep.A_acts_as_unit);
    CHECK(rep.B_involution);
    CHECK(rep.BA3_translation);
    CHECK(rep.semidirect);
    CHECK(rep.ok());

    Mat2 BA3 = matrix_B() * power(matrix_A(), 3);
    CHECK(BA3 == (Mat2{0, 1, -36, -18}));
    CHECK(cusp_classify(act(BA3, Cusp::infinity())) == q(0, 1));
    CHECK(in_scalar_gamma0(power(matrix_A(), 6)));
    CHECK_FALSE(in_scalar_gamma0(power(matrix_A(), 3)));
}

TEST_CASE("tau table")
{
    auto tau = tau_map();
    CHECK(tau.size() == 12);
    CHECK(tau.at(Residue::of(EisInt(0))) == Cusp::infinity());
    CHECK(tau.at(Residue::of(EisInt(1))) == q(0, 1));
    CHECK(tau.at(Residue::of(EisInt(2))) == q(-1, 18));
    CHECK(cusps_equivalent(tau.at(Residue::of(EisInt(-1))), q(1, 2)));
}

TEST_CASE("cusp images under omega_2, omega_3 and w epsilon")
{
    auto tau = tau_map();
    auto T = [&](const EisInt &a) { return tau.at(Residue::of(a)); };
    // R = [1/18], S = [1/36], T = [oo]
    CHECK(cusps_equivalent(q(1, 18), T(2)));
    CHECK(cusps_equivalent(q(1, 36), Cusp::infinity()));
    // alpha = 1, beta = omega, gamma = -1
    CHECK(cusps_equivalent(q(1, 20), T(EisInt(1) + EisInt(2))));
    CHECK(cusps_equivalent(q(1, 39), T(EisInt::omega())));
    for (long N : {5, 11, 23, 1265})
        CHECK(cusps_equivalent(q(N, 2), T(-1)));
}

TEST_CASE("membership in U")
{
    Mat2 I;
    for (long p : {2, 3, 5})
        CHECK(u_membership(to_padic(I, p, 10), p));
    for (long N : {5, 11, 23, 1265}) {
        INFO(N);
        Mat2 r = rho_omega(N);
        Mat2 g2 = Mat2{BigRat(1), BigRat(1, 2), BigRat(18), BigRat(10)} * r;
        CHECK(u_membership(to_padic(g2, 2, 12), 2));
        Mat2 g3 = Mat2{BigRat(1), BigRat(1, 3), BigRat(36), BigRat(13)} * r;
        CHECK(u_membership(to_padic(g3, 3, 12), 3));
        Mat2 w{BigRat(1), BigRat(-N, 2), BigRat(0), BigRat(-1)}, eps{1, 0, 0, -1};
        Mat2 g = Mat2{BigRat(1), BigRat(N, 2), BigRat(0), BigRat(1)} * w * eps;
        for (long p : {2, 3, 5, 7})
            CHECK(u_membership(to_padic(g, p, 12), p));
    }
    // U has index 2 in U_0(36): epsilon itself is outside
    CHECK_FALSE(u_membership(to_padic(Mat2{1, 0, 0, -1}, 3, 10), 3));
    CHECK(u_membership(to_padic(Mat2{1, 0, 0, -1}, 2, 10), 2));
    CHECK_FALSE(u_membership(to_padic(Mat2{1, 0, 2, 1}, 2, 10), 2));
    CHECK_FALSE(u_membership(to_padic(Mat2{BigRat(1), BigRat(1, 3), BigRat(0), BigRat(1)}, 3, 10), 3));
    CHECK_FALSE(u_membership(to_padic(Mat2{3, 0, 0, 1}, 3, 10), 3));
    // 36 is invisible at one 3-adic digit
    CHECK_THROWS_AS(u_membership(to_padic(Mat2{1, 0, 36, 1}, 3, 1), 3), precision_error);
}
