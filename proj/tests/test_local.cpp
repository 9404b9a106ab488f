#include "doctest.h"

#include "cubesum/local.hpp"

#include <random>

using namespace cubesum;

namespace
{

LocalPair ramified(long q, int n, int c) { return LocalPair{q, n, c, KType::ramified, 2}; }

// m in [[Z, uZ], [lZ, Z]]
bool in_order(const Mat2 &m, const BigRat &u, const BigRat &l)
{
    auto integral = [](const BigRat &x) { return x.get_den() == 1; };
    return integral(m.a) && integral(m.d) && integral(m.b / u) && integral(m.c / l);
}

Mat2 element(const BigRat &a, const BigRat &b, const Mat2 &rho)
{
    return Mat2{a + b * rho.a, b * rho.b, b * rho.c, a + b * rho.d};
}

// smallest c > 0 with c rho in the order, by search
long conductor_oracle(const Mat2 &rho, const BigRat &u, const BigRat &l)
{
    for (long c = 1; c < 100000; ++c)
        if (in_order(element(BigRat(0), BigRat(c), rho), u, l))
            return c;
    return -1;
}

} // namespace

TEST_CASE("Hermite and Smith forms")
{
    auto H = hnf({{BigInt(4), BigInt(6)}, {BigInt(6), BigInt(9)}, {BigInt(2), BigInt(0)}}, 2);
    REQUIRE(H.size() == 2);
    CHECK(H[0] == IntRow{BigInt(2), BigInt(0)});
    CHECK(H[1] == IntRow{BigInt(0), BigInt(3)});
    Smith S = smith({{BigInt(2), BigInt(0)}, {BigInt(0), BigInt(3)}});
    CHECK(S.d == std::vector<BigInt>{BigInt(1), BigInt(6)});
    Smith T = smith({{BigInt(2), BigInt(4), BigInt(4)}, {BigInt(-6), BigInt(6), BigInt(12)}, {BigInt(10), BigInt(-4), BigInt(-16)}});
    CHECK(T.d == std::vector<BigInt>{BigInt(2), BigInt(6), BigInt(12)});
}

TEST_CASE("epsilon dichotomy")
{
    CHECK(epsilon_dichotomy(ramified(3, 2, 1)).result == Dichotomy::split);
    CHECK(epsilon_dichotomy(ramified(3, 2, 1), {PiKind::supercuspidal, false}).result == Dichotomy::split);
    CHECK_THROWS_AS(epsilon_dichotomy(ramified(3, 2, 1), {PiKind::special, true}), domain_error);
    for (int n = 0; n <= 4; ++n)
        for (int c = n; c <= 5; ++c) {
            CHECK(epsilon_dichotomy(LocalPair{5, n, c, KType::inert, 1}).result == Dichotomy::split);
            CHECK(epsilon_dichotomy(ramified(3, n, c)).result == Dichotomy::split);
        }
    CHECK(epsilon_dichotomy(ramified(3, 4, 3)).result == Dichotomy::split);
    CHECK(epsilon_dichotomy(ramified(3, 1, 0)).result == Dichotomy::undetermined);
    CHECK(epsilon_dichotomy(LocalPair{5, 3, 1, KType::inert, 1}).result == Dichotomy::undetermined);
    CHECK(epsilon_dichotomy(LocalPair{2, 2, 0, KType::inert, 1}).result == Dichotomy::split);
    CHECK_THROWS_AS(epsilon_dichotomy(LocalPair{6, 1, 1, KType::inert, 1}), domain_error);
    CHECK_THROWS_AS(epsilon_dichotomy(LocalPair{3, 1, 1, KType::ramified, 1}), domain_error);
}

TEST_CASE("coset character sums")
{
    for (long q : {3, 5, 9})
        for (int c : {1, 2, 3}) {
            INFO("q=" << q << " c=" << c);
            CosetReport r = coset_char_sums(ramified(q, c + 1, c));
            long expect = 2;
            for (int i = 0; i < c; ++i)
                expect *= q;
            CHECK(r.group_order == expect);
            CHECK(r.representatives == expect);
            CHECK(r.characters == expect);
            CHECK(r.characters_used > 0);
            CHECK(r.characters_used + r.skipped == r.characters);
            CHECK(r.max_deviation < 1e-9);
            CHECK(r.ok);
        }
    CosetReport r = coset_char_sums(ramified(3, 2, 1));
    CHECK(r.stratum_sizes == std::vector<long>{2});
    CHECK(r.s_prime_size == 3);
    for (const auto &s : r.sums) {
        CHECK(std::abs(s[0] + 1.0) < 1e-9);
        CHECK(std::abs(s[1]) < 1e-9);
    }
    CosetReport r2 = coset_char_sums(ramified(3, 3, 2));
    for (const auto &s : r2.sums) {
        CHECK(std::abs(s[0]) < 1e-9);
        CHECK(std::abs(s[1] + 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(coset_char_sums(LocalPair{3, 2, 1, KType::inert, 1}), domain_error);
}

TEST_CASE("beta0")
{
    Beta0Report b = beta0(ramified(3, 2, 1));
    CHECK(b.match);
    CHECK(b.value == BigRat(1, 4));
    for (int c = 1; c <= 4; ++c) {
        Beta0Report r = beta0(ramified(5, c + 1, c), BigRat(7));
        CHECK(r.match);
        // 2^-1 q^-c (1 - 1/q)^-1 at q = 5, times 7
        BigRat q5 = 1;
        for (int i = 0; i < c; ++i)
            q5 *= 5;
        CHECK(r.value == BigRat(7) / (2 * q5) * BigRat(5, 4));
    }
    CHECK_THROWS_AS(beta0(ramified(3, 1, 0)), domain_error);
    CHECK_THROWS_AS(beta0(ramified(3, 3, 1)), domain_error);
}

TEST_CASE("orders meeting K")
{
    auto R0 = eichler_basis(BigRat(1), BigRat(36));
    for (long N : {1, 5, 11, 55}) {
        INFO(N);
        Mat2 rho = rho_omega(N);
        OrderIntersection o = order_intersection(rho, R0);
        REQUIRE(o.is_order);
        CHECK(o.conductor == 6 * N);
        CHECK(o.conductor == conductor_oracle(rho, BigRat(1), BigRat(36)));

        OrderIntersection a = order_intersection(rho, eichler_basis(BigRat(1), BigRat(1)));
        REQUIRE(a.is_order);
        CHECK(local_conductor(a.conductor, 3) == 3);
        CHECK(a.conductor == conductor_oracle(rho, BigRat(1), BigRat(1)));
        OrderIntersection b = order_intersection(rho, eichler_basis(BigRat(1, 9), BigRat(9)));
        REQUIRE(b.is_order);
        CHECK(local_conductor(b.conductor, 3) == 1);
        CHECK(b.conductor == conductor_oracle(rho, BigRat(1, 9), BigRat(9)));
    }
}

TEST_CASE("order intersection is invariant under conjugation by units")
{
    std::mt19937_64 rng(5);
    Mat2 rho = rho_omega(11);
    auto R0 = eichler_basis(BigRat(1), BigRat(36));
    for (int k = 0; k < 20; ++k) {
        long c = 36 * (static_cast<long>(rng() % 7) - 3);
        long d = static_cast<long>(rng() % 41) - 20;
        BigInt g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), BigInt(d).get_mpz_t(), BigInt(-c).get_mpz_t());
        if (g != 1)
            continue;
        Mat2 u{BigRat(s), BigRat(t), BigRat(c), BigRat(d)};
        Mat2 ui = inverse(u);
        std::array<Mat2, 4> conj;
        for (int i = 0; i < 4; ++i)
            conj[i] = u * R0[i] * ui;
        OrderIntersection o = order_intersection(u * rho * ui, conj);
        REQUIRE(o.is_order);
        CHECK(o.conductor == 66);
    }
}

TEST_CASE("3-adic norms")
{
    KElem one{BigRat(1), BigRat(0)}, zero{BigRat(0), BigRat(0)};
    KElem n1 = norm_L3(one, zero, zero, 5);
    CHECK(n1.a == 1);
    CHECK(n1.b == 0);
    CHECK(in_norm_group(n1, 8));
    KElem two{BigRat(2), BigRat(0)};
    KElem n2 = norm_L3(two, zero, zero, 11);
    CHECK(n2.a == 8);
    CHECK(in_norm_group(n2, 8));
    CHECK_FALSE(in_norm_group(KElem{BigRat(1), BigRat(1)}, 8));
    CHECK_FALSE(in_norm_group(KElem{BigRat(3), BigRat(0)}, 8));

    for (long p : {5, 11}) {
        INFO(p);
        NormReport r = norm_congruence_check(p, 200, 17);
        for (const auto &s : r.counterexamples)
            INFO(s);
        CHECK(r.samples == 200);
        CHECK(r.ok());
    }
    for (long p : {2, 23, 29})
        CHECK(norm_congruence_check(p, 50, 3).ok());
    CHECK_THROWS_AS(norm_congruence_check(7, 10), domain_error);
}
