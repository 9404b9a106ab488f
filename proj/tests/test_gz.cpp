#include "doctest.h"

#include "cubesum/gz.hpp"

using namespace cubesum;

TEST_CASE("twist parameters")
{
    CHECK(twist_parameter({11}, {1}) == BigRat(11));
    CHECK(twist_parameter({5}, {1}) == BigRat(1, 5));
    CHECK(twist_parameter({5, 11}, {-1, 1}) == BigRat(55));
    CHECK(expected_status({1}) == "point");
    CHECK(expected_status({-1}) == "zero");
    CHECK(expected_status({0}) == "zero");
    CHECK(expected_status({1, 1, 1}) == "zero_or_torsion");
    CHECK(expected_status({1, 1, -1}) == "point");
    CHECK(expected_status({1, 0, 1}) == "zero");
    CHECK_THROWS_AS(gz_verify({11}, {-1}, 192), domain_error);
    CHECK_THROWS_AS(gz_verify({7}, {1}, 192), domain_error);
}

TEST_CASE("Gross-Zagier ratio")
{
    for (long p : {11, 5}) {
        INFO(p);
        GZReport r = gz_verify({p}, {1}, 192);
        REQUIRE(r.ratio_defined);
        CHECK(r.deviation < Real(1e-8));
        CHECK(r.omega_relation < Real(1e-20));
        CHECK(r.sign_n == -1);
        CHECK(r.sign_ninv == 1);
        CHECK(r.status == ZStatus::point);
    }
    GZReport r = gz_verify({11}, {1}, 192);
    CHECK(r.curve_n.k == BigRat(121));
    CHECK(r.curve_ninv.k == BigRat(14641));
    // regression: 27 L'(1) L(1) / (Omega Omega') for p = 11
    CHECK(abs(r.lhs * Real(27) - Real("246.5586337397")) < Real(1e-9));
    GZReport r2 = gz_verify({11}, {1}, 384);
    CHECK(abs(r.ratio - r2.ratio) < Real(1e-8));
    CHECK(to_json(r)["ratio_defined"] == true);
}

TEST_CASE("vanishing sweep, one prime")
{
    SweepReport s = vanishing_sweep({11}, 192, true);
    CHECK(s.ok);
    REQUIRE(s.rows.size() == 3);
    for (const SweepRow &row : s.rows) {
        INFO(to_string(row.d));
        CHECK(row.consistent);
        CHECK(row.sign_rule);
        if (row.d == 11)
            CHECK(row.status == ZStatus::point);
        else
            CHECK(row.status == ZStatus::zero);
    }
    CHECK(s.checks.divisor_sum < Real(1e-20));
    CHECK_THROWS_AS(vanishing_sweep({5, 11}, 192), domain_error);
}

TEST_CASE("certificates")
{
    Certificate c = certify(BigInt(11), 192);
    CHECK(c.verdict == Verdict::cube_sum);
    CHECK(c.a * c.a * c.a + c.b * c.b * c.b == BigRat(22));
    CHECK(verify_certificate(c));
    Certificate back = certificate_from_json(to_json(c));
    CHECK(back.a == c.a);
    nlohmann::json bad = to_json(c);
    bad["witness"]["a"] = "1";
    CHECK_THROWS_AS(certificate_from_json(bad), domain_error);

    Certificate neg = certify(BigInt(-11), 192);
    CHECK(neg.verdict == Verdict::cube_sum);
    CHECK(neg.a * neg.a * neg.a + neg.b * neg.b * neg.b == BigRat(-22));

    Certificate no = certify(BigInt(121), 192);
    CHECK(no.verdict == Verdict::not_cube_sum);
    CHECK(no.sign == 1);
    CHECK(Real(no.L1) > Real(0));
    CHECK(Real(no.stability) < Real(1e-15));

    CHECK(certify(BigInt(5), 192).verdict == Verdict::not_cube_sum);
    CHECK_THROWS_AS(certify(BigInt(1331), 192), domain_error);
    CHECK_THROWS_AS(certify(BigInt(8), 192), domain_error);
    CHECK_THROWS_AS(certify(BigInt(7), 192), domain_error);
}
