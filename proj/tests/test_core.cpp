#include "doctest.h"

#include "cubesum/core.hpp"

#include <random>

using namespace cubesum;

namespace
{

// Trapezoid rule on the periodic integrand of the complete elliptic
// integral; pi / (2 agm(a, b)) = int_0^{pi/2} dt / sqrt(a^2 cos^2 + b^2 sin^2).
Real agm_by_quadrature(const Real &a, const Real &b)
{
    Real prev;
    for (long n = 16;; n *= 2) {
        Real sum;
        Real h = pi() * Real(2) / Real(n);
        for (long k = 0; k < n; ++k) {
            Real t = h * Real(k);
            Real c = cos(t), s = sin(t);
            sum += Real(1) / sqrt(a * a * c * c + b * b * s * s);
        }
        Real integral = sum * h / Real(4);
        Real val = pi() / (Real(2) * integral);
        if (n > 16 && abs(val - prev) < ldexp(abs(val), -default_precision() + 4))
            return val;
        prev = val;
        if (n > (1L << 16))
            return val;
    }
}

} // namespace

TEST_CASE("agm fixed points")
{
    CHECK(agm(Real(1), Real(1)) == Real(1));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        Real x = Real(static_cast<double>(rng() % 100000 + 1) / 997.0);
        CHECK(abs(agm(x, x) - x) <= ldexp(x, -180));
    }
}

TEST_CASE("agm matches the elliptic integral quadrature")
{
    Real b = Real(2) / sqrt(Real(2));
    Real g = agm(Real(1), b);
    Real q = agm_by_quadrature(Real(1), b);
    CHECK(abs(g - q) < ldexp(g, -(default_precision() - 8)));
    CHECK(abs(agm(b, Real(1)) - g) < ldexp(g, -(default_precision() - 4)));
}

TEST_CASE("complex agm is symmetric")
{
    Complex a(Real(3), Real(1)), b(Real(1), Real(-2));
    Complex x = agm(a, b), y = agm(b, a);
    CHECK(abs(x - y) < ldexp(abs(x), -(default_precision() - 8)));
}

TEST_CASE("recognize small rationals")
{
    {
        precision_guard g(280);
        Real third = Real(1) / Real(3);
        auto r = recognize_rational(third, BigInt(1000));
        REQUIRE(r);
        CHECK(*r == BigRat(1, 3));
    }
    {
        precision_guard g(200);
        Real x = Real(BigRat(22, 7));
        auto r = recognize_rational(x, BigInt(100));
        REQUIRE(r);
        CHECK(*r == BigRat(22, 7));
    }
    CHECK_FALSE(recognize_rational(sqrt(Real(2)), BigInt(1000000)));
}

TEST_CASE("recognition round trip at the stated precision")
{
    std::mt19937_64 rng(11);
    BigInt H("1000000000000");
    long bits = 4 * 40 + 64;
    precision_guard g(bits);
    for (int i = 0; i < 200; ++i) {
        BigInt p = BigInt(static_cast<unsigned long>(rng() % 1000000000000ULL));
        BigInt q = BigInt(static_cast<unsigned long>(rng() % 1000000000000ULL + 1));
        if (rng() & 1)
            p = -p;
        BigRat x(p, q);
        x.canonicalize();
        auto r = recognize_rational(Real(x), H);
        REQUIRE(r);
        CHECK(*r == x);
    }
}

TEST_CASE("integer factorization")
{
    auto f = factor(BigInt("600851475143"));
    REQUIRE(f.size() == 4);
    CHECK(f[3].first == 6857);
    auto g = factor(BigInt("1000000016000000063")); // (10^9+7)(10^9+9)
    REQUIRE(g.size() == 2);
    CHECK(g[0].first == BigInt(1000000007));
}
