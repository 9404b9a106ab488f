#include "cubesum/eisenstein.hpp"

#include <algorithm>

namespace cubesum
{

namespace
{

BigInt nearest(const BigInt &n, const BigInt &d)
{
    // round(n / d) for d > 0, halves rounded up
    BigInt t = 2 * n + d, q;
    BigInt dd = 2 * d;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), dd.get_mpz_t());
    return q;
}

} // namespace

Complex EisInt::to_complex() const
{
    Real h = Real(b) / Real(2);
    return {Real(a) - h, h * sqrt(Real(3))};
}

EisInt operator+(const EisInt &x, const EisInt &y)
{
    return EisInt(BigInt(x.a + y.a), BigInt(x.b + y.b));
}

EisInt operator-(const EisInt &x, const EisInt &y)
{
    return EisInt(BigInt(x.a - y.a), BigInt(x.b - y.b));
}

EisInt operator-(const EisInt &x)
{
    return EisInt(BigInt(-x.a), BigInt(-x.b));
}

EisInt operator*(const EisInt &x, const EisInt &y)
{
    BigInt bb = x.b * y.b;
    return EisInt(BigInt(x.a * y.a - bb), BigInt(x.a * y.b + x.b * y.a - bb));
}

bool operator==(const EisInt &x, const EisInt &y)
{
    return x.a == y.a && x.b == y.b;
}

bool operator!=(const EisInt &x, const EisInt &y)
{
    return !(x == y);
}

EisInt round_div(const EisInt &x, const EisInt &y)
{
    BigInt n = y.norm();
    if (n == 0)
        throw domain_error("division by zero in Z[omega]");
    EisInt t = x * y.conj();
    return EisInt(nearest(t.a, n), nearest(t.b, n));
}

EisInt reduce_mod(const EisInt &x, const EisInt &m)
{
    return x - round_div(x, m) * m;
}

bool divides(const EisInt &d, const EisInt &x)
{
    if (d.is_zero())
        return x.is_zero();
    return reduce_mod(x, d).is_zero();
}

EisInt exact_div(const EisInt &x, const EisInt &d)
{
    EisInt q = round_div(x, d);
    if (q * d != x)
        throw domain_error("inexact division in Z[omega]");
    return q;
}

EisInt gcd(EisInt x, EisInt y)
{
    while (!y.is_zero()) {
        EisInt r = reduce_mod(x, y);
        x = y;
        y = r;
    }
    return x;
}

EisInt pow_mod(const EisInt &x, const BigInt &e, const EisInt &m)
{
    EisInt result(1), base = reduce_mod(x, m);
    BigInt k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            result = reduce_mod(result * base, m);
        k >>= 1;
        if (k > 0)
            base = reduce_mod(base * base, m);
    }
    return result;
}

std::vector<EisInt> units()
{
    EisInt w = EisInt::omega();
    EisInt w2 = w * w;
    return {EisInt(1), w, w2, EisInt(-1), -w, -w2};
}

EisInt primary(const EisInt &x)
{
    if (x.norm() % 3 == 0)
        throw domain_error("primary associate needs norm prime to 3");
    for (const auto &u : units()) {
        EisInt y = u * x;
        if (mod(y.a, BigInt(3)) == 2 && mod(y.b, BigInt(3)) == 0)
            return y;
    }
    throw domain_error("no primary associate");
}

EisInt split_prime(const BigInt &p)
{
    if (mod(p, BigInt(3)) != 1 || !is_prime(p))
        throw domain_error("split_prime needs a prime == 1 mod 3");
    BigInt e = (p - 1) / 3, r;
    for (unsigned long g = 2;; ++g) {
        BigInt gg(g);
        mpz_powm(r.get_mpz_t(), gg.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        if (r != 1)
            break;
    }
    EisInt pi = gcd(EisInt(p), EisInt(BigInt(-r), BigInt(1)));
    if (pi.norm() != p)
        throw numeric_failure("split_prime: gcd failed");
    return primary(pi);
}

std::vector<EisFactor> factor(const EisInt &x)
{
    if (x.is_zero())
        throw domain_error("factor(0) in Z[omega]");
    std::vector<EisFactor> out;
    EisInt rest = x;
    auto strip = [&](const EisInt &pi) {
        int e = 0;
        while (divides(pi, rest)) {
            rest = exact_div(rest, pi);
            ++e;
        }
        if (e > 0)
            out.push_back({pi, e});
    };
    for (const auto &[p, e] : factor(x.norm())) {
        if (p == 3) {
            strip(EisInt(BigInt(1), BigInt(-1)));
        } else if (mod(p, BigInt(3)) == 2) {
            strip(EisInt(p));
        } else {
            EisInt pi = split_prime(p);
            strip(pi);
            strip(primary(pi.conj()));
        }
    }
    if (!rest.is_unit())
        throw numeric_failure("incomplete factorization in Z[omega]");
    return out;
}

CubeRoot cubic_symbol(const EisInt &alpha, const EisInt &modulus)
{
    if (modulus.is_zero())
        throw domain_error("cubic symbol modulo zero");
    if (modulus.norm() % 3 == 0)
        throw domain_error("cubic symbol modulus divisible by sqrt(-3)");
    if (!gcd(alpha, modulus).is_unit())
        throw domain_error("cubic symbol arguments not coprime");
    if (modulus.is_unit())
        return CubeRoot(0);
    long total = 0;
    for (const auto &f : factor(modulus)) {
        BigInt e = (f.prime.norm() - 1) / 3;
        EisInt r = pow_mod(alpha, e, f.prime);
        EisInt w(1);
        int k = 0;
        for (; k < 3; ++k, w = w * EisInt::omega())
            if (divides(f.prime, r - w))
                break;
        if (k == 3)
            throw numeric_failure("power residue is not a cube root of unity");
        total += static_cast<long>(k) * f.exponent;
    }
    return CubeRoot(total);
}

Monomial Monomial::from_rational(const BigRat &d)
{
    if (d == 0)
        throw domain_error("monomial must be nonzero");
    Monomial m;
    std::vector<std::pair<BigInt, int>> acc;
    auto add = [&](const BigInt &n, int sign) {
        if (n == 1)
            return;
        for (const auto &[p, e] : factor(n)) {
            long r = mod(static_cast<long>(sign * e), 3L);
            int ex = r == 0 ? 0 : (r == 1 ? 1 : -1);
            if (ex != 0)
                acc.emplace_back(p, ex);
        }
    };
    add(abs(BigInt(d.get_num())), 1);
    add(BigInt(d.get_den()), -1);
    std::sort(acc.begin(), acc.end());
    m.factors = acc;
    return m;
}

BigRat Monomial::value() const
{
    BigRat v = 1;
    for (const auto &[p, e] : factors)
        v = e > 0 ? BigRat(v * p) : BigRat(v / p);
    return v;
}

int Monomial::exponent_sum() const
{
    int s = 0;
    for (const auto &f : factors)
        s += f.second;
    return s;
}

CubeRoot chi_eval(const Monomial &d, const EisIdeal &ideal)
{
    CubeRoot r(0);
    for (const auto &[p, e] : d.factors) {
        CubeRoot s = cubic_symbol(EisInt(p), ideal.gen);
        r = r * (e > 0 ? s : s.inverse());
    }
    return r;
}

CubeRoot chi_eval(const BigRat &d, const EisIdeal &ideal)
{
    return chi_eval(Monomial::from_rational(d), ideal);
}

} // namespace cubesum
