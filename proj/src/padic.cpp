#include "cubesum/padic.hpp"

#include <algorithm>

namespace cubesum
{

namespace
{

BigInt ppow(long p, long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

void check_same_prime(const Padic &a, const Padic &b)
{
    if (a.prime() != b.prime())
        throw domain_error("p-adic operands at different primes");
}

} // namespace

Padic::Padic(long p, long abs_prec) : p_(p), val_(abs_prec), rel_(0), unit_(0)
{
    if (p < 2)
        throw domain_error("p-adic prime must be at least 2");
}

Padic Padic::from_rational(const BigRat &x, long p, long abs_prec)
{
    Padic r(p, abs_prec);
    if (x == 0)
        return r;
    BigRat u = x;
    u.canonicalize();
    long v = cubesum::valuation(u, BigInt(p));
    if (v >= abs_prec)
        return r;
    if (v > 0)
        u /= BigRat(ppow(p, v));
    else if (v < 0)
        u *= BigRat(ppow(p, -v));
    BigInt m = ppow(p, abs_prec - v), inv;
    if (!mpz_invert(inv.get_mpz_t(), BigInt(u.get_den()).get_mpz_t(), m.get_mpz_t()))
        throw numeric_failure("p-adic unit denominator not invertible");
    r.val_ = v;
    r.rel_ = abs_prec - v;
    r.unit_ = mod(BigInt(u.get_num()) * inv, m);
    return r;
}

long Padic::valuation() const
{
    if (is_zero())
        throw precision_error("p-adic valuation undecided: zero to O(" + std::to_string(p_) + "^" +
                              std::to_string(abs_prec()) + ")");
    return val_;
}

BigRat Padic::lift() const
{
    if (is_zero())
        return BigRat(0);
    BigRat r(unit_);
    if (val_ > 0)
        r *= BigRat(ppow(p_, val_));
    else if (val_ < 0)
        r /= BigRat(ppow(p_, -val_));
    return r;
}

bool Padic::is_integral() const { return divisible_by(0); }

bool Padic::divisible_by(long e) const
{
    if (!is_zero())
        return val_ >= e;
    if (abs_prec() >= e)
        return true;
    throw precision_error("need " + std::to_string(e) + " " + std::to_string(p_) +
                          "-adic digits, have " + std::to_string(abs_prec()));
}

bool Padic::is_unit() const { return valuation() == 0; }

Padic operator+(const Padic &a, const Padic &b)
{
    check_same_prime(a, b);
    return Padic::from_rational(a.lift() + b.lift(), a.prime(), std::min(a.abs_prec(), b.abs_prec()));
}

Padic operator-(const Padic &a) { return Padic::from_rational(-a.lift(), a.prime(), a.abs_prec()); }

Padic operator-(const Padic &a, const Padic &b) { return a + (-b); }

Padic operator*(const Padic &a, const Padic &b)
{
    check_same_prime(a, b);
    long p = a.prime();
    if (a.is_zero() && b.is_zero())
        return Padic(p, a.abs_prec() + b.abs_prec());
    if (a.is_zero())
        return Padic(p, a.abs_prec() + b.valuation());
    if (b.is_zero())
        return Padic(p, b.abs_prec() + a.valuation());
    long v = a.valuation() + b.valuation();
    return Padic::from_rational(a.lift() * b.lift(), p, v + std::min(a.rel_prec(), b.rel_prec()));
}

Padic operator/(const Padic &a, const Padic &b)
{
    check_same_prime(a, b);
    long vb = b.valuation();
    if (a.is_zero())
        return Padic(a.prime(), a.abs_prec() - vb);
    long v = a.valuation() - vb;
    return Padic::from_rational(a.lift() / b.lift(), a.prime(), v + std::min(a.rel_prec(), b.rel_prec()));
}

} // namespace cubesum
