#ifndef CUBESUM_PADIC_HPP
#define CUBESUM_PADIC_HPP

#include "cubesum/core.hpp"

namespace cubesum
{

struct precision_error : domain_error {
    using domain_error::domain_error;
};

// Element of Q_p known modulo p^abs_prec(): p^val * unit with the unit known
// modulo p^rel.  rel == 0 means the element is indistinguishable from zero.
class Padic
{
public:
    Padic() = default;
    Padic(long p, long abs_prec); // zero, O(p^abs_prec)

    static Padic from_rational(const BigRat &x, long p, long abs_prec);

    long prime() const { return p_; }
    long abs_prec() const { return val_ + rel_; }
    long rel_prec() const { return rel_; }
    bool is_zero() const { return rel_ == 0; }
    long valuation() const; // precision_error when is_zero()
    BigRat lift() const;    // p^val * unit with 0 <= unit < p^rel

    // Decided at the available precision, otherwise precision_error.
    bool is_integral() const;
    bool divisible_by(long e) const; // v(x) >= e
    bool is_unit() const;

private:
    long p_ = 2, val_ = 0, rel_ = 0;
    BigInt unit_;
};

Padic operator+(const Padic &a, const Padic &b);
Padic operator-(const Padic &a, const Padic &b);
Padic operator-(const Padic &a);
Padic operator*(const Padic &a, const Padic &b);
Padic operator/(const Padic &a, const Padic &b);

} // namespace cubesum

#endif
