#ifndef CUBESUM_CORE_HPP
#define CUBESUM_CORE_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubesum
{

using BigInt = mpz_class;
using BigRat = mpq_class;

struct numeric_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Precision (bits) given to newly constructed reals.
long default_precision();
void set_default_precision(long bits);

class precision_guard
{
public:
    explicit precision_guard(long bits);
    ~precision_guard();
    precision_guard(const precision_guard &) = delete;
    precision_guard &operator=(const precision_guard &) = delete;

private:
    long saved_;
};

class Real
{
public:
    Real();
    Real(int v);
    Real(long v);
    Real(double v);
    Real(const BigInt &v);
    Real(const BigRat &v);
    explicit Real(const std::string &s);
    Real(const Real &o);
    Real(Real &&o) noexcept;
    ~Real();

    Real &operator=(const Real &o);
    Real &operator=(Real &&o) noexcept;

    static Real with_precision(long bits);

    long precision() const { return mpfr_get_prec(v_); }
    // Returns a copy rounded (or extended) to the given precision.
    Real rounded(long bits) const;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Real &operator+=(const Real &o);
    Real &operator-=(const Real &o);
    Real &operator*=(const Real &o);
    Real &operator/=(const Real &o);

    double to_double() const;
    BigInt floor() const;
    BigInt round() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exponent() const;
    std::string str(int digits = 20) const;

private:
    mpfr_t v_;
};

Real operator-(const Real &a);
Real operator+(const Real &a, const Real &b);
Real operator-(const Real &a, const Real &b);
Real operator*(const Real &a, const Real &b);
Real operator/(const Real &a, const Real &b);
bool operator<(const Real &a, const Real &b);
bool operator>(const Real &a, const Real &b);
bool operator<=(const Real &a, const Real &b);
bool operator>=(const Real &a, const Real &b);
bool operator==(const Real &a, const Real &b);

Real abs(const Real &a);
Real sqrt(const Real &a);
Real cbrt(const Real &a);
Real exp(const Real &a);
Real log(const Real &a);
Real sin(const Real &a);
Real cos(const Real &a);
Real atan2(const Real &y, const Real &x);
Real pow(const Real &a, const Real &b);
Real pow(const Real &a, long e);
Real ldexp(const Real &a, long e);
Real max(const Real &a, const Real &b);
Real min(const Real &a, const Real &b);
Real pi(long bits = 0);
Real euler_gamma(long bits = 0);

struct Complex {
    Real re, im;

    Complex() = default;
    Complex(const Real &r) : re(r), im(Real::with_precision(r.precision())) {}
    Complex(const Real &r, const Real &i) : re(r), im(i) {}
    Complex(int r) : Complex(Real(r)) {}
    Complex(double r, double i) : re(r), im(i) {}

    long precision() const { return std::max(re.precision(), im.precision()); }
    Complex &operator+=(const Complex &o);
    Complex &operator-=(const Complex &o);
    Complex &operator*=(const Complex &o);
    Complex &operator/=(const Complex &o);
};

Complex operator-(const Complex &a);
Complex operator+(const Complex &a, const Complex &b);
Complex operator-(const Complex &a, const Complex &b);
Complex operator*(const Complex &a, const Complex &b);
Complex operator/(const Complex &a, const Complex &b);
Complex operator*(const Complex &a, const Real &b);
Complex operator*(const Real &a, const Complex &b);
Complex operator/(const Complex &a, const Real &b);

Complex conj(const Complex &a);
Real norm(const Complex &a);
Real abs(const Complex &a);
Real arg(const Complex &a);
Complex exp(const Complex &a);
Complex log(const Complex &a);
Complex sqrt(const Complex &a);
Complex pow(const Complex &a, long e);
// e^{2 pi i x}
Complex expi2pi(const Complex &x);
// e^{2 pi i k / m} for integers
Complex root_of_unity(long k, long m);
std::string str(const Complex &z, int digits = 20);

// Arithmetic-geometric mean with the principal square root branch
// (Re >= 0, ties broken by Im >= 0) at every step.
Complex agm(const Complex &a, const Complex &b);
Real agm(const Real &a, const Real &b);

// Continued-fraction recognition: the first convergent p/q with
// |x - p/q| < 2^(-precision/2) and max(|p|, q) <= height_bound.  Returns
// nothing if no convergent qualifies or if a second, different convergent
// within the bound also qualifies.
std::optional<BigRat> recognize_rational(const Real &x, const BigInt &height_bound);
std::optional<BigRat> recognize_rational(const Complex &x, const BigInt &height_bound);

// Largest height bound for which recognition at this precision is reliable.
BigInt recognition_bound(long precision_bits);

BigInt isqrt(const BigInt &n);
bool is_square(const BigInt &n);
bool is_square(const BigRat &q);
BigRat rat_sqrt(const BigRat &q); // requires is_square(q)
BigInt icbrt(const BigInt &n);    // floor cube root for n >= 0, sign-symmetric
std::string to_string(const BigRat &q);
BigRat parse_rational(const std::string &s);
// n/d in lowest terms (the two-argument mpq constructor does not reduce).
BigRat make_rat(const BigInt &n, const BigInt &d);
int valuation(const BigInt &n, const BigInt &p);
int valuation(const BigRat &q, const BigInt &p);

bool is_prime(const BigInt &n);
// Prime factorization of |n| (n != 0), primes ascending.
std::vector<std::pair<BigInt, int>> factor(const BigInt &n);
long mod(long a, long m);
BigInt mod(const BigInt &a, const BigInt &m);

} // namespace cubesum

#endif
