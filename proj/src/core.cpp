#include "cubesum/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <sstream>

namespace cubesum
{

namespace
{

thread_local long g_precision = 192;

long pmax(const Real &a, const Real &b)
{
    return std::max(a.precision(), b.precision());
}

long resolve(long bits)
{
    return bits > 0 ? bits : g_precision;
}

} // namespace

long default_precision()
{
    return g_precision;
}

void set_default_precision(long bits)
{
    if (bits < 64)
        throw domain_error("precision below 64 bits");
    g_precision = bits;
}

precision_guard::precision_guard(long bits) : saved_(g_precision)
{
    set_default_precision(bits);
}

precision_guard::~precision_guard()
{
    g_precision = saved_;
}

Real::Real()
{
    mpfr_init2(v_, g_precision);
    mpfr_set_zero(v_, 1);
}

Real::Real(int v) : Real(static_cast<long>(v)) {}

Real::Real(long v)
{
    mpfr_init2(v_, g_precision);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(double v)
{
    mpfr_init2(v_, g_precision);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(const BigInt &v)
{
    mpfr_init2(v_, g_precision);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const BigRat &v)
{
    mpfr_init2(v_, g_precision);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string &s)
{
    mpfr_init2(v_, g_precision);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0 && mpfr_nan_p(v_))
        throw domain_error("cannot parse real: " + s);
}

Real::Real(const Real &o)
{
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real &&o) noexcept
{
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

Real::~Real()
{
    mpfr_clear(v_);
}

Real &Real::operator=(const Real &o)
{
    if (this != &o) {
        mpfr_set_prec(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real &Real::operator=(Real &&o) noexcept
{
    mpfr_swap(v_, o.v_);
    return *this;
}

Real Real::with_precision(long bits)
{
    Real r;
    mpfr_set_prec(r.v_, bits);
    mpfr_set_zero(r.v_, 1);
    return r;
}

Real Real::rounded(long bits) const
{
    Real r = with_precision(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

Real &Real::operator+=(const Real &o)
{
    *this = *this + o;
    return *this;
}

Real &Real::operator-=(const Real &o)
{
    *this = *this - o;
    return *this;
}

Real &Real::operator*=(const Real &o)
{
    *this = *this * o;
    return *this;
}

Real &Real::operator/=(const Real &o)
{
    *this = *this / o;
    return *this;
}

double Real::to_double() const
{
    return mpfr_get_d(v_, MPFR_RNDN);
}

BigInt Real::floor() const
{
    BigInt r;
    mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDD);
    return r;
}

BigInt Real::round() const
{
    BigInt r;
    mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDN);
    return r;
}

long Real::exponent() const
{
    if (mpfr_zero_p(v_))
        return -(1L << 30);
    return mpfr_get_exp(v_);
}

std::string Real::str(int digits) const
{
    char *buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

#define CUBESUM_BINOP(op, fn)                                                  \
    Real operator op(const Real &a, const Real &b)                             \
    {                                                                          \
        Real r = Real::with_precision(pmax(a, b));                             \
        fn(r.get(), a.get(), b.get(), MPFR_RNDN);                              \
        return r;                                                              \
    }

CUBESUM_BINOP(+, mpfr_add)
CUBESUM_BINOP(-, mpfr_sub)
CUBESUM_BINOP(*, mpfr_mul)
CUBESUM_BINOP(/, mpfr_div)

#undef CUBESUM_BINOP

Real operator-(const Real &a)
{
    Real r = Real::with_precision(a.precision());
    mpfr_neg(r.get(), a.get(), MPFR_RNDN);
    return r;
}

bool operator<(const Real &a, const Real &b)
{
    return mpfr_less_p(a.get(), b.get()) != 0;
}
bool operator>(const Real &a, const Real &b)
{
    return mpfr_greater_p(a.get(), b.get()) != 0;
}
bool operator<=(const Real &a, const Real &b)
{
    return mpfr_lessequal_p(a.get(), b.get()) != 0;
}
bool operator>=(const Real &a, const Real &b)
{
    return mpfr_greaterequal_p(a.get(), b.get()) != 0;
}
bool operator==(const Real &a, const Real &b)
{
    return mpfr_equal_p(a.get(), b.get()) != 0;
}

#define CUBESUM_UNARY(name, fn)                                                \
    Real name(const Real &a)                                                   \
    {                                                                          \
        Real r = Real::with_precision(a.precision());                          \
        fn(r.get(), a.get(), MPFR_RNDN);                                       \
        return r;                                                              \
    }

CUBESUM_UNARY(abs, mpfr_abs)
CUBESUM_UNARY(sqrt, mpfr_sqrt)
CUBESUM_UNARY(cbrt, mpfr_cbrt)
CUBESUM_UNARY(exp, mpfr_exp)
CUBESUM_UNARY(log, mpfr_log)
CUBESUM_UNARY(sin, mpfr_sin)
CUBESUM_UNARY(cos, mpfr_cos)

#undef CUBESUM_UNARY

Real atan2(const Real &y, const Real &x)
{
    Real r = Real::with_precision(pmax(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real &a, const Real &b)
{
    Real r = Real::with_precision(pmax(a, b));
    mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real &a, long e)
{
    Real r = Real::with_precision(a.precision());
    mpfr_pow_si(r.get(), a.get(), e, MPFR_RNDN);
    return r;
}

Real ldexp(const Real &a, long e)
{
    Real r = Real::with_precision(a.precision());
    mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN);
    return r;
}

Real max(const Real &a, const Real &b)
{
    return a < b ? b : a;
}

Real min(const Real &a, const Real &b)
{
    return b < a ? b : a;
}

Real pi(long bits)
{
    Real r = Real::with_precision(resolve(bits));
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

Real euler_gamma(long bits)
{
    Real r = Real::with_precision(resolve(bits));
    mpfr_const_euler(r.get(), MPFR_RNDN);
    return r;
}

// ---- complex ----

Complex &Complex::operator+=(const Complex &o)
{
    return *this = *this + o;
}
Complex &Complex::operator-=(const Complex &o)
{
    return *this = *this - o;
}
Complex &Complex::operator*=(const Complex &o)
{
    return *this = *this * o;
}
Complex &Complex::operator/=(const Complex &o)
{
    return *this = *this / o;
}

Complex operator-(const Complex &a)
{
    return {-a.re, -a.im};
}

Complex operator+(const Complex &a, const Complex &b)
{
    return {a.re + b.re, a.im + b.im};
}

Complex operator-(const Complex &a, const Complex &b)
{
    return {a.re - b.re, a.im - b.im};
}

Complex operator*(const Complex &a, const Complex &b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator/(const Complex &a, const Complex &b)
{
    Real d = norm(b);
    if (d.is_zero())
        throw numeric_failure("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Complex operator*(const Complex &a, const Real &b)
{
    return {a.re * b, a.im * b};
}

Complex operator*(const Real &a, const Complex &b)
{
    return {a * b.re, a * b.im};
}

Complex operator/(const Complex &a, const Real &b)
{
    return {a.re / b, a.im / b};
}

Complex conj(const Complex &a)
{
    return {a.re, -a.im};
}

Real norm(const Complex &a)
{
    return a.re * a.re + a.im * a.im;
}

Real abs(const Complex &a)
{
    Real r = Real::with_precision(a.precision());
    mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN);
    return r;
}

Real arg(const Complex &a)
{
    return atan2(a.im, a.re);
}

Complex exp(const Complex &a)
{
    Real m = exp(a.re);
    return {m * cos(a.im), m * sin(a.im)};
}

Complex log(const Complex &a)
{
    return {log(abs(a)), arg(a)};
}

Complex sqrt(const Complex &a)
{
    // principal branch, Re >= 0
    Real r = abs(a);
    if (r.is_zero())
        return a;
    Real x = sqrt((r + abs(a.re)) / Real(2));
    if (a.re.sign() >= 0)
        return {x, a.im / (x * Real(2))};
    Real y = a.im.sign() < 0 ? -x : x;
    return {abs(a.im) / (x * Real(2)), y};
}

Complex pow(const Complex &a, long e)
{
    if (e < 0)
        return Complex(Real(1)) / pow(a, -e);
    Complex r(Real::with_precision(a.precision()));
    r.re = Real(1).rounded(a.precision());
    Complex b = a;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

Complex expi2pi(const Complex &x)
{
    Real tp = pi(x.precision()) * Real(2);
    return exp(Complex(-tp * x.im, tp * x.re));
}

Complex root_of_unity(long k, long m)
{
    Real t = pi() * Real(2) * Real(k) / Real(m);
    return {cos(t), sin(t)};
}

std::string str(const Complex &z, int digits)
{
    return "(" + z.re.str(digits) + ", " + z.im.str(digits) + ")";
}

Complex agm(const Complex &a0, const Complex &b0)
{
    if (norm(a0).is_zero() || norm(b0).is_zero())
        throw domain_error("agm of zero");
    long prec = std::max(a0.precision(), b0.precision());
    Complex a = a0, b = b0;
    Real tol = ldexp(Real(1), -prec + 4);
    for (long it = 0; it < 10 * prec; ++it) {
        Complex an = (a + b) / Real(2);
        Complex bn = sqrt(a * b);
        if (bn.re.sign() < 0 || (bn.re.is_zero() && bn.im.sign() < 0))
            bn = -bn;
        a = an;
        b = bn;
        if (abs(a - b) <= tol * abs(a))
            return (a + b) / Real(2);
    }
    throw numeric_failure("agm did not converge");
}

Real agm(const Real &a, const Real &b)
{
    return agm(Complex(a), Complex(b)).re;
}

BigInt recognition_bound(long precision_bits)
{
    long e = std::max(1L, (precision_bits - 64) / 4);
    BigInt h;
    mpz_ui_pow_ui(h.get_mpz_t(), 2, e);
    return h;
}

std::optional<BigRat> recognize_rational(const Real &x, const BigInt &height_bound)
{
    if (height_bound < 1)
        throw domain_error("height bound must be positive");
    long prec = x.precision();
    Real tol = ldexp(Real(1).rounded(prec), -prec / 2);
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real y = x;
    std::optional<BigRat> found;
    for (long it = 0; it < 4 * prec; ++it) {
        BigInt a = y.floor();
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (abs(p1) > height_bound || q1 > height_bound)
            break;
        Real err = abs(x - Real(BigRat(p1, q1)).rounded(prec));
        if (err < tol) {
            BigRat c(p1, q1);
            c.canonicalize();
            if (found && *found != c)
                return std::nullopt;
            if (!found)
                found = c;
        }
        Real f = y - Real(a).rounded(prec);
        if (f.is_zero() || f.exponent() < -prec + 8)
            break;
        y = Real(1).rounded(prec) / f;
    }
    return found;
}

std::optional<BigRat> recognize_rational(const Complex &x, const BigInt &height_bound)
{
    long prec = x.precision();
    if (abs(x.im) > ldexp(Real(1).rounded(prec), -prec / 2) * max(Real(1), abs(x.re)))
        return std::nullopt;
    return recognize_rational(x.re, height_bound);
}

BigInt isqrt(const BigInt &n)
{
    if (n < 0)
        throw domain_error("isqrt of negative");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const BigInt &n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_square(const BigRat &q)
{
    return is_square(BigInt(q.get_num())) && is_square(BigInt(q.get_den()));
}

BigRat rat_sqrt(const BigRat &q)
{
    if (!is_square(q))
        throw domain_error("not a rational square");
    BigRat r(isqrt(BigInt(q.get_num())), isqrt(BigInt(q.get_den())));
    r.canonicalize();
    return r;
}

BigInt icbrt(const BigInt &n)
{
    BigInt r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
    return r;
}

std::string to_string(const BigRat &q)
{
    return q.get_str();
}

BigRat make_rat(const BigInt &n, const BigInt &d)
{
    if (d == 0)
        throw domain_error("zero denominator");
    BigRat q(n, d);
    q.canonicalize();
    return q;
}

BigRat parse_rational(const std::string &s)
{
    BigRat q;
    if (q.set_str(s, 10) != 0)
        throw domain_error("cannot parse rational: " + s);
    if (q.get_den() == 0)
        throw domain_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

int valuation(const BigInt &n, const BigInt &p)
{
    if (n == 0)
        return 1 << 28;
    BigInt m = n;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

int valuation(const BigRat &q, const BigInt &p)
{
    if (q == 0)
        return 1 << 28;
    return valuation(BigInt(q.get_num()), p) - valuation(BigInt(q.get_den()), p);
}

bool is_prime(const BigInt &n)
{
    return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace
{

BigInt pollard_brent(const BigInt &n)
{
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    for (unsigned long c = 1;; ++c) {
        BigInt y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 128;
        auto f = [&](const BigInt &v) {
            BigInt t = v * v + c;
            mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            return t;
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i)
                y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    BigInt d = abs(x - y);
                    q = q * d;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                BigInt d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_into(const BigInt &n, std::vector<BigInt> &out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    BigInt d = pollard_brent(n);
    factor_into(d, out);
    factor_into(BigInt(n / d), out);
}

} // namespace

std::vector<std::pair<BigInt, int>> factor(const BigInt &n0)
{
    if (n0 == 0)
        throw domain_error("factor(0)");
    BigInt n = abs(n0);
    std::vector<BigInt> primes;
    for (unsigned long p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.emplace_back(p);
            n /= p;
        }
    }
    if (n > 1)
        factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<BigInt, int>> out;
    for (const auto &p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

long mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

BigInt mod(const BigInt &a, const BigInt &m)
{
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

} // namespace cubesum
