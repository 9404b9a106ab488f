#include "cubesum/ellcurve.hpp"

#include "cubesum/eisenstein.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>

namespace cubesum
{

namespace
{

BigInt num(const BigRat &q)
{
    return q.get_num();
}

BigInt den(const BigRat &q)
{
    return q.get_den();
}

BigInt ipow(const BigInt &b, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

BigRat rpow(const BigRat &b, unsigned long e)
{
    return BigRat(ipow(num(b), e), ipow(den(b), e));
}

bool divisible(const BigInt &n, const BigInt &d)
{
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

} // namespace

// ---------------------------------------------------------------------------
// The curve and its rational points

CurveK::CurveK(const BigRat &k_) : k(k_)
{
    k.canonicalize();
    if (k == 0)
        throw domain_error("y^2 = x^3 + k needs k != 0");
}

CurveK CurveK::minimal_twist(BigRat *u_out) const
{
    BigInt a = num(k), b = den(k);
    // k b^6 = a b^5 is integral
    BigRat u(b);
    std::map<BigInt, int> v;
    if (abs(a) != 1)
        for (const auto &[p, e] : factor(a))
            v[p] += e;
    if (b != 1)
        for (const auto &[p, e] : factor(b))
            v[p] += 5 * e;
    for (const auto &[p, e] : v)
        if (e >= 6)
            u /= BigRat(ipow(p, e / 6));
    u.canonicalize();
    if (u_out)
        *u_out = u;
    return CurveK(BigRat(k * rpow(u, 6)));
}

std::string CurveK::tag() const
{
    return "k=" + num(k).get_str() + "/" + den(k).get_str();
}

bool operator==(const RatPoint &P, const RatPoint &Q)
{
    if (P.inf || Q.inf)
        return P.inf == Q.inf;
    return P.x == Q.x && P.y == Q.y;
}

bool on_curve(const RatPoint &P, const CurveK &E)
{
    return P.inf || P.y * P.y == P.x * P.x * P.x + E.k;
}

RatPoint negate(const RatPoint &P)
{
    if (P.inf)
        return P;
    return RatPoint::affine(P.x, BigRat(-P.y));
}

RatPoint add(const RatPoint &P, const RatPoint &Q, const CurveK &)
{
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    BigRat l;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0)
            return RatPoint::infinity();
        l = 3 * P.x * P.x / (2 * P.y);
    } else {
        l = (Q.y - P.y) / (Q.x - P.x);
    }
    BigRat x3 = l * l - P.x - Q.x;
    BigRat y3 = l * (P.x - x3) - P.y;
    return RatPoint::affine(x3, y3);
}

RatPoint mul(long m, const RatPoint &P, const CurveK &E)
{
    RatPoint base = m < 0 ? negate(P) : P;
    unsigned long k = m < 0 ? -static_cast<unsigned long>(m) : m;
    RatPoint acc = RatPoint::infinity();
    while (k) {
        if (k & 1)
            acc = add(acc, base, E);
        k >>= 1;
        if (k)
            base = add(base, base, E);
    }
    return acc;
}

std::optional<RatPoint> lift_x(const BigRat &x, const CurveK &E)
{
    BigRat y2 = x * x * x + E.k;
    if (y2 < 0 || !is_square(y2))
        return std::nullopt;
    return RatPoint::affine(x, rat_sqrt(y2));
}

RatPoint rescale(const RatPoint &P, const BigRat &u)
{
    if (P.inf)
        return P;
    BigRat u2 = u * u;
    return RatPoint::affine(BigRat(P.x * u2), BigRat(P.y * u2 * u));
}

std::string to_string(const RatPoint &P)
{
    if (P.inf)
        return "O";
    return "(" + to_string(P.x) + ", " + to_string(P.y) + ")";
}

bool is_torsion(const RatPoint &P, const CurveK &E)
{
    RatPoint Q = P;
    for (int m = 1; m <= 12; ++m) {
        if (Q.inf)
            return true;
        Q = add(Q, P, E);
    }
    return false;
}

std::vector<RatPoint> torsion(const CurveK &E)
{
    BigRat u;
    CurveK M = E.minimal_twist(&u);
    BigInt k = num(M.k);
    std::vector<RatPoint> out{RatPoint::infinity()};
    auto consider = [&](const BigInt &y) {
        BigInt c = y * y - k;
        BigInt x = icbrt(c);
        if (x * x * x != c)
            return;
        RatPoint P = RatPoint::affine(BigRat(x), BigRat(y));
        if (is_torsion(P, M))
            out.push_back(rescale(P, BigRat(1 / u)));
    };
    // y = 0 or y^2 | 27 k^2, i.e. y | 3k
    std::vector<BigInt> divs{1};
    for (const auto &[p, e] : factor(BigInt(3 * k))) {
        std::size_t n = divs.size();
        BigInt pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < n; ++j)
                divs.push_back(divs[j] * pk);
        }
    }
    consider(0);
    for (const auto &d : divs) {
        consider(d);
        consider(BigInt(-d));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduction mod p

namespace
{

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p)
{
    return static_cast<u64>(static_cast<u128>(a) * b % p);
}

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p)
{
    return powmod(a, p - 2, p);
}

// Tonelli-Shanks; a must be a nonzero square.
u64 sqrtmod(u64 a, u64 p)
{
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

struct ModPoint {
    bool inf = true;
    u64 x = 0, y = 0;
};

ModPoint mod_add(const ModPoint &P, const ModPoint &Q, u64 p)
{
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    u64 l;
    if (P.x == Q.x) {
        if ((P.y + Q.y) % p == 0)
            return {};
        l = mulmod(mulmod(3, mulmod(P.x, P.x, p), p), invmod(2 * P.y % p, p), p);
    } else {
        l = mulmod((Q.y + p - P.y) % p, invmod((Q.x + p - P.x) % p, p), p);
    }
    u64 x3 = (mulmod(l, l, p) + 2 * p - P.x - Q.x) % p;
    u64 y3 = (mulmod(l, (P.x + p - x3) % p, p) + p - P.y) % p;
    return {false, x3, y3};
}

ModPoint mod_mul(u64 m, ModPoint P, u64 p)
{
    ModPoint acc;
    while (m) {
        if (m & 1)
            acc = mod_add(acc, P, p);
        m >>= 1;
        if (m)
            P = mod_add(P, P, p);
    }
    return acc;
}

u64 k_mod_p(const CurveK &E, long p)
{
    BigInt P(p);
    BigInt a = mod(num(E.k), P), b = mod(den(E.k), P);
    if (a == 0 || b == 0)
        throw domain_error("a_p requested at a prime of bad reduction");
    u64 bi = invmod(b.get_ui(), p);
    return mulmod(a.get_ui(), bi, p);
}

} // namespace

long ap_bruteforce(const CurveK &E, long p)
{
    if (p <= 3)
        throw domain_error("a_p requested at a prime of bad reduction");
    u64 k = k_mod_p(E, p);
    std::vector<int> sq(p, 0);
    for (long y = 0; y < p; ++y)
        sq[mulmod(y, y, p)]++;
    long count = 1;
    for (long x = 0; x < p; ++x)
        count += sq[(mulmod(mulmod(x, x, p), x, p) + k) % p];
    return p + 1 - count;
}

long ap(const CurveK &E, long p)
{
    if (p <= 3 || !is_prime(BigInt(p)))
        throw domain_error("a_p needs a prime p > 3");
    u64 k = k_mod_p(E, p);
    if (p % 3 == 2)
        return 0;
    if (p < 2000)
        return ap_bruteforce(E, p);
    // a_p is the trace of an associate of a prime of norm p
    EisInt pi = split_prime(BigInt(p));
    std::vector<long> cand;
    for (const auto &u : units()) {
        EisInt w = u * pi;
        long t = BigInt(2 * w.a - w.b).get_si();
        bool seen = false;
        for (long c : cand)
            seen = seen || c == t;
        if (!seen)
            cand.push_back(t);
    }
    std::mt19937_64 rng(static_cast<u64>(p) * 2654435761u);
    for (int round = 0; round < 64 && cand.size() > 1; ++round) {
        u64 x = rng() % p;
        u64 rhs = (mulmod(mulmod(x, x, p), x, p) + k) % p;
        if (rhs == 0 || powmod(rhs, (p - 1) / 2, p) != 1)
            continue;
        ModPoint P{false, x, sqrtmod(rhs, p)};
        std::vector<long> keep;
        for (long t : cand)
            if (mod_mul(static_cast<u64>(p + 1 - t), P, p).inf)
                keep.push_back(t);
        cand = keep;
    }
    if (cand.size() != 1)
        throw numeric_failure("a_p: could not isolate the trace at p = " + std::to_string(p));
    return cand[0];
}

// ---------------------------------------------------------------------------
// Tate's algorithm

BigInt Weierstrass::b8() const
{
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}

BigInt Weierstrass::c4() const
{
    BigInt B2 = b2();
    return B2 * B2 - 24 * b4();
}

BigInt Weierstrass::c6() const
{
    BigInt B2 = b2();
    return -B2 * B2 * B2 + 36 * B2 * b4() - 216 * b6();
}

BigInt Weierstrass::disc() const
{
    BigInt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

namespace
{

// x = x' + r, y = y' + s x' + t
Weierstrass change(const Weierstrass &W, const BigInt &r, const BigInt &s, const BigInt &t)
{
    Weierstrass V;
    V.a1 = W.a1 + 2 * s;
    V.a2 = W.a2 - s * W.a1 + 3 * r - s * s;
    V.a3 = W.a3 + r * W.a1 + 2 * t;
    V.a4 = W.a4 - s * W.a3 + 2 * r * W.a2 - (t + r * s) * W.a1 + 3 * r * r - 2 * s * t;
    V.a6 = W.a6 + r * W.a4 + r * r * W.a2 + r * r * r - t * W.a3 - t * t - r * t * W.a1;
    return V;
}

BigInt exact(const BigInt &a, const BigInt &p, int j)
{
    BigInt d = ipow(p, j);
    if (!divisible(a, d))
        throw numeric_failure("Tate's algorithm: expected divisibility failed");
    return a / d;
}

// A root of multiplicity >= 2 of a x^2 + b x + c mod p (a unit), if any.
std::optional<BigInt> double_root2(const BigInt &a, const BigInt &b, const BigInt &c, const BigInt &p)
{
    for (BigInt x = 0; x < p; ++x) {
        if (mod(BigInt(a * x * x + b * x + c), p) == 0 && mod(BigInt(2 * a * x + b), p) == 0)
            return x;
    }
    return std::nullopt;
}

} // namespace

LocalData tate(const Weierstrass &W0, const BigInt &p)
{
    if (!is_prime(p))
        throw domain_error("Tate's algorithm needs a prime");
    if (p > 1000000)
        throw domain_error("Tate's algorithm: residue search limited to p <= 10^6");
    LocalData out;
    Weierstrass W = W0;
    for (;;) {
        BigInt D = W.disc();
        if (D == 0)
            throw domain_error("singular Weierstrass model");
        int n = valuation(D, p);
        out.disc_valuation = n;
        if (n == 0) {
            out.kodaira = "I0";
            out.components = 1;
            out.conductor_exponent = 0;
            return out;
        }
        // singular point of the reduction to (0, 0)
        {
            bool found = false;
            BigInt B2 = W.b2(), B4 = W.b4(), B6 = W.b6();
            for (BigInt x = 0; x < p && !found; ++x) {
                if (p == 2 || p == 3) {
                    for (BigInt y = 0; y < p && !found; ++y) {
                        BigInt F = y * y + W.a1 * x * y + W.a3 * y - x * x * x - W.a2 * x * x - W.a4 * x - W.a6;
                        BigInt Fx = W.a1 * y - 3 * x * x - 2 * W.a2 * x - W.a4;
                        BigInt Fy = 2 * y + W.a1 * x + W.a3;
                        if (mod(F, p) == 0 && mod(Fx, p) == 0 && mod(Fy, p) == 0) {
                            W = change(W, x, 0, y);
                            found = true;
                        }
                    }
                } else {
                    BigInt g = 4 * x * x * x + B2 * x * x + 2 * B4 * x + B6;
                    BigInt dg = 12 * x * x + 2 * B2 * x + 2 * B4;
                    if (mod(g, p) == 0 && mod(dg, p) == 0) {
                        BigInt inv2;
                        BigInt two(2);
                        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
                        BigInt y = mod(BigInt(-(W.a1 * x + W.a3) * inv2), p);
                        W = change(W, x, 0, y);
                        found = true;
                    }
                }
            }
            if (!found)
                throw numeric_failure("Tate's algorithm: singular point not found");
        }
        if (mod(W.c4(), p) != 0) {
            out.kodaira = "I" + std::to_string(n);
            out.components = n;
            out.conductor_exponent = 1;
            return out;
        }
        if (valuation(W.a6, p) < 2) {
            out.kodaira = "II";
            out.components = 1;
            out.conductor_exponent = n;
            return out;
        }
        if (valuation(W.b8(), p) < 3) {
            out.kodaira = "III";
            out.components = 2;
            out.conductor_exponent = n - 1;
            return out;
        }
        if (valuation(W.b6(), p) < 3) {
            out.kodaira = "IV";
            out.components = 3;
            out.conductor_exponent = n - 2;
            return out;
        }
        // p | a1, a2; p^2 | a3, a4; p^3 | a6
        {
            bool ok = false;
            BigInt p2 = p * p;
            auto good = [&](const Weierstrass &V) {
                return valuation(V.a1, p) >= 1 && valuation(V.a2, p) >= 1 && valuation(V.a3, p) >= 2 &&
                       valuation(V.a4, p) >= 2 && valuation(V.a6, p) >= 3;
            };
            if (p == 2) {
                for (int s = 0; s < 2 && !ok; ++s)
                    for (int t = 0; t < 4 && !ok; ++t) {
                        Weierstrass V = change(W, 0, s, t);
                        if (good(V)) {
                            W = V;
                            ok = true;
                        }
                    }
            } else {
                BigInt inv2, two(2);
                mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p2.get_mpz_t());
                BigInt s = mod(BigInt(-W.a1 * inv2), p);
                BigInt t = mod(BigInt(-W.a3 * inv2), p2);
                Weierstrass V = change(W, 0, s, t);
                if (good(V)) {
                    W = V;
                    ok = true;
                }
            }
            if (!ok)
                throw numeric_failure("Tate's algorithm: could not reach the I0* normal form");
        }
        BigInt b = exact(W.a2, p, 1), c = exact(W.a4, p, 2), d = exact(W.a6, p, 3);
        BigInt cubic_disc = b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
        if (mod(cubic_disc, p) != 0) {
            out.kodaira = "I0*";
            out.components = 5;
            out.conductor_exponent = n - 4;
            return out;
        }
        BigInt r;
        {
            bool found = false;
            for (BigInt x = 0; x < p && !found; ++x) {
                if (mod(BigInt(x * x * x + b * x * x + c * x + d), p) == 0 &&
                    mod(BigInt(3 * x * x + 2 * b * x + c), p) == 0) {
                    r = x;
                    found = true;
                }
            }
            if (!found)
                throw numeric_failure("Tate's algorithm: multiple root not found");
        }
        bool triple = mod(BigInt(b + 3 * r), p) == 0;
        W = change(W, BigInt(r * p), 0, 0);
        if (!triple) {
            // I_m^*
            int m = 1;
            for (;; ++m) {
                if (m % 2 == 1) {
                    int kk = (m + 3) / 2;
                    BigInt q1 = exact(W.a3, p, kk), q0 = exact(W.a6, p, 2 * kk);
                    auto root = double_root2(1, q1, BigInt(-q0), p);
                    if (!root)
                        break;
                    W = change(W, 0, 0, BigInt(*root * ipow(p, kk)));
                } else {
                    int kk = (m + 4) / 2;
                    BigInt q2 = exact(W.a2, p, 1), q1 = exact(W.a4, p, kk), q0 = exact(W.a6, p, 2 * kk - 1);
                    auto root = double_root2(q2, q1, q0, p);
                    if (!root)
                        break;
                    W = change(W, BigInt(*root * ipow(p, kk - 1)), 0, 0);
                }
            }
            out.kodaira = "I" + std::to_string(m) + "*";
            out.components = m + 5;
            out.conductor_exponent = n - 4 - m;
            return out;
        }
        {
            BigInt q1 = exact(W.a3, p, 2), q0 = exact(W.a6, p, 4);
            auto root = double_root2(1, q1, BigInt(-q0), p);
            if (!root) {
                out.kodaira = "IV*";
                out.components = 7;
                out.conductor_exponent = n - 6;
                return out;
            }
            W = change(W, 0, 0, BigInt(*root * p * p));
        }
        if (valuation(W.a4, p) < 4) {
            out.kodaira = "III*";
            out.components = 8;
            out.conductor_exponent = n - 7;
            return out;
        }
        if (valuation(W.a6, p) < 6) {
            out.kodaira = "II*";
            out.components = 9;
            out.conductor_exponent = n - 8;
            return out;
        }
        // not minimal
        out.input_minimal = false;
        W.a1 = exact(W.a1, p, 1);
        W.a2 = exact(W.a2, p, 2);
        W.a3 = exact(W.a3, p, 3);
        W.a4 = exact(W.a4, p, 4);
        W.a6 = exact(W.a6, p, 6);
    }
}

LocalData local_data(const CurveK &E, const BigInt &p)
{
    CurveK M = E.minimal_twist();
    Weierstrass W{0, 0, 0, 0, num(M.k)};
    return tate(W, p);
}

std::vector<BigInt> bad_primes(const CurveK &E)
{
    CurveK M = E.minimal_twist();
    std::vector<BigInt> out{2, 3};
    BigInt k = abs(num(M.k));
    if (k != 1)
        for (const auto &[p, e] : factor(k))
            if (p > 3)
                out.push_back(p);
    return out;
}

BigInt conductor(const CurveK &E)
{
    BigInt N = 1;
    for (const auto &p : bad_primes(E))
        N *= ipow(p, local_data(E, p).conductor_exponent);
    return N;
}

// ---------------------------------------------------------------------------
// Complex uniformization

namespace
{

Complex cexp(const Complex &z)
{
    return exp(z);
}

Complex two_pi_i()
{
    return Complex(Real(0), Real(2) * pi(default_precision()));
}

// Smallest n with |q|^(n - 1/2) below the working precision.
long series_terms(const Complex &q)
{
    Real aq = abs(q);
    double lq = -log(aq).to_double();
    if (lq <= 0)
        throw numeric_failure("q-series with |q| >= 1");
    double need = (default_precision() + 30) * 0.6931471805599453;
    return static_cast<long>(need / lq + 2);
}

} // namespace

PeriodLattice periods(const CurveK &E)
{
    long prec = default_precision();
    Real k(E.k);
    Real e1 = -cbrt(k);
    Complex w2 = root_of_unity(2, 3);
    Complex e3 = Complex(e1) * w2;
    Complex a = sqrt(Complex(e1) - e3);
    if (a.re < 0)
        a = -a;
    Real Om = pi(prec) / agm(a.re, abs(a));
    PeriodLattice L;
    L.omega = Om;
    L.w1 = Complex(Om);
    if (E.k > 0)
        L.w2 = Complex(Om / Real(2), Om / (Real(2) * sqrt(Real(3))));
    else
        L.w2 = Complex(Om) * root_of_unity(1, 3);
    return L;
}

std::pair<Complex, Complex> invariants(const PeriodLattice &L)
{
    Complex q = cexp(two_pi_i() * L.tau());
    long terms = series_terms(q) + 8;
    Complex s3, s5, qn(Real(1));
    for (long n = 1; n <= terms; ++n) {
        qn = qn * q;
        Complex lam = qn / (Complex(Real(1)) - qn);
        Real n3 = Real(n) * Real(n) * Real(n);
        s3 += lam * n3;
        s5 += lam * (n3 * Real(n) * Real(n));
    }
    Complex E4 = Complex(Real(1)) + s3 * Real(240);
    Complex E6 = Complex(Real(1)) - s5 * Real(504);
    Complex c = Complex(Real(2) * pi(default_precision())) / L.w1;
    Complex c2 = c * c, c4 = c2 * c2;
    return {c4 * E4 / Real(12), c4 * c2 * E6 / Real(216)};
}

namespace
{

// z = x w1 + y w2
std::pair<Real, Real> lattice_coords(const Complex &z, const PeriodLattice &L)
{
    Complex t = z / L.w1;
    Complex tau = L.tau();
    Real y = t.im / tau.im;
    Real x = t.re - y * tau.re;
    return {x, y};
}

} // namespace

Complex reduce_mod_lattice(const Complex &z, const PeriodLattice &L)
{
    auto [x, y] = lattice_coords(z, L);
    Real fx((x + Real(0.5)).floor()), fy((y + Real(0.5)).floor());
    return z - L.w1 * fx - L.w2 * fy;
}

Real lattice_distance(const Complex &z, const PeriodLattice &L)
{
    Complex r = reduce_mod_lattice(z, L);
    Real best = abs(r);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            Real d = abs(r - L.w1 * Real(i) - L.w2 * Real(j));
            if (d < best)
                best = d;
        }
    return best;
}

WpPair weierstrass_p(const Complex &z0, const PeriodLattice &L)
{
    Complex z = reduce_mod_lattice(z0, L);
    Complex c = two_pi_i() / L.w1;
    Complex q = cexp(two_pi_i() * L.tau());
    Complex u = cexp(c * z);
    Complex one(Real(1));
    Complex s = Complex(Real(1) / Real(12)) + u / ((one - u) * (one - u));
    Complex d = u * (one + u) / ((one - u) * (one - u) * (one - u));
    Complex qn = one, ui = one / u;
    long terms = series_terms(q);
    for (long n = 1; n <= terms; ++n) {
        qn = qn * q;
        Complex a = qn * u, b = qn * ui;
        Complex oa = one - a, ob = one - b, oq = one - qn;
        s += a / (oa * oa) + b / (ob * ob) - qn * Real(2) / (oq * oq);
        d += a * (one + a) / (oa * oa * oa) - b * (one + b) / (ob * ob * ob);
    }
    return {c * c * s, c * c * c * d};
}

ComplexPoint elliptic_exp(const Complex &z, const PeriodLattice &L)
{
    long prec = default_precision();
    if (lattice_distance(z, L) < ldexp(abs(L.w1), -prec / 2))
        return {};
    WpPair w = weierstrass_p(z, L);
    return {false, w.wp, w.dwp / Real(2)};
}

namespace
{

Complex newton_log(Complex z, const Complex &x, const PeriodLattice &L)
{
    long prec = default_precision();
    Real tol = ldexp(abs(L.w1), -prec + 12);
    for (int it = 0; it < 200; ++it) {
        WpPair w = weierstrass_p(z, L);
        if (w.dwp.re.is_zero() && w.dwp.im.is_zero())
            break;
        Complex dz = (w.wp - x) / w.dwp;
        z = z - dz;
        if (abs(dz) < tol)
            break;
    }
    return z;
}

} // namespace

Complex elliptic_log(const Complex &x, const Complex &y, const PeriodLattice &L)
{
    long prec = default_precision();
    Real scale = abs(L.w1);
    Real tol = ldexp(max(Real(1), abs(x)), -prec / 2);
    std::vector<Complex> starts;
    if (abs(x) * scale * scale > Real(1000)) {
        starts.push_back(-x / y);
    } else {
        precision_guard g(64);
        const int G = 24;
        std::vector<std::pair<double, Complex>> grid;
        Complex xl = x, yl = y;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j) {
                if (i == 0 && j == 0)
                    continue;
                Complex z = L.w1 * Real(double(i) / G) + L.w2 * Real(double(j) / G);
                z = Complex(z.re.rounded(64), z.im.rounded(64));
                WpPair w = weierstrass_p(z, L);
                double dd = (abs(w.wp - xl) + abs(w.dwp / Real(2) - yl)).to_double();
                grid.push_back({dd, z});
            }
        std::sort(grid.begin(), grid.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
        for (int i = 0; i < 6 && i < static_cast<int>(grid.size()); ++i)
            starts.push_back(grid[i].second);
    }
    for (auto z0 : starts) {
        Complex z(z0.re.rounded(prec), z0.im.rounded(prec));
        z = newton_log(z, x, L);
        WpPair w = weierstrass_p(z, L);
        if (abs(w.wp - x) > tol)
            continue;
        Complex yy = w.dwp / Real(2);
        Real ty = ldexp(max(Real(1), abs(y)), -prec / 2);
        if (abs(yy - y) < ty)
            return reduce_mod_lattice(z, L);
        if (abs(yy + y) < ty)
            return reduce_mod_lattice(-z, L);
    }
    throw numeric_failure("elliptic_log: Newton iteration did not converge");
}

Complex elliptic_log(const RatPoint &P, const CurveK &E)
{
    if (P.inf)
        return Complex(Real(0));
    PeriodLattice L = periods(E);
    return elliptic_log(Complex(Real(P.x)), Complex(Real(P.y)), L);
}

// ---------------------------------------------------------------------------
// Heights

namespace
{

// Archimedean local height (model independent normalization).
Real lambda_infinity(const RatPoint &P, const CurveK &E)
{
    PeriodLattice L = periods(E);
    Complex z = elliptic_log(Complex(Real(P.x)), Complex(Real(P.y)), L);
    auto [xc, yc] = lattice_coords(z, L);
    yc = yc - Real(yc.floor());
    z = L.w1 * xc + L.w2 * yc;
    Complex tau = L.tau();
    Complex c = two_pi_i() / L.w1;
    Complex q = cexp(two_pi_i() * tau);
    Complex u = cexp(c * z);
    Real t = yc;
    Real B2 = t * t - t + Real(1) / Real(6);
    Complex one(Real(1));
    Real lam = -B2 / Real(2) * log(abs(q)) - log(abs(one - u));
    Complex qn = one, ui = one / u;
    long terms = series_terms(q) + 4;
    for (long n = 1; n <= terms; ++n) {
        qn = qn * q;
        lam -= log(abs((one - qn * u) * (one - qn * ui)));
    }
    return lam;
}

bool singular_reduction(const RatPoint &P, const BigInt &p)
{
    if (valuation(P.x, p) < 0)
        return false;
    return valuation(BigRat(2 * P.y), p) > 0 && valuation(BigRat(3 * P.x * P.x), p) > 0;
}

} // namespace

Real canonical_height(const RatPoint &P, const CurveK &E, HeightNorm norm)
{
    if (!on_curve(P, E))
        throw domain_error("canonical_height: point not on the curve");
    BigRat u;
    CurveK M = E.minimal_twist(&u);
    for (int p : {2, 3})
        if (!local_data(M, BigInt(p)).input_minimal)
            throw domain_error("canonical_height: y^2 = x^3 + k is not minimal at " + std::to_string(p));
    if (P.inf || is_torsion(P, E))
        return Real(0);
    RatPoint Pm = rescale(P, u);
    std::vector<BigInt> bad = bad_primes(M);
    RatPoint Q;
    long m = 0;
    for (long c : {1L, 2L, 3L, 4L, 6L, 12L}) {
        RatPoint R = mul(c, Pm, M);
        bool ok = true;
        for (const auto &p : bad)
            ok = ok && !singular_reduction(R, p);
        if (ok) {
            Q = R;
            m = c;
            break;
        }
    }
    if (m == 0)
        throw numeric_failure("canonical_height: no multiple with nonsingular reduction");
    BigInt dd = den(Q.x);
    if (!is_square(dd))
        throw numeric_failure("canonical_height: denominator of x is not a square");
    BigInt d = isqrt(dd);
    Real h = lambda_infinity(Q, M) + log(Real(d)) + log(Real(BigInt(432 * num(M.k) * num(M.k)))) / Real(12);
    Real hq = Real(2) * h / Real(m * m);
    return norm == HeightNorm::K ? hq * Real(2) : hq;
}

// ---------------------------------------------------------------------------
// Cube sums

RatPoint isogeny3(const RatPoint &P, const CurveK &E)
{
    if (P.inf || P.x == 0)
        return RatPoint::infinity();
    const BigRat &D = E.k;
    BigRat x3 = P.x * P.x * P.x;
    return RatPoint::affine(BigRat((x3 + 4 * D) / (P.x * P.x)), BigRat(P.y * (x3 - 8 * D) / x3));
}

std::pair<BigRat, BigRat> cube_sum_extract(const RatPoint &P, const BigInt &n)
{
    CurveK E(BigRat(n * n));
    if (!on_curve(P, E))
        throw domain_error("cube_sum_extract: point not on y^2 = x^3 + n^2");
    BigRat m(2 * n);
    for (long c : {1L, 2L, 3L}) {
        RatPoint R = isogeny3(mul(c, P, E), E);
        if (R.inf)
            continue;
        BigRat X = 4 * R.x, Y = 8 * R.y;
        if (X == 0)
            continue;
        BigRat a = (36 * m + Y) / (6 * X), b = (36 * m - Y) / (6 * X);
        if (a == 0 || b == 0)
            continue;
        if (a * a * a + b * b * b != m)
            throw numeric_failure("cube_sum_extract: post-check a^3 + b^3 = 2n failed");
        return {a, b};
    }
    throw domain_error("cube_sum_extract: P, 2P, 3P all lie on the exceptional locus");
}

} // namespace cubesum
