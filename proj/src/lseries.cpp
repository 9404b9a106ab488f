#include "cubesum/lseries.hpp"

#include <cmath>

namespace cubesum
{

std::vector<long> coefficients(const CurveK &E0, long M, ApCache *cache)
{
    if (M < 1)
        throw domain_error("coefficient cutoff must be positive");
    CurveK E = E0.minimal_twist();
    std::vector<long> spf(M + 1, 0);
    for (long i = 2; i <= M; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= M; j += i)
                if (spf[j] == 0)
                    spf[j] = i;
    BigInt k = abs(BigInt(E.k.get_num()));
    std::vector<long> a(M + 1, 0);
    a[1] = 1;
    for (long n = 2; n <= M; ++n) {
        long p = spf[n];
        long m = n, pe = 1;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            pe *= p;
            ++e;
        }
        if (m > 1) {
            a[n] = a[pe] * a[m];
            continue;
        }
        // n = p^e
        bool bad = p <= 3 || mpz_divisible_ui_p(k.get_mpz_t(), p) != 0;
        if (bad) {
            a[n] = 0;
        } else if (e == 1) {
            a[n] = cache ? cache->get(E, p) : ap(E, p);
        } else {
            a[n] = a[p] * a[n / p] - p * a[n / p / p];
        }
    }
    return a;
}

Real exp_integral_e1(const Real &x)
{
    if (x <= Real(0))
        throw domain_error("E1 needs x > 0");
    long prec = default_precision();
    Real eps = ldexp(Real(1), -prec - 4);
    if (x < Real(1)) {
        // -gamma - log x - sum (-x)^k / (k k!)
        Real sum, term(1);
        for (long k = 1;; ++k) {
            term = term * (-x) / Real(k);
            Real t = term / Real(k);
            sum += t;
            if (abs(t) < eps)
                break;
        }
        return -euler_gamma(prec) - log(x) - sum;
    }
    // modified Lentz on 1 / (x + 1 - 1 / (x + 3 - 4 / (x + 5 - ...)))
    Real tiny = ldexp(Real(1), -prec * 2);
    Real b = x + Real(1);
    Real c = Real(1) / tiny, d = Real(1) / b, h = d;
    for (long i = 1; i < 100000; ++i) {
        Real an = Real(-i * i);
        b += Real(2);
        d = Real(1) / (an * d + b);
        c = b + an / c;
        Real del = c * d;
        h *= del;
        if (abs(del - Real(1)) < eps)
            return h * exp(-x);
    }
    throw numeric_failure("E1 continued fraction did not converge");
}

long cutoff_for(const BigInt &N, long bits, double factor)
{
    double sq = std::sqrt(N.get_d());
    double m = sq * (bits * 0.6931471805599453 + 10) / (2 * M_PI) * factor;
    return static_cast<long>(std::ceil(m)) + 10;
}

namespace
{

// sum_{n <= M} a_n w_n r^n
Real theta(const std::vector<long> &a, const Real &r, long M)
{
    Real s, rn(1);
    for (long n = 1; n <= M && n < static_cast<long>(a.size()); ++n) {
        rn *= r;
        if (a[n])
            s += rn * Real(a[n]);
    }
    return s;
}

} // namespace

Real functional_equation_residual(const std::vector<long> &a, const BigInt &N, int eps)
{
    long prec = default_precision();
    Real sq = sqrt(Real(N));
    Real two_pi = Real(2) * pi(prec);
    Real worst;
    for (double td : {1.1, 1.2, 1.35}) {
        Real t(td);
        Real A = theta(a, exp(-two_pi / (t * sq)), a.size() - 1);
        Real B = t * t * theta(a, exp(-two_pi * t / sq), a.size() - 1);
        Real r = abs(A - Real(eps) * B) / (abs(A) + abs(B));
        if (r > worst)
            worst = r;
    }
    return worst;
}

LSeries make_lseries(const CurveK &E, double cutoff_factor, ApCache *cache)
{
    long prec = default_precision();
    LSeries ls{E.minimal_twist(), 0, 0, 0, {}, Real(), Real()};
    ls.conductor = conductor(ls.curve);
    ls.cutoff = cutoff_for(ls.conductor, prec + 16, cutoff_factor);
    ls.a = coefficients(ls.curve, 2 * ls.cutoff, cache);
    Real rp = functional_equation_residual(ls.a, ls.conductor, 1);
    Real rm = functional_equation_residual(ls.a, ls.conductor, -1);
    ls.sign = rp < rm ? 1 : -1;
    ls.residual_chosen = rp < rm ? rp : rm;
    ls.residual_rejected = rp < rm ? rm : rp;
    if (!(ls.residual_chosen < Real(1e-10)) || !(ls.residual_rejected > Real(1e-2)))
        throw numeric_failure("functional equation residual test failed for " + E.tag() +
                              " at conductor " + ls.conductor.get_str());
    return ls;
}

BigInt conductor_by_residual(const CurveK &E0, const std::vector<BigInt> &candidates)
{
    if (candidates.empty())
        throw domain_error("no conductor candidates");
    CurveK E = E0.minimal_twist();
    BigInt maxN = 0;
    for (const auto &N : candidates)
        if (N > maxN)
            maxN = N;
    long prec = default_precision();
    std::vector<long> a = coefficients(E, 2 * cutoff_for(maxN, prec + 16));
    for (const auto &N : candidates) {
        std::vector<long> b(a.begin(), a.begin() + 2 * cutoff_for(N, prec + 16) + 1);
        Real r = min(functional_equation_residual(b, N, 1), functional_equation_residual(b, N, -1));
        if (r < Real(1e-10))
            return N;
    }
    throw numeric_failure("no conductor candidate satisfies the functional equation");
}

LValues value_and_derivative(const LSeries &ls)
{
    long prec = default_precision();
    long M = ls.cutoff;
    if (static_cast<long>(ls.a.size()) < 2 * M + 1)
        throw domain_error("coefficients do not reach twice the cutoff");
    Real sq = sqrt(Real(ls.conductor));
    Real two_pi = Real(2) * pi(prec);
    Real tail = exp(-two_pi * Real(M) / sq);
    if (tail > ldexp(Real(1), -prec + 8))
        throw numeric_failure("cutoff too small for the working precision; increase it");
    LValues out;
    if (ls.sign == 1) {
        Real r = exp(-two_pi / sq), rn(1), s1, s2;
        for (long n = 1; n <= 2 * M; ++n) {
            rn *= r;
            if (ls.a[n]) {
                Real t = rn * Real(ls.a[n]) / Real(n);
                if (n <= M)
                    s1 += t;
                s2 += t;
            }
        }
        out.value = Real(2) * s1;
        out.derivative = Real(0);
        out.stability = abs(Real(2) * (s2 - s1));
    } else {
        Real s1, s2;
        for (long n = 1; n <= 2 * M; ++n) {
            if (!ls.a[n])
                continue;
            Real x = two_pi * Real(n) / sq;
            if (n > M && x > Real(prec))
                break;
            Real t = exp_integral_e1(x) * Real(ls.a[n]) / Real(n);
            if (n <= M)
                s1 += t;
            s2 += t;
        }
        out.value = Real(0);
        out.derivative = Real(2) * s1;
        out.stability = abs(Real(2) * (s2 - s1));
    }
    return out;
}

} // namespace cubesum
