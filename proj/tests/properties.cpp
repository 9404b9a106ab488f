#include "properties.hpp"

#include "cubesum/gz.hpp"

#include <chrono>
#include <random>
#include <sstream>

using namespace cubesum;

namespace props
{

namespace
{

RatPoint pt(long x, long y) { return RatPoint::affine(BigRat(x), BigRat(y)); }

Real rel(const Real &a, const Real &b) { return abs(a - b) / max(Real(1), abs(b)); }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void fail(Result &r, const std::string &msg)
{
    r.ok = false;
    r.notes.push_back(msg);
}

// Root number of x^3 + y^3 = A, A cube-free and prime to 3: -w_3 prod w_p
// with w_p = -1 for p == 2 mod 3, w_3 = -1 for A == +-1 mod 9.
int cube_sum_root_number(const BigInt &A)
{
    int w = -1;
    for (const auto &[p, e] : factor(A))
        if (mod(p, BigInt(3)) == 2)
            w = -w;
    BigInt r = mod(A, BigInt(9));
    if (r == 1 || r == 8)
        w = -w;
    return w;
}

// y^2 = x^3 + d^2 is 3-isogenous to x^3 + y^3 = 2n, n the cube-free integer
// in the class of d.
int oracle_sign(const BigRat &d)
{
    BigInt n = 1;
    for (const auto &[p, e] : factor(BigInt(d.get_num() * d.get_den()))) {
        int v = mod(static_cast<long>(valuation(d, p)), 3L);
        for (int i = 0; i < v; ++i)
            n *= p;
    }
    return cube_sum_root_number(2 * n);
}

} // namespace

Result height_quadraticity()
{
    Timer t;
    Result r{"height quadraticity", true, {}, 0};
    precision_guard g(192);
    Real tol(1e-12);
    struct Case {
        long k;
        RatPoint P, Q;
    };
    std::vector<Case> cases = {{17, pt(-1, 4), pt(2, 5)}, {9, pt(-2, 1), pt(3, 6)}, {28, pt(-3, 1), pt(2, 6)},
                               {-2, pt(3, 5), mul(2, pt(3, 5), CurveK(BigRat(-2)))}};
    int checks = 0;
    for (const Case &c : cases) {
        CurveK E{BigRat(c.k)};
        Real hP = canonical_height(c.P, E), hQ = canonical_height(c.Q, E);
        for (long m : {2, 3, 5}) {
            Real hm = canonical_height(mul(m, c.P, E), E);
            ++checks;
            if (!(rel(hm, Real(m * m) * hP) < tol))
                fail(r, "k=" + std::to_string(c.k) + " m=" + std::to_string(m) + ": " + rel(hm, Real(m * m) * hP).str(5));
        }
        Real lhs = canonical_height(add(c.P, c.Q, E), E) + canonical_height(add(c.P, negate(c.Q), E), E);
        Real rhs = Real(2) * (hP + hQ);
        ++checks;
        if (!(rel(lhs, rhs) < tol))
            fail(r, "parallelogram k=" + std::to_string(c.k) + ": " + rel(lhs, rhs).str(5));
        for (const RatPoint &T : torsion(E)) {
            ++checks;
            Real hT = canonical_height(add(c.P, T, E), E);
            if (!(rel(hT, hP) < tol))
                fail(r, "torsion shift k=" + std::to_string(c.k) + ": " + rel(hT, hP).str(5));
        }
    }
    r.notes.push_back(std::to_string(checks) + " checks");
    r.seconds = t.seconds();
    return r;
}

Result wp_residuals()
{
    Timer t;
    Result r{"wp differential equation", true, {}, 0};
    precision_guard g(192);
    Real bound = ldexp(Real(1), -176);
    Real worst(0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (long k : {1L, -2L, 17L, 121L, 625L, -432L}) {
        CurveK E{BigRat(k)};
        PeriodLattice L = periods(E);
        // y^2 = x^3 + k with x = wp, y = wp'/2: g2 = 0, g3 = -4k
        Complex g2(Real(0)), g3(Real(-4 * k));
        auto [n2, n3] = invariants(L);
        Real inv = max(abs(n2 - g2), abs(n3 - g3)) / Real(4 * std::abs(k));
        worst = max(worst, inv);
        if (!(inv < bound))
            fail(r, "invariants k=" + std::to_string(k) + ": " + inv.str(5));
        for (int i = 0; i < 8; ++i) {
            Complex z = L.w1 * Real(u(rng)) + L.w2 * Real(u(rng));
            WpPair w = weierstrass_p(z, L);
            Complex lhs = w.dwp * w.dwp;
            Complex rhs = Complex(Real(4)) * w.wp * w.wp * w.wp - g2 * w.wp - g3;
            Real scale = max(Real(1), max(abs(lhs), abs(rhs)));
            Real res = abs(lhs - rhs) / scale;
            worst = max(worst, res);
            if (!(res < bound))
                fail(r, "k=" + std::to_string(k) + " z=" + str(z, 10) + ": " + res.str(5));
        }
    }
    r.notes.push_back("max residual " + worst.str(5));
    r.seconds = t.seconds();
    return r;
}

Result lvalue_stability()
{
    Timer t;
    Result r{"two-cutoff L stability", true, {}, 0};
    precision_guard g(192);
    Real tol(1e-15);
    for (long k : {1L, 121L, 14641L, 625L, 25L, 529L, 279841L}) {
        CurveK E = CurveK(BigRat(k)).minimal_twist();
        LSeries a = make_lseries(E, 1.0), b = make_lseries(E, 2.0);
        LValues va = value_and_derivative(a), vb = value_and_derivative(b);
        const Real &x = a.sign == 1 ? va.value : va.derivative;
        const Real &y = b.sign == 1 ? vb.value : vb.derivative;
        Real diff = abs(x - y);
        std::ostringstream os;
        os << E.tag() << " sign " << a.sign << " M=" << a.cutoff << "," << b.cutoff << " value " << x.str(20)
           << " diff " << diff.str(3) << " internal " << va.stability.str(3);
        if (a.sign != b.sign || !(diff < tol) || !(va.stability < tol) || !(x > Real(0)))
            fail(r, os.str());
        else
            r.notes.push_back(os.str());
    }
    r.seconds = t.seconds();
    return r;
}

Result sign_parity()
{
    Timer t;
    Result r{"sign/parity on the d-grid", true, {}, 0};
    precision_guard g(192);
    for (long p : {5L, 11L, 23L}) {
        SweepReport s = vanishing_sweep({p}, 192, true);
        for (const SweepRow &row : s.rows) {
            bool nonzero = row.status != ZStatus::zero;
            if (!row.sign_rule || !row.consistent || (row.sign == -1) != nonzero)
                fail(r, "p=" + std::to_string(p) + " d=" + row.d.get_str() + " sign " + std::to_string(row.sign) +
                            " status " + to_string(row.status));
        }
        if (!s.ok)
            fail(r, "sweep p=" + std::to_string(p) + " not ok");
    }
    int rule_off = 0, rows = 0;
    for (const BigRat &d : d_grid(5 * 11 * 23)) {
        int s = make_lseries(CurveK(d * d).minimal_twist()).sign;
        int w = oracle_sign(d);
        ++rows;
        if (s != w)
            fail(r, "d=" + d.get_str() + ": residual sign " + std::to_string(s) + ", local root numbers " +
                        std::to_string(w));
        long sum = 0;
        for (long q : {5L, 11L, 23L}) {
            int v = valuation(d, BigInt(q));
            sum += q % 9 == 2 ? v : -v;
        }
        if ((s == -1) != (mod(sum, 3L) == 1))
            ++rule_off;
    }
    r.notes.push_back(std::to_string(rows) + " signs checked against local root numbers; " +
                      std::to_string(rule_off) + " rows with two or more primes depart from the sum rule");
    r.seconds = t.seconds();
    return r;
}

} // namespace props
