#include "cubesum/x36.hpp"

#include <numeric>
#include <set>

namespace cubesum
{

bool Mat2::is_integral() const
{
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
}

Mat2 operator*(const Mat2 &x, const Mat2 &y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool operator==(const Mat2 &x, const Mat2 &y)
{
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

Mat2 inverse(const Mat2 &m)
{
    BigRat D = m.det();
    if (D == 0)
        throw domain_error("singular matrix");
    return {m.d / D, -m.b / D, -m.c / D, m.a / D};
}

Mat2 power(const Mat2 &m, long e)
{
    Mat2 base = e < 0 ? inverse(m) : m, r;
    for (long k = e < 0 ? -e : e; k > 0; k >>= 1) {
        if (k & 1)
            r = r * base;
        base = base * base;
    }
    return r;
}

std::string to_string(const Mat2 &m)
{
    return "[[" + to_string(m.a) + "," + to_string(m.b) + "],[" + to_string(m.c) + "," + to_string(m.d) + "]]";
}

Mat2 rho_omega(long N)
{
    if (N <= 0)
        throw domain_error("rho_omega needs N > 0");
    return {BigRat(4), make_rat(-7 * N, 6), make_rat(18, N), BigRat(-5)};
}

// cusps

Cusp Cusp::of(const BigInt &n, const BigInt &d)
{
    if (n == 0 && d == 0)
        throw domain_error("0/0 is not a cusp");
    Cusp c;
    if (d == 0)
        return c;
    BigInt g = gcd(n, d);
    c.num = n / g;
    c.den = d / g;
    if (c.den < 0) {
        c.num = -c.num;
        c.den = -c.den;
    }
    return c;
}

Cusp Cusp::of(const BigRat &q) { return of(BigInt(q.get_num()), BigInt(q.get_den())); }

bool operator==(const Cusp &x, const Cusp &y) { return x.num == y.num && x.den == y.den; }

bool operator<(const Cusp &x, const Cusp &y)
{
    return x.den != y.den ? x.den < y.den : x.num < y.num;
}

std::string to_string(const Cusp &c)
{
    if (c.is_infinity())
        return "[oo]";
    if (c.den == 1)
        return "[" + c.num.get_str() + "]";
    return "[" + c.num.get_str() + "/" + c.den.get_str() + "]";
}

Cusp act(const Mat2 &m, const Cusp &c)
{
    BigRat n(c.num), d(c.den);
    BigRat x = m.a * n + m.b * d, y = m.c * n + m.d * d;
    if (y == 0)
        return Cusp::infinity();
    return Cusp::of(x / y);
}

std::pair<long, long> cusp_invariant(const Cusp &c)
{
    BigInt g = gcd(c.den, BigInt(x36_level));
    long d = g.get_si();
    long h = std::gcd(d, x36_level / d);
    BigInt x = mod(c.num * (c.den / g), BigInt(h));
    return {d, x.get_si()};
}

Cusp cusp_classify(const Cusp &c)
{
    auto [d, x] = cusp_invariant(c);
    if (d == x36_level)
        return Cusp::infinity();
    long h = std::gcd(d, x36_level / d);
    for (long a = x;; a += h)
        if (std::gcd(a, d) == 1)
            return Cusp::of(BigInt(a), BigInt(d));
}

bool cusps_equivalent(const Cusp &x, const Cusp &y) { return cusp_invariant(x) == cusp_invariant(y); }

std::vector<Cusp> cusp_classes()
{
    std::vector<Cusp> out;
    for (long d = 1; d <= x36_level; ++d) {
        if (x36_level % d)
            continue;
        long h = std::gcd(d, x36_level / d);
        for (long x = 0; x < h; ++x) {
            if (std::gcd(x, h) != 1)
                continue;
            // lift x mod h to a numerator prime to d
            long a = x;
            while (std::gcd(a, d) != 1)
                a += h;
            out.push_back(cusp_classify(Cusp::of(BigInt(a), BigInt(d))));
        }
    }
    return out;
}

std::vector<Cusp> listed_cusps()
{
    auto q = [](long n, long d) { return Cusp::of(BigInt(n), BigInt(d)); };
    return {q(0, 1),    q(1, 2),   q(1, 3),   q(-1, 3),  q(-1, 16), q(1, 6),
            q(-1, 6),   q(-4, 9),  q(13, 48), q(29, 48), q(-1, 18), Cusp::infinity()};
}

// Gamma_0(36)

bool in_gamma0(const Mat2 &m)
{
    return m.is_integral() && m.det() == 1 && mpz_divisible_ui_p(m.c.get_num_mpz_t(), x36_level) != 0;
}

bool in_scalar_gamma0(const Mat2 &m)
{
    if (m.det() <= 0)
        return false;
    BigInt l = lcm(lcm(BigInt(m.a.get_den()), BigInt(m.b.get_den())),
                   lcm(BigInt(m.c.get_den()), BigInt(m.d.get_den())));
    BigRat s(l);
    auto scaled = [&](const BigRat &x) { return BigInt(BigRat(x * s).get_num()); };
    BigInt A = scaled(m.a), B = scaled(m.b), C = scaled(m.c), D = scaled(m.d);
    BigInt g = gcd(gcd(A, B), gcd(C, D));
    Mat2 y{BigRat(A / g), BigRat(B / g), BigRat(C / g), BigRat(D / g)};
    return in_gamma0(y);
}

namespace
{

using P1 = std::pair<long, long>;

// least (u c, u d) over units u mod 36
P1 p1_normal(long c, long d)
{
    P1 best{x36_level, x36_level};
    for (long u = 1; u < x36_level; ++u)
        if (std::gcd(u, x36_level) == 1) {
            P1 v{mod(u * c, x36_level), mod(u * d, x36_level)};
            if (v < best)
                best = v;
        }
    return best;
}

struct Gamma0Data {
    std::vector<Mat2> gens;
    long index = 0;
};

Gamma0Data build_gamma0()
{
    // cosets Gamma_0(36) g <-> (c : d), right action by S and T
    Mat2 S{0, -1, 1, 0}, T{1, 1, 0, 1};
    std::map<P1, Mat2> rep;
    std::vector<P1> queue{p1_normal(0, 1)};
    rep[queue[0]] = Mat2();
    for (size_t i = 0; i < queue.size(); ++i) {
        Mat2 r = rep[queue[i]];
        for (const Mat2 &s : {S, T}) {
            Mat2 g = r * s;
            P1 y = p1_normal(BigInt(g.c.get_num()).get_si(), BigInt(g.d.get_num()).get_si());
            if (!rep.count(y)) {
                rep[y] = g;
                queue.push_back(y);
            }
        }
    }
    Gamma0Data out;
    out.index = static_cast<long>(rep.size());
    std::set<std::string> seen;
    for (const auto &[x, r] : rep)
        for (const Mat2 &s : {S, T}) {
            Mat2 g = r * s;
            P1 y = p1_normal(BigInt(g.c.get_num()).get_si(), BigInt(g.d.get_num()).get_si());
            Mat2 h = g * inverse(rep.at(y));
            if (!in_gamma0(h))
                throw numeric_failure("Schreier generator outside Gamma_0(36)");
            if (h == Mat2() || !seen.insert(to_string(h)).second)
                continue;
            out.gens.push_back(h);
        }
    out.gens.push_back(Mat2{-1, 0, 0, -1});
    return out;
}

const Gamma0Data &gamma0_data()
{
    static const Gamma0Data d = build_gamma0();
    return d;
}

} // namespace

const std::vector<Mat2> &gamma0_generators() { return gamma0_data().gens; }

long gamma0_index() { return gamma0_data().index; }

bool normalizes_gamma0(const Mat2 &m)
{
    if (m.det() <= 0)
        return false;
    Mat2 mi = inverse(m);
    for (const Mat2 &g : gamma0_generators())
        if (!in_gamma0(m * g * mi) || !in_gamma0(mi * g * m))
            return false;
    return true;
}

// Z[omega]/(2 sqrt(-3)); the ideal has Z-basis 2 + 4 omega, 6 omega.

namespace
{

Residue reduce_residue(const BigInt &a, const BigInt &b)
{
    BigInt a2 = mod(a, BigInt(2));
    BigInt b2 = mod(b - 2 * (a - a2), BigInt(6));
    return Residue{static_cast<int>(a2.get_si()), static_cast<int>(b2.get_si())};
}

} // namespace

Residue Residue::of(const EisInt &x) { return reduce_residue(x.a, x.b); }

Residue operator+(const Residue &x, const Residue &y)
{
    return reduce_residue(BigInt(x.a + y.a), BigInt(x.b + y.b));
}

Residue operator-(const Residue &x) { return reduce_residue(BigInt(-x.a), BigInt(-x.b)); }

Residue operator*(const Residue &x, const Residue &y)
{
    EisInt p = EisInt(BigInt(x.a), BigInt(x.b)) * EisInt(BigInt(y.a), BigInt(y.b));
    return Residue::of(p);
}

bool operator==(const Residue &x, const Residue &y) { return x.a == y.a && x.b == y.b; }

bool operator<(const Residue &x, const Residue &y) { return x.a != y.a ? x.a < y.a : x.b < y.b; }

std::string to_string(const Residue &r)
{
    return std::to_string(r.a) + "+" + std::to_string(r.b) + "w";
}

std::vector<Residue> all_residues()
{
    std::vector<Residue> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 6; ++b)
            out.push_back(Residue{a, b});
    return out;
}

// E(K)

namespace
{

// a + b omega over Q
struct KRat {
    BigRat a, b;
};

KRat operator-(const KRat &x, const KRat &y) { return {x.a - y.a, x.b - y.b}; }
KRat operator*(const KRat &x, const KRat &y)
{
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
}
bool operator==(const KRat &x, const KRat &y) { return x.a == y.a && x.b == y.b; }

KRat kinv(const KRat &x)
{
    BigRat n = x.a * x.a - x.a * x.b + x.b * x.b;
    if (n == 0)
        throw domain_error("division by zero in K");
    return {(x.a - x.b) / n, -x.b / n};
}

struct KPt {
    bool inf = true;
    KRat x, y;
};

KPt kadd(const KPt &P, const KPt &Q)
{
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    KRat l;
    if (P.x == Q.x) {
        if (P.y == KRat{0, 0} || P.y == KRat{0, 0} - Q.y)
            return KPt{};
        l = KRat{3, 0} * P.x * P.x * kinv(KRat{2, 0} * P.y);
    } else {
        l = (Q.y - P.y) * kinv(Q.x - P.x);
    }
    KRat x = l * l - P.x - Q.x;
    return KPt{false, x, l * (P.x - x) - P.y};
}

KPt kmul(long n, KPt P)
{
    KPt r;
    for (long i = 0; i < n; ++i)
        r = kadd(r, P);
    return r;
}

EisInt to_eis(const KRat &x)
{
    if (x.a.get_den() != 1 || x.b.get_den() != 1)
        throw numeric_failure("torsion coordinate not integral");
    return EisInt(BigInt(x.a.get_num()), BigInt(x.b.get_num()));
}

} // namespace

bool operator==(const KPoint &p, const KPoint &q)
{
    if (p.inf || q.inf)
        return p.inf == q.inf;
    return p.x == q.x && p.y == q.y;
}

std::string to_string(const KPoint &p)
{
    if (p.inf)
        return "O";
    auto s = [](const EisInt &z) {
        if (z.b == 0)
            return z.a.get_str();
        std::string w = z.b == 1 ? "w" : z.b == -1 ? "-w" : z.b.get_str() + "w";
        if (z.a == 0)
            return w;
        return z.a.get_str() + (z.b > 0 ? "+" : "") + w;
    };
    return "(" + s(p.x) + "," + s(p.y) + ")";
}

KPoint torsion_point(const Residue &alpha)
{
    KPt P{false, KRat{2, 0}, KRat{3, 0}};
    KPt wP{false, KRat{0, 2}, KRat{3, 0}};
    KPt R = kadd(kmul(alpha.a, P), kmul(alpha.b, wP));
    if (R.inf)
        return KPoint{};
    return KPoint{false, to_eis(R.x), to_eis(R.y)};
}

// the table

const std::vector<NormalizerRow> &normalizer_table()
{
    static const std::vector<NormalizerRow> rows = [] {
        EisInt w = EisInt::omega(), w2 = w * w;
        auto pt = [](const EisInt &x, long y) { return KPoint{false, x, EisInt(y)}; };
        auto m = [](long a, long b, long c, long d) { return Mat2{a, b, c, d}; };
        return std::vector<NormalizerRow>{
            {"t_O", KPoint{}, m(1, 0, 0, 1)},
            {"t_(0,1)", pt(0, 1), m(-2, -1, 36, 16)},
            {"t_(0,-1)", pt(0, -1), m(16, 1, -36, -2)},
            {"t_(-1,0)", pt(-1, 0), m(9, 4, -144, -63)},
            {"t_(-w,0)", pt(-w, 0), m(39, 4, 144, 15)},
            {"t_(-w^2,0)", pt(-w2, 0), m(87, -20, 144, -33)},
            {"t_(2,3)", pt(2, 3), m(0, 1, -36, -18)},
            {"t_(2w,3)", pt(EisInt(2) * w, 3), m(12, 1, 36, 6)},
            {"t_(2w^2,3)", pt(EisInt(2) * w2, 3), m(12, 11, -36, -30)},
            {"t_(2,-3)", pt(2, -3), m(-18, -1, 36, 0)},
            {"t_(2w,-3)", pt(EisInt(2) * w, -3), m(-6, 1, 36, -12)},
            {"t_(2w^2,-3)", pt(EisInt(2) * w2, -3), m(6, 1, 36, 12)},
        };
    }();
    return rows;
}

const std::vector<std::pair<EisInt, Cusp>> &tau_table()
{
    static const std::vector<std::pair<EisInt, Cusp>> t = [] {
        EisInt w = EisInt::omega(), w2 = w * w;
        auto q = [](long n, long d) { return Cusp::of(BigInt(n), BigInt(d)); };
        return std::vector<std::pair<EisInt, Cusp>>{
            {EisInt(0), Cusp::infinity()}, {EisInt(1), q(0, 1)},      {EisInt(-1), q(-1, 2)},
            {w, q(1, 3)},                  {w2, q(-1, 3)},            {EisInt(3), q(-1, 16)},
            {-w, q(-1, 6)},                {-w2, q(1, 6)},            {EisInt(4), q(-4, 9)},
            {EisInt(3) * w, q(13, 48)},    {EisInt(3) * w2, q(29, 48)}, {EisInt(2), q(-1, 18)},
        };
    }();
    return t;
}

std::map<Residue, Cusp> tau_map()
{
    std::map<Residue, Cusp> out;
    for (const auto &[alpha, c] : tau_table())
        out[Residue::of(alpha)] = c;
    return out;
}

Mat2 matrix_A() { return Mat2{BigRat(1), BigRat(1, 6), BigRat(0), BigRat(1)}; }

Mat2 matrix_B() { return Mat2{0, 1, -36, 0}; }

bool StructureReport::ok() const
{
    for (const auto &r : rows)
        if (!r.ok())
            return false;
    return cusps_distinct && tau_bijective && rows.size() == 12 && translations_on_cusps &&
           translations_as_matrices && A_order_six && A_acts_as_unit && B_involution && BA3_translation &&
           semidirect && errors.empty();
}

StructureReport verify_normalizer_table()
{
    StructureReport rep;
    auto fail = [&](const std::string &s) { rep.errors.push_back(s); };

    std::set<std::pair<long, long>> inv;
    for (const Cusp &c : listed_cusps()) {
        rep.cusps.push_back(cusp_classify(c));
        inv.insert(cusp_invariant(c));
    }
    rep.cusps_distinct = inv.size() == 12 && cusp_classes().size() == 12;
    if (!rep.cusps_distinct)
        fail("listed cusps are not 12 distinct classes");

    std::map<Residue, Cusp> tau = tau_map();
    std::set<std::pair<long, long>> tau_inv;
    for (const auto &[r, c] : tau)
        tau_inv.insert(cusp_invariant(c));
    rep.tau_bijective = tau.size() == 12 && tau_inv.size() == 12;
    if (!rep.tau_bijective)
        fail("tau is not a bijection onto the cusps");

    std::map<Residue, KPoint> points;
    for (const Residue &r : all_residues())
        points[r] = torsion_point(r);

    // alpha -> row matrix
    std::map<Residue, Mat2> M;
    for (const auto &row : normalizer_table()) {
        RowCheck rc;
        rc.label = row.label;
        bool found = false;
        for (const auto &[r, P] : points)
            if (P == row.point) {
                rc.alpha = r;
                found = true;
            }
        if (!found) {
            fail(row.label + ": point is not in E[2 sqrt(-3)]");
            rep.rows.push_back(rc);
            continue;
        }
        M[rc.alpha] = row.m;
        rc.normalizes = normalizes_gamma0(row.m);
        rc.image = cusp_classify(act(row.m, Cusp::infinity()));
        rc.expected = cusp_classify(tau.count(rc.alpha) ? tau.at(rc.alpha) : Cusp::infinity());
        rc.cusp_ok = tau.count(rc.alpha) && rc.image == rc.expected;
        if (!rc.normalizes)
            fail(row.label + ": does not normalize Gamma_0(36)");
        if (!rc.cusp_ok)
            fail(row.label + ": sends [oo] to " + to_string(rc.image) + ", expected " + to_string(rc.expected));
        rep.rows.push_back(rc);
    }
    if (M.size() != 12) {
        fail("table does not cover E[2 sqrt(-3)]");
        return rep;
    }

    rep.translations_on_cusps = rep.translations_as_matrices = true;
    for (const auto &[a, Ma] : M)
        for (const auto &[b, Mb] : M) {
            Residue s = a + b;
            if (!in_scalar_gamma0(inverse(M.at(s)) * Ma * Mb)) {
                rep.translations_as_matrices = false;
                fail("t_" + to_string(a) + " t_" + to_string(b) + " != t_" + to_string(s) + " as matrices");
            }
            if (!cusps_equivalent(act(Ma, tau.at(b)), tau.at(s))) {
                rep.translations_on_cusps = false;
                fail("t_" + to_string(a) + " moves tau(" + to_string(b) + ") off tau(" + to_string(s) + ")");
            }
        }

    Mat2 A = matrix_A(), B = matrix_B();
    Residue u = Residue::of(EisInt(1) + EisInt::omega()); // -omega^2
    Residue one = Residue::of(EisInt(1));
    rep.A_order_six = normalizes_gamma0(A) && in_scalar_gamma0(power(A, 6));
    for (int j = 1; j < 6; ++j)
        if (in_scalar_gamma0(power(A, j)))
            rep.A_order_six = false;
    if (!rep.A_order_six)
        fail("T(A) does not have order 6");
    rep.A_acts_as_unit = rep.B_involution = true;
    for (const auto &[b, c] : tau) {
        if (!cusps_equivalent(act(A, c), tau.at(u * b)))
            rep.A_acts_as_unit = false;
        if (!cusps_equivalent(act(B, c), tau.at(one + (-b))))
            rep.B_involution = false;
    }
    if (!rep.A_acts_as_unit)
        fail("T(A) is not [-omega^2] on cusps");
    if (!rep.B_involution)
        fail("T(B) is not t_{-1,[0]} on cusps");
    rep.B_involution = rep.B_involution && normalizes_gamma0(B) && in_scalar_gamma0(B * B);
    Mat2 BA3 = B * power(A, 3);
    rep.BA3_translation = BA3 == M.at(one) && cusps_equivalent(act(BA3, Cusp::infinity()), Cusp::of(BigInt(0), BigInt(1)));
    if (!rep.BA3_translation)
        fail("BA^3 is not the translation by [0]");

    // (Z[omega]/(2 sqrt(-3))) x| <-omega^2>: M_a A^i M_b A^j = M_{a + u^i b} A^{i+j}
    std::vector<Residue> upow{one};
    std::vector<Mat2> Apow{Mat2()};
    for (int i = 1; i < 6; ++i) {
        upow.push_back(upow.back() * u);
        Apow.push_back(Apow.back() * A);
    }
    rep.semidirect = true;
    std::vector<Mat2> all;
    for (const auto &[a, Ma] : M)
        for (int i = 0; i < 6; ++i)
            all.push_back(Ma * Apow[i]);
    for (const auto &[a, Ma] : M)
        for (int i = 0; i < 6 && rep.semidirect; ++i)
            for (const auto &[b, Mb] : M)
                for (int j = 0; j < 6; ++j) {
                    Mat2 lhs = Ma * Apow[i] * Mb * Apow[j];
                    Mat2 rhs = M.at(a + upow[i] * b) * Apow[(i + j) % 6];
                    if (!in_scalar_gamma0(inverse(rhs) * lhs)) {
                        rep.semidirect = false;
                        fail("semidirect law fails at " + to_string(a) + ", A^" + std::to_string(i));
                        break;
                    }
                }
    for (size_t i = 0; i < all.size() && rep.semidirect; ++i)
        for (size_t j = i + 1; j < all.size(); ++j)
            if (in_scalar_gamma0(inverse(all[j]) * all[i])) {
                rep.semidirect = false;
                fail("normalizer classes are not distinct");
                break;
            }
    return rep;
}

PadicMat to_padic(const Mat2 &m, long p, long abs_prec)
{
    return PadicMat{Padic::from_rational(m.a, p, abs_prec), Padic::from_rational(m.b, p, abs_prec),
                    Padic::from_rational(m.c, p, abs_prec), Padic::from_rational(m.d, p, abs_prec)};
}

bool u_membership(const PadicMat &g, long p)
{
    if (!g.a.is_integral() || !g.b.is_integral() || !g.c.is_integral() || !g.d.is_integral())
        return false;
    if (!(g.a * g.d - g.b * g.c).is_unit())
        return false;
    if (p == 2)
        return g.c.divisible_by(2);
    if (p == 3)
        return g.c.divisible_by(2) && (g.a - g.d).divisible_by(1);
    return true;
}

} // namespace cubesum
