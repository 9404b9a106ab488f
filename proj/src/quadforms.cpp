#include "cubesum/quadforms.hpp"

#include <numeric>

namespace cubesum
{

namespace
{

// u a + v b = g = gcd(a, b) >= 0
void xgcd(const BigInt &a, const BigInt &b, BigInt &u, BigInt &v, BigInt &g)
{
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

bool divides(const BigInt &d, const BigInt &n)
{
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

BigInt gcd(const BigInt &a, const BigInt &b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

BigInt fdiv(const BigInt &a, const BigInt &b)
{
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

bool QuadForm::is_primitive() const
{
    return gcd(gcd(a, b), c) == 1;
}

bool QuadForm::is_reduced() const
{
    if (abs(b) > a || a > c)
        return false;
    if ((abs(b) == a || a == c) && b < 0)
        return false;
    return true;
}

Complex QuadForm::root() const
{
    Real den = Real(BigInt(2 * a));
    return {Real(BigInt(-b)) / den, sqrt(Real(BigInt(-disc()))) / den};
}

QuadForm QuadForm::transform(const BigInt &p, const BigInt &q, const BigInt &r, const BigInt &s) const
{
    QuadForm g;
    g.a = eval(p, r);
    g.c = eval(q, s);
    g.b = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
    return g;
}

bool operator==(const QuadForm &f, const QuadForm &g)
{
    return f.a == g.a && f.b == g.b && f.c == g.c;
}

bool operator<(const QuadForm &f, const QuadForm &g)
{
    if (f.a != g.a)
        return f.a < g.a;
    if (f.b != g.b)
        return f.b < g.b;
    return f.c < g.c;
}

QuadForm reduce(const QuadForm &f0)
{
    if (f0.a <= 0 || f0.disc() >= 0)
        throw domain_error("reduce: form is not positive definite");
    QuadForm f = f0;
    BigInt D = f.disc();
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            BigInt k = fdiv(BigInt(f.a - f.b), BigInt(2 * f.a));
            BigInt b2 = f.b + 2 * f.a * k;
            f.c = (b2 * b2 - D) / (4 * f.a);
            f.b = b2;
            continue;
        }
        if (f.c < f.a) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        return f;
    }
}

QuadForm principal_form(const BigInt &disc)
{
    BigInt r = mod(disc, BigInt(4));
    if (r == 0)
        return {1, 0, BigInt(-disc / 4)};
    if (r == 1)
        return {1, 1, BigInt((1 - disc) / 4)};
    throw domain_error("discriminant must be 0 or 1 mod 4");
}

QuadForm compose(const QuadForm &f1_, const QuadForm &f2_)
{
    if (f1_.disc() != f2_.disc())
        throw domain_error("compose: discriminants differ");
    QuadForm f1 = f1_, f2 = f2_;
    if (f1.a > f2.a)
        std::swap(f1, f2);
    BigInt D = f1.disc();
    BigInt s = (f1.b + f2.b) / 2;
    BigInt n = f2.b - s;
    BigInt y1, d, u, v;
    if (divides(f1.a, f2.a)) {
        y1 = 0;
        d = f1.a;
    } else {
        xgcd(f2.a, f1.a, u, v, d);
        y1 = u;
    }
    BigInt x2, y2, d1;
    if (divides(d, s)) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        xgcd(s, d, u, v, d1);
        x2 = u;
        y2 = -v;
    }
    BigInt v1 = f1.a / d1, v2 = f2.a / d1;
    BigInt r = mod(BigInt(y1 * y2 * n - x2 * f2.c), v1);
    QuadForm g;
    g.b = f2.b + 2 * v2 * r;
    g.a = v1 * v2;
    BigInt num = g.b * g.b - D;
    if (!divides(BigInt(4 * g.a), num))
        throw numeric_failure("compose: non-integral result");
    g.c = num / (4 * g.a);
    return reduce(g);
}

QuadForm compose_united(const QuadForm &f, const QuadForm &g)
{
    if (f.disc() != g.disc())
        throw domain_error("compose_united: discriminants differ");
    if (gcd(f.a, g.a) != 1)
        throw domain_error("compose_united: leading coefficients not coprime");
    BigInt D = f.disc();
    // B = f.b + 2 f.a t with f.a t == (g.b - f.b)/2 mod g.a
    BigInt t = 0;
    if (g.a > 1) {
        BigInt inv;
        BigInt ga = g.a;
        mpz_invert(inv.get_mpz_t(), f.a.get_mpz_t(), ga.get_mpz_t());
        t = mod(BigInt((g.b - f.b) / 2 * inv), ga);
    }
    QuadForm h;
    h.a = f.a * g.a;
    h.b = f.b + 2 * f.a * t;
    BigInt num = h.b * h.b - D;
    if (!divides(BigInt(4 * h.a), num))
        throw numeric_failure("compose_united: non-integral result");
    h.c = num / (4 * h.a);
    return h;
}

PicGroup::PicGroup(const BigInt &disc) : disc_(disc)
{
    if (disc >= 0)
        throw domain_error("discriminant must be negative");
    BigInt r = mod(disc, BigInt(4));
    if (r != 0 && r != 1)
        throw domain_error("discriminant must be 0 or 1 mod 4");
    BigInt D = -disc;
    for (BigInt a = 1; 3 * a * a <= D; ++a) {
        for (BigInt b = -a + 1; b <= a; ++b) {
            BigInt num = b * b - disc;
            if (!divides(BigInt(4 * a), num))
                continue;
            BigInt c = num / (4 * a);
            if (c < a || (a == c && b < 0))
                continue;
            QuadForm f{a, b, c};
            if (!f.is_primitive())
                continue;
            lookup_[{a, b}] = forms_.size();
            forms_.push_back(f);
        }
    }
    identity_ = index_of(principal_form(disc));
}

std::size_t PicGroup::index_of(const QuadForm &f) const
{
    QuadForm g = reduce(f);
    auto it = lookup_.find({g.a, g.b});
    if (it == lookup_.end())
        throw domain_error("form not in this class group");
    return it->second;
}

std::size_t PicGroup::mul(std::size_t i, std::size_t j) const
{
    return index_of(compose(forms_[i], forms_[j]));
}

std::size_t PicGroup::inv(std::size_t i) const
{
    return index_of(forms_[i].inverse());
}

std::size_t PicGroup::order(std::size_t i) const
{
    std::size_t k = 1, x = i;
    while (x != identity_) {
        x = mul(x, i);
        ++k;
    }
    return k;
}

PicGroup enumerate_classes(const BigInt &disc)
{
    return PicGroup(disc);
}

BigInt class_number_formula(const BigInt &conductor)
{
    if (conductor == 1)
        return 1;
    BigRat h(conductor, 3);
    for (const auto &[p, e] : factor(conductor)) {
        int kr = 0;
        if (p == 2)
            kr = -1;
        else if (p == 3)
            kr = 0;
        else
            kr = mod(p, BigInt(3)) == 1 ? 1 : -1;
        h *= BigRat(p - kr, p);
    }
    h.canonicalize();
    if (h.get_den() != 1)
        throw numeric_failure("class number formula not integral");
    return h.get_num();
}

QuadForm coprime_representative(const QuadForm &f, const BigInt &m)
{
    for (long bound : {50L, 200L, 1000L}) {
        for (long s = 1; s <= bound; ++s) {
            for (long x = -s; x <= s; ++x) {
                for (long y = -s; y <= s; ++y) {
                    if (std::max(std::labs(x), std::labs(y)) != s || std::gcd(x, y) != 1)
                        continue;
                    BigInt bx(x), by(y);
                    BigInt v = f.eval(bx, by);
                    if (gcd(v, m) != 1)
                        continue;
                    // complete (x, y) to a matrix [[x, r], [y, s]] of determinant 1
                    BigInt u, w, g;
                    xgcd(bx, by, u, w, g); // u x + w y = 1
                    return f.transform(bx, BigInt(-w), by, u);
                }
            }
        }
    }
    throw numeric_failure("no representative coprime to the modulus found");
}

EisIdeal form_to_ideal(const QuadForm &f)
{
    BigInt D = -f.disc();
    if (D % 3 != 0 || !is_square(BigInt(D / 3)))
        throw domain_error("form_to_ideal: discriminant is not -3 c^2");
    BigInt c = isqrt(BigInt(D / 3));
    if (gcd(f.a, c) != 1)
        throw domain_error("form_to_ideal: leading coefficient not coprime to the conductor");
    EisInt g(BigInt((c - f.b) / 2), c);
    EisIdeal I{gcd(EisInt(f.a), g)};
    if (I.norm() != f.a)
        throw numeric_failure("form_to_ideal: norm mismatch");
    return I;
}

} // namespace cubesum
