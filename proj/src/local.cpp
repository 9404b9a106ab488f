#include "cubesum/local.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

namespace cubesum
{

// ---------------------------------------------------------------------------
// Integer lattices

namespace
{

void axpy(IntRow &y, const BigInt &a, const IntRow &x)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += a * x[i];
}

BigInt floor_div(const BigInt &a, const BigInt &b)
{
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

std::vector<IntRow> hnf(const std::vector<IntRow> &rows, std::size_t ncols)
{
    std::vector<std::optional<IntRow>> piv(ncols);
    auto reduce_above = [&](std::size_t j) {
        const IntRow &p = *piv[j];
        for (std::size_t i = 0; i < j; ++i)
            if (piv[i]) {
                BigInt t = floor_div((*piv[i])[j], p[j]);
                if (t != 0)
                    axpy(*piv[i], -t, p);
            }
    };
    for (IntRow v : rows) {
        if (v.size() != ncols)
            throw domain_error("hnf: row of the wrong length");
        for (std::size_t j = 0; j < ncols; ++j) {
            if (v[j] == 0)
                continue;
            if (!piv[j]) {
                if (v[j] < 0)
                    for (BigInt &x : v)
                        x = -x;
                piv[j] = v;
                reduce_above(j);
                break;
            }
            IntRow &p = *piv[j];
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p[j].get_mpz_t(), v[j].get_mpz_t());
            BigInt pj = p[j] / g, vj = v[j] / g;
            IntRow np(ncols), nv(ncols);
            for (std::size_t k = 0; k < ncols; ++k) {
                np[k] = s * p[k] + t * v[k];
                nv[k] = pj * v[k] - vj * p[k];
            }
            p = np;
            v = nv;
            // keep the tail of the pivot row small
            for (std::size_t k = j + 1; k < ncols; ++k)
                if (piv[k]) {
                    BigInt r = floor_div(p[k], (*piv[k])[k]);
                    if (r != 0)
                        axpy(p, -r, *piv[k]);
                }
            reduce_above(j);
        }
    }
    std::vector<IntRow> out;
    for (std::size_t j = 0; j < ncols; ++j)
        if (piv[j])
            out.push_back(*piv[j]);
    return out;
}

Smith smith(std::vector<IntRow> A)
{
    std::size_t r = A.size();
    for (const IntRow &row : A)
        if (row.size() != r)
            throw domain_error("smith: matrix must be square");
    std::vector<IntRow> V(r, IntRow(r, BigInt(0)));
    for (std::size_t i = 0; i < r; ++i)
        V[i][i] = 1;
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < r; ++i) {
            std::swap(A[i][a], A[i][b]);
            std::swap(V[i][a], V[i][b]);
        }
    };
    auto col_axpy = [&](std::size_t dst, const BigInt &m, std::size_t src) {
        for (std::size_t i = 0; i < r; ++i) {
            A[i][dst] += m * A[i][src];
            V[i][dst] += m * V[i][src];
        }
    };
    for (std::size_t t = 0; t < r; ++t) {
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < r; ++j)
                    if (A[i][j] != 0 && (!best || abs(A[i][j]) < abs(A[best->first][best->second])))
                        best = std::make_pair(i, j);
            if (!best)
                throw domain_error("smith: singular matrix");
            std::swap(A[t], A[best->first]);
            swap_cols(t, best->second);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                BigInt m = floor_div(A[i][t], A[t][t]);
                if (m != 0)
                    axpy(A[i], -m, A[t]);
                if (A[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < r; ++j) {
                BigInt m = floor_div(A[t][j], A[t][t]);
                if (m != 0)
                    col_axpy(j, -m, t);
                if (A[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < r; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        axpy(A[t], BigInt(1), A[i]);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (A[t][t] < 0)
            for (BigInt &x : A[t])
                x = -x;
    }
    Smith s;
    for (std::size_t i = 0; i < r; ++i)
        s.d.push_back(A[i][i]);
    s.V = V;
    return s;
}

// ---------------------------------------------------------------------------
// Epsilon dichotomy

std::string to_string(KType t)
{
    switch (t) {
    case KType::split: return "split";
    case KType::inert: return "inert";
    case KType::ramified: return "ramified";
    }
    return "?";
}

std::string to_string(Dichotomy d)
{
    switch (d) {
    case Dichotomy::split: return "split";
    case Dichotomy::nonsplit: return "nonsplit";
    case Dichotomy::undetermined: return "undetermined";
    }
    return "?";
}

namespace
{

// (p, f) with q = p^f, or nothing
std::optional<std::pair<long, int>> prime_power(long q)
{
    if (q < 2)
        return std::nullopt;
    auto fs = factor(BigInt(q));
    if (fs.size() != 1)
        return std::nullopt;
    return std::make_pair(fs[0].first.get_si(), fs[0].second);
}

} // namespace

void LocalPair::validate() const
{
    if (!prime_power(q))
        throw domain_error("q must be a prime power");
    if (n < 0 || c < 0)
        throw domain_error("conductor exponents must be non-negative");
    if (e != (type == KType::ramified ? 2 : 1))
        throw domain_error("ramification index does not match the type of K");
}

EpsilonDecision epsilon_dichotomy(const LocalPair &lp, const EpsilonFlags &flags)
{
    lp.validate();
    if (lp.type == KType::split)
        return {Dichotomy::split, "K split: K embeds only in M_2(F)"};
    if (lp.c - lp.n + lp.e - 1 >= 0) {
        if (lp.c >= lp.n)
            return {Dichotomy::split, "K nonsplit, c >= n"};
        if (lp.n >= 3)
            return {Dichotomy::split, "K nonsplit, n >= 3"};
        if (lp.type == KType::ramified && lp.n == 2 && lp.c == 1) {
            if (flags.pi == PiKind::special && flags.mu_K_chi_trivial)
                throw domain_error("mu_K is unramified and chi is ramified, so mu_K chi != 1");
            if (flags.pi == PiKind::special)
                return {Dichotomy::split, "K ramified, n = 2, c = 1, pi = sp(2) mu: mu_K chi != 1"};
            if (flags.pi == PiKind::supercuspidal)
                return {Dichotomy::split, "K ramified, n = 2, c = 1, pi supercuspidal: ramified characters occur"};
            return {Dichotomy::split, "K ramified, n = 2, c = 1"};
        }
        return {Dichotomy::undetermined, "hypothesis c - n + e - 1 >= 0 holds but the case is not in the table"};
    }
    if (lp.type == KType::inert && lp.c == 0 && lp.n == 2)
        return {Dichotomy::split, "K inert, chi unramified, n = 2"};
    return {Dichotomy::undetermined, "c - n + e - 1 < 0 and no table entry"};
}

// ---------------------------------------------------------------------------
// Coset character sums

namespace
{

// O / p^c for the unramified extension O of Z_p of degree f, as
// (Z / p^c)[x] / (g) with g monic and irreducible mod p.
class Residues
{
public:
    Residues(long p, int f, int c) : p_(p), f_(f), c_(c)
    {
        m_ = 1;
        for (int i = 0; i < c; ++i)
            m_ *= p;
        size_ = 1;
        for (int i = 0; i < f; ++i)
            size_ *= m_;
        g_ = irreducible(p, f);
    }

    long size() const { return size_; }
    long modulus() const { return m_; }
    long p() const { return p_; }

    std::vector<long> decode(long i) const
    {
        std::vector<long> v(f_);
        for (int k = 0; k < f_; ++k, i /= m_)
            v[k] = i % m_;
        return v;
    }
    long encode(const std::vector<long> &v) const
    {
        long i = 0;
        for (int k = f_ - 1; k >= 0; --k)
            i = i * m_ + mod(v[k], m_);
        return i;
    }

    long add(long x, long y) const
    {
        auto a = decode(x), b = decode(y);
        for (int k = 0; k < f_; ++k)
            a[k] = (a[k] + b[k]) % m_;
        return encode(a);
    }
    long mul(long x, long y) const
    {
        auto a = decode(x), b = decode(y);
        std::vector<long> r(2 * f_, 0);
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j < f_; ++j)
                r[i + j] = (r[i + j] + a[i] * b[j]) % m_;
        // x^f = -(g_0 + ... + g_{f-1} x^{f-1})
        for (int k = 2 * f_ - 1; k >= f_; --k) {
            long t = r[k];
            r[k] = 0;
            for (int i = 0; i < f_; ++i)
                r[k - f_ + i] = mod(r[k - f_ + i] - t * g_[i], m_);
        }
        r.resize(f_);
        return encode(r);
    }
    long scalar(long s) const
    {
        std::vector<long> v(f_, 0);
        v[0] = mod(s, m_);
        return encode(v);
    }
    // v_p, c for zero
    int valuation(long x) const
    {
        int v = c_;
        for (long a : decode(x)) {
            if (a == 0)
                continue;
            int w = 0;
            while (a % p_ == 0) {
                a /= p_;
                ++w;
            }
            v = std::min(v, w);
        }
        return v;
    }
    bool is_unit(long x) const { return valuation(x) == 0; }
    long inverse(long x) const
    {
        // |(O/p^c)^x| = (q - 1) q^(c-1)
        long q = 1;
        for (int i = 0; i < f_; ++i)
            q *= p_;
        long order = q - 1;
        for (int i = 1; i < c_; ++i)
            order *= q;
        long r = scalar(1), b = x;
        for (long e = order - 1; e > 0; e >>= 1) {
            if (e & 1)
                r = mul(r, b);
            b = mul(b, b);
        }
        return r;
    }

private:
    static std::vector<long> irreducible(long p, int f)
    {
        // monic g of degree f without roots in F_{p^k}, k <= f/2; brute force
        // by checking that x^(p^f) = x and no smaller field contains x.
        if (f == 1)
            return {0};
        std::vector<long> g(f, 0);
        long total = 1;
        for (int i = 0; i < f; ++i)
            total *= p;
        for (long code = 0; code < total; ++code) {
            long t = code;
            for (int i = 0; i < f; ++i, t /= p)
                g[i] = t % p;
            if (is_irreducible(g, p))
                return g;
        }
        throw domain_error("no irreducible polynomial found");
    }

    static bool is_irreducible(const std::vector<long> &g, long p)
    {
        // no polynomial factor of degree <= f/2: check every monic h
        int f = static_cast<int>(g.size());
        std::vector<long> full(g);
        full.push_back(1);
        for (int d = 1; d <= f / 2; ++d) {
            long total = 1;
            for (int i = 0; i < d; ++i)
                total *= p;
            for (long code = 0; code < total; ++code) {
                std::vector<long> h(d + 1, 0);
                long t = code;
                for (int i = 0; i < d; ++i, t /= p)
                    h[i] = t % p;
                h[d] = 1;
                std::vector<long> r(full);
                for (int k = f; k >= d; --k) {
                    long m = r[k];
                    for (int i = 0; i <= d; ++i)
                        r[k - d + i] = mod(r[k - d + i] - m * h[i], p);
                }
                if (std::all_of(r.begin(), r.begin() + d, [](long x) { return x == 0; }))
                    return false;
            }
        }
        return true;
    }

    long p_;
    int f_, c_;
    long m_, size_;
    std::vector<long> g_;
};

// K^x / F^x O_c^x = {1, tau} x {1 + b tau : b in O / p^c}, tau^2 = p.
// Element (s, b) is encoded as s * |O/p^c| + b.
struct CosetGroup {
    Residues R;
    long order() const { return 2 * R.size(); }
    long mul(long x, long y) const
    {
        long n = R.size();
        long s = (x / n + y / n) % 2, b = x % n, bb = y % n;
        // (1 + b tau)(1 + b' tau) = (1 + p b b') + (b + b') tau
        long u = R.add(R.scalar(1), R.mul(R.scalar(R.p()), R.mul(b, bb)));
        return s * n + R.mul(R.add(b, bb), R.inverse(u));
    }
};

long mod_long(long a, long m) { return ((a % m) + m) % m; }

} // namespace

CosetReport coset_char_sums(const LocalPair &lp)
{
    lp.validate();
    if (lp.type != KType::ramified)
        throw domain_error("coset sums need K ramified");
    if (lp.q > 27 || lp.c < 1 || lp.c > 4)
        throw domain_error("coset sums need q <= 27 and 1 <= c <= 4");
    auto [p, f] = *prime_power(lp.q);
    CosetGroup G{Residues(p, f, lp.c)};
    const Residues &R = G.R;
    long n = R.size(), N = G.order();

    CosetReport rep;
    rep.q = lp.q;
    rep.c = lp.c;

    // Order by enumeration: |(O_K / p^c)^x| / |(O / p^c)^x|, times 2 for tau.
    long units_K = 0, units_F = 0;
    for (long a = 0; a < n; ++a)
        if (R.is_unit(a)) {
            ++units_F;
            units_K += n;
        }
    rep.group_order = 2 * units_K / units_F;

    rep.stratum_sizes.assign(lp.c, 0);
    for (long b = 1; b < n; ++b)
        ++rep.stratum_sizes[R.valuation(b)];
    rep.s_prime_size = n;
    rep.representatives = 1 + rep.s_prime_size;
    for (long s : rep.stratum_sizes)
        rep.representatives += s;

    // Structure: greedy generators, BFS words, relations, Smith form.
    std::vector<long> gens;
    std::vector<char> in_sub(N, 0);
    in_sub[0] = 1;
    std::vector<long> sub{0};
    for (long x = 0; x < N; ++x) {
        if (in_sub[x])
            continue;
        gens.push_back(x);
        for (std::size_t i = 0; i < sub.size(); ++i)
            for (long g : gens) {
                long y = G.mul(sub[i], g);
                if (!in_sub[y]) {
                    in_sub[y] = 1;
                    sub.push_back(y);
                }
            }
    }
    std::size_t r = gens.size();
    std::vector<IntRow> word(N);
    std::vector<char> seen(N, 0);
    std::vector<long> queue{0};
    word[0] = IntRow(r, BigInt(0));
    seen[0] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (std::size_t j = 0; j < r; ++j) {
            long y = G.mul(queue[i], gens[j]);
            if (!seen[y]) {
                seen[y] = 1;
                word[y] = word[queue[i]];
                word[y][j] += 1;
                queue.push_back(y);
            }
        }
    std::vector<IntRow> rel;
    for (long x = 0; x < N; ++x)
        for (std::size_t j = 0; j < r; ++j) {
            IntRow v = word[x];
            v[j] += 1;
            const IntRow &w = word[G.mul(x, gens[j])];
            for (std::size_t k = 0; k < r; ++k)
                v[k] -= w[k];
            rel.push_back(v);
        }
    Smith S = smith(hnf(rel, r));
    long exponent = 1;
    for (const BigInt &d : S.d) {
        rep.elementary_divisors.push_back(d.get_si());
        exponent = std::lcm(exponent, d.get_si());
    }

    // y(x) = word(x) V reduced mod d_i, scaled to phases mod the exponent
    std::vector<std::vector<long>> coord(N, std::vector<long>(r));
    for (long x = 0; x < N; ++x)
        for (std::size_t i = 0; i < r; ++i) {
            BigInt y = 0;
            for (std::size_t k = 0; k < r; ++k)
                y += word[x][k] * S.V[k][i];
            long d = S.d[i].get_si();
            coord[x][i] = mod_long(mpz_fdiv_ui(y.get_mpz_t(), d), d) * (exponent / d);
        }
    std::vector<std::complex<double>> zeta(exponent);
    for (long k = 0; k < exponent; ++k)
        zeta[k] = std::polar(1.0, 2 * M_PI * k / exponent);

    std::vector<long> k(r, 0);
    for (;;) {
        ++rep.characters;
        auto chi = [&](long x) {
            long ph = 0;
            for (std::size_t i = 0; i < r; ++i)
                ph += k[i] * coord[x][i];
            return zeta[mod_long(ph, exponent)];
        };
        // conductor exactly c: nontrivial on (0, b) with v(b) >= c - 1
        bool nontrivial = false;
        for (long b = 0; b < n && !nontrivial; ++b)
            if (R.valuation(b) >= lp.c - 1 && std::abs(chi(b) - 1.0) > 1e-9)
                nontrivial = true;
        if (!nontrivial) {
            ++rep.skipped;
        } else {
            ++rep.characters_used;
            std::vector<std::complex<double>> s(lp.c + 1, 0.0);
            for (long b = 1; b < n; ++b)
                s[R.valuation(b)] += chi(b);
            for (long b = 0; b < n; ++b)
                s[lp.c] += chi(n + b);
            for (int i = 0; i <= lp.c; ++i) {
                double want = i == lp.c - 1 ? -1.0 : 0.0;
                rep.max_deviation = std::max(rep.max_deviation, std::abs(s[i] - want));
            }
            rep.sums.push_back(s);
        }
        std::size_t i = 0;
        while (i < r && ++k[i] == S.d[i].get_si())
            k[i++] = 0;
        if (i == r)
            break;
    }
    rep.ok = rep.group_order == N && rep.representatives == N && rep.characters == N && rep.characters_used > 0 &&
             rep.max_deviation < 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Polynomials and rational functions in q

Poly Poly::q_power(int k)
{
    Poly p;
    p.c.assign(k + 1, BigRat(0));
    p.c[k] = 1;
    return p;
}

int Poly::degree() const
{
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[i] != 0)
            return i;
    return -1;
}

BigRat Poly::operator()(const BigRat &q) const
{
    BigRat r = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        r = r * q + c[i];
    return r;
}

Poly operator+(const Poly &x, const Poly &y)
{
    Poly r;
    r.c.assign(std::max(x.c.size(), y.c.size()), BigRat(0));
    for (std::size_t i = 0; i < x.c.size(); ++i)
        r.c[i] += x.c[i];
    for (std::size_t i = 0; i < y.c.size(); ++i)
        r.c[i] += y.c[i];
    return r;
}

Poly operator-(const Poly &x, const Poly &y) { return x + Poly::constant(-1) * y; }

Poly operator*(const Poly &x, const Poly &y)
{
    Poly r;
    if (x.c.empty() || y.c.empty())
        return r;
    r.c.assign(x.c.size() + y.c.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < x.c.size(); ++i)
        for (std::size_t j = 0; j < y.c.size(); ++j)
            r.c[i + j] += x.c[i] * y.c[j];
    return r;
}

bool operator==(const Poly &x, const Poly &y) { return (x - y).degree() < 0; }

std::string to_string(const Poly &p)
{
    std::string s;
    for (int i = p.degree(); i >= 0; --i) {
        if (p.c[i] == 0)
            continue;
        BigRat a = p.c[i];
        if (!s.empty())
            s += a < 0 ? " - " : " + ";
        else if (a < 0)
            s += "-";
        a = abs(a);
        if (a != 1 || i == 0)
            s += to_string(a);
        if (i > 0)
            s += i == 1 ? "q" : "q^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

RatFunc operator+(const RatFunc &x, const RatFunc &y) { return {x.num * y.den + y.num * x.den, x.den * y.den}; }
RatFunc operator*(const RatFunc &x, const RatFunc &y) { return {x.num * y.num, x.den * y.den}; }
RatFunc operator/(const RatFunc &x, const RatFunc &y) { return {x.num * y.den, x.den * y.num}; }
bool equal(const RatFunc &x, const RatFunc &y) { return x.num * y.den == y.num * x.den; }
std::string to_string(const RatFunc &f) { return "(" + to_string(f.num) + ") / (" + to_string(f.den) + ")"; }

Beta0Report beta0(const LocalPair &lp, const BigRat &vol)
{
    lp.validate();
    if (lp.type != KType::ramified || lp.c < 1 || lp.n != lp.c + 1)
        throw domain_error("beta0 needs K ramified, c >= 1 and n = c + 1");
    const int c = lp.c;
    auto K = [](const BigRat &x) { return RatFunc{Poly::constant(x), Poly::constant(1)}; };
    RatFunc q{Poly::q_power(1), Poly::constant(1)};
    // L(1, 1_F) = (1 - 1/q)^-1 = q / (q - 1)
    RatFunc L{Poly::q_power(1), Poly::q_power(1) - Poly::constant(1)};
    RatFunc psi = K(-1) * L / q; // Psi_{c-1}

    // # = 1 + sum_i |S_i| + |S'|, |S_i| = q^(c-i) - q^(c-i-1), |S'| = q^c
    Poly count = Poly::constant(1) + Poly::q_power(c);
    for (int i = 0; i < c; ++i)
        count = count + Poly::q_power(c - i) - Poly::q_power(c - i - 1);
    // sum_t Psi(t) chi(t) = 1 + Psi_{c-1} * (-1), the other strata sums being 0
    RatFunc total = K(1) + psi * K(-1);

    Beta0Report r;
    r.assembled = total / RatFunc{count, Poly::constant(1)};
    r.closed_form = L / RatFunc{Poly::constant(2) * Poly::q_power(c), Poly::constant(1)};
    r.match = equal(r.assembled, r.closed_form);
    r.value = vol * r.closed_form(BigRat(lp.q));
    return r;
}

// ---------------------------------------------------------------------------
// Embedded orders

std::array<Mat2, 4> eichler_basis(const BigRat &upper, const BigRat &lower)
{
    return {Mat2{1, 0, 0, 0}, Mat2{BigRat(0), upper, BigRat(0), BigRat(0)},
            Mat2{BigRat(0), BigRat(0), lower, BigRat(0)}, Mat2{0, 0, 0, 1}};
}

namespace
{

using RatMat = std::vector<std::vector<BigRat>>;

std::vector<BigRat> flat(const Mat2 &m) { return {m.a, m.b, m.c, m.d}; }

// inverse of a square rational matrix by Gauss-Jordan
RatMat invert(RatMat A)
{
    std::size_t n = A.size();
    RatMat I(n, std::vector<BigRat>(n, BigRat(0)));
    for (std::size_t i = 0; i < n; ++i)
        I[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0)
            ++piv;
        if (piv == n)
            throw domain_error("order basis is singular");
        std::swap(A[col], A[piv]);
        std::swap(I[col], I[piv]);
        BigRat s = A[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            A[col][j] /= s;
            I[col][j] /= s;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (i != col && A[i][col] != 0) {
                BigRat m = A[i][col];
                for (std::size_t j = 0; j < n; ++j) {
                    A[i][j] -= m * A[col][j];
                    I[i][j] -= m * I[col][j];
                }
            }
    }
    return I;
}

BigInt lcm_den(const std::vector<BigRat> &xs)
{
    BigInt l = 1;
    for (const BigRat &x : xs)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

} // namespace

OrderIntersection order_intersection(const Mat2 &rho, const std::array<Mat2, 4> &order)
{
    // coordinates of 1 and rho in the basis of the order
    RatMat B;
    for (const Mat2 &m : order)
        B.push_back(flat(m));
    RatMat Bi = invert(B);
    auto coords = [&](const Mat2 &m) {
        std::vector<BigRat> f = flat(m), x(4, BigRat(0));
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t i = 0; i < 4; ++i)
                x[j] += f[i] * Bi[i][j];
        return x;
    };
    std::vector<BigRat> c1 = coords(Mat2()), cw = coords(rho);
    // {(a, b) : a c1 + b cw in Z^4} is the dual of the lattice spanned by
    // w_k = (c1[k], cw[k]).
    std::vector<BigRat> all(c1);
    all.insert(all.end(), cw.begin(), cw.end());
    BigInt D = lcm_den(all);
    std::vector<IntRow> W;
    for (std::size_t k = 0; k < 4; ++k) {
        BigRat x = c1[k] * D, y = cw[k] * D;
        W.push_back({x.get_num(), y.get_num()});
    }
    std::vector<IntRow> H = hnf(W, 2);
    OrderIntersection out;
    if (H.size() != 2) {
        out.error = "1 and rho(omega) are linearly dependent modulo the order";
        return out;
    }
    // dual basis of (H / D): columns of ((H / D)^T)^-1, i.e. D (H^-1)^T rows
    BigRat h00 = BigRat(H[0][0]), h01 = BigRat(H[0][1]), h10 = BigRat(H[1][0]), h11 = BigRat(H[1][1]);
    BigRat det = h00 * h11 - h01 * h10;
    BigRat Dq(D);
    // H^-1 = [[h11, -h01], [-h10, h00]] / det; rows of (H^-1)^T
    std::vector<std::array<BigRat, 2>> dual = {{Dq * h11 / det, -Dq * h10 / det},
                                               {-Dq * h01 / det, Dq * h00 / det}};
    // HNF of the dual lattice, scaled to integers
    std::vector<BigRat> dv{dual[0][0], dual[0][1], dual[1][0], dual[1][1]};
    BigInt E = lcm_den(dv);
    std::vector<IntRow> Dl;
    for (const auto &row : dual) {
        BigRat x = row[0] * E, y = row[1] * E;
        Dl.push_back({x.get_num(), y.get_num()});
    }
    std::vector<IntRow> Hd = hnf(Dl, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.basis[i][j] = make_rat(Hd[i][j], E);
    // Z + c Z omega has HNF [[1, 0], [0, c]]
    if (out.basis[0][0] == 1 && out.basis[0][1] == 0 && out.basis[1][0] == 0 && out.basis[1][1].get_den() == 1) {
        out.is_order = true;
        out.conductor = out.basis[1][1].get_num();
    } else {
        out.error = "intersection is not of the form Z + c Z omega: basis " + to_string(out.basis[0][0]) + "," +
                    to_string(out.basis[0][1]) + " / " + to_string(out.basis[1][0]) + "," +
                    to_string(out.basis[1][1]);
    }
    return out;
}

BigInt local_conductor(const BigInt &c, long p)
{
    BigInt r = 1, x = abs(c);
    while (x != 0 && x % p == 0) {
        x /= p;
        r *= p;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Norms

KElem operator+(const KElem &x, const KElem &y) { return {x.a + y.a, x.b + y.b}; }
KElem operator-(const KElem &x, const KElem &y) { return {x.a - y.a, x.b - y.b}; }
KElem operator*(const KElem &x, const KElem &y) { return {x.a * y.a - 3 * x.b * y.b, x.a * y.b + x.b * y.a}; }
std::string to_string(const KElem &x) { return to_string(x.a) + " + " + to_string(x.b) + "u"; }

namespace
{

using LElem = std::array<KElem, 3>; // y0 + y1 v + y2 v^2, v^3 = p

LElem lmul(const LElem &x, const LElem &y, long p)
{
    std::array<KElem, 5> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[i + j] = r[i + j] + x[i] * y[j];
    KElem P{BigRat(p), BigRat(0)};
    return {r[0] + P * r[3], r[1] + P * r[4], r[2]};
}

KElem lnorm(const LElem &y, long p)
{
    KElem P{BigRat(p), BigRat(0)}, P2 = P * P, three{BigRat(3), BigRat(0)};
    return y[0] * y[0] * y[0] + P * y[1] * y[1] * y[1] + P2 * y[2] * y[2] * y[2] - three * P * y[0] * y[1] * y[2];
}

// varpi = u / (1 + v), (1 + v)^-1 = (1 - v + v^2) / (1 + p)
LElem varpi(long p)
{
    BigRat s = make_rat(BigInt(1), BigInt(1 + p));
    KElem u{BigRat(0), BigRat(1)};
    return {u * KElem{s, 0}, u * KElem{-s, 0}, u * KElem{s, 0}};
}

LElem embed(const KElem &x) { return {x, KElem{}, KElem{}}; }

LElem scale(const LElem &y, const KElem &k) { return {y[0] * k, y[1] * k, y[2] * k}; }

LElem ladd(const LElem &x, const LElem &y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }

} // namespace

KElem norm_L3(const KElem &alpha, const KElem &beta, const KElem &gamma, long p)
{
    LElem w = varpi(p), w2 = lmul(w, w, p);
    LElem x = ladd(ladd(embed(alpha), scale(w, beta)), scale(w2, gamma));
    return lnorm(x, p);
}

bool in_norm_group(const KElem &x, long prec)
{
    Padic a = Padic::from_rational(x.a, 3, prec), b = Padic::from_rational(x.b, 3, prec);
    return a.is_unit() && b.divisible_by(1);
}

NormReport norm_congruence_check(long p, int samples, std::uint64_t seed, int prec)
{
    if (p % 9 != 2 && p % 9 != 5)
        throw domain_error("p must be 2 or 5 mod 9");
    NormReport rep;
    rep.p = p;
    rep.samples = samples;
    rep.precision = prec;
    long M = 1;
    for (int i = 0; i < prec; ++i)
        M *= 3;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(0, M - 1);
    auto sample = [&] { return KElem{BigRat(dist(rng)), BigRat(dist(rng))}; };
    int sgn = p % 9 == 2 ? 1 : -1;
    for (int s = 0; s < samples; ++s) {
        KElem alpha = sample();
        while (BigInt(alpha.a.get_num()) % 3 == 0)
            alpha = sample();
        KElem beta = sample(), gamma = sample();
        KElem N = norm_L3(alpha, beta, gamma, p);
        bool bad = false;
        if (!in_norm_group(N, prec + 4)) {
            ++rep.norm_failures;
            bad = true;
        }
        // N == sgn sqrt(-3) beta (alpha^2 - beta^2) + A mod 3 O_3 with A in Z_3
        KElem u{BigRat(0), BigRat(sgn)};
        KElem res = N - u * beta * (alpha * alpha - beta * beta);
        Padic ra = Padic::from_rational(res.a, 3, prec + 4), rb = Padic::from_rational(res.b, 3, prec + 4);
        if (!ra.is_integral() || !rb.divisible_by(1)) {
            ++rep.congruence_failures;
            bad = true;
        }
        if (bad && rep.counterexamples.size() < 5)
            rep.counterexamples.push_back("alpha=" + to_string(alpha) + " beta=" + to_string(beta) +
                                          " gamma=" + to_string(gamma) + " N=" + to_string(N));
    }
    return rep;
}

} // namespace cubesum
