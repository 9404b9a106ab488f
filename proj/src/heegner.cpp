#include "cubesum/heegner.hpp"

#include "cubesum/eisenstein.hpp"
#include "cubesum/lseries.hpp"
#include "cubesum/x36.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace cubesum
{

namespace
{

// Terms of the q-series needed at Im tau >= y for the working precision.
long terms_needed(long bits, double y)
{
    return static_cast<long>(std::ceil((bits + 20) * std::log(2.0) / (2 * M_PI * y))) + 8;
}

const double min_series_im = 1.0 / 50;

} // namespace

ModularParametrization::ModularParametrization(long bits) : bits_(bits)
{
    precision_guard g(bits);
    L_ = periods(CurveK(BigRat(1)));
    long M = terms_needed(bits, min_series_im);
    std::vector<long> a = coefficients(CurveK(BigRat(1)), M);
    for (long n = 1; n <= M; ++n)
        if (a[n] != 0)
            terms_.emplace_back(n, Real(a[n]) / Real(n));
}

Complex ModularParametrization::series(const Complex &tau) const
{
    precision_guard g(bits_);
    double y = tau.im.to_double();
    if (!(y >= min_series_im))
        throw domain_error("q-series evaluated too close to the real axis");
    long M = terms_needed(bits_, y);
    Complex q = expi2pi(tau);
    Complex z(Real(0), Real(0)), qn = q;
    long n0 = 1;
    for (const auto &[n, c] : terms_) {
        if (n > M)
            break;
        if (n != n0) {
            qn *= pow(q, n - n0);
            n0 = n;
        }
        z += qn * c;
    }
    return z;
}

Complex ModularParametrization::evaluate(const Complex &tau) const
{
    precision_guard g(bits_);
    Complex s = tau * Real(6);
    Complex alpha(Real(1), Real(0)), beta(Real(0), Real(0));
    Complex cusp0 = Complex(L_.omega) / Real(6);
    Real edge = Real(1) - ldexp(Real(1), -bits_ / 2);
    for (int it = 0; it < 100000; ++it) {
        BigInt k = s.re.round();
        if (k != 0) {
            s.re -= Real(k);
            alpha *= root_of_unity(mod(BigInt(k), BigInt(6)).get_si(), 6);
        }
        if (norm(s) < edge) {
            beta += alpha * cusp0;
            alpha = -alpha;
            s = Complex(Real(-1)) / s;
            continue;
        }
        return reduce_mod_lattice(alpha * series(s / Real(6)) + beta, L_);
    }
    throw numeric_failure("modular reduction did not terminate");
}

ComplexPoint ModularParametrization::point(const Complex &tau) const
{
    precision_guard g(bits_);
    return elliptic_exp(-evaluate(tau), L_);
}

Complex evaluate_modular(const Complex &tau)
{
    return ModularParametrization(default_precision()).evaluate(tau);
}

CMPoint base_cm_point(long N)
{
    CMPoint P;
    P.form = QuadForm{BigInt(108), BigInt(-54 * N), BigInt(7 * N) * N};
    P.class_rep = principal_form(P.form.disc());
    P.tau = P.form.root();
    return P;
}

std::vector<CMPoint> galois_orbit(long N, const PicGroup &G)
{
    CMPoint base = base_cm_point(N);
    if (G.disc() != base.form.disc())
        throw domain_error("class group of the wrong discriminant");
    std::vector<CMPoint> out;
    out.reserve(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) {
        CMPoint P;
        P.class_rep = coprime_representative(G[i], BigInt(6 * N));
        P.form = compose_united(base.form, P.class_rep.inverse());
        P.cls = i;
        P.tau = P.form.root();
        out.push_back(P);
    }
    return out;
}

std::vector<long> heegner_primes(long N)
{
    if (N < 1 || N % 2 == 0)
        throw domain_error("N must be odd and positive");
    std::vector<long> ps;
    for (const auto &[p, e] : factor(BigInt(N))) {
        long q = p.get_si();
        if (e != 1)
            throw domain_error("N must be squarefree");
        if (q % 9 != 2 && q % 9 != 5)
            throw domain_error("prime " + std::to_string(q) + " is not 2 or 5 mod 9");
        ps.push_back(q);
    }
    return ps;
}

BigRat p_star(long p)
{
    if (p % 9 == 2)
        return BigRat(p);
    if (p % 9 == 5)
        return make_rat(BigInt(1), BigInt(p));
    throw domain_error("p must be 2 or 5 mod 9");
}

OrbitValues heegner_orbit(long N, long bits, int threads)
{
    precision_guard g(bits);
    std::vector<long> ps = heegner_primes(N);
    PicGroup G(BigInt(-108) * N * N);
    ModularParametrization mp(bits);
    OrbitValues ov;
    ov.N = N;
    ov.bits = bits;
    ov.L = mp.lattice();
    ov.orbit = galois_orbit(N, G);
    std::size_t h = ov.orbit.size();
    ov.f.resize(h);
    auto work = [&](std::size_t begin, std::size_t step) {
        precision_guard gw(bits);
        for (std::size_t i = begin; i < h; i += step)
            ov.f[i] = reduce_mod_lattice(-mp.evaluate(ov.orbit[i].tau), ov.L);
    };
    std::size_t T = static_cast<std::size_t>(std::max(1, threads));
    if (T == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < T; ++t)
            pool.emplace_back(work, t, T);
        for (auto &th : pool)
            th.join();
    }
    for (const CMPoint &P : ov.orbit) {
        EisIdeal I = form_to_ideal(P.class_rep);
        std::vector<int> e;
        for (long p : ps)
            e.push_back(chi_eval(BigRat(p), I).exponent);
        ov.chi.push_back(e);
        ov.inverse.push_back(G.inv(P.cls));
    }
    return ov;
}

std::string to_string(ZStatus s)
{
    switch (s) {
    case ZStatus::zero: return "zero";
    case ZStatus::torsion: return "torsion";
    case ZStatus::point: return "point";
    }
    return "?";
}

std::vector<Complex> torsion_logs(const PeriodLattice &L)
{
    // E[2 sqrt(-3)] = (Omega / 6) Z[omega] mod L; Newton is useless at the
    // 2-torsion, so the candidates are matched against the exact points.
    Complex w = root_of_unity(1, 3), unit = Complex(L.omega) / Real(6);
    std::vector<Complex> cand;
    for (long a = 0; a < 6; ++a)
        for (long b = 0; b < 6; ++b)
            cand.push_back(reduce_mod_lattice((Complex(Real(a)) + w * Real(b)) * unit, L));
    Real tol = ldexp(Real(1), -default_precision() / 2);
    std::vector<Complex> out;
    for (const Residue &r : all_residues()) {
        KPoint P = torsion_point(r);
        if (P.inf) {
            out.emplace_back(Real(0), Real(0));
            continue;
        }
        Complex x = P.x.to_complex(), y = P.y.to_complex();
        bool found = false;
        for (const Complex &z : cand) {
            ComplexPoint Q = elliptic_exp(z, L);
            if (!Q.inf && abs(Q.x - x) + abs(Q.y - y) < tol) {
                out.push_back(z);
                found = true;
                break;
            }
        }
        if (!found)
            throw numeric_failure("torsion point " + to_string(P) + " has no logarithm in (Omega/6) Z[omega]");
    }
    return out;
}

namespace
{

std::size_t index_of_residue(const Residue &r)
{
    auto all = all_residues();
    return std::find(all.begin(), all.end(), r) - all.begin();
}

} // namespace

Classified classify(const Complex &z, const PeriodLattice &L, const Real &tol)
{
    Classified c;
    Real d0 = lattice_distance(z, L);
    c.distance = d0;
    bool torsion = false;
    for (const Complex &t : torsion_logs(L)) {
        Real d = lattice_distance(z - t, L);
        if (d < c.distance)
            c.distance = d;
        if (d < tol)
            torsion = true;
    }
    if (d0 < tol)
        c.status = ZStatus::zero;
    else if (torsion)
        c.status = ZStatus::torsion;
    else
        c.status = ZStatus::point;
    return c;
}

namespace
{

// Exponents of d in the primes of N.
std::vector<int> exponents(long N, const BigRat &d)
{
    std::vector<long> ps = heegner_primes(N);
    std::vector<int> e(ps.size(), 0);
    Monomial m = Monomial::from_rational(d);
    for (const auto &[p, k] : m.factors) {
        auto it = std::find(ps.begin(), ps.end(), p.get_si());
        if (it == ps.end())
            throw domain_error("d must be supported on the primes of N");
        e[it - ps.begin()] = k;
    }
    return e;
}

} // namespace

Complex divisor_value(const OrbitValues &ov, const BigRat &d)
{
    precision_guard g(ov.bits);
    std::vector<int> e = exponents(ov.N, d);
    Complex w[3] = {root_of_unity(0, 3), root_of_unity(1, 3), root_of_unity(2, 3)};
    Complex s[3] = {Complex(Real(0), Real(0)), Complex(Real(0), Real(0)), Complex(Real(0), Real(0))};
    for (std::size_t i = 0; i < ov.f.size(); ++i) {
        long x = 0;
        for (std::size_t j = 0; j < e.size(); ++j)
            x += e[j] * ov.chi[i][j];
        s[mod(-x, 3)] += ov.f[i];
    }
    return reduce_mod_lattice(s[0] + w[1] * s[1] + w[2] * s[2], ov.L);
}

Complex genus_value(const OrbitValues &ov)
{
    precision_guard g(ov.bits);
    Complex s(Real(0), Real(0));
    for (std::size_t i = 0; i < ov.f.size(); ++i)
        if (std::all_of(ov.chi[i].begin(), ov.chi[i].end(), [](int x) { return x == 0; }))
            s += ov.f[i];
    return reduce_mod_lattice(s, ov.L);
}

std::vector<BigRat> d_grid(long N)
{
    std::vector<BigRat> out{BigRat(1)};
    for (long p : heegner_primes(N)) {
        std::vector<BigRat> next;
        for (const BigRat &d : out) {
            next.push_back(d);
            next.push_back(d * p);
            next.push_back(d / p);
        }
        out = next;
    }
    for (BigRat &d : out)
        d.canonicalize();
    return out;
}

bool expected_vanishing(long N, const BigRat &d)
{
    std::vector<long> ps = heegner_primes(N);
    std::vector<int> e = exponents(N, d);
    long sum = 0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        int s = ps[j] % 9 == 2 ? 1 : -1;
        if (e[j] == 0)
            return true;
        sum += e[j] * s;
    }
    return mod(sum, 3) != 1;
}

namespace
{

// Finds lattice-translates quickly: orbit values keyed by their lattice
// coordinates in [0, 1)^2.
class OrbitIndex
{
public:
    OrbitIndex(const std::vector<Complex> &zs, const PeriodLattice &L) : L_(L)
    {
        for (std::size_t i = 0; i < zs.size(); ++i)
            keys_.push_back({coord(zs[i]).first, i});
        std::sort(keys_.begin(), keys_.end());
        zs_ = zs;
    }

    // distance from z to the nearest orbit value mod L
    Real distance(const Complex &z) const
    {
        auto [u, v] = coord(z);
        Real best = Real(1e9);
        bool found = false;
        for (double shift : {-1.0, 0.0, 1.0}) {
            double lo = u + shift - 1e-6, hi = u + shift + 1e-6;
            auto it = std::lower_bound(keys_.begin(), keys_.end(), std::make_pair(lo, std::size_t(0)));
            for (; it != keys_.end() && it->first <= hi; ++it) {
                Real d = lattice_distance(z - zs_[it->second], L_);
                if (!found || d < best) {
                    best = d;
                    found = true;
                }
            }
        }
        if (found)
            return best;
        for (const Complex &w : zs_)
            best = min(best, lattice_distance(z - w, L_));
        return best;
    }

private:
    std::pair<double, double> coord(const Complex &z) const
    {
        // z = u w1 + v w2
        double w1r = L_.w1.re.to_double(), w1i = L_.w1.im.to_double();
        double w2r = L_.w2.re.to_double(), w2i = L_.w2.im.to_double();
        double zr = z.re.to_double(), zi = z.im.to_double();
        double det = w1r * w2i - w1i * w2r;
        double u = (zr * w2i - zi * w2r) / det, v = (w1r * zi - w1i * zr) / det;
        return {u - std::floor(u), v - std::floor(v)};
    }

    PeriodLattice L_;
    std::vector<std::pair<double, std::size_t>> keys_;
    std::vector<Complex> zs_;
};

} // namespace

OrbitChecks orbit_checks(const OrbitValues &ov)
{
    precision_guard g(ov.bits);
    OrbitChecks c;
    c.conjugation = Real(0);
    for (std::size_t i = 0; i < ov.f.size(); ++i)
        c.conjugation = max(c.conjugation, lattice_distance(conj(ov.f[i]) + ov.f[ov.inverse[i]], ov.L));

    Complex S(Real(0), Real(0));
    for (const Complex &z : ov.f)
        S += z;
    c.conj_sum = lattice_distance(conj(S) + S, ov.L);

    OrbitIndex idx(ov.f, ov.L);
    Complex w = root_of_unity(1, 3);
    // tau(2) = (0, 1)
    Complex l2 = torsion_logs(ov.L)[index_of_residue(Residue::of(EisInt(2)))];
    c.omega_action = Real(0);
    c.omega2_split = Real(0);
    for (const Complex &z : ov.f) {
        c.omega_action = max(c.omega_action, idx.distance(w * z));
        c.omega2_split = max(c.omega2_split, idx.distance(z + l2));
        c.omega2_split = max(c.omega2_split, idx.distance(z - l2));
    }

    Complex T(Real(0), Real(0));
    for (const BigRat &d : d_grid(ov.N))
        T += divisor_value(ov, d);
    Complex z0 = genus_value(ov);
    long k = static_cast<long>(ov.chi.empty() ? 0 : ov.chi[0].size());
    long three_k = 1;
    for (long j = 0; j < k; ++j)
        three_k *= 3;
    c.divisor_sum = lattice_distance(T - z0 * Real(three_k), ov.L);
    return c;
}

Reconstruction reconstruct(const Complex &z, const PeriodLattice &L, const BigRat &d)
{
    (void)L;
    long prec = z.precision();
    precision_guard g(prec);
    BigRat u;
    CurveK M = CurveK(d * d).minimal_twist(&u);
    PeriodLattice Ln = periods(M);
    // real sixth root of k, for the isomorphism E -> E^(d) over C
    Real kr = Real(M.k);
    Real s = kr.sign() > 0 ? pow(kr, Real(1) / Real(6)) : -pow(-kr, Real(1) / Real(6));
    Complex Z = reduce_mod_lattice(z / s, Ln);
    Complex sq3(Real(0), sqrt(Real(3)));
    Complex step = Complex(Ln.omega) / sq3;
    BigInt bound = recognition_bound(prec);
    Real tol = ldexp(Real(1), -prec / 3);

    std::optional<RatPoint> best;
    Real best_res;
    for (int t = 0; t < 3; ++t) {
        Complex W = (Z + step * Real(t)) / sq3;
        ComplexPoint pt = elliptic_exp(W, Ln);
        if (pt.inf)
            continue;
        auto x = recognize_rational(pt.x.re, bound);
        if (!x)
            continue;
        auto P = lift_x(*x, M);
        if (!P)
            continue;
        if (pt.y.re.sign() < 0)
            P = negate(*P);
        Real res = abs(pt.x - Complex(Real(P->x))) + abs(pt.y - Complex(Real(P->y)));
        Real scale = Real(1) + abs(pt.x) + abs(pt.y);
        if (!(res < tol * scale))
            continue;
        auto size = [](const RatPoint &R) {
            return std::max(mpz_sizeinbase(R.x.get_num_mpz_t(), 2), mpz_sizeinbase(R.x.get_den_mpz_t(), 2));
        };
        if (!best || size(*P) < size(*best)) {
            best = P;
            best_res = res / scale;
        }
    }
    if (!best)
        throw numeric_failure("no rational point recognized at " + std::to_string(prec) + " bits");

    Reconstruction r{M, *best, CurveK(BigRat(-27) * M.k), RatPoint(), Real(0), Real(0), best_res};
    r.Q = isogeny3(r.P, M);
    if (!on_curve(r.Q, r.twist))
        throw numeric_failure("3-isogeny image is off the twist");
    ComplexPoint X = elliptic_exp(Z, Ln);
    if (!r.Q.inf) {
        Complex want = X.x * Real(-3);
        Real res = abs(want - Complex(Real(r.Q.x))) / (Real(1) + abs(want));
        if (!(res < tol))
            throw numeric_failure("x(Q) does not match -3 x(z)");
        r.residual = max(r.residual, res);
    }
    if (!is_torsion(r.P, M)) {
        r.height_P = canonical_height(r.P, M);
        r.height_Q = canonical_height(r.Q, r.twist);
    }
    return r;
}

HeegnerResult heegner_divisor(long N, const BigRat &d, long bits, const Real &zero_tol, int rounds, int threads)
{
    std::string last;
    long b = bits;
    for (int round = 0; round < rounds; ++round, b *= 2) {
        precision_guard g(b);
        OrbitValues ov = heegner_orbit(N, b, threads);
        HeegnerResult h;
        h.N = N;
        h.d = d;
        h.bits = b;
        h.z = divisor_value(ov, d);
        h.cls = classify(h.z, ov.L, zero_tol);
        if (h.cls.status != ZStatus::point)
            return h;
        try {
            h.rec = reconstruct(h.z, ov.L, d);
            return h;
        } catch (const numeric_failure &e) {
            last = e.what();
        }
    }
    throw numeric_failure("recognition failed up to " + std::to_string(b / 2) + " bits: " + last);
}

} // namespace cubesum
