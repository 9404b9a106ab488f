#ifndef CUBESUM_LOCAL_HPP
#define CUBESUM_LOCAL_HPP

#include "cubesum/x36.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cubesum
{

// ---------------------------------------------------------------------------
// Integer lattices

using IntRow = std::vector<BigInt>;

// Row-style Hermite normal form of the lattice spanned by rows: nonzero rows
// only, positive pivots, entries above a pivot reduced into [0, pivot).
std::vector<IntRow> hnf(const std::vector<IntRow> &rows, std::size_t ncols);

struct Smith {
    std::vector<BigInt> d;        // elementary divisors, d[i] | d[i+1]
    std::vector<IntRow> V;        // x -> x V maps the lattice onto (+) d_i Z
};

// A must be square and nonsingular.
Smith smith(std::vector<IntRow> A);

// ---------------------------------------------------------------------------
// Local pairs and the epsilon dichotomy

enum class KType { split, inert, ramified };
std::string to_string(KType t);

struct LocalPair {
    long q = 0;     // residue field size
    int n = 0;      // conductor exponent of pi
    int c = 0;      // conductor exponent of chi
    KType type = KType::split;
    int e = 1;      // ramification index of K/F

    void validate() const; // domain_error if inconsistent
};

enum class PiKind { unspecified, special, supercuspidal };

struct EpsilonFlags {
    PiKind pi = PiKind::unspecified;
    bool mu_K_chi_trivial = false; // for pi = sp(2) (x) mu
};

enum class Dichotomy { split, nonsplit, undetermined };
std::string to_string(Dichotomy d);

struct EpsilonDecision {
    Dichotomy result = Dichotomy::undetermined;
    std::string rule;
};

EpsilonDecision epsilon_dichotomy(const LocalPair &lp, const EpsilonFlags &flags = {});

// ---------------------------------------------------------------------------
// Cosets of K^x / F^x O_c^x for ramified K = F(tau), tau^2 = p

struct CosetReport {
    long q = 0;
    int c = 0;
    long group_order = 0;         // by enumeration of the unit quotient
    long representatives = 0;     // 1 + sum |S_i| + |S'|
    std::vector<long> stratum_sizes;
    long s_prime_size = 0;
    std::vector<long> elementary_divisors;
    long characters = 0;          // all characters of the quotient
    long characters_used = 0;     // those of conductor exactly c
    long skipped = 0;             // wrong conductor
    std::vector<std::vector<std::complex<double>>> sums; // per character: S_0..S_{c-1}, S'
    double max_deviation = 0;     // from 0, ..., 0, -1 and 0
    bool ok = false;
};

// q a prime power <= 27, 1 <= c <= 4.
CosetReport coset_char_sums(const LocalPair &lp);

// ---------------------------------------------------------------------------
// beta^0 as a rational function of q (times the formal volume)

struct Poly {
    std::vector<BigRat> c; // c[i] q^i

    static Poly constant(const BigRat &x) { return Poly{{x}}; }
    static Poly q_power(int k);
    int degree() const;
    BigRat operator()(const BigRat &q) const;
};

Poly operator+(const Poly &x, const Poly &y);
Poly operator-(const Poly &x, const Poly &y);
Poly operator*(const Poly &x, const Poly &y);
bool operator==(const Poly &x, const Poly &y);
std::string to_string(const Poly &p);

struct RatFunc {
    Poly num, den;

    BigRat operator()(const BigRat &q) const { return num(q) / den(q); }
};

RatFunc operator+(const RatFunc &x, const RatFunc &y);
RatFunc operator*(const RatFunc &x, const RatFunc &y);
RatFunc operator/(const RatFunc &x, const RatFunc &y);
bool equal(const RatFunc &x, const RatFunc &y);
std::string to_string(const RatFunc &f);

struct Beta0Report {
    RatFunc assembled;   // (1 - Psi_{c-1}) / #(K^x / F^x O_c^x), per unit volume
    RatFunc closed_form; // 2^-1 q^-c L(1, 1_F)
    bool match = false;
    BigRat value;        // at lp.q, times vol
};

// K ramified, c >= 1, n = c + 1.
Beta0Report beta0(const LocalPair &lp, const BigRat &vol = BigRat(1));

// ---------------------------------------------------------------------------
// Embedded orders

// Z-basis of [[Z, upper Z], [lower Z, Z]].
std::array<Mat2, 4> eichler_basis(const BigRat &upper, const BigRat &lower);

struct OrderIntersection {
    std::array<std::array<BigRat, 2>, 2> basis; // HNF basis of {(a, b) : a + b rho(omega) in R}
    bool is_order = false;                        // of the form Z + c Z omega
    BigInt conductor;
    std::string error;
};

OrderIntersection order_intersection(const Mat2 &rho, const std::array<Mat2, 4> &order);
// The p-part of a conductor: the local conductor at p.
BigInt local_conductor(const BigInt &c, long p);

// ---------------------------------------------------------------------------
// Norms from L_3 = K_3(cbrt p) to K_3 = Q_3(sqrt -3)

// a + b u with u^2 = -3
struct KElem {
    BigRat a, b;
};

KElem operator+(const KElem &x, const KElem &y);
KElem operator-(const KElem &x, const KElem &y);
KElem operator*(const KElem &x, const KElem &y);
std::string to_string(const KElem &x);

// N(alpha + beta varpi + gamma varpi^2) with varpi = u / (1 + cbrt p).
KElem norm_L3(const KElem &alpha, const KElem &beta, const KElem &gamma, long p);
// Membership in Z_3^x (1 + 3 O_3), decided at 3-adic precision prec.
bool in_norm_group(const KElem &x, long prec);

struct NormReport {
    long p = 0;
    int samples = 0;
    int precision = 0;
    int norm_failures = 0;
    int congruence_failures = 0;
    std::vector<std::string> counterexamples;
    bool ok() const { return norm_failures == 0 && congruence_failures == 0; }
};

// Random units alpha + beta varpi + gamma varpi^2 with coefficients mod 3^prec.
NormReport norm_congruence_check(long p, int samples, std::uint64_t seed = 1, int prec = 8);

} // namespace cubesum

#endif
