#ifndef CUBESUM_X36_HPP
#define CUBESUM_X36_HPP

#include "cubesum/eisenstein.hpp"
#include "cubesum/padic.hpp"

#include <map>
#include <string>
#include <vector>

namespace cubesum
{

constexpr long x36_level = 36;

struct Mat2 {
    BigRat a = 1, b = 0, c = 0, d = 1;

    BigRat det() const { return a * d - b * c; }
    bool is_integral() const;
};

Mat2 operator*(const Mat2 &x, const Mat2 &y);
bool operator==(const Mat2 &x, const Mat2 &y);
Mat2 inverse(const Mat2 &m);
Mat2 power(const Mat2 &m, long e);
std::string to_string(const Mat2 &m);

// omega -> [[4, -7N/6], [18/N, -5]], fixing h0 = (1 + sqrt(-3)/9) N / 4.
Mat2 rho_omega(long N);

// num/den in lowest terms with den >= 0; infinity is 1/0.
struct Cusp {
    BigInt num = 1, den = 0;

    static Cusp infinity() { return Cusp(); }
    static Cusp of(const BigRat &q);
    static Cusp of(const BigInt &n, const BigInt &d);
    bool is_infinity() const { return den == 0; }
};

bool operator==(const Cusp &x, const Cusp &y);
bool operator<(const Cusp &x, const Cusp &y);
std::string to_string(const Cusp &c);
Cusp act(const Mat2 &m, const Cusp &c);

// Gamma_0(36)-class of a cusp: d = gcd(den, 36) and num * den / d mod gcd(d, 36/d).
std::pair<long, long> cusp_invariant(const Cusp &c);
// Canonical representative a/d, d | 36, with the least admissible a >= 0.
Cusp cusp_classify(const Cusp &c);
bool cusps_equivalent(const Cusp &x, const Cusp &y);
std::vector<Cusp> cusp_classes();
// The representatives as listed: [0], [1/2], ..., [infinity].
std::vector<Cusp> listed_cusps();

bool in_gamma0(const Mat2 &m);
// m in Q^x Gamma_0(36)
bool in_scalar_gamma0(const Mat2 &m);
// Schreier generators from the coset action on P^1(Z/36).
const std::vector<Mat2> &gamma0_generators();
long gamma0_index();
bool normalizes_gamma0(const Mat2 &m);

// Z[omega]/(2 sqrt(-3)) as a + b omega with a in {0,1}, b in {0..5}.
struct Residue {
    int a = 0, b = 0;

    static Residue of(const EisInt &x);
};

Residue operator+(const Residue &x, const Residue &y);
Residue operator-(const Residue &x);
Residue operator*(const Residue &x, const Residue &y);
bool operator==(const Residue &x, const Residue &y);
bool operator<(const Residue &x, const Residue &y);
std::string to_string(const Residue &r);
std::vector<Residue> all_residues();

// A point of E(K) = E[2 sqrt(-3)] on y^2 = x^3 + 1; all coordinates lie in Z[omega].
struct KPoint {
    bool inf = true;
    EisInt x, y;
};

bool operator==(const KPoint &p, const KPoint &q);
std::string to_string(const KPoint &p);
// [alpha](2, 3) with [omega](x, y) = (omega x, y).
KPoint torsion_point(const Residue &alpha);

struct NormalizerRow {
    std::string label; // t_P
    KPoint point;
    Mat2 m;
};

const std::vector<NormalizerRow> &normalizer_table();
// tau(alpha) as listed, keyed by the listed alpha.
const std::vector<std::pair<EisInt, Cusp>> &tau_table();
std::map<Residue, Cusp> tau_map();

// A = [[1, 1/6], [0, 1]], B = [[0, 1], [-36, 0]]
Mat2 matrix_A();
Mat2 matrix_B();

struct RowCheck {
    std::string label;
    Residue alpha;
    Cusp image;    // class of m . infinity
    Cusp expected; // tau(alpha)
    bool normalizes = false;
    bool cusp_ok = false;
    bool ok() const { return normalizes && cusp_ok; }
};

struct StructureReport {
    std::vector<Cusp> cusps; // the listed cusps, canonicalized
    bool cusps_distinct = false;
    bool tau_bijective = false;
    std::vector<RowCheck> rows;
    bool translations_on_cusps = false;    // t_a t_b = t_{a+b} on all cusps
    bool translations_as_matrices = false; // same, modulo Q^x Gamma_0(36)
    bool A_order_six = false;
    bool A_acts_as_unit = false; // T(A) = [-omega^2]
    bool B_involution = false;   // T(B) = t_{-1,[0]}
    bool BA3_translation = false; // BA^3 equals the t_(2,3) row and takes [infinity] to [0]
    bool semidirect = false;      // 72 classes M_a A^j, closed and distinct
    std::vector<std::string> errors;

    bool ok() const;
};

StructureReport verify_normalizer_table();

struct PadicMat {
    Padic a, b, c, d;
};

PadicMat to_padic(const Mat2 &m, long p, long abs_prec);
// Local component of U at p: integral with unit determinant, 4 | c at 2,
// 9 | c and a == d mod 3 at 3.
bool u_membership(const PadicMat &g, long p);

} // namespace cubesum

#endif
