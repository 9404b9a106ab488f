#ifndef CUBESUM_ELLCURVE_HPP
#define CUBESUM_ELLCURVE_HPP

#include "cubesum/core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cubesum
{

// y^2 = x^3 + k over Q.
struct CurveK {
    BigRat k;

    explicit CurveK(const BigRat &k_);
    BigRat discriminant() const { return BigRat(-432 * k * k); }
    // The isomorphic model y^2 = x^3 + k u^6 with k u^6 integral and free of
    // sixth powers.
    CurveK minimal_twist(BigRat *u = nullptr) const;
    std::string tag() const; // "k=<num>/<den>"
};

struct RatPoint {
    bool inf = true;
    BigRat x, y;

    static RatPoint infinity() { return {}; }
    static RatPoint affine(const BigRat &x, const BigRat &y) { return {false, x, y}; }
};

bool operator==(const RatPoint &P, const RatPoint &Q);
bool on_curve(const RatPoint &P, const CurveK &E);
RatPoint negate(const RatPoint &P);
RatPoint add(const RatPoint &P, const RatPoint &Q, const CurveK &E);
RatPoint mul(long m, const RatPoint &P, const CurveK &E);
// Point with the given x, if x^3 + k is a rational square (y >= 0).
std::optional<RatPoint> lift_x(const BigRat &x, const CurveK &E);
// (u^2 x, u^3 y) on y^2 = x^3 + u^6 k
RatPoint rescale(const RatPoint &P, const BigRat &u);
std::string to_string(const RatPoint &P);

// Rational torsion by Lutz-Nagell on the integral model.
std::vector<RatPoint> torsion(const CurveK &E);
bool is_torsion(const RatPoint &P, const CurveK &E);

// a_p = p + 1 - #E(F_p) for p not dividing 6 num(k) den(k).
long ap(const CurveK &E, long p);
long ap_bruteforce(const CurveK &E, long p);

// General integral Weierstrass model, used for local data.
struct Weierstrass {
    BigInt a1, a2, a3, a4, a6;
    BigInt b2() const { return a1 * a1 + 4 * a2; }
    BigInt b4() const { return 2 * a4 + a1 * a3; }
    BigInt b6() const { return a3 * a3 + 4 * a6; }
    BigInt b8() const;
    BigInt c4() const;
    BigInt c6() const;
    BigInt disc() const;
};

struct LocalData {
    std::string kodaira;
    int conductor_exponent = 0;
    int components = 1; // on the special fibre, over the algebraic closure
    int disc_valuation = 0; // of the minimal model
    bool input_minimal = true;
};

// Tate's algorithm.
LocalData tate(const Weierstrass &W, const BigInt &p);
LocalData local_data(const CurveK &E, const BigInt &p);
BigInt conductor(const CurveK &E);
std::vector<BigInt> bad_primes(const CurveK &E);

struct PeriodLattice {
    Complex w1, w2; // w1 = Omega real, Im(w2 / w1) > 0
    Real omega;     // least positive real period

    Complex tau() const { return w2 / w1; }
};

// For the differential dx / 2y, so that x = wp(z), y = wp'(z) / 2.
PeriodLattice periods(const CurveK &E);
// g2, g3 from the Eisenstein series of the lattice.
std::pair<Complex, Complex> invariants(const PeriodLattice &L);
// Representative of z mod L with coordinates in [-1/2, 1/2).
Complex reduce_mod_lattice(const Complex &z, const PeriodLattice &L);
// Distance of z to the nearest lattice point.
Real lattice_distance(const Complex &z, const PeriodLattice &L);

struct WpPair {
    Complex wp, dwp;
};
WpPair weierstrass_p(const Complex &z, const PeriodLattice &L);

struct ComplexPoint {
    bool inf = true;
    Complex x, y;
};
ComplexPoint elliptic_exp(const Complex &z, const PeriodLattice &L);
Complex elliptic_log(const Complex &x, const Complex &y, const PeriodLattice &L);
Complex elliptic_log(const RatPoint &P, const CurveK &E);

enum class HeightNorm { Q, K };
// Neron-Tate height normalized as lim h(x(2^m P)) / 4^m; K doubles it.
Real canonical_height(const RatPoint &P, const CurveK &E, HeightNorm norm = HeightNorm::Q);

// The 3-isogeny y^2 = x^3 + D -> y^2 = x^3 - 27 D.
RatPoint isogeny3(const RatPoint &P, const CurveK &E);
// (a, b) with a^3 + b^3 = 2n, from a non-torsion point on y^2 = x^3 + n^2.
std::pair<BigRat, BigRat> cube_sum_extract(const RatPoint &P, const BigInt &n);

} // namespace cubesum

#endif
