#ifndef CUBESUM_HEEGNER_HPP
#define CUBESUM_HEEGNER_HPP

#include "cubesum/ellcurve.hpp"
#include "cubesum/quadforms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubesum
{

// z(tau) = sum a_n / n q^n for the newform of level 36, and the lattice of
// y^2 = x^3 + 1.  Everything is computed at a fixed precision.
class ModularParametrization
{
public:
    explicit ModularParametrization(long bits = default_precision());

    long bits() const { return bits_; }
    const PeriodLattice &lattice() const { return L_; }

    // The raw q-series; domain_error when Im tau < 1/50.
    Complex series(const Complex &tau) const;
    // z(tau) mod the lattice.  6 tau is moved into the fundamental domain of
    // SL_2(Z) using z(tau + 1/6) = -omega^2 z(tau) and
    // z(-1/(36 tau)) = -z(tau) + Omega/6.
    Complex evaluate(const Complex &tau) const;
    // The parametrization with [0] -> (2, 3): exp_E(-z(tau)).
    ComplexPoint point(const Complex &tau) const;

private:
    long bits_;
    PeriodLattice L_;
    std::vector<std::pair<long, Real>> terms_; // (n, a_n / n), a_n != 0
};

Complex evaluate_modular(const Complex &tau);

struct CMPoint {
    QuadForm form;         // [a, b, c] with 36 | a and disc -108 N^2
    QuadForm class_rep;    // representative of the class, leading coefficient prime to 6N
    std::size_t cls = 0;   // index in the PicGroup
    Complex tau;
};

// h0 = (1 + sqrt(-3)/9) N / 4, the root of [108, -54N, 7N^2].
CMPoint base_cm_point(long N);
// One point per class of Pic(O_6N): the base form composed with the inverse
// of a representative prime to 6N.
std::vector<CMPoint> galois_orbit(long N, const PicGroup &G);

// Primes of N; N must be an odd squarefree product of primes == 2, 5 mod 9.
std::vector<long> heegner_primes(long N);
// p* = p for p == 2 mod 9, 1/p for p == 5 mod 9.
BigRat p_star(long p);

struct OrbitValues {
    long N = 0;
    long bits = 0;
    PeriodLattice L;
    std::vector<CMPoint> orbit;
    std::vector<Complex> f;                 // exp_E^{-1} of f(P0)^sigma, i.e. -z(tau)
    std::vector<std::vector<int>> chi;      // chi_{p_i}(sigma) exponents, per class
    std::vector<std::size_t> inverse;       // index of the inverse class
};

// threads > 1 evaluates the orbit in parallel; results do not depend on it.
OrbitValues heegner_orbit(long N, long bits = default_precision(), int threads = 1);

enum class ZStatus { zero, torsion, point };
std::string to_string(ZStatus s);

// Logarithms of the 12 points of E(K) = E[2 sqrt(-3)].
std::vector<Complex> torsion_logs(const PeriodLattice &L);

struct Classified {
    ZStatus status = ZStatus::point;
    Real distance; // to the nearest torsion value (0 included)
};

Classified classify(const Complex &z, const PeriodLattice &L, const Real &tol);

// sum_sigma [chi_d(sigma)^{-1}] f(P0)^sigma with [omega] z = omega z
Complex divisor_value(const OrbitValues &ov, const BigRat &d);
// Trace over the classes on which every chi_{p_i} is trivial.
Complex genus_value(const OrbitValues &ov);
// All d = prod p_i^{e_i}, e_i in {-1, 0, 1}.
std::vector<BigRat> d_grid(long N);
// Vanishing pattern: zero when some e_i = 0 or sum e_i != 1 mod 3, where
// d = prod (p_i*)^{e_i}.
bool expected_vanishing(long N, const BigRat &d);

struct OrbitChecks {
    Real conjugation;  // max |conj z_sigma + z_{sigma^-1}| mod L
    Real conj_sum;     // |conj(sum) + sum| mod L
    Real omega_action; // each omega z_sigma is in the orbit (max distance)
    Real omega2_split; // orbit = triples {P, P + tau(2), P - tau(2)} (max distance)
    Real divisor_sum;  // |sum_d z_d - 3^k z0| mod L
};

OrbitChecks orbit_checks(const OrbitValues &ov);

// A rational point recovered from z on E (lattice of y^2 = x^3 + 1).
struct Reconstruction {
    CurveK curve;  // minimal model of E^(d)
    RatPoint P;    // P on curve with sqrt(-3) P = z transported
    CurveK twist;  // y^2 = x^3 - 27 k
    RatPoint Q;    // image of P under the 3-isogeny; x(Q) = -3 x(z)
    Real height_P, height_Q;
    Real residual; // numeric mismatch of the recovered points
};

// numeric_failure when no candidate is recognized at the current precision.
Reconstruction reconstruct(const Complex &z, const PeriodLattice &L, const BigRat &d);

struct HeegnerResult {
    long N = 0;
    BigRat d;
    long bits = 0; // precision at which the result was obtained
    Complex z;
    Classified cls;
    std::optional<Reconstruction> rec;
};

// z_d with reconstruction; the precision doubles up to rounds - 1 times when
// recognition fails.
HeegnerResult heegner_divisor(long N, const BigRat &d, long bits, const Real &zero_tol, int rounds = 4,
                              int threads = 1);

} // namespace cubesum

#endif
