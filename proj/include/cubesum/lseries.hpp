#ifndef CUBESUM_LSERIES_HPP
#define CUBESUM_LSERIES_HPP

#include "cubesum/apcache.hpp"
#include "cubesum/ellcurve.hpp"

#include <vector>

namespace cubesum
{

// a_1 .. a_M of L(s, E); a[0] unused.  Bad primes of these curves are all
// additive, so their local factors are 1.
std::vector<long> coefficients(const CurveK &E, long M, ApCache *cache = nullptr);

// E_1(x) for x > 0: power series below 1, continued fraction above.
Real exp_integral_e1(const Real &x);

// Relative residual of F(1/t) = eps t^2 F(t), F(t) = sum a_n exp(-2 pi n t / sqrt N),
// maximized over a few t > 1.
Real functional_equation_residual(const std::vector<long> &a, const BigInt &N, int eps);

// Terms needed for the tail of the L(1) sums to drop below 2^-bits.
long cutoff_for(const BigInt &N, long bits, double factor = 1.0);

struct LSeries {
    CurveK curve;
    BigInt conductor;
    int sign = 0;
    long cutoff = 0; // M; coefficients are held up to 2M for the stability check
    std::vector<long> a;
    Real residual_chosen, residual_rejected;
};

// Conductor from Tate's algorithm, sign by the residual test.
LSeries make_lseries(const CurveK &E, double cutoff_factor = 1.0, ApCache *cache = nullptr);

// The conductor among the candidates for which one sign has a small residual.
BigInt conductor_by_residual(const CurveK &E, const std::vector<BigInt> &candidates);

struct LValues {
    Real value;      // L(1); exactly 0 when the sign is -1
    Real derivative; // L'(1); only computed when the sign is -1
    Real stability;  // |result(M) - result(2M)|
};

LValues value_and_derivative(const LSeries &ls);

} // namespace cubesum

#endif
