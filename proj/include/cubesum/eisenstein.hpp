#ifndef CUBESUM_EISENSTEIN_HPP
#define CUBESUM_EISENSTEIN_HPP

#include "cubesum/core.hpp"

#include <vector>

namespace cubesum
{

// a + b*omega with omega = e^{2 pi i / 3}.
struct EisInt {
    BigInt a, b;

    EisInt() : a(0), b(0) {}
    EisInt(long x) : a(x), b(0) {}
    EisInt(const BigInt &x) : a(x), b(0) {}
    EisInt(const BigInt &x, const BigInt &y) : a(x), b(y) {}

    static EisInt omega() { return EisInt(BigInt(0), BigInt(1)); }

    BigInt norm() const { return a * a - a * b + b * b; }
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_unit() const { return norm() == 1; }
    EisInt conj() const { return EisInt(BigInt(a - b), BigInt(-b)); }
    Complex to_complex() const;
};

EisInt operator+(const EisInt &x, const EisInt &y);
EisInt operator-(const EisInt &x, const EisInt &y);
EisInt operator-(const EisInt &x);
EisInt operator*(const EisInt &x, const EisInt &y);
bool operator==(const EisInt &x, const EisInt &y);
bool operator!=(const EisInt &x, const EisInt &y);

// Euclidean division with the quotient rounded to the nearest lattice point.
EisInt round_div(const EisInt &x, const EisInt &y);
EisInt reduce_mod(const EisInt &x, const EisInt &m);
bool divides(const EisInt &d, const EisInt &x);
EisInt exact_div(const EisInt &x, const EisInt &d);
EisInt gcd(EisInt x, EisInt y);
EisInt pow_mod(const EisInt &x, const BigInt &e, const EisInt &m);
std::vector<EisInt> units(); // omega^k and -omega^k
// The unique associate congruent to 2 mod 3 (requires N(x) prime to 3).
EisInt primary(const EisInt &x);

struct EisFactor {
    EisInt prime; // primary when coprime to 3, 1 - omega for the ramified prime
    int exponent;
};

// x = unit * prod prime^exponent
std::vector<EisFactor> factor(const EisInt &x);
// A prime of norm p for a rational prime p == 1 mod 3 (Cornacchia).
EisInt split_prime(const BigInt &p);

// omega^exponent
struct CubeRoot {
    int exponent = 0;

    CubeRoot() = default;
    explicit CubeRoot(long e) : exponent(static_cast<int>(mod(e, 3))) {}
    CubeRoot inverse() const { return CubeRoot(-exponent); }
    Complex value() const { return root_of_unity(exponent, 3); }
};

inline CubeRoot operator*(CubeRoot x, CubeRoot y)
{
    return CubeRoot(x.exponent + y.exponent);
}
inline bool operator==(CubeRoot x, CubeRoot y)
{
    return x.exponent == y.exponent;
}

// Cubic residue symbol (alpha / modulus)_3, multiplicative in the modulus.
CubeRoot cubic_symbol(const EisInt &alpha, const EisInt &modulus);

// Ideals of Z[omega] are principal; the generator is kept up to units.
struct EisIdeal {
    EisInt gen;
    BigInt norm() const { return gen.norm(); }
};

// A signed cube-free monomial prod p_i^{e_i}, e_i in {-1, 0, 1}, given as a
// rational number.  chi_d(a) = (d / a)_3 with negative exponents inverted.
struct Monomial {
    std::vector<std::pair<BigInt, int>> factors; // (p, e), e in {-1, 1}
    static Monomial from_rational(const BigRat &d);
    BigRat value() const;
    int exponent_sum() const;
};

CubeRoot chi_eval(const Monomial &d, const EisIdeal &ideal);
CubeRoot chi_eval(const BigRat &d, const EisIdeal &ideal);

} // namespace cubesum

#endif
