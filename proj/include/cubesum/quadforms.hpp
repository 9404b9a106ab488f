#ifndef CUBESUM_QUADFORMS_HPP
#define CUBESUM_QUADFORMS_HPP

#include "cubesum/core.hpp"
#include "cubesum/eisenstein.hpp"

#include <map>
#include <vector>

namespace cubesum
{

// a x^2 + b x y + c y^2, positive definite.
struct QuadForm {
    BigInt a, b, c;

    BigInt disc() const { return b * b - 4 * a * c; }
    bool is_primitive() const;
    bool is_reduced() const;
    BigInt eval(const BigInt &x, const BigInt &y) const { return a * x * x + b * x * y + c * y * y; }
    QuadForm inverse() const { return {a, BigInt(-b), c}; }
    // Root (-b + sqrt(disc)) / 2a in the upper half plane.
    Complex root() const;
    // f(p x + q y, r x + s y)
    QuadForm transform(const BigInt &p, const BigInt &q, const BigInt &r, const BigInt &s) const;
};

bool operator==(const QuadForm &f, const QuadForm &g);
bool operator<(const QuadForm &f, const QuadForm &g);

QuadForm reduce(const QuadForm &f);
QuadForm principal_form(const BigInt &disc);
// Gauss composition (Shanks' formulation), reduced.
QuadForm compose(const QuadForm &f, const QuadForm &g);
// Dirichlet composite for coprime leading coefficients, NOT reduced: the
// united form [a1 a2, B, C] with B == b1 mod 2a1 and B == b2 mod 2a2.
QuadForm compose_united(const QuadForm &f, const QuadForm &g);

class PicGroup
{
public:
    explicit PicGroup(const BigInt &disc);

    const BigInt &disc() const { return disc_; }
    std::size_t size() const { return forms_.size(); }
    const QuadForm &operator[](std::size_t i) const { return forms_[i]; }
    const std::vector<QuadForm> &forms() const { return forms_; }
    std::size_t index_of(const QuadForm &f) const; // f need not be reduced
    std::size_t identity() const { return identity_; }
    std::size_t mul(std::size_t i, std::size_t j) const;
    std::size_t inv(std::size_t i) const;
    std::size_t order(std::size_t i) const;

private:
    BigInt disc_;
    std::vector<QuadForm> forms_;
    std::map<std::pair<BigInt, BigInt>, std::size_t> lookup_;
    std::size_t identity_ = 0;
};

PicGroup enumerate_classes(const BigInt &disc);

// h(O_c) for the order of conductor c in Q(sqrt(-3)).
BigInt class_number_formula(const BigInt &conductor);

// An equivalent form (proper SL2(Z) transform) whose leading coefficient is
// coprime to m.  Searches |x|, |y| <= 50, then widens.
QuadForm coprime_representative(const QuadForm &f, const BigInt &m);

// For f of discriminant -3 c^2 with gcd(a, c) = 1: the O_K-ideal generated by
// a and (-b + c sqrt(-3)) / 2.
EisIdeal form_to_ideal(const QuadForm &f);

} // namespace cubesum

#endif
