#ifndef CUBESUM_GZ_HPP
#define CUBESUM_GZ_HPP

#include "cubesum/heegner.hpp"
#include "cubesum/lseries.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubesum
{

// Evaluation settings shared by the pipelines.
struct RunOptions {
    double cutoff_factor = 1.0; // L-series truncation, >= 1
    ApCache *cache = nullptr;
    int threads = 1;            // orbit evaluation
};

// d = prod (p_i*)^{e_i}
BigRat twist_parameter(const std::vector<long> &primes, const std::vector<int> &signs);

struct GZReport {
    std::vector<long> primes;
    std::vector<int> signs;
    BigRat d;
    CurveK curve_n{BigRat(1)}, curve_ninv{BigRat(1)}; // minimal models of E^(n), E^(1/n)
    long bits = 0;          // requested precision
    long heegner_bits = 0;  // precision at which z_n was recognized
    ZStatus status = ZStatus::point;
    Real L_deriv, L_value, omega_n, omega_ninv, height;
    Real omega_relation;    // |Omega_n Omega_ninv N / Omega^2 - 1|
    Real lhs, rhs, ratio, deviation;
    bool ratio_defined = false;
    bool torsion_consistent = true; // rhs = 0 branch: lhs must vanish too
    int sign_n = 0, sign_ninv = 0;
    std::optional<RatPoint> point; // P on curve_n
    double seconds = 0;
};

// sum e_i == 1 mod 3 required; stage failures surface as numeric_failure
// with the stage name in the message.
GZReport gz_verify(const std::vector<long> &primes, const std::vector<int> &signs, long bits,
                   const RunOptions &opt = {});
nlohmann::json to_json(const GZReport &r);

struct SweepRow {
    BigRat d;
    std::vector<int> eps; // exponents in p_i*
    ZStatus status = ZStatus::point;
    std::string expected; // "zero", "zero_or_torsion", "point"
    bool consistent = false;
    Real distance;
    int sign = 0; // root number of E^(d), 0 when not computed
    // sign == -1 iff sum e_i == 1 mod 3; holds when at most one e_i is
    // nonzero, informational otherwise
    bool sign_rule = false;
};

struct SweepReport {
    std::vector<long> primes;
    long bits = 0;
    std::size_t classes = 0;
    std::vector<SweepRow> rows;
    OrbitChecks checks;
    bool ok = false;
    double seconds = 0;
};

// Expected status of z_d: zero if some e_i = 0 or sum e_i == 2 mod 3,
// zero or torsion if 3 | sum e_i, a point of infinite order otherwise.
// The sweep takes an odd number of primes; with signs, a point must come with
// root number -1.
std::string expected_status(const std::vector<int> &eps);
SweepReport vanishing_sweep(const std::vector<long> &primes, long bits, bool with_signs = false,
                            const RunOptions &opt = {}, const Real &zero_tol = Real(1e-20));
nlohmann::json to_json(const SweepReport &r);

enum class Verdict { cube_sum, not_cube_sum, undecided };
std::string to_string(Verdict v);

struct Certificate {
    BigInt n;
    Verdict verdict = Verdict::undecided;
    BigRat a, b;          // a^3 + b^3 = 2n for cube_sum
    BigRat d;             // n = d m^3
    int sign = 0;         // root number of E^(n)
    std::string L1;       // decimal L(1) for not_cube_sum
    std::string stability;
    long bits = 0;
    std::vector<std::string> diagnostics;
};

// n a nonzero integer, not a cube, whose cube-free part is supported on
// primes == 2, 5 mod 9.
Certificate certify(const BigInt &n, long bits, const RunOptions &opt = {});
// Exact re-check of the witness; only the cube_sum verdict carries one.
bool verify_certificate(const Certificate &c);
nlohmann::json to_json(const Certificate &c);
Certificate certificate_from_json(const nlohmann::json &j);

} // namespace cubesum

#endif
