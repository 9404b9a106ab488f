#ifndef CUBESUM_TESTS_PROPERTIES_HPP
#define CUBESUM_TESTS_PROPERTIES_HPP

#include <string>
#include <vector>

namespace props
{

struct Result {
    std::string name;
    bool ok = false;
    std::vector<std::string> notes; // one per failed check, plus a summary
    double seconds = 0;
};

// h(mP) = m^2 h(P), parallelogram law, torsion invariance; 1e-12 relative.
Result height_quadraticity();
// wp'^2 - 4 wp^3 + g2 wp + g3 at 192 bits, below 2^-176 relative.
Result wp_residuals();
// L(1) or L'(1) at cutoffs M and 2M, within 1e-15.
Result lvalue_stability();
// k = 1 grids of 5, 11, 23: sign -1 iff sum e_i == 1 mod 3 iff z_d nonzero;
// every sign on the full grid of {5, 11, 23} against the local root numbers.
Result sign_parity();

} // namespace props

#endif
