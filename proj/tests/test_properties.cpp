#include "doctest.h"

#include "properties.hpp"

#include <iostream>

namespace
{

void report(const props::Result &r)
{
    for (const auto &n : r.notes)
        std::cerr << r.name << ": " << n << "\n";
    std::cerr << r.name << ": " << r.seconds << " s\n";
    CHECK(r.ok);
    CHECK(r.seconds < 300);
}

} // namespace

TEST_CASE("height quadraticity") { report(props::height_quadraticity()); }

TEST_CASE("wp differential equation") { report(props::wp_residuals()); }

TEST_CASE("two-cutoff L stability") { report(props::lvalue_stability()); }

TEST_CASE("sign and parity on the d-grid") { report(props::sign_parity()); }
