#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lqgdim/exponents.hpp"
#include "lqgdim/rng.hpp"

using namespace lqgdim;
using namespace lqgdim::exponents;

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt83 = std::sqrt(8.0 / 3.0);
}

TEST_CASE("gamma validates the open interval (0,2)") {
    CHECK_NOTHROW(Gamma(0.01));
    CHECK_NOTHROW(Gamma(1.9999));
    CHECK_THROWS_AS(Gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(Gamma(2.0), std::domain_error);
    CHECK_THROWS_AS(Gamma(-1.0), std::domain_error);
}

TEST_CASE("lower bound hits its published values") {
    CHECK(std::abs(lower_bound(Gamma(kSqrt2)) - 3.46410) < 1e-4);
    CHECK(std::abs(lower_bound(Gamma(kSqrt83)) - 4.0) < 1e-9);
    // hand evaluation at gamma=1: sqrt(6) beats 2/(5-sqrt(17))
    CHECK(std::abs(lower_bound(Gamma(1.0)) - std::sqrt(6.0)) < 1e-12);
    CHECK(std::abs(lower_bound(Gamma(1.0)) - 2.44949) < 1e-4);
}

TEST_CASE("upper bound hits its published values") {
    CHECK(std::abs(upper_bound(Gamma(kSqrt2)) - 3.63299) < 1e-4);
    CHECK(std::abs(upper_bound(Gamma(kSqrt83)) - 4.0) < 1e-9);
    // hand evaluation at gamma=1: (5+sqrt(19))/3 beats 2.5+sqrt(2)
    CHECK(std::abs(upper_bound(Gamma(1.0)) - (5.0 + std::sqrt(19.0)) / 3.0) < 1e-12);
    CHECK(std::abs(upper_bound(Gamma(1.0)) - 3.11963) < 1e-4);
    // near-critical limit values
    CHECK(std::abs(lower_bound(Gamma(1.9999)) - 4.77485) < 1e-3);
    CHECK(std::abs(upper_bound(Gamma(1.9999)) - 4.89898) < 1e-3);
    CHECK(std::abs(upper_bound(Gamma(1.9999999)) - 2.0 * std::sqrt(6.0)) < 1e-5);
}

TEST_CASE("both bounds are continuous across the branch point") {
    const double eps = 1e-10;
    CHECK(std::abs(lower_bound(Gamma(kSqrt83 - eps)) - lower_bound(Gamma(kSqrt83 + eps))) < 1e-9);
    CHECK(std::abs(upper_bound(Gamma(kSqrt83 - eps)) - upper_bound(Gamma(kSqrt83 + eps))) < 1e-9);
}

TEST_CASE("watabiki prediction values") {
    CHECK(std::abs(watabiki(kSqrt83) - 4.0) < 1e-12);
    CHECK(std::abs(watabiki(kSqrt2) - (1.5 + std::sqrt(68.0) / 4.0)) < 1e-12);
    CHECK(std::abs(watabiki(kSqrt2) - 3.56155) < 1e-4);
    CHECK(std::abs(watabiki(2.0) - (2.0 + std::sqrt(128.0) / 4.0)) < 1e-12);
    CHECK(std::abs(watabiki(2.0) - 4.82843) < 1e-4);
    CHECK_THROWS_AS(watabiki(2.1), std::domain_error);
}

TEST_CASE("quadratic guess values") {
    CHECK(std::abs(quad_guess(0.0) - 2.0) < 1e-12);
    CHECK(std::abs(quad_guess(kSqrt83) - 4.0) < 1e-12);
    CHECK(std::abs(quad_guess(1.0) - (2.5 + 1.0 / std::sqrt(6.0))) < 1e-12);
    CHECK(std::abs(quad_guess(1.0) - 2.90825) < 1e-4);
}

TEST_CASE("first-passage exponents") {
    CHECK(std::abs(lfpp_xi(Gamma(kSqrt83), 4.0) - kSqrt83 / 4.0) < 1e-15);
    CHECK(std::abs(lfpp_xi(Gamma(kSqrt83), 4.0) - 0.40825) < 1e-4);
    CHECK(std::abs(lfpp_xi(Gamma(kSqrt2), 3.5) - 0.40406) < 1e-4);
    CHECK_THROWS_AS(lfpp_xi(Gamma(1.0), 2.0), std::domain_error);

    CHECK(std::abs(lfpp_lambda(Gamma(kSqrt83), 4.0) - 1.0 / 6.0) < 1e-12);
    CHECK(std::abs(lfpp_lambda(Gamma(kSqrt2), 4.0) - 0.25) < 1e-12);
    CHECK_THROWS_AS(lfpp_lambda(Gamma(1.0), 1.5), std::domain_error);

    CHECK(std::abs(discrete_lfpp_exponent(Gamma(kSqrt83), 4.0) - 5.0 / 6.0) < 1e-12);
    CHECK(std::abs(discrete_lfpp_exponent(Gamma(kSqrt2), 4.0) - 0.75) < 1e-12);

    CHECK(std::abs(heat_kernel_exponent(4.0) - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(heat_kernel_exponent(3.0) - 0.5) < 1e-15);
    CHECK(std::abs(heat_kernel_exponent(3.5) - 0.4) < 1e-15);
    CHECK_THROWS_AS(heat_kernel_exponent(2.0), std::domain_error);
}

TEST_CASE("rescaling identity (1-lambda)/xi = 2/gamma + gamma/2 for random pairs") {
    GaussianRng rng(0xa11ce);
    for (int k = 0; k < 100; ++k) {
        const double g = 0.05 + 1.9 * rng.uniform();
        const double d = 2.0 + 5.0 * rng.uniform() + 1e-6;
        const Gamma gamma(g);
        const double lhs = (1.0 - lfpp_lambda(gamma, d)) / lfpp_xi(gamma, d);
        CHECK(std::abs(lhs - (2.0 / g + g / 2.0)) < 1e-12);
    }
}

TEST_CASE("discrete exponent complements lambda") {
    GaussianRng rng(0xbee);
    for (int k = 0; k < 50; ++k) {
        const double g = 0.05 + 1.9 * rng.uniform();
        const double d = 2.0 + 4.0 * rng.uniform() + 1e-6;
        CHECK(std::abs(discrete_lfpp_exponent(Gamma(g), d) + lfpp_lambda(Gamma(g), d) - 1.0) <
              1e-14);
    }
}

TEST_CASE("bound curves on a dense grid") {
    std::vector<Gamma> gammas;
    for (int k = 1; k <= 199; ++k) gammas.emplace_back(0.01 * k);
    const auto table = bounds_table(gammas);
    REQUIRE(table.size() == 199);

    for (const auto& row : table) {
        CHECK(row.lower > 2.0);
        CHECK(row.lower <= row.upper + 1e-12);
        CHECK(row.lower <= row.watabiki + 1e-12);
        CHECK(row.watabiki <= row.upper + 1e-12);
        // bounds meet only at the branch point
        if (std::abs(row.gamma - kSqrt83) > 0.01)
            CHECK(row.upper - row.lower > 1e-9);
    }
    for (std::size_t k = 1; k < table.size(); ++k) {
        CHECK(table[k].lower >= table[k - 1].lower - 1e-12);
        CHECK(table[k].upper >= table[k - 1].upper - 1e-12);
        // gamma/d is nondecreasing along both bound curves, and
        // strictly increasing wherever the active branch is not the
        // sqrt(6)*gamma line (whose ratio is constant 1/sqrt(6))
        const double rl0 = table[k - 1].gamma / table[k - 1].lower;
        const double rl1 = table[k].gamma / table[k].lower;
        const double ru0 = table[k - 1].gamma / table[k - 1].upper;
        const double ru1 = table[k].gamma / table[k].upper;
        CHECK(rl1 >= rl0 - 1e-15);
        CHECK(ru1 >= ru0 - 1e-15);
        if (table[k - 1].gamma > kSqrt83) CHECK(rl1 > rl0);
        if (table[k].gamma < kSqrt83) CHECK(ru1 > ru0);
    }
}

TEST_CASE("bounds table of an empty list is empty") {
    CHECK(bounds_table({}).empty());
}
