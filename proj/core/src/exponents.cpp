#include "lqgdim/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace lqgdim {

Gamma::Gamma(double value) : value_(value) {
    if (!(value > 0.0 && value < 2.0))
        throw std::domain_error("Gamma: value must lie in (0,2)");
}

namespace exponents {

namespace {
const double kBranchGamma = std::sqrt(8.0 / 3.0);

// Shared branch expression (4 + g^2 + sqrt(16 + 2g^2 + g^4)) / 3.
double cubic_branch(double g) {
    const double g2 = g * g;
    return (4.0 + g2 + std::sqrt(16.0 + 2.0 * g2 + g2 * g2)) / 3.0;
}

void require_d(double d) {
    if (!(d > 2.0)) throw std::domain_error("dimension must exceed 2");
}
} // namespace

double lower_bound(Gamma gamma) {
    const double g = gamma.value();
    const double g2 = g * g;
    if (g <= kBranchGamma) {
        const double kpz = 2.0 * g2 / (4.0 + g2 - std::sqrt(16.0 + g2 * g2));
        return std::max(std::sqrt(6.0) * g, kpz);
    }
    return cubic_branch(g);
}

double upper_bound(Gamma gamma) {
    const double g = gamma.value();
    if (g <= kBranchGamma)
        return std::min(cubic_branch(g), 2.0 + 0.5 * g * g + std::sqrt(2.0) * g);
    return std::sqrt(6.0) * g;
}

double watabiki(double gamma) {
    if (!(gamma > 0.0 && gamma <= 2.0))
        throw std::domain_error("watabiki: gamma must lie in (0,2]");
    const double g2 = gamma * gamma;
    const double a = 4.0 + g2;
    return 1.0 + 0.25 * g2 + 0.25 * std::sqrt(a * a + 16.0 * g2);
}

double quad_guess(double gamma) {
    return 2.0 + 0.5 * gamma * gamma + gamma / std::sqrt(6.0);
}

double lfpp_xi(Gamma gamma, double d) {
    require_d(d);
    return gamma.value() / d;
}

double lfpp_lambda(Gamma gamma, double d) {
    require_d(d);
    return 1.0 - 2.0 / d - gamma.sq() / (2.0 * d);
}

double discrete_lfpp_exponent(Gamma gamma, double d) {
    require_d(d);
    return 2.0 / d + gamma.sq() / (2.0 * d);
}

double heat_kernel_exponent(double d) {
    require_d(d);
    return 1.0 / (d - 1.0);
}

std::vector<BoundsRow> bounds_table(const std::vector<Gamma>& gammas) {
    std::vector<BoundsRow> rows;
    rows.reserve(gammas.size());
    for (const Gamma& gamma : gammas) {
        BoundsRow row;
        row.gamma = gamma.value();
        row.lower = lower_bound(gamma);
        row.upper = upper_bound(gamma);
        row.watabiki = watabiki(gamma.value());
        row.quad = quad_guess(gamma.value());
        // tiny slack: the three curves coincide exactly at sqrt(8/3)
        if (!(row.lower <= row.watabiki + 1e-12 && row.watabiki <= row.upper + 1e-12))
            throw std::logic_error("bounds_table: sandwich violated");
        rows.push_back(row);
    }
    return rows;
}

} // namespace exponents
} // namespace lqgdim
