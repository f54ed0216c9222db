#include "lqgdim/rng.hpp"

#include <cmath>

namespace lqgdim {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double GaussianRng::uniform() {
    // 53-bit mantissa, strictly inside (0,1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double GaussianRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void GaussianRng::fill_normal(std::vector<double>& out) {
    for (double& x : out) x = normal();
}

void GaussianRng::correlated_pair(double rho, double& a, double& b) {
    const double x = normal();
    const double y = normal();
    a = x;
    b = rho * x + std::sqrt(1.0 - rho * rho) * y;
}

} // namespace lqgdim
