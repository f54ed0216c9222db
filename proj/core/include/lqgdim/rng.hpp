#ifndef LQGDIM_RNG_HPP
#define LQGDIM_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace lqgdim {

/// Mix a master seed with a stream index (replicate number, layer index,
/// ...) into an independent child seed. splitmix64 finalizer; stable
/// across platforms, so thread scheduling can never influence results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Deterministic normal generator. std::normal_distribution is
/// implementation-defined, so we roll Box-Muller on top of mt19937_64
/// to keep output byte-stable across standard libraries.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();       // in (0,1)
    double normal();        // standard normal
    void fill_normal(std::vector<double>& out);
    /// Pair with correlation rho.
    void correlated_pair(double rho, double& a, double& b);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lqgdim

#endif
