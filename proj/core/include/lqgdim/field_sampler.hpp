#ifndef LQGDIM_FIELD_SAMPLER_HPP
#define LQGDIM_FIELD_SAMPLER_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "lqgdim/grid.hpp"

namespace lqgdim {

/// Multi-scale Gaussian field: independent stationary layers, one per
/// dyadic scale octave. scales = {1, 1/2, ..., t_min}; layers[k] is the
/// increment between scale k and k+1 (variance log 2 per site).
struct LayeredField {
    GridSpec spec;
    std::vector<double> scales;
    std::vector<std::vector<double>> layers;
    bool truncated = false;
    /// l1 mass of negative circulant eigenvalues clipped during
    /// synthesis, per layer (diagnostic; 0 when embedding was PSD).
    std::vector<double> clipped_mass;

    int num_layers() const { return static_cast<int>(layers.size()); }
};

/// Exact covariance of one scale octave at lag r, obtained by
/// Gauss-Legendre quadrature of the heat-kernel integral over
/// s in [t_lo^2, t_hi^2]. At r = 0 this is log(t_hi/t_lo).
double layer_covariance(double r, double t_hi, double t_lo);

/// Radial lookup table with linear interpolation; exactly zero past the
/// last entry and at or beyond the optional support radius.
class RadialTable {
public:
    RadialTable() = default;
    RadialTable(double dr, std::vector<double> values,
                double support = std::numeric_limits<double>::infinity());
    double operator()(double r) const;
    double dr() const { return dr_; }

private:
    double dr_ = 1.0;
    double support_ = std::numeric_limits<double>::infinity();
    std::vector<double> values_;
};

/// Covariance of one octave of the range-truncated field: heat kernel
/// killed outside radius 1/10 (single-reflection approximation),
/// self-convolved. Exactly zero for r >= 1/5.
RadialTable truncated_layer_covariance(double t_hi, double t_lo, double dr);

/// Stationary layer synthesizer. Precomputes the circulant spectrum of
/// every octave once; sample() is then two FFTs per layer. Immutable
/// after construction and safe to share across threads.
class LayeredSampler {
public:
    /// padding: torus extension factor for the circulant embedding.
    LayeredSampler(GridSpec spec, double t_min, bool truncated, int padding = 3);
    ~LayeredSampler();
    LayeredSampler(const LayeredSampler&) = delete;
    LayeredSampler& operator=(const LayeredSampler&) = delete;

    LayeredField sample(std::uint64_t seed) const;
    /// Two independent fields for the price of one (the synthesis
    /// produces a complex field whose real and imaginary parts are
    /// independent copies).
    std::pair<LayeredField, LayeredField> sample_pair(std::uint64_t seed) const;

    int num_layers() const;
    const std::vector<double>& scales() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot conveniences.
LayeredField sample_layered(const GridSpec& spec, double t_min, std::uint64_t seed);
LayeredField sample_truncated(const GridSpec& spec, double t_min, std::uint64_t seed);

/// Partial sum of layers 0..k-1: the field at scale t_k. k = K gives
/// the finest working field.
GridField assemble(const LayeredField& field, int coarsest_scale_index);

/// Exact zero-boundary discrete GFF sample via the sine eigenbasis of
/// the lattice Laplacian, normalized to the 2pi Dirichlet convention
/// (Cov = 2pi L^{-1}).
GridField sample_dgff(const GridSpec& spec, std::uint64_t seed);

/// Exact per-site variance of the zero-boundary DGFF on an n x n grid,
/// row-major (boundary rows are 0). Same normalization as sample_dgff.
std::vector<double> dgff_variance_grid(int n);

/// Mean of the field over M=32 equispaced points on the circle of
/// radius delta, bilinear interpolation. Throws if the circle leaves
/// the grid unless clamp is set (then sample points are clamped to the
/// boundary).
double circle_average(const GridField& field, Point center, double delta,
                      bool clamp = false);

} // namespace lqgdim

#endif
