#ifndef LQGDIM_MATED_CRT_HPP
#define LQGDIM_MATED_CRT_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "lqgdim/estimator.hpp"
#include "lqgdim/exponents.hpp"

namespace lqgdim {

/// Correlation of the (L, R) Brownian pair encoding the map.
double crt_correlation(Gamma gamma);  // -cos(pi gamma^2 / 4)

/// Per-cell minima of a correlated 2D Brownian walk over n unit cells,
/// each cell subdivided into `substeps` Gaussian increments.
struct BmTrace {
    std::int64_t n = 0;
    double rho = 0.0;
    int substeps = 0;
    std::uint64_t seed = 0;
    std::vector<double> l_min;
    std::vector<double> r_min;
};

BmTrace sample_bm(Gamma gamma, std::int64_t n, int substeps, std::uint64_t seed);

enum class EdgeCoord : std::uint8_t { L, R, B };  // B: adjacent through both coordinates

/// Planar-map adjacency of the trace cells. Cells i < j are adjacent
/// iff max(m_i, m_j) <= min_{i<k<j} m_k for m one of the two minima
/// arrays (consecutive cells vacuously). Graph distance uses the
/// deduplicated simple adjacency; both-coordinate pairs carry coord B.
struct CrtMap {
    std::int64_t n = 0;
    std::int64_t window_lo = 0;  // middle third; centers outside it sit too
    std::int64_t window_hi = 0;  // close to the truncated ends of the walk

    // CSR over the simple graph, neighbor lists sorted.
    std::vector<std::int64_t> offsets;  // size n + 1
    std::vector<std::int32_t> neighbors;

    // Deduplicated edges u < v in lexicographic order; empty when the
    // map was built with keep_edges = false.
    std::vector<std::int32_t> edge_u;
    std::vector<std::int32_t> edge_v;
    std::vector<EdgeCoord> edge_coord;

    std::int64_t edge_count = 0;  // simple edges, kept even without the lists

    bool in_window(std::int64_t v) const { return v >= window_lo && v < window_hi; }
};

CrtMap build_map(const BmTrace& trace, bool keep_edges = true);

/// "u,v,coord" CSV, one line per simple edge, coord in {L,R,B}.
void write_edges(const CrtMap& map, std::ostream& os);

struct BallProfile {
    std::int64_t center = 0;
    std::vector<int> radii;               // 0, 1, ..., last clean radius
    std::vector<std::int64_t> volumes;    // #B_r, parallel to radii
    bool window_exhausted = false;        // truncated before r_max
};

/// #B_r for r = 0..r_max by BFS. Radii whose ball leaks outside the
/// window are dropped and the profile is flagged.
BallProfile ball_profile(const CrtMap& map, std::int64_t center, int r_max);

/// Pooled log-log regression of volume on radius over [r_lo, r_hi].
ExponentFit growth_exponent(const std::vector<BallProfile>& profiles, int r_lo, int r_hi);

} // namespace lqgdim

#endif
