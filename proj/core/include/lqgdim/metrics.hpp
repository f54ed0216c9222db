#ifndef LQGDIM_METRICS_HPP
#define LQGDIM_METRICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lqgdim/grid.hpp"
#include "lqgdim/lqg_measure.hpp"

namespace lqgdim {

enum class MetricModel { lgd, lfpp_grid, lfpp_discrete };

/// Source/target point sets plus an optional domain mask (row-major
/// over the computation lattice: grid sites for lgd/lfpp_discrete,
/// squares for lfpp_grid). Paths and covering balls must stay inside
/// the mask.
struct MetricQuery {
    std::vector<Point> source;
    std::vector<Point> target;
    std::optional<std::vector<std::uint8_t>> mask;
};

struct DistanceRun {
    MetricModel model = MetricModel::lgd;
    double eps_or_delta = 0.0;
    enum class Status { reachable, unreachable } status = Status::reachable;
    double value = 0.0;            // valid only when reachable
    std::uint64_t seed = 0;
    long path_length_cells = 0;    // nodes/balls on the optimal path
    std::size_t reachable_sites = 0;

    bool reachable() const { return status == Status::reachable; }
};

/// Liouville graph distance surrogate: minimal number of balls
/// B_{r}(w), r <= r_bar(w), covering a path between the sets. One BFS
/// hop from site z reaches every site within r_bar(z) (clipped to the
/// mask-interior radius under a mask).
DistanceRun lgd_distance(const MassGrid& measure, const CriticalRadii& radii,
                         const MetricQuery& query);

/// Square-graph LFPP at mesh delta: node weight delta*e^{xi h_delta},
/// xi = gamma/d_hat, h_delta the circle average at the square center.
/// A path pays every square it visits, endpoints included.
DistanceRun lfpp_grid_distance(const GridField& field, Gamma gamma, double d_hat,
                               double delta, const MetricQuery& query,
                               bool eight_connected = false);

/// Lattice FPP with node weights e^{xi h(x)} on the field's own grid.
DistanceRun lfpp_discrete_distance(const GridField& field, double xi,
                                   const MetricQuery& query,
                                   bool eight_connected = false);

/// max_{z,w in K} distance, via |K| single-source sweeps.
DistanceRun lgd_diameter(const MassGrid& measure, const CriticalRadii& radii,
                         const std::vector<Point>& K,
                         const std::optional<std::vector<std::uint8_t>>& mask = {});
DistanceRun lfpp_discrete_diameter(const GridField& field, double xi,
                                   const std::vector<Point>& K,
                                   const std::optional<std::vector<std::uint8_t>>& mask = {});

// Lower-level single-source solvers; +inf marks unreachable sites.
// Exposed for diameter sweeps and for oracle comparisons in tests.
std::vector<double> lgd_distance_field(const MassGrid& measure, const CriticalRadii& radii,
                                       const std::vector<Point>& sources,
                                       const std::optional<std::vector<std::uint8_t>>& mask);
std::vector<double> node_weight_distance_field(const std::vector<double>& weights, int nx,
                                               int ny, const std::vector<int>& sources,
                                               const std::optional<std::vector<std::uint8_t>>& mask,
                                               bool eight_connected);

} // namespace lqgdim

#endif
