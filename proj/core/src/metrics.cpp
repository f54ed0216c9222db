#include "lqgdim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "lqgdim/field_sampler.hpp"

namespace lqgdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int nearest_index(double coord, double origin, double spacing, int n) {
    const int idx = static_cast<int>(std::lround((coord - origin) / spacing));
    return std::clamp(idx, 0, n - 1);
}

std::size_t nearest_site(const GridSpec& spec, Point p) {
    const int i = nearest_index(p.y, spec.origin.y, spec.spacing, spec.n);
    const int j = nearest_index(p.x, spec.origin.x, spec.spacing, spec.n);
    return static_cast<std::size_t>(i) * spec.n + j;
}

// Large-but-finite stand-in for "no seed in this line"; keeps the
// parabola arithmetic below free of inf/nan.
constexpr double kEdtBig = 1e20;

// 1D squared-distance lower envelope (Felzenszwalb-Huttenlocher).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtBig;
    z[1] = kEdtBig;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (k > 0 && s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kEdtBig;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int j = v[k];
        d[q] = (q - j) * (q - j) + f[j];
    }
}

// Squared Euclidean distance (in lattice units) from every site to the
// nearest site outside the mask.
std::vector<double> mask_edt_sq(const std::vector<std::uint8_t>& mask, int nx, int ny) {
    std::vector<double> grid(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) grid[i] = mask[i] ? kEdtBig : 0.0;

    const int n_max = std::max(nx, ny);
    std::vector<double> f(n_max), d(n_max), z(n_max + 1);
    std::vector<int> v(n_max);

    for (int i = 0; i < ny; ++i) {  // along rows
        f.resize(nx);
        d.resize(nx);
        for (int j = 0; j < nx; ++j) f[j] = grid[static_cast<std::size_t>(i) * nx + j];
        edt_1d(f, d, v, z);
        for (int j = 0; j < nx; ++j) grid[static_cast<std::size_t>(i) * nx + j] = d[j];
    }
    for (int j = 0; j < nx; ++j) {  // along columns
        f.resize(ny);
        d.resize(ny);
        for (int i = 0; i < ny; ++i) f[i] = grid[static_cast<std::size_t>(i) * nx + j];
        edt_1d(f, d, v, z);
        for (int i = 0; i < ny; ++i) grid[static_cast<std::size_t>(i) * nx + j] = d[i];
    }
    return grid;
}

void check_query(const MetricQuery& query, std::size_t lattice_size) {
    if (query.source.empty() || query.target.empty())
        throw std::invalid_argument("metrics: source/target sets must be nonempty");
    if (query.mask && query.mask->size() != lattice_size)
        throw std::invalid_argument("metrics: mask size does not match lattice");
}

bool shares_point(const MetricQuery& query) {
    for (const Point& a : query.source)
        for (const Point& b : query.target)
            if (a.x == b.x && a.y == b.y) return true;
    return false;
}

} // namespace

std::vector<double> lgd_distance_field(const MassGrid& measure, const CriticalRadii& radii,
                                       const std::vector<Point>& sources,
                                       const std::optional<std::vector<std::uint8_t>>& mask) {
    const GridSpec& spec = measure.spec();
    const int n = spec.n;
    const double h = spec.spacing;
    const std::size_t size = spec.size();

    // allowed jump radius per site: critical radius, clipped so the
    // ball stays inside the mask
    std::vector<double> rho(radii.r_bar);
    if (mask) {
        const std::vector<double> edt = mask_edt_sq(*mask, n, n);
        for (std::size_t idx = 0; idx < size; ++idx) {
            const double d_c = std::sqrt(edt[idx]) * h - 0.5 * h;
            rho[idx] = std::min(rho[idx], d_c);
        }
    }

    std::vector<double> dist(size, kInf);

    // per-row skip pointers over unvisited sites
    const int stride = n + 1;
    std::vector<int> next(static_cast<std::size_t>(n) * stride);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) next[static_cast<std::size_t>(i) * stride + j] = j;
    auto find = [&](int row, int j) {
        const std::size_t base = static_cast<std::size_t>(row) * stride;
        int r = j;
        while (next[base + r] != r) r = next[base + r];
        while (next[base + j] != r) {
            const int t = next[base + j];
            next[base + j] = r;
            j = t;
        }
        return r;
    };
    auto mark_visited = [&](int row, int j) {
        next[static_cast<std::size_t>(row) * stride + j] = j + 1;
    };

    // sites outside the mask can never lie on a path
    if (mask)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(*mask)[static_cast<std::size_t>(i) * n + j]) mark_visited(i, j);

    std::queue<std::size_t> frontier;
    for (const Point& p : sources) {
        const std::size_t s = nearest_site(spec, p);
        if (mask && !(*mask)[s])
            throw std::invalid_argument("lgd_distance: source outside domain mask");
        if (dist[s] == kInf) {
            dist[s] = 0.0;
            mark_visited(static_cast<int>(s) / n, static_cast<int>(s) % n);
            frontier.push(s);
        }
    }

    while (!frontier.empty()) {
        const std::size_t z = frontier.front();
        frontier.pop();
        const int zi = static_cast<int>(z) / n;
        const int zj = static_cast<int>(z) % n;
        const double r = rho[z];
        if (!(r > 0.0)) continue;
        const double r2 = r * r;
        const int di_max = static_cast<int>(r / h) + 1;
        for (int i = std::max(0, zi - di_max); i <= std::min(n - 1, zi + di_max); ++i) {
            const double dy = (i - zi) * h;
            if (dy * dy > r2) continue;
            const double w = std::sqrt(r2 - dy * dy);
            int j_lo = std::max(0, zj - static_cast<int>(w / h) - 1);
            int j_hi = std::min(n - 1, zj + static_cast<int>(w / h) + 1);
            auto inside = [&](int j) {
                const double dx = (j - zj) * h;
                return dx * dx + dy * dy <= r2;
            };
            while (j_lo <= j_hi && !inside(j_lo)) ++j_lo;
            while (j_hi >= j_lo && !inside(j_hi)) --j_hi;
            if (j_lo > j_hi) continue;
            for (int j = find(i, j_lo); j <= j_hi; j = find(i, j + 1)) {
                const std::size_t idx = static_cast<std::size_t>(i) * n + j;
                dist[idx] = dist[z] + 1.0;
                mark_visited(i, j);
                frontier.push(idx);
            }
        }
    }
    return dist;
}

DistanceRun lgd_distance(const MassGrid& measure, const CriticalRadii& radii,
                         const MetricQuery& query) {
    const GridSpec& spec = measure.spec();
    check_query(query, spec.size());

    DistanceRun run;
    run.model = MetricModel::lgd;
    run.eps_or_delta = radii.eps;
    if (shares_point(query)) {
        run.value = 0.0;
        run.path_length_cells = 0;
        return run;
    }

    const std::vector<double> dist = lgd_distance_field(measure, radii, query.source, query.mask);
    double best = kInf;
    for (const Point& p : query.target) {
        const std::size_t t = nearest_site(spec, p);
        if (query.mask && !(*query.mask)[t])
            throw std::invalid_argument("lgd_distance: target outside domain mask");
        best = std::min(best, dist[t]);
    }
    run.reachable_sites = static_cast<std::size_t>(
        std::count_if(dist.begin(), dist.end(), [](double d) { return d < kInf; }));
    if (best == kInf) {
        run.status = DistanceRun::Status::unreachable;
    } else {
        run.value = best;
        run.path_length_cells = static_cast<long>(best);
    }
    return run;
}

std::vector<double> node_weight_distance_field(
    const std::vector<double>& weights, int nx, int ny, const std::vector<int>& sources,
    const std::optional<std::vector<std::uint8_t>>& mask, bool eight_connected) {
    const std::size_t size = static_cast<std::size_t>(nx) * ny;
    if (weights.size() != size) throw std::invalid_argument("node weights: bad size");
    std::vector<double> dist(size, kInf);

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int s : sources) {
        if (mask && !(*mask)[s])
            throw std::invalid_argument("node weight distance: source outside mask");
        if (weights[s] < dist[s]) {
            dist[s] = weights[s];
            heap.push({dist[s], s});
        }
    }

    const int dx4[] = {1, -1, 0, 0};
    const int dy4[] = {0, 0, 1, -1};
    const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int deg = eight_connected ? 8 : 4;
    const int* dxs = eight_connected ? dx8 : dx4;
    const int* dys = eight_connected ? dy8 : dy4;

    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        const int ux = u % nx;
        const int uy = u / nx;
        for (int k = 0; k < deg; ++k) {
            const int vx = ux + dxs[k];
            const int vy = uy + dys[k];
            if (vx < 0 || vx >= nx || vy < 0 || vy >= ny) continue;
            const int v = vy * nx + vx;
            if (mask && !(*mask)[v]) continue;
            const double nd = d + weights[v];
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.push({nd, v});
            }
        }
    }
    return dist;
}

namespace {

DistanceRun node_weight_run(const std::vector<double>& weights, int m,
                            const std::vector<int>& sources, const std::vector<int>& targets,
                            const MetricQuery& query, MetricModel model, double scale,
                            bool eight_connected) {
    DistanceRun run;
    run.model = model;
    run.eps_or_delta = scale;
    if (shares_point(query)) {
        run.value = 0.0;
        return run;
    }
    const std::vector<double> dist =
        node_weight_distance_field(weights, m, m, sources, query.mask, eight_connected);
    double best = kInf;
    for (int t : targets) {
        if (query.mask && !(*query.mask)[t])
            throw std::invalid_argument("metrics: target outside domain mask");
        best = std::min(best, dist[t]);
    }
    run.reachable_sites = static_cast<std::size_t>(
        std::count_if(dist.begin(), dist.end(), [](double d) { return d < kInf; }));
    if (best == kInf)
        run.status = DistanceRun::Status::unreachable;
    else
        run.value = best;
    return run;
}

} // namespace

DistanceRun lfpp_grid_distance(const GridField& field, Gamma gamma, double d_hat,
                               double delta, const MetricQuery& query, bool eight_connected) {
    if (!(delta >= 2.0 * field.spec.spacing))
        throw std::invalid_argument("lfpp_grid_distance: delta must be >= 2*spacing");
    const double xi = gamma.value() / d_hat;
    if (!(d_hat > 2.0)) throw std::domain_error("lfpp_grid_distance: d_hat must exceed 2");

    const int m = std::max(1, static_cast<int>(std::lround(1.0 / delta)));
    check_query(query, static_cast<std::size_t>(m) * m);

    std::vector<double> weights(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Point center{(j + 0.5) * delta, (i + 0.5) * delta};
            weights[static_cast<std::size_t>(i) * m + j] =
                delta * std::exp(xi * circle_average(field, center, delta, /*clamp=*/true));
        }

    auto square_of = [&](Point p) {
        const int j = std::clamp(static_cast<int>(p.x / delta), 0, m - 1);
        const int i = std::clamp(static_cast<int>(p.y / delta), 0, m - 1);
        return i * m + j;
    };
    std::vector<int> sources, targets;
    for (const Point& p : query.source) sources.push_back(square_of(p));
    for (const Point& p : query.target) targets.push_back(square_of(p));

    return node_weight_run(weights, m, sources, targets, query, MetricModel::lfpp_grid, delta,
                           eight_connected);
}

DistanceRun lfpp_discrete_distance(const GridField& field, double xi,
                                   const MetricQuery& query, bool eight_connected) {
    if (xi < 0.0) throw std::invalid_argument("lfpp_discrete_distance: xi must be >= 0");
    const GridSpec& spec = field.spec;
    const int n = spec.n;
    check_query(query, spec.size());

    std::vector<double> weights(spec.size());
    for (std::size_t idx = 0; idx < weights.size(); ++idx)
        weights[idx] = std::exp(xi * field.values[idx]);

    std::vector<int> sources, targets;
    for (const Point& p : query.source)
        sources.push_back(static_cast<int>(nearest_site(spec, p)));
    for (const Point& p : query.target)
        targets.push_back(static_cast<int>(nearest_site(spec, p)));

    return node_weight_run(weights, n, sources, targets, query, MetricModel::lfpp_discrete, xi,
                           eight_connected);
}

namespace {

template <typename SolveField>
DistanceRun diameter_impl(const GridSpec& spec, const std::vector<Point>& K,
                          MetricModel model, SolveField&& solve) {
    if (K.empty()) throw std::invalid_argument("diameter: K must be nonempty");
    DistanceRun run;
    run.model = model;
    double best = 0.0;
    for (std::size_t a = 0; a < K.size(); ++a) {
        const std::vector<double> dist = solve(K[a]);
        for (std::size_t b = 0; b < K.size(); ++b) {
            if (a == b) continue;
            const double d = dist[nearest_site(spec, K[b])];
            if (d == kInf) {
                run.status = DistanceRun::Status::unreachable;
                return run;
            }
            best = std::max(best, d);
        }
    }
    run.value = best;
    run.path_length_cells = static_cast<long>(best);
    return run;
}

} // namespace

DistanceRun lgd_diameter(const MassGrid& measure, const CriticalRadii& radii,
                         const std::vector<Point>& K,
                         const std::optional<std::vector<std::uint8_t>>& mask) {
    return diameter_impl(measure.spec(), K, MetricModel::lgd, [&](Point src) {
        return lgd_distance_field(measure, radii, {src}, mask);
    });
}

DistanceRun lfpp_discrete_diameter(const GridField& field, double xi,
                                   const std::vector<Point>& K,
                                   const std::optional<std::vector<std::uint8_t>>& mask) {
    const GridSpec& spec = field.spec;
    std::vector<double> weights(spec.size());
    for (std::size_t idx = 0; idx < weights.size(); ++idx)
        weights[idx] = std::exp(xi * field.values[idx]);
    return diameter_impl(spec, K, MetricModel::lfpp_discrete, [&](Point src) {
        return node_weight_distance_field(
            weights, spec.n, spec.n, {static_cast<int>(nearest_site(spec, src))}, mask, false);
    });
}

} // namespace lqgdim
