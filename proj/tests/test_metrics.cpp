#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "lqgdim/field_sampler.hpp"
#include "lqgdim/lqg_measure.hpp"
#include "lqgdim/metrics.hpp"
#include "lqgdim/rng.hpp"

using namespace lqgdim;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// reference LGD solver: materialize the directed jump graph with an
// O(n^4) pairwise scan, then plain BFS
std::vector<double> oracle_lgd_field(const MassGrid& measure, const CriticalRadii& radii,
                                     Point source,
                                     const std::optional<std::vector<std::uint8_t>>& mask) {
    const GridSpec& spec = measure.spec();
    const int n = spec.n;
    const double h = spec.spacing;
    const std::size_t size = spec.size();

    std::vector<double> rho(radii.r_bar);
    if (mask) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double best = kInf;
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        if (!(*mask)[static_cast<std::size_t>(p) * n + q]) {
                            const double d2 = double((p - i) * (p - i) + (q - j) * (q - j));
                            best = std::min(best, d2);
                        }
                if (best < kInf) {
                    const std::size_t idx = static_cast<std::size_t>(i) * n + j;
                    rho[idx] = std::min(rho[idx], std::sqrt(best) * h - 0.5 * h);
                }
            }
    }

    std::vector<std::vector<int>> adj(size);
    for (int zi = 0; zi < n; ++zi)
        for (int zj = 0; zj < n; ++zj) {
            const std::size_t z = static_cast<std::size_t>(zi) * n + zj;
            if (mask && !(*mask)[z]) continue;
            const double r = rho[z];
            if (!(r > 0.0)) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const std::size_t w = static_cast<std::size_t>(i) * n + j;
                    if (w == z || (mask && !(*mask)[w])) continue;
                    const double dy = (i - zi) * h;
                    const double dx = (j - zj) * h;
                    if (dx * dx + dy * dy <= r * r) adj[z].push_back(static_cast<int>(w));
                }
        }

    std::vector<double> dist(size, kInf);
    const int si = static_cast<int>(std::lround((source.y - spec.origin.y) / h));
    const int sj = static_cast<int>(std::lround((source.x - spec.origin.x) / h));
    std::queue<int> q;
    dist[static_cast<std::size_t>(si) * n + sj] = 0.0;
    q.push(si * n + sj);
    while (!q.empty()) {
        const int z = q.front();
        q.pop();
        for (int w : adj[z])
            if (dist[w] == kInf) {
                dist[w] = dist[z] + 1.0;
                q.push(w);
            }
    }
    return dist;
}

// all simple 4-connected paths between two lattice nodes, running
// left-to-right weight sums (the accumulation order Dijkstra uses)
void enumerate_paths(const std::vector<double>& w, int n, int node, int target,
                     std::vector<char>& used, double acc, double& best) {
    acc += w[node];
    if (acc >= best) return;
    if (node == target) {
        best = acc;
        return;
    }
    used[node] = 1;
    const int x = node % n, y = node / n;
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
        const int vx = x + dx[k], vy = y + dy[k];
        if (vx < 0 || vx >= n || vy < 0 || vy >= n) continue;
        const int v = vy * n + vx;
        if (!used[v]) enumerate_paths(w, n, v, target, used, acc, best);
    }
    used[node] = 0;
}

double exhaustive_node_weight_distance(const std::vector<double>& w, int n, int source,
                                       int target) {
    std::vector<char> used(w.size(), 0);
    double best = kInf;
    enumerate_paths(w, n, source, target, used, 0.0, best);
    return best;
}

GridField flat_field(int n) {
    GridField field;
    field.spec = GridSpec::unit_square(n);
    field.kind = FieldKind::whitenoise;
    field.scale_t = 1.0;
    field.values.assign(field.spec.size(), 0.0);
    return field;
}

MetricQuery corner_query(const GridSpec& spec) {
    return {{spec.site(0, 0)}, {spec.site(spec.n - 1, spec.n - 1)}, std::nullopt};
}

} // namespace

TEST_CASE("lgd distance trivial cases") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 7), 2);
    const MassGrid measure(field, Gamma(1.0));

    SUBCASE("source equals target") {
        const CriticalRadii radii = critical_radii(measure, field, 0.01);
        const DistanceRun run = lgd_distance(measure, radii, {{{0.3, 0.3}}, {{0.3, 0.3}}, {}});
        CHECK(run.reachable());
        CHECK(run.value == 0.0);
    }
    SUBCASE("threshold above the total mass covers everything in one ball") {
        const CriticalRadii radii = critical_radii(measure, field, measure.total_mass() * 2.0);
        const DistanceRun run =
            lgd_distance(measure, radii, {{{0.1, 0.1}}, {{0.9, 0.9}}, {}});
        CHECK(run.reachable());
        CHECK(run.value == 1.0);
    }
    SUBCASE("empty query sets are rejected") {
        const CriticalRadii radii = critical_radii(measure, field, 0.01);
        CHECK_THROWS_AS(lgd_distance(measure, radii, {{}, {{0.5, 0.5}}, {}}),
                        std::invalid_argument);
    }
}

TEST_CASE("lgd bfs equals the pairwise-scan oracle") {
    const GridSpec spec = GridSpec::unit_square(17);
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const GridField field = assemble(sample_layered(spec, 0.25, seed), 2);
        const MassGrid measure(field, Gamma(1.0));
        for (double eps : {0.02, 0.1}) {
            const CriticalRadii radii = critical_radii(measure, field, eps);
            const Point src = spec.site(3, 2);
            const auto fast = lgd_distance_field(measure, radii, {src}, std::nullopt);
            const auto slow = oracle_lgd_field(measure, radii, src, std::nullopt);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t k = 0; k < fast.size(); ++k) CHECK(fast[k] == slow[k]);
        }
    }
}

TEST_CASE("masked lgd bfs equals the oracle and respects containment") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 21), 2);
    const MassGrid measure(field, Gamma(1.0));
    const CriticalRadii radii = critical_radii(measure, field, 0.1);

    // corridor: knock out a vertical wall except one gap row
    std::vector<std::uint8_t> mask(spec.size(), 1);
    for (int i = 0; i < 17; ++i)
        if (i != 14) mask[static_cast<std::size_t>(i) * 17 + 8] = 0;

    const Point src = spec.site(8, 2);
    const auto fast = lgd_distance_field(measure, radii, {src}, mask);
    const auto slow = oracle_lgd_field(measure, radii, src, mask);
    for (std::size_t k = 0; k < fast.size(); ++k) CHECK(fast[k] == slow[k]);

    // shrinking the domain never shortens a distance
    const auto open = lgd_distance_field(measure, radii, {src}, std::nullopt);
    for (std::size_t k = 0; k < fast.size(); ++k)
        if (mask[k]) CHECK(fast[k] >= open[k]);

    CHECK_THROWS_AS(
        lgd_distance(measure, radii, {{spec.site(3, 8)}, {{0.9, 0.9}}, mask}),
        std::invalid_argument);
}

TEST_CASE("lgd distances grow as the threshold shrinks") {
    const GridSpec spec = GridSpec::unit_square(33);
    const GridField field = assemble(sample_layered(spec, 0.125, 5), 3);
    const MassGrid measure(field, Gamma(1.0));
    const Point a{0.1, 0.15}, b{0.85, 0.9};
    double prev = 0.0;
    for (double eps : {0.2, 0.05, 0.0125, 0.003125}) {
        const CriticalRadii radii = critical_radii(measure, field, eps);
        const DistanceRun run = lgd_distance(measure, radii, {{a}, {b}, {}});
        REQUIRE(run.reachable());
        CHECK(run.value >= prev);
        prev = run.value;
    }
}

TEST_CASE("lgd is invariant under the joint field and threshold shift") {
    GaussianRng rng(0x51f7);
    const GridSpec spec = GridSpec::unit_square(17);
    for (int cfg = 0; cfg < 20; ++cfg) {
        const double g = 0.6 + 1.0 * rng.uniform();
        const double c = 2.0 * rng.uniform() - 1.0;
        const double eps = 0.02 + 0.15 * rng.uniform();
        const GridField field = assemble(sample_layered(spec, 0.25, 900 + cfg), 2);
        GridField shifted = field;
        for (double& v : shifted.values) v += c;

        const MassGrid m0(field, Gamma(g));
        const MassGrid m1(shifted, Gamma(g));
        const CriticalRadii r0 = critical_radii(m0, field, eps);
        const CriticalRadii r1 = critical_radii(m1, shifted, std::exp(g * c) * eps);

        const MetricQuery q{{spec.site(2, 3)}, {spec.site(14, 13)}, {}};
        const DistanceRun d0 = lgd_distance(m0, r0, q);
        const DistanceRun d1 = lgd_distance(m1, r1, q);
        REQUIRE(d0.reachable() == d1.reachable());
        if (d0.reachable()) CHECK(d0.value == d1.value);
    }
}

TEST_CASE("discrete lfpp trivial values") {
    const int n = 9;
    const GridField field = flat_field(n);
    SUBCASE("flat field corner to corner counts staircase nodes") {
        const DistanceRun run = lfpp_discrete_distance(field, 0.7, corner_query(field.spec));
        CHECK(run.reachable());
        CHECK(run.value == doctest::Approx(2.0 * n - 1.0).epsilon(1e-14));
    }
    SUBCASE("xi zero collapses to node counting on any field") {
        GridField rough = assemble(sample_layered(field.spec, 0.5, 3), 1);
        const DistanceRun run = lfpp_discrete_distance(rough, 0.0, corner_query(field.spec));
        CHECK(run.value == doctest::Approx(2.0 * n - 1.0).epsilon(1e-14));
    }
    SUBCASE("negative xi is rejected") {
        CHECK_THROWS_AS(lfpp_discrete_distance(field, -0.1, corner_query(field.spec)),
                        std::invalid_argument);
    }
}

TEST_CASE("discrete lfpp equals exhaustive path enumeration") {
    const GridSpec spec = GridSpec::unit_square(4);
    GaussianRng rng(0x1f9);
    const double xi = 0.4;
    for (int rep = 0; rep < 50; ++rep) {
        GridField field;
        field.spec = spec;
        field.kind = FieldKind::dgff_zero_boundary;
        field.values.resize(spec.size());
        for (double& v : field.values) v = rng.normal();

        std::vector<double> w(spec.size());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::exp(xi * field.values[k]);
        const double slow = exhaustive_node_weight_distance(w, 4, 0, 15);
        const DistanceRun fast = lfpp_discrete_distance(field, xi, corner_query(spec));
        CHECK(fast.value == slow);
    }
}

TEST_CASE("lfpp distances scale by exp(xi c) under a field shift") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 77), 2);
    GaussianRng rng(0x5c);
    for (int cfg = 0; cfg < 20; ++cfg) {
        const double xi = 0.1 + 0.5 * rng.uniform();
        const double c = 2.0 * rng.uniform() - 1.0;
        GridField shifted = field;
        for (double& v : shifted.values) v += c;
        const MetricQuery q{{spec.site(1, 2)}, {spec.site(15, 14)}, {}};
        const double d0 = lfpp_discrete_distance(field, xi, q).value;
        const double d1 = lfpp_discrete_distance(shifted, xi, q).value;
        CHECK(std::abs(d1 - std::exp(xi * c) * d0) <= 1e-9 * d1);
    }
}

TEST_CASE("raising one node weight never shortens the crossing") {
    const GridSpec spec = GridSpec::unit_square(9);
    GridField field = assemble(sample_layered(spec, 0.5, 42), 1);
    const MetricQuery q = corner_query(spec);
    const double base = lfpp_discrete_distance(field, 0.5, q).value;
    GaussianRng rng(0x99);
    for (int k = 0; k < 25; ++k) {
        GridField bumped = field;
        const std::size_t site = static_cast<std::size_t>(rng.uniform() * spec.size());
        bumped.values[site] += 1.5;
        CHECK(lfpp_discrete_distance(bumped, 0.5, q).value >= base - 1e-15);
    }
}

TEST_CASE("lfpp triangle inequality with the shared node double-paid") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 31), 2);
    GaussianRng rng(0x7a1);
    for (int k = 0; k < 20; ++k) {
        auto pick = [&] {
            return spec.site(static_cast<int>(rng.uniform() * 17),
                             static_cast<int>(rng.uniform() * 17));
        };
        const Point a = pick(), b = pick(), c = pick();
        const double ab = lfpp_discrete_distance(field, 0.4, {{a}, {b}, {}}).value;
        const double bc = lfpp_discrete_distance(field, 0.4, {{b}, {c}, {}}).value;
        const double ac = lfpp_discrete_distance(field, 0.4, {{a}, {c}, {}}).value;
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("eight-connected paths are never longer") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 55), 2);
    const MetricQuery q = corner_query(spec);
    const double four = lfpp_discrete_distance(field, 0.5, q, false).value;
    const double eight = lfpp_discrete_distance(field, 0.5, q, true).value;
    CHECK(eight <= four + 1e-15);
}

TEST_CASE("square-graph lfpp on a flat field walks the staircase") {
    const GridField field = flat_field(33);
    const double delta = 0.125;  // 8x8 square graph
    const DistanceRun run = lfpp_grid_distance(field, Gamma(1.0), 4.0, delta,
                                               {{{0.01, 0.01}}, {{0.99, 0.99}}, {}});
    CHECK(run.reachable());
    CHECK(run.value == doctest::Approx(15.0 * delta).epsilon(1e-12));
    CHECK_THROWS_AS(lfpp_grid_distance(field, Gamma(1.0), 4.0, field.spec.spacing,
                                       {{{0.1, 0.1}}, {{0.9, 0.9}}, {}}),
                    std::invalid_argument);
}

TEST_CASE("square-graph lfpp equals exhaustive enumeration") {
    const double delta = 0.25;  // 4x4 square graph
    const GridSpec spec = GridSpec::unit_square(17);
    for (std::uint64_t seed : {101u, 102u, 103u, 104u, 105u}) {
        const GridField field = assemble(sample_layered(spec, 0.25, seed), 2);
        const double xi = 1.0 / 4.0;
        std::vector<double> w(16);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Point center{(j + 0.5) * delta, (i + 0.5) * delta};
                w[i * 4 + j] = delta * std::exp(xi * circle_average(field, center, delta, true));
            }
        const double slow = exhaustive_node_weight_distance(w, 4, 0, 15);
        const DistanceRun fast = lfpp_grid_distance(field, Gamma(1.0), 4.0, delta,
                                                    {{{0.01, 0.01}}, {{0.99, 0.99}}, {}});
        CHECK(fast.value == slow);
    }
}

TEST_CASE("masked lattice split is reported unreachable") {
    const GridSpec spec = GridSpec::unit_square(9);
    const GridField field = flat_field(9);
    std::vector<std::uint8_t> mask(spec.size(), 1);
    for (int i = 0; i < 9; ++i) mask[static_cast<std::size_t>(i) * 9 + 4] = 0;
    const DistanceRun run =
        lfpp_discrete_distance(field, 0.3, {{spec.site(4, 1)}, {spec.site(4, 7)}, mask});
    CHECK_FALSE(run.reachable());
    CHECK(run.reachable_sites < spec.size());
    CHECK(run.reachable_sites >= 4 * 9);
}

TEST_CASE("set queries take the minimum over sources") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 61), 2);
    const MassGrid measure(field, Gamma(1.0));
    const CriticalRadii radii = critical_radii(measure, field, 0.05);

    const Point a1 = spec.site(1, 1), a2 = spec.site(15, 2), b = spec.site(8, 15);
    const double joint = lgd_distance(measure, radii, {{a1, a2}, {b}, {}}).value;
    const double d1 = lgd_distance(measure, radii, {{a1}, {b}, {}}).value;
    const double d2 = lgd_distance(measure, radii, {{a2}, {b}, {}}).value;
    CHECK(joint == std::min(d1, d2));

    // overlapping sets are at distance zero
    CHECK(lgd_distance(measure, radii, {{a1, b}, {b}, {}}).value == 0.0);
}

TEST_CASE("diameter is the exhaustive all-pairs maximum") {
    const GridSpec spec = GridSpec::unit_square(17);
    const GridField field = assemble(sample_layered(spec, 0.25, 88), 2);
    const MassGrid measure(field, Gamma(1.0));

    std::vector<Point> K;
    for (int i : {0, 5, 11, 16})
        for (int j : {2, 9, 16}) K.push_back(spec.site(i, j));

    bool saw_reachable = false;
    for (double eps : {0.05, 0.15, 0.4}) {
        const CriticalRadii radii = critical_radii(measure, field, eps);
        double slow = 0.0;
        bool any_unreachable = false;
        for (const Point& a : K)
            for (const Point& b : K)
                if (!(a == b)) {
                    const DistanceRun pair = lgd_distance(measure, radii, {{a}, {b}, {}});
                    if (!pair.reachable())
                        any_unreachable = true;
                    else
                        slow = std::max(slow, pair.value);
                }
        const DistanceRun sweep = lgd_diameter(measure, radii, K);
        REQUIRE(sweep.reachable() == !any_unreachable);
        if (sweep.reachable()) {
            saw_reachable = true;
            CHECK(sweep.value == slow);
            for (const Point& a : K)
                CHECK(sweep.value >= lgd_distance(measure, radii, {{a}, {K[0]}, {}}).value);
        }
    }
    CHECK(saw_reachable);
    const CriticalRadii radii = critical_radii(measure, field, 0.15);

    CHECK(lgd_diameter(measure, radii, {K[0]}).value == 0.0);
    CHECK(lfpp_discrete_diameter(field, 0.4, {K[0]}).value == 0.0);

    // lfpp diameter dominates sampled pairs as well
    const DistanceRun fsweep = lfpp_discrete_diameter(field, 0.4, K);
    for (const Point& a : K)
        for (const Point& b : K)
            CHECK(fsweep.value >= lfpp_discrete_distance(field, 0.4, {{a}, {b}, {}}).value - 1e-12);
}
